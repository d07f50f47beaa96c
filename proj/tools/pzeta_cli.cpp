#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "pzeta/pipeline.hpp"

namespace {

using pzeta::Json;

void emit(const Json& doc, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << doc.dump(2) << "\n";
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw pzeta::InputError("cannot open output file: " + out_path);
  out << doc.dump(2) << "\n";
}

int default_workers() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"p-local zeta functions of finitely generated nilpotent groups"};
  app.require_subcommand(1);

  std::string presentation, variant = "all", precision = "auto";
  std::string cache_dir, out_path, format = "json", matrix, coeffs;
  long long prime = 2;
  int max_n = 3, max_deg = 3, oracle_k = 3;
  long long budget_elems = 1 << 10;
  int workers = default_workers();

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("-p", prime, "prime p");
    cmd->add_option("--format", format, "output format (json)");
    cmd->add_option("--out", out_path, "write the report to this path");
  };
  auto add_zeta = [&](CLI::App* cmd) {
    cmd->add_option("--presentation", presentation, "presentation JSON file")
        ->required();
    cmd->add_option("--max-n", max_n, "largest index exponent n");
    cmd->add_option("--precision", precision, "auto or a fixed k");
    cmd->add_option("--budget-elems", budget_elems,
                    "element budget for brute-force oracles");
    cmd->add_option("--workers", workers, "worker threads");
    cmd->add_option("--cache", cache_dir, "result cache directory");
  };

  CLI::App* sub = app.add_subcommand("subgroup-zeta",
                                     "count index-p^n subgroups and fit");
  add_common(sub);
  add_zeta(sub);
  sub->add_option("--variant", variant,
                  "all | normal | conjugacy | quotient-iso");

  CLI::App* twist = app.add_subcommand("twist-zeta",
                                       "count twist isoclasses and fit");
  add_common(twist);
  add_zeta(twist);

  CLI::App* measure = app.add_subcommand("measure",
                                         "Haar measure of a GL-coset");
  add_common(measure);
  measure->add_option("--matrix", matrix, "JSON array of generator vectors")
      ->required();

  CLI::App* canon = app.add_subcommand("lattice-canon",
                                       "canonical triangular basis");
  add_common(canon);
  canon->add_option("--matrix", matrix, "JSON array of generator vectors")
      ->required();

  CLI::App* fit = app.add_subcommand("fit", "fit an exact rational function");
  add_common(fit);
  fit->add_option("--coeffs", coeffs, "comma separated coefficients")
      ->required();
  fit->add_option("--max-deg", max_deg, "degree bound for each of P and Q");

  CLI::App* oracle = app.add_subcommand(
      "oracle-check", "compare the measure formula with the residue count");
  add_common(oracle);
  oracle->add_option("--matrix", matrix, "JSON array of generator vectors")
      ->required();
  oracle->add_option("--precision", oracle_k, "residue precision k");
  oracle->add_option("--budget-elems", budget_elems, "enumeration budget");

  CLI11_PARSE(app, argc, argv);

  try {
    pzeta::RunConfig cfg;
    cfg.presentation_path = presentation;
    cfg.prime = pzeta::Int(static_cast<long>(prime));
    cfg.max_n = max_n;
    cfg.cache_dir = cache_dir;
    cfg.output_path = out_path;
    cfg.format = format;
    cfg.budgets.workers = workers;
    cfg.budgets.brute_budget = pzeta::Int(static_cast<long>(budget_elems));
    cfg.budgets.oracle_budget = pzeta::Int(static_cast<long>(budget_elems));
    if (precision == "auto") {
      cfg.precision_auto = true;
    } else {
      cfg.precision_auto = false;
      try {
        cfg.fixed_precision = std::stoi(precision);
      } catch (...) {
        throw pzeta::InputError("--precision must be 'auto' or an integer");
      }
    }

    if (app.got_subcommand("subgroup-zeta")) {
      cfg.variant = pzeta::parse_variant(variant);
      emit(pzeta::run_subgroup_zeta(cfg), out_path);
    } else if (app.got_subcommand("twist-zeta")) {
      emit(pzeta::run_twist_zeta(cfg), out_path);
    } else if (app.got_subcommand("measure")) {
      emit(pzeta::run_measure(cfg.prime, matrix), out_path);
    } else if (app.got_subcommand("lattice-canon")) {
      emit(pzeta::run_lattice_canon(cfg.prime, matrix), out_path);
    } else if (app.got_subcommand("fit")) {
      emit(pzeta::run_fit(coeffs, max_deg), out_path);
    } else if (app.got_subcommand("oracle-check")) {
      emit(pzeta::run_oracle_check(cfg.prime, matrix, oracle_k,
                                   pzeta::Int(1) << 28),
           out_path);
    }
  } catch (const pzeta::InternalInvariantError& e) {
    std::cerr << "internal invariant violation: " << e.what() << "\n";
    return 5;
  } catch (const pzeta::NoStabilizationError& e) {
    std::cerr << "no stabilization: " << e.what() << "\n";
    return 4;
  } catch (const pzeta::BudgetExceededError& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (const pzeta::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
