#include "pzeta/pipeline.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pzeta/characters.hpp"

namespace pzeta {

namespace {

Json int_json(const Int& v) {
  if (v.fits_slong_p()) return Json(v.get_si());
  return Json(v.get_str());
}

Json rational_json(const Rational& v) {
  if (v.get_den() == 1) return int_json(Int(v.get_num()));
  return Json(to_string(v));
}

std::string fingerprint_hex(const MalcevPresentation& pres) {
  std::ostringstream out;
  out << std::hex << pres.fingerprint();
  return out.str();
}

long long now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::string cache_key(const RunConfig& cfg, const std::string& fp) {
  std::ostringstream out;
  out << fp << "_" << cfg.command << "_p" << cfg.prime.get_str() << "_"
      << variant_name(cfg.variant) << "_n" << cfg.max_n << "_"
      << (cfg.precision_auto ? std::string("auto")
                             : "k" + std::to_string(cfg.fixed_precision))
      << ".json";
  return out.str();
}

std::optional<Json> cache_load(const RunConfig& cfg, const std::string& fp) {
  if (cfg.cache_dir.empty()) return std::nullopt;
  std::filesystem::path path =
      std::filesystem::path(cfg.cache_dir) / cache_key(cfg, fp);
  std::ifstream in(path);
  if (!in) return std::nullopt;
  try {
    Json doc = Json::parse(in);
    return doc;
  } catch (...) {
    return std::nullopt;
  }
}

void cache_store(const RunConfig& cfg, const std::string& fp, Json doc) {
  if (cfg.cache_dir.empty()) return;
  std::filesystem::create_directories(cfg.cache_dir);
  doc.erase("timing_ms");
  std::filesystem::path path =
      std::filesystem::path(cfg.cache_dir) / cache_key(cfg, fp);
  std::ofstream out(path);
  out << doc.dump(2) << "\n";
}

struct CountsRun {
  std::vector<Int> counts;
  int precision_used = 0;
  bool stabilized = false;
};

CountsRun compute_counts(const RunConfig& cfg,
                         const std::shared_ptr<const MalcevPresentation>& pres) {
  CountsRun run;
  if (cfg.precision_auto) {
    run.stabilized = true;
    for (int n = 0; n <= cfg.max_n; ++n) {
      StabilizedCount sc =
          stabilized_count(pres, cfg.prime, n, cfg.variant, cfg.budgets);
      run.counts.push_back(sc.value);
      run.precision_used = std::max(run.precision_used, sc.precision_used);
    }
  } else {
    run.stabilized = false;
    run.precision_used = cfg.fixed_precision;
    auto Q = build_quotient(pres, cfg.prime, cfg.fixed_precision);
    for (int n = 0; n <= cfg.max_n; ++n)
      run.counts.push_back(count_for_variant(Q, n, cfg.variant, cfg.budgets));
  }
  return run;
}

Json zeta_report(const RunConfig& cfg, const char* counts_key,
                 const char* fit_key) {
  long long t0 = now_ms();
  auto pres = std::make_shared<const MalcevPresentation>(
      MalcevPresentation::load_file(cfg.presentation_path));
  std::string fp = fingerprint_hex(*pres);

  if (auto cached = cache_load(cfg, fp)) {
    (*cached)["timing_ms"] = now_ms() - t0;
    return *cached;
  }

  CountsRun run = compute_counts(cfg, pres);

  CoeffSeries series{cfg.prime, run.counts,
                     pres->name() + ":" + variant_name(cfg.variant)};
  FitResult fit = fit_rational(series, std::max(0, cfg.max_n));
  GrowthBound growth = growth_bound_check(series);

  Json doc;
  doc["command"] = cfg.command;
  doc["presentation"] = pres->name();
  doc["presentation_fingerprint"] = fp;
  doc["prime"] = int_json(cfg.prime);
  doc["variant"] = variant_name(cfg.variant);
  Json counts = Json::array();
  for (const Int& c : run.counts) counts.push_back(int_json(c));
  doc[counts_key] = counts;
  doc["precision_used"] = run.precision_used;
  doc["stabilized"] = run.stabilized;
  doc[fit_key] = fit_report_json(fit);
  doc["growth_bound"] = Json{{"K", rational_json(growth.K)},
                             {"c", rational_json(growth.c)}};
  cache_store(cfg, fp, doc);
  doc["timing_ms"] = now_ms() - t0;
  return doc;
}

}  // namespace

void RunConfig::validate() const {
  if (!is_prime(prime)) throw InputError("p must be prime");
  if (max_n < 0) throw InputError("--max-n must be >= 0");
  if (!precision_auto && fixed_precision < 1)
    throw InputError("--precision must be 'auto' or a positive integer");
  if (format != "json") throw InputError("--format must be json");
  if (budgets.workers < 1) throw InputError("--workers must be >= 1");
  if (budgets.brute_budget <= 0 || budgets.element_iteration_budget <= 0 ||
      budgets.oracle_budget <= 0)
    throw InputError("budgets must be positive");
}

Json rational_function_json(const RationalFunction& r, int validated_through) {
  Json out;
  Json num = Json::array();
  for (const auto& c : r.numerator) num.push_back(rational_json(c));
  Json den = Json::array();
  for (const auto& c : r.denominator) den.push_back(rational_json(c));
  out["numerator"] = num;
  out["denominator"] = den;
  out["validated_through"] = validated_through;
  return out;
}

Json fit_report_json(const FitResult& fit) {
  if (fit.fitted())
    return rational_function_json(*fit.function, fit.validated_through);
  Json out;
  out["nofit"] = true;
  if (fit.failed_at_index) out["failed_at_index"] = *fit.failed_at_index;
  out["validated_through"] = fit.validated_through;
  return out;
}

Json run_subgroup_zeta(const RunConfig& cfg) {
  RunConfig c = cfg;
  c.command = "subgroup-zeta";
  c.validate();
  if (c.variant == CountVariant::TwistIsoclasses)
    throw InputError("subgroup-zeta: use twist-zeta for the twist variant");
  return zeta_report(c, "counts", "fit");
}

Json run_twist_zeta(const RunConfig& cfg) {
  RunConfig c = cfg;
  c.command = "twist-zeta";
  c.variant = CountVariant::TwistIsoclasses;
  c.validate();
  return zeta_report(c, "twist_counts", "fitted");
}

Rational parse_padic_literal(const Int& p, const std::string& text) {
  std::string s = text;
  s.erase(std::remove_if(s.begin(), s.end(), ::isspace), s.end());
  if (s.empty()) throw InputError("empty matrix entry");
  long v = 0;
  std::string unit = s;
  if (s[0] == 'p') {
    if (s.size() < 2 || s[1] != '^')
      throw InputError("bad entry (expected p^v or p^v*u): " + text);
    std::size_t star = s.find('*');
    std::string expo = s.substr(2, star == std::string::npos ? std::string::npos
                                                             : star - 2);
    try {
      v = std::stol(expo);
    } catch (...) {
      throw InputError("bad exponent in entry: " + text);
    }
    unit = star == std::string::npos ? "1" : s.substr(star + 1);
  }
  Int u;
  try {
    u = Int(unit);
  } catch (...) {
    throw InputError("bad unit in entry: " + text);
  }
  return Rational(u) * pow_rational(p, v);
}

std::vector<std::vector<Rational>> parse_matrix(const Int& p,
                                                const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const std::exception& e) {
    throw InputError(std::string("bad matrix JSON: ") + e.what());
  }
  if (!doc.is_array() || doc.empty())
    throw InputError("matrix must be a nonempty JSON array of generators");
  std::vector<std::vector<Rational>> cols;
  for (const auto& gen : doc) {
    if (!gen.is_array())
      throw InputError("each generator must be an array of entries");
    std::vector<Rational> col;
    for (const auto& entry : gen) {
      if (entry.is_number_integer())
        col.push_back(Rational(Int(static_cast<long>(entry.get<long long>()))));
      else if (entry.is_string())
        col.push_back(parse_padic_literal(p, entry.get<std::string>()));
      else
        throw InputError("matrix entries must be integers or p^v*u strings");
    }
    cols.push_back(std::move(col));
  }
  for (const auto& c : cols)
    if (c.size() != cols.size())
      throw InputError("matrix must be square (one generator per dimension)");
  return cols;
}

namespace {

Json basis_matrix_json(const TriangularBasis& t) {
  Json rows = Json::array();
  for (int i = 0; i < t.dimension(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < t.dimension(); ++j) row.push_back(rational_json(t.matrix()[i][j]));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

Json run_measure(const Int& p, const std::string& matrix_json) {
  if (!is_prime(p)) throw InputError("p must be prime");
  auto cols = parse_matrix(p, matrix_json);
  std::vector<std::vector<Rational>> rowmajor(cols.size(),
                                              std::vector<Rational>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < cols.size(); ++i) rowmajor[i][j] = cols[j][i];
  CosetPiece piece = CosetPiece::from_rational(p, rowmajor);
  Rational mu = haar_coset_measure(piece);
  Json doc;
  doc["command"] = "measure";
  doc["prime"] = int_json(p);
  doc["dimension"] = static_cast<int>(cols.size());
  doc["measure"] = rational_json(mu);
  return doc;
}

Json run_lattice_canon(const Int& p, const std::string& matrix_json) {
  if (!is_prime(p)) throw InputError("p must be prime");
  auto cols = parse_matrix(p, matrix_json);
  TriangularBasis t = canonicalize_exact(p, cols);
  Json doc;
  doc["command"] = "lattice-canon";
  doc["prime"] = int_json(p);
  doc["matrix"] = basis_matrix_json(t);
  Json exps = Json::array();
  for (long e : t.diag_exponents()) exps.push_back(e);
  doc["diag_exponents"] = exps;
  return doc;
}

Json run_fit(const std::string& coeffs_csv, int max_deg) {
  CoeffSeries s;
  s.prime = 0;
  std::stringstream in(coeffs_csv);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    if (tok.empty()) continue;
    try {
      s.coefficients.push_back(Int(tok));
    } catch (...) {
      throw InputError("bad coefficient: " + tok);
    }
  }
  if (s.coefficients.empty()) throw InputError("--coeffs is empty");
  FitResult fit = fit_rational(s, max_deg);
  Json doc = fit_report_json(fit);
  return doc;
}

Json run_oracle_check(const Int& p, const std::string& matrix_json, int k,
                      const Int& budget) {
  if (!is_prime(p)) throw InputError("p must be prime");
  auto cols = parse_matrix(p, matrix_json);
  std::vector<std::vector<Rational>> rowmajor(cols.size(),
                                              std::vector<Rational>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < cols.size(); ++i) rowmajor[i][j] = cols[j][i];
  int m = static_cast<int>(cols.size());
  CosetPiece piece = CosetPiece::from_rational(p, rowmajor);
  std::vector<std::vector<Rational>> eye(m, std::vector<Rational>(m, Rational(0)));
  for (int i = 0; i < m; ++i) eye[i][i] = 1;
  CosetPiece identity = CosetPiece::from_rational(p, eye);

  Rational mu = haar_coset_measure(piece);
  Rational counted = residue_count_oracle(piece, k, budget);
  Rational gl_volume = residue_count_oracle(identity, k, budget);
  bool consistent = counted == mu * gl_volume;
  Json doc;
  doc["command"] = "oracle-check";
  doc["prime"] = int_json(p);
  doc["precision"] = k;
  doc["measure"] = rational_json(mu);
  doc["residue_fraction"] = rational_json(counted);
  doc["gl_volume"] = rational_json(gl_volume);
  doc["consistent"] = consistent;
  if (!consistent)
    throw InternalInvariantError(
        "oracle-check: residue count disagrees with the measure formula");
  return doc;
}

}  // namespace pzeta
