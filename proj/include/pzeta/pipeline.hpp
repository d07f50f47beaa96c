#ifndef PZETA_PIPELINE_HPP
#define PZETA_PIPELINE_HPP

#include <string>

#include "json.hpp"
#include "pzeta/enumerate.hpp"
#include "pzeta/lattice.hpp"
#include "pzeta/series.hpp"

namespace pzeta {

using Json = nlohmann::ordered_json;

struct RunConfig {
  std::string command;
  std::string presentation_path;
  Int prime = 2;
  int max_n = 3;
  CountVariant variant = CountVariant::All;
  bool precision_auto = true;
  int fixed_precision = 0;
  EnumOptions budgets;
  std::string cache_dir;
  std::string output_path;
  std::string format = "json";

  void validate() const;
};

// End-to-end zeta pipelines: stabilized counts, rational fit, JSON report.
// Identical configs produce byte-identical reports apart from timing_ms.
Json run_subgroup_zeta(const RunConfig& cfg);
Json run_twist_zeta(const RunConfig& cfg);

// Thin wrappers over the lattice and series operations.
Json run_measure(const Int& p, const std::string& matrix_json);
Json run_lattice_canon(const Int& p, const std::string& matrix_json);
Json run_fit(const std::string& coeffs_csv, int max_deg);
Json run_oracle_check(const Int& p, const std::string& matrix_json, int k,
                      const Int& budget);

// Matrix literals: a JSON array of generator vectors whose entries are plain
// integers or strings "p^v", "p^v*u", "u".
std::vector<std::vector<Rational>> parse_matrix(const Int& p,
                                                const std::string& text);
Rational parse_padic_literal(const Int& p, const std::string& text);

Json rational_function_json(const RationalFunction& r, int validated_through);
Json fit_report_json(const FitResult& fit);

}  // namespace pzeta

#endif
