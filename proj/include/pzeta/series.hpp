#ifndef PZETA_SERIES_HPP
#define PZETA_SERIES_HPP

#include <optional>
#include <string>
#include <vector>

#include "pzeta/numbers.hpp"

namespace pzeta {

// A truncated zeta coefficient sequence a_0..a_m with its provenance.
struct CoeffSeries {
  Int prime;
  std::vector<Int> coefficients;
  std::string provenance;
};

// Exact P(t)/Q(t) with Q(0) = 1 and gcd(P, Q) = 1 over the rationals.
// Coefficients are integral for integer input series (Fatou).
struct RationalFunction {
  std::vector<Rational> numerator;    // ascending powers of t
  std::vector<Rational> denominator;  // denominator[0] == 1

  bool operator==(const RationalFunction& o) const {
    return numerator == o.numerator && denominator == o.denominator;
  }
};

struct FitResult {
  std::optional<RationalFunction> function;
  // Highest coefficient index the fit was validated against (m on success).
  int validated_through = -1;
  // On NoFit: the smallest index where the best candidate broke, if any
  // candidate was determined at all.
  std::optional<int> failed_at_index;

  bool fitted() const { return function.has_value(); }
};

// Smallest-total-degree rational function whose expansion reproduces the
// whole series. A candidate (d_P, d_Q) is determined from a_0..a_{d_P+d_Q}
// by the exact Hankel system with Q(0) = 1 and accepted only if at least one
// held-out coefficient exists and every remaining coefficient matches.
// NoFit is a report, not an error.
FitResult fit_rational(const CoeffSeries& s, int max_deg);

// First m+1 Taylor coefficients by the exact linear recurrence.
std::vector<Rational> expand(const RationalFunction& r, int m);

// Minimal c = max a_{n+1}/a_n over the window and K = max a_n / c^n; the
// bound a_n <= K c^n then holds at every observed index by construction and
// is re-checked exactly.
struct GrowthBound {
  Rational K;
  Rational c;
};
GrowthBound growth_bound_check(const CoeffSeries& s);

std::string to_string(const RationalFunction& r);

}  // namespace pzeta

#endif
