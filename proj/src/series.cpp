#include "pzeta/series.hpp"

#include <sstream>

namespace pzeta {

namespace {

// Solve the exact linear system M x = rhs over Q. Returns nullopt when the
// system is inconsistent; free variables are set to zero (any solution of
// the Hankel system yields the same validated candidate or fails held-out
// validation).
std::optional<std::vector<Rational>> solve_exact(
    std::vector<std::vector<Rational>> m, std::vector<Rational> rhs) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows == 0 ? 0 : m[0].size();
  std::vector<int> pivot_col(rows, -1);
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && m[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[r]);
    std::swap(rhs[piv], rhs[r]);
    Rational d = m[r][c];
    for (std::size_t j = c; j < cols; ++j) m[r][j] /= d;
    rhs[r] /= d;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rational f = m[i][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
      rhs[i] -= f * rhs[r];
    }
    pivot_col[r] = static_cast<int>(c);
    ++r;
  }
  for (std::size_t i = r; i < rows; ++i)
    if (rhs[i] != 0) return std::nullopt;
  std::vector<Rational> x(cols, Rational(0));
  for (std::size_t i = 0; i < r; ++i) x[pivot_col[i]] = rhs[i];
  return x;
}

std::vector<Rational> poly_mul(const std::vector<Rational>& a,
                               const std::vector<Rational>& b) {
  std::vector<Rational> out(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

std::vector<Rational> poly_rem(std::vector<Rational> a,
                               const std::vector<Rational>& b) {
  while (a.size() >= b.size()) {
    Rational f = a.back() / b.back();
    std::size_t off = a.size() - b.size();
    for (std::size_t j = 0; j < b.size(); ++j) a[off + j] -= f * b[j];
    while (!a.empty() && a.back() == 0) a.pop_back();
    if (a.empty()) break;
  }
  return a;
}

std::vector<Rational> poly_gcd(std::vector<Rational> a, std::vector<Rational> b) {
  while (!a.empty() && a.back() == 0) a.pop_back();
  while (!b.empty() && b.back() == 0) b.pop_back();
  while (!b.empty()) {
    auto r = poly_rem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (a.empty()) return {Rational(1)};
  Rational lead = a.back();
  for (auto& c : a) c /= lead;
  return a;
}

std::vector<Rational> poly_div_exact(const std::vector<Rational>& a,
                                     const std::vector<Rational>& b) {
  std::vector<Rational> rem = a;
  std::vector<Rational> quot(a.size() >= b.size() ? a.size() - b.size() + 1 : 1,
                             Rational(0));
  while (rem.size() >= b.size() && !(rem.size() == 1 && rem[0] == 0)) {
    Rational f = rem.back() / b.back();
    std::size_t off = rem.size() - b.size();
    quot[off] = f;
    for (std::size_t j = 0; j < b.size(); ++j) rem[off + j] -= f * b[j];
    while (rem.size() > 1 && rem.back() == 0) rem.pop_back();
    if (rem.size() == 1 && rem[0] == 0) break;
  }
  return quot;
}

}  // namespace

std::vector<Rational> expand(const RationalFunction& r, int m) {
  if (r.denominator.empty() || r.denominator[0] != 1)
    throw InputError("expand: denominator must have constant term 1");
  std::vector<Rational> out(m + 1, Rational(0));
  for (int n = 0; n <= m; ++n) {
    Rational acc = n < static_cast<int>(r.numerator.size())
                       ? r.numerator[n]
                       : Rational(0);
    for (std::size_t i = 1; i < r.denominator.size() && static_cast<int>(i) <= n; ++i)
      acc -= r.denominator[i] * out[n - i];
    out[n] = acc;
  }
  return out;
}

FitResult fit_rational(const CoeffSeries& s, int max_deg) {
  const auto& a = s.coefficients;
  const int m = static_cast<int>(a.size()) - 1;
  if (m < 0) throw InputError("fit_rational: empty series");
  if (max_deg < 0) throw InputError("fit_rational: negative degree bound");

  FitResult report;
  for (int total = 0; total <= 2 * max_deg; ++total) {
    for (int dq = std::min(total, max_deg); dq >= std::max(0, total - max_deg);
         --dq) {
      int dp = total - dq;
      // Determination needs a_0..a_{total}; acceptance needs at least one
      // held-out coefficient beyond that.
      if (total + 1 > m) continue;

      // Q(t) a(t) = P(t) mod t^{total+1} with Q(0)=1: rows for powers
      // dp+1..dp+dq determine q_1..q_dq, then P reads off directly.
      std::vector<std::vector<Rational>> mat;
      std::vector<Rational> rhs;
      for (int row = dp + 1; row <= dp + dq; ++row) {
        std::vector<Rational> rowv(dq, Rational(0));
        for (int i = 1; i <= dq; ++i)
          if (row - i >= 0) rowv[i - 1] = Rational(a[row - i]);
        mat.push_back(std::move(rowv));
        rhs.push_back(-Rational(a[row]));
      }
      auto sol = solve_exact(std::move(mat), std::move(rhs));
      if (!sol) continue;

      std::vector<Rational> den(dq + 1, Rational(0));
      den[0] = 1;
      for (int i = 1; i <= dq; ++i) den[i] = (*sol)[i - 1];
      std::vector<Rational> num(dp + 1, Rational(0));
      for (int n = 0; n <= dp; ++n) {
        Rational acc = Rational(a[n]);
        for (int i = 1; i <= std::min(n, dq); ++i)
          acc += den[i] * Rational(a[n - i]);
        num[n] = acc;
      }

      RationalFunction cand{std::move(num), std::move(den)};
      // Held-out validation over the entire remaining window is mandatory.
      std::vector<Rational> check = expand(cand, m);
      bool ok = true;
      for (int n = 0; n <= m; ++n)
        if (check[n] != Rational(a[n])) {
          ok = false;
          if (!report.failed_at_index || *report.failed_at_index > n)
            report.failed_at_index = n;
          break;
        }
      if (!ok) continue;

      // Reduce to lowest terms and renormalize Q(0) = 1.
      auto g = poly_gcd(cand.numerator, cand.denominator);
      if (g.size() > 1) {
        cand.numerator = poly_div_exact(cand.numerator, g);
        cand.denominator = poly_div_exact(cand.denominator, g);
      }
      while (cand.numerator.size() > 1 && cand.numerator.back() == 0)
        cand.numerator.pop_back();
      while (cand.denominator.size() > 1 && cand.denominator.back() == 0)
        cand.denominator.pop_back();
      Rational c0 = cand.denominator[0];
      for (auto& x : cand.numerator) x /= c0;
      for (auto& x : cand.denominator) x /= c0;

      report.function = std::move(cand);
      report.validated_through = m;
      return report;
    }
  }
  report.validated_through = m;
  return report;
}

GrowthBound growth_bound_check(const CoeffSeries& s) {
  const auto& a = s.coefficients;
  if (a.empty()) throw InputError("growth_bound_check: empty series");
  for (const Int& x : a)
    if (x < 0) throw InputError("growth_bound_check: negative coefficient");
  Rational c(0);
  for (std::size_t n = 0; n + 1 < a.size(); ++n) {
    if (a[n] == 0) {
      if (a[n + 1] != 0)
        throw InputError("growth_bound_check: zero followed by nonzero");
      continue;
    }
    Rational ratio = Rational(a[n + 1]) / Rational(a[n]);
    if (ratio > c) c = ratio;
  }
  // K = max a_n / c^n (with 0^0 = 1); then a_n <= K c^n everywhere, which is
  // re-verified term by term.
  Rational K(0);
  Rational cpow(1);
  for (std::size_t n = 0; n < a.size(); ++n) {
    if (a[n] != 0) {
      Rational val = Rational(a[n]) / cpow;
      if (val > K) K = val;
    }
    cpow *= c;
  }
  cpow = 1;
  for (std::size_t n = 0; n < a.size(); ++n) {
    if (Rational(a[n]) > K * cpow)
      throw InternalInvariantError("growth_bound_check: bound violated");
    cpow *= c;
  }
  return {K, c};
}

std::string to_string(const RationalFunction& r) {
  auto poly = [](const std::vector<Rational>& p) {
    std::ostringstream out;
    out << "[";
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (i) out << ",";
      out << to_string(p[i]);
    }
    out << "]";
    return out.str();
  };
  return poly(r.numerator) + "/" + poly(r.denominator);
}

}  // namespace pzeta
