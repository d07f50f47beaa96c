#ifndef PZETA_PADIC_HPP
#define PZETA_PADIC_HPP

#include <optional>

#include "pzeta/numbers.hpp"

namespace pzeta {

// An element of Q_p known to finite precision: p^valuation * unit with the
// unit stored mod p^precision_k. The zero marker stands for exact zero
// (valuation +infinity). Values are immutable after construction.
//
// Addition truncates to the weaker absolute precision and throws
// InsufficientPrecisionError when every known digit cancels, since the
// result's valuation would then be undetermined.
class PadicScalar {
 public:
  static PadicScalar zero(const Int& prime, int precision_k);
  static PadicScalar from_integer(const Int& n, const Int& prime,
                                  int precision_k);
  static PadicScalar from_rational(const Rational& q, const Int& prime,
                                   int precision_k);
  static PadicScalar from_parts(const Int& prime, int precision_k,
                                long valuation, const Int& unit);
  // Exactly p^e (unit part 1).
  static PadicScalar p_power(const Int& prime, int precision_k, long e);

  const Int& prime() const { return prime_; }
  int precision() const { return precision_; }
  bool is_zero() const { return zero_; }
  long valuation() const;  // throws on the zero marker
  const Int& unit() const { return unit_; }

  // p^-valuation as an exact rational; 0 for the zero marker.
  Rational norm() const;
  // The canonical representative p^valuation * unit as an exact rational.
  Rational representative() const;

  PadicScalar operator-() const;
  PadicScalar operator+(const PadicScalar& o) const;
  PadicScalar operator-(const PadicScalar& o) const;
  PadicScalar operator*(const PadicScalar& o) const;
  PadicScalar operator/(const PadicScalar& o) const;
  // Complex conjugation is trivial on Q_p; present for oracle symmetry.
  PadicScalar conjugate() const { return *this; }

  bool operator==(const PadicScalar& o) const;

 private:
  PadicScalar(Int prime, int precision_k, bool zero, long valuation, Int unit)
      : prime_(std::move(prime)),
        precision_(precision_k),
        zero_(zero),
        valuation_(valuation),
        unit_(std::move(unit)) {}

  void check_same_context(const PadicScalar& o) const;

  Int prime_;
  int precision_;
  bool zero_;
  long valuation_;
  Int unit_;
};

Rational norm(const PadicScalar& x);

}  // namespace pzeta

#endif
