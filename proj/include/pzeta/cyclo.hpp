#ifndef PZETA_CYCLO_HPP
#define PZETA_CYCLO_HPP

#include <optional>
#include <vector>

#include "pzeta/numbers.hpp"

namespace pzeta {

// An element of Q_p/Z_p, stored as the reduced fraction num/p^m mod 1 with
// 0 <= num < p^m and p ∤ num unless the value is 0. Character values of
// finite p-groups live here; the map q -> e^{2*pi*i*q} identifies them with
// p-power roots of unity.
class QpModZp {
 public:
  QpModZp(Int prime, int m, Int num);
  static QpModZp zero(const Int& prime) { return QpModZp(prime, 0, 0); }

  const Int& prime() const { return prime_; }
  int level() const { return m_; }  // value has exact order p^level
  const Int& numerator() const { return num_; }
  bool is_zero() const { return m_ == 0; }
  Rational value() const { return Rational(num_) / pow_rational(prime_, m_); }

  QpModZp operator+(const QpModZp& o) const;
  QpModZp operator-() const;
  QpModZp operator-(const QpModZp& o) const { return *this + (-o); }
  QpModZp times(const Int& c) const;
  bool operator==(const QpModZp& o) const {
    return m_ == o.m_ && num_ == o.num_;
  }
  bool operator!=(const QpModZp& o) const { return !(*this == o); }

 private:
  Int prime_;
  int m_;
  Int num_;
};

// Integer combination of p^m-th roots of unity, kept on the full group-ring
// basis: coeffs[j] is the multiplicity of zeta^j for zeta a primitive
// p^m-th root. Ring operations permute exponents; reduction modulo the
// cyclotomic polynomial happens only on demand.
class CycloSum {
 public:
  CycloSum(Int prime, int order_exponent);
  static CycloSum zero(const Int& prime, int order_exponent = 0) {
    return CycloSum(prime, order_exponent);
  }
  static CycloSum constant(const Int& prime, const Int& c);
  // c * zeta^j at order p^m.
  static CycloSum scaled_root(const Int& prime, int m, const Int& j,
                              const Int& c = 1);
  static CycloSum from_angle(const QpModZp& q, const Int& c = 1);

  const Int& prime() const { return prime_; }
  int order_exponent() const { return m_; }
  const std::vector<Int>& coeffs() const { return coeffs_; }

  CycloSum operator+(const CycloSum& o) const;
  CycloSum operator-() const;
  CycloSum operator-(const CycloSum& o) const { return *this + (-o); }
  CycloSum operator*(const CycloSum& o) const;
  CycloSum conjugate() const;

  // Canonical coefficients on the basis zeta^0..zeta^{phi(p^m)-1} after
  // reduction mod the p^m-th cyclotomic polynomial.
  std::vector<Int> canonical() const;
  bool is_rational() const;
  // The value as a rational if canonical form is constant; nullopt otherwise.
  std::optional<Rational> rational_value() const;

  bool operator==(const CycloSum& o) const;

 private:
  CycloSum lift_to(int m) const;

  Int prime_;
  int m_;
  std::vector<Int> coeffs_;
};

}  // namespace pzeta

#endif
