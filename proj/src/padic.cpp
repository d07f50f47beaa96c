#include "pzeta/padic.hpp"

namespace pzeta {

namespace {

void check_prime_precision(const Int& prime, int precision_k) {
  if (prime < 2) throw InputError("PadicScalar: prime must be >= 2");
  if (precision_k < 1) throw InputError("PadicScalar: precision must be >= 1");
}

}  // namespace

PadicScalar PadicScalar::zero(const Int& prime, int precision_k) {
  check_prime_precision(prime, precision_k);
  return PadicScalar(prime, precision_k, true, 0, 0);
}

PadicScalar PadicScalar::from_parts(const Int& prime, int precision_k,
                                    long valuation, const Int& unit) {
  check_prime_precision(prime, precision_k);
  Int pk = pow_int(prime, static_cast<unsigned long>(precision_k));
  Int u = mod_positive(unit, pk);
  if (u == 0) throw InputError("PadicScalar: unit reduces to zero mod p^k");
  if (u % prime == 0)
    throw InputError("PadicScalar: unit must be coprime to p");
  return PadicScalar(prime, precision_k, false, valuation, u);
}

PadicScalar PadicScalar::from_integer(const Int& n, const Int& prime,
                                      int precision_k) {
  check_prime_precision(prime, precision_k);
  if (n == 0) return zero(prime, precision_k);
  long v = valuation_of(n, prime);
  Int u = n / pow_int(prime, static_cast<unsigned long>(v));
  return from_parts(prime, precision_k, v, u);
}

PadicScalar PadicScalar::from_rational(const Rational& q, const Int& prime,
                                       int precision_k) {
  check_prime_precision(prime, precision_k);
  if (q == 0) return zero(prime, precision_k);
  long v = valuation_of(q, prime);
  Rational u = q * pow_rational(prime, -v);
  Int pk = pow_int(prime, static_cast<unsigned long>(precision_k));
  Int num = mod_positive(Int(u.get_num()), pk);
  Int den_inv = invert_mod(Int(u.get_den()), pk);
  return from_parts(prime, precision_k, v, num * den_inv);
}

PadicScalar PadicScalar::p_power(const Int& prime, int precision_k, long e) {
  return from_parts(prime, precision_k, e, 1);
}

long PadicScalar::valuation() const {
  if (zero_) throw Error("PadicScalar: zero has no finite valuation");
  return valuation_;
}

Rational PadicScalar::norm() const {
  if (zero_) return Rational(0);
  return pow_rational(prime_, -valuation_);
}

Rational PadicScalar::representative() const {
  if (zero_) return Rational(0);
  return Rational(unit_) * pow_rational(prime_, valuation_);
}

void PadicScalar::check_same_context(const PadicScalar& o) const {
  if (prime_ != o.prime_)
    throw ContextMismatchError("PadicScalar: mixed primes");
}

PadicScalar PadicScalar::operator-() const {
  if (zero_) return *this;
  Int pk = pow_int(prime_, static_cast<unsigned long>(precision_));
  return PadicScalar(prime_, precision_, false, valuation_,
                     mod_positive(-unit_, pk));
}

PadicScalar PadicScalar::operator*(const PadicScalar& o) const {
  check_same_context(o);
  int k = std::min(precision_, o.precision_);
  if (zero_ || o.zero_) return zero(prime_, k);
  Int pk = pow_int(prime_, static_cast<unsigned long>(k));
  return PadicScalar(prime_, k, false, valuation_ + o.valuation_,
                     mod_positive(unit_ * o.unit_, pk));
}

PadicScalar PadicScalar::operator/(const PadicScalar& o) const {
  check_same_context(o);
  if (o.zero_) throw SingularInputError("PadicScalar: division by zero");
  int k = std::min(precision_, o.precision_);
  if (zero_) return zero(prime_, k);
  Int pk = pow_int(prime_, static_cast<unsigned long>(k));
  Int inv = invert_mod(o.unit_, pk);
  return PadicScalar(prime_, k, false, valuation_ - o.valuation_,
                     mod_positive(unit_ * inv, pk));
}

PadicScalar PadicScalar::operator+(const PadicScalar& o) const {
  check_same_context(o);
  if (zero_ && o.zero_) return zero(prime_, std::min(precision_, o.precision_));
  if (zero_) return o;
  if (o.zero_) return *this;
  // Absolute precision of each operand is valuation + k; the sum is known
  // modulo p^min of the two.
  long abs1 = valuation_ + precision_;
  long abs2 = o.valuation_ + o.precision_;
  long abs = std::min(abs1, abs2);
  long v = std::min(valuation_, o.valuation_);
  if (abs <= v)
    throw InsufficientPrecisionError(
        "PadicScalar: addition result entirely below precision");
  Int modulus = pow_int(prime_, static_cast<unsigned long>(abs - v));
  Int s = unit_ * pow_int(prime_, static_cast<unsigned long>(valuation_ - v)) +
          o.unit_ * pow_int(prime_, static_cast<unsigned long>(o.valuation_ - v));
  s = mod_positive(s, modulus);
  if (s == 0)
    throw InsufficientPrecisionError(
        "PadicScalar: addition cancelled below precision");
  long shift = valuation_of(s, prime_);
  long v_out = v + shift;
  long k_out = abs - v_out;
  Int u = s / pow_int(prime_, static_cast<unsigned long>(shift));
  return PadicScalar(prime_, static_cast<int>(k_out), false, v_out,
                     mod_positive(u, pow_int(prime_, static_cast<unsigned long>(k_out))));
}

PadicScalar PadicScalar::operator-(const PadicScalar& o) const {
  return *this + (-o);
}

bool PadicScalar::operator==(const PadicScalar& o) const {
  if (prime_ != o.prime_ || precision_ != o.precision_) return false;
  if (zero_ != o.zero_) return false;
  if (zero_) return true;
  return valuation_ == o.valuation_ && unit_ == o.unit_;
}

Rational norm(const PadicScalar& x) { return x.norm(); }

}  // namespace pzeta
