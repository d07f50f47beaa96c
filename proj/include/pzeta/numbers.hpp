#ifndef PZETA_NUMBERS_HPP
#define PZETA_NUMBERS_HPP

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "pzeta/errors.hpp"

namespace pzeta {

// All exact arithmetic sits on GMP. No floating point anywhere.
using Int = mpz_class;
using Rational = mpq_class;

inline Int pow_int(const Int& base, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline Int pow_int(long base, unsigned long e) { return pow_int(Int(base), e); }

// p^e for possibly negative e, as an exact rational.
inline Rational pow_rational(const Int& p, long e) {
  if (e >= 0) return Rational(pow_int(p, static_cast<unsigned long>(e)));
  return Rational(1, pow_int(p, static_cast<unsigned long>(-e)));
}

// Multiplicity of p in n. Precondition: n != 0.
inline long valuation_of(const Int& n, const Int& p) {
  if (n == 0) throw Error("valuation_of: zero has no finite valuation");
  Int m = abs(n);
  long v = 0;
  Int q, r;
  for (;;) {
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t());
    if (r != 0) break;
    m = q;
    ++v;
  }
  return v;
}

// p-adic valuation of a nonzero rational.
inline long valuation_of(const Rational& x, const Int& p) {
  if (x == 0) throw Error("valuation_of: zero has no finite valuation");
  return valuation_of(Int(x.get_num()), p) - valuation_of(Int(x.get_den()), p);
}

inline Int mod_positive(const Int& a, const Int& m) {
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline Int invert_mod(const Int& a, const Int& m) {
  Int r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
    throw Error("invert_mod: not invertible");
  return r;
}

// Deterministic primality by trial division; primes here are CLI-scale.
inline bool is_prime(const Int& p) {
  if (p < 2) return false;
  if (p < 4) return true;
  if (p % 2 == 0) return false;
  for (Int d = 3; d * d <= p; d += 2)
    if (p % d == 0) return false;
  return true;
}

inline std::string to_string(const Int& n) { return n.get_str(); }

inline std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

}  // namespace pzeta

#endif
