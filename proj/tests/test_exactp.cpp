#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "pzeta/cyclo.hpp"
#include "pzeta/padic.hpp"

using namespace pzeta;

TEST_CASE("norm of p-adic scalars") {
  auto one = PadicScalar::from_integer(1, 3, 8);
  CHECK(one.norm() == Rational(1));

  auto x = PadicScalar::from_parts(2, 8, 2, 7);  // p^2 * unit
  CHECK(x.norm() == Rational(1, 4));

  // 12 = 2^2 * 3
  auto twelve = PadicScalar::from_integer(12, 2, 8);
  CHECK(twelve.valuation() == 2);
  CHECK(twelve.unit() == 3);
  CHECK(twelve.norm() == Rational(1, 4));

  CHECK(PadicScalar::zero(5, 4).norm() == 0);
}

TEST_CASE("norm is multiplicative and valuations are ultrametric") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<long> d(-2000, 2000);
  for (int trial = 0; trial < 300; ++trial) {
    long a = d(rng), b = d(rng);
    if (a == 0 || b == 0) continue;
    auto x = PadicScalar::from_integer(a, 3, 12);
    auto y = PadicScalar::from_integer(b, 3, 12);
    CHECK((x * y).norm() == x.norm() * y.norm());
    if (a + b != 0) {
      auto s = x + y;
      long vmin = std::min(x.valuation(), y.valuation());
      CHECK(s.valuation() >= vmin);
      if (x.valuation() != y.valuation()) CHECK(s.valuation() == vmin);
    }
  }
}

TEST_CASE("addition tracks precision and flags full cancellation") {
  auto x = PadicScalar::from_parts(3, 4, 0, 1);   // 1 + O(3^4)
  auto y = PadicScalar::from_parts(3, 2, 0, 2);   // 2 + O(3^2)
  auto s = x + y;
  CHECK(s.valuation() == 1);   // 3 = 3^1 * 1
  CHECK(s.precision() == 1);   // absolute precision 3^2 survives
  CHECK(s.unit() == 1);

  auto a = PadicScalar::from_parts(3, 3, 0, 5);
  CHECK_THROWS_AS(a - a, InsufficientPrecisionError);

  // Cancellation that only loses some digits is fine.
  auto b = PadicScalar::from_parts(3, 3, 0, 5 + 9);
  auto diff = b - a;  // 9 + O(27)
  CHECK(diff.valuation() == 2);
}

TEST_CASE("division and representatives") {
  auto x = PadicScalar::from_integer(18, 3, 6);  // 3^2 * 2
  auto y = PadicScalar::from_integer(3, 3, 6);
  auto q = x / y;
  CHECK(q.valuation() == 1);
  CHECK(q.representative() == Rational(6));
  CHECK_THROWS_AS(x / PadicScalar::zero(3, 6), SingularInputError);
  CHECK(PadicScalar::from_rational(Rational(1, 2), 3, 4).norm() == 1);
  CHECK(PadicScalar::from_rational(Rational(1, 3), 3, 4).norm() == 3);
}

TEST_CASE("cyclotomic sums reduce canonically") {
  // Constants stay rational.
  auto five = CycloSum::constant(3, 5);
  CHECK(five.rational_value() == Rational(5));

  // Full orbit sum of all p-th roots vanishes (p=3, m=1).
  auto orbit = CycloSum::scaled_root(3, 1, 0) + CycloSum::scaled_root(3, 1, 1) +
               CycloSum::scaled_root(3, 1, 2);
  CHECK(orbit.rational_value() == Rational(0));

  // zeta + zeta^2 = -1 mod x^2 + x + 1.
  auto z = CycloSum::scaled_root(3, 1, 1) + CycloSum::scaled_root(3, 1, 2);
  CHECK(z.rational_value() == Rational(-1));

  // A primitive root itself is not rational.
  CHECK(!CycloSum::scaled_root(3, 1, 1).is_rational());
  CHECK(!CycloSum::scaled_root(2, 2, 1).is_rational());  // i at p=2
}

TEST_CASE("conjugation properties") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> coef(-4, 4);
  for (int trial = 0; trial < 50; ++trial) {
    CycloSum a = CycloSum::zero(3, 2);
    CycloSum b = CycloSum::zero(3, 2);
    for (int j = 0; j < 9; ++j) {
      a = a + CycloSum::scaled_root(3, 2, j, coef(rng));
      b = b + CycloSum::scaled_root(3, 2, j, coef(rng));
    }
    CHECK((a * b).conjugate() == a.conjugate() * b.conjugate());
  }
  // conj(z) * z for a scaled single root is a nonnegative rational square.
  auto z = CycloSum::scaled_root(5, 1, 3, -7);
  CHECK((z.conjugate() * z).rational_value() == Rational(49));
}

TEST_CASE("QpModZp values") {
  QpModZp a(3, 2, 4);  // 4/9
  QpModZp b(3, 2, 5);  // 5/9
  CHECK((a + b).is_zero());
  QpModZp c(3, 2, 3);  // 3/9 reduces to 1/3
  CHECK(c.level() == 1);
  CHECK(c.value() == Rational(1, 3));
  CHECK((a.times(9)).is_zero());
  CHECK((-a) + a == QpModZp::zero(3));
}
