#include <random>

#include "doctest.h"
#include "piseries/errors.hpp"
#include "piseries/scalar.hpp"
#include "support.hpp"

using namespace piseries;
using piseries::testing::rel_error;
using J = Jet2<BigReal>;

namespace {

// arctan(1/m) by its alternating series in exact rationals. The error of the
// partial sum is below the first omitted term.
struct Bracket {
  Rational value;
  Rational error;
};

Bracket arctan_inverse(long m, long terms) {
  Rational sum(0);
  Rational power(1, m);
  const Rational m2(m * m);
  for (long j = 0; j < terms; ++j) {
    const Rational t = power / Rational(2 * j + 1);
    sum = j % 2 == 0 ? sum + t : sum - t;
    power = power / m2;
  }
  return {sum, power / Rational(2 * terms + 1)};
}

// pi = 16 atan(1/5) - 4 atan(1/239)
Bracket machin(long terms) {
  const Bracket a = arctan_inverse(5, terms);
  const Bracket b = arctan_inverse(239, terms);
  return {Rational(16) * a.value - Rational(4) * b.value, Rational(16) * a.error + Rational(4) * b.error};
}

void check_pi(long prec) {
  const Bracket oracle = machin(prec / 2 + 8);
  const long wide = 4 * prec;
  const BigReal got = pi(prec).with_precision(wide);
  const BigReal diff = abs(got - BigReal(oracle.value, wide)) + BigReal(oracle.error, wide);
  CHECK(diff < pow2(4 - prec, wide));
}

J poly_ratio(const J& b) {
  // (b^3 + 3b - 1/7) / (b^2 - b/3 + 2)
  const J num = b * b * b + J(3L) * b - J(1L) / J(7L);
  const J den = b * b - b / J(3L) + J(2L);
  return num / den;
}

BigReal poly_ratio(const BigReal& b) { return poly_ratio(J::constant(b)).v; }

}  // namespace

TEST_CASE("pi against a Machin oracle") {
  check_pi(16);
  check_pi(64);
  check_pi(192);
  check_pi(1000);
  CHECK(abs(pi(16).with_precision(64) - BigReal::parse("3.1416", 64)) < pow2(-12, 64));
  CHECK_THROWS_AS(pi(15), PreconditionError);
}

TEST_CASE("result precision is the larger operand precision") {
  const BigReal a(1L, 64);
  const BigReal b(3L, 128);
  CHECK((a + b).precision_bits() == 128);
  CHECK((b * a).precision_bits() == 128);
  CHECK((a / a).precision_bits() == 64);
  CHECK((a - b).precision_bits() == 128);
}

TEST_CASE("one rounding per operation") {
  std::mt19937_64 g(7);
  for (int i = 0; i < 200; ++i) {
    const Rational x = piseries::testing::small_rational(g, 1000, 997);
    Rational y = piseries::testing::small_rational(g, 1000, 997);
    if (is_zero(y)) y = Rational(1, 3);
    for (long p : {24L, 64L, 192L}) {
      const BigReal bx(x, p), by(y, p);
      const BigReal ulp = pow2(1 - p, 4 * p);
      const BigReal exact_x = BigReal(bx).with_precision(4 * p);
      const BigReal exact_y = BigReal(by).with_precision(4 * p);
      CHECK(rel_error((bx * by).with_precision(4 * p), exact_x * exact_y) <= ulp);
      CHECK(rel_error((bx / by).with_precision(4 * p), exact_x / exact_y) <= ulp);
      const BigReal s = exact_x + exact_y;
      if (!is_zero(s)) CHECK(rel_error((bx + by).with_precision(4 * p), s) <= ulp);
    }
  }
}

TEST_CASE("decimal parsing is exact before rounding") {
  CHECK(Rational::parse("0.3") == Rational(3, 10));
  CHECK(Rational::parse("-1.25e-1") == Rational(-1, 8));
  CHECK(Rational::parse("7/14") == Rational(1, 2));
  CHECK(BigReal::parse("0.5", 64) == BigReal(Rational(1, 2), 64));
  CHECK_THROWS(Rational::parse("abc"));
}

TEST_CASE("jet construction") {
  const J c = J::constant(BigReal(5L));
  CHECK(is_zero(c.d1));
  CHECK(is_zero(c.d2));
  const J v = J::variable(BigReal(5L));
  CHECK(v.v == BigReal(5L));
  CHECK(v.d1 == BigReal(1L));
  CHECK(is_zero(v.d2));
}

TEST_CASE("jet_mul examples") {
  const BigReal b0(Rational(3, 7));
  const J sq = jet_mul(J::variable(b0), J::variable(b0));
  CHECK(sq.v == b0 * b0);
  CHECK(sq.d1 == BigReal(2L) * b0);
  CHECK(sq.d2 == BigReal(2L));

  const J x(BigReal(2L), BigReal(-3L), BigReal(Rational(1, 5)));
  const J cx = jet_mul(J::constant(BigReal(4L)), x);
  CHECK(cx.v == BigReal(8L));
  CHECK(cx.d1 == BigReal(-12L));
  CHECK(cx.d2 == BigReal(4L) * BigReal(Rational(1, 5)));

  const J p = jet_mul(J(BigReal(2L), BigReal(1L), BigReal(0L)), J(BigReal(3L), BigReal(1L), BigReal(0L)));
  CHECK(p == J(BigReal(6L), BigReal(5L), BigReal(2L)));
}

TEST_CASE("jet_div examples") {
  const J x(BigReal(2L), BigReal(-3L), BigReal(7L));
  CHECK(jet_div(x, J::constant(BigReal(1L))) == x);
  CHECK(jet_div(J::variable(BigReal(2L)), J::variable(BigReal(2L))) == J(BigReal(1L), BigReal(0L), BigReal(0L)));
  const J r = jet_div(J(BigReal(1L)), J(BigReal(2L), BigReal(1L), BigReal(0L)));
  CHECK(r == J(BigReal(Rational(1, 2)), BigReal(Rational(-1, 4)), BigReal(Rational(1, 4))));
  CHECK_THROWS_AS(jet_div(x, J(BigReal(0L), BigReal(1L), BigReal(0L))), DivisionByZero);
}

TEST_CASE("jet rational arithmetic is exact") {
  using JR = Jet2<Rational>;
  const JR b = JR::variable(Rational(2, 3));
  const JR f = (b * b + JR(1L)) / (b - JR(5L));
  // f = (b^2+1)/(b-5): f' = (b^2-10b-1)/(b-5)^2, f'' = 52/(b-5)^3
  const Rational b0(2, 3);
  CHECK(f.v == (b0 * b0 + Rational(1)) / (b0 - Rational(5)));
  CHECK(f.d1 == (b0 * b0 - Rational(10) * b0 - Rational(1)) / ((b0 - Rational(5)) * (b0 - Rational(5))));
  CHECK(f.d2 == Rational(52) / ((b0 - Rational(5)) * (b0 - Rational(5)) * (b0 - Rational(5))));
}

TEST_CASE("jet_div inverts jet_mul") {
  std::mt19937_64 g(11);
  for (int i = 0; i < 100; ++i) {
    auto r = [&] { return BigReal(piseries::testing::small_rational(g, 50, 17)); };
    const J x(r(), r(), r());
    J y(r(), r(), r());
    if (is_zero(y.v)) y.v = BigReal(1L);
    const J back = jet_mul(jet_div(x, y), y);
    const BigReal tol = pow2(-180, kDefaultPrecisionBits);
    auto scale = [](const BigReal& a) { return max(abs(a), BigReal(1L)); };
    CHECK(abs(back.v - x.v) <= tol * scale(x.v) * BigReal(100L));
    CHECK(abs(back.d1 - x.d1) <= tol * scale(x.d1) * BigReal(1000L));
    CHECK(abs(back.d2 - x.d2) <= tol * scale(x.d2) * BigReal(10000L));
  }
}

TEST_CASE("jet ring laws on random samples") {
  std::mt19937_64 g(3);
  const BigReal tol = pow2(-180, kDefaultPrecisionBits);
  auto close = [&](const J& a, const J& b) {
    auto one = [&](const BigReal& u, const BigReal& w) { return abs(u - w) <= tol * max(BigReal(1L), abs(u)); };
    return one(a.v, b.v) && one(a.d1, b.d1) && one(a.d2, b.d2);
  };
  for (int i = 0; i < 200; ++i) {
    auto r = [&] { return BigReal(piseries::testing::small_rational(g, 50, 17)); };
    const J x(r(), r(), r()), y(r(), r(), r()), z(r(), r(), r());
    CHECK(close(x + y, y + x));
    CHECK(close(x * y, y * x));
    CHECK(close((x + y) + z, x + (y + z)));
    CHECK(close((x * y) * z, x * (y * z)));
    CHECK(close(x * (y + z), x * y + x * z));
  }
}

TEST_CASE("jet derivatives agree with central differences") {
  const long prec = kDefaultPrecisionBits;
  PrecisionScope scope(prec);
  const BigReal b0(Rational(5, 11), prec);
  const J f = poly_ratio(J::variable(b0));

  auto d1_fd = [&](const BigReal& h) { return (poly_ratio(b0 + h) - poly_ratio(b0 - h)) / (BigReal(2L) * h); };
  auto d2_fd = [&](const BigReal& h) {
    return (poly_ratio(b0 + h) - BigReal(2L) * poly_ratio(b0) + poly_ratio(b0 - h)) / (h * h);
  };

  SUBCASE("at h = 2^(-prec/4)") {
    const BigReal h = pow2(-prec / 4, prec);
    CHECK(rel_error(d1_fd(h), f.d1) < pow2(-85, prec));
    CHECK(rel_error(d2_fd(h), f.d2) < pow2(-85, prec));
  }
  SUBCASE("error decays as h^2") {
    for (long e : {16L, 17L, 18L}) {
      const BigReal h = pow2(-e, prec);
      const BigReal h2 = pow2(-e - 1, prec);
      const BigReal r1 = abs(d1_fd(h) - f.d1) / abs(d1_fd(h2) - f.d1);
      const BigReal r2 = abs(d2_fd(h) - f.d2) / abs(d2_fd(h2) - f.d2);
      CHECK(r1 > BigReal(Rational(7, 2)));
      CHECK(r1 < BigReal(Rational(9, 2)));
      CHECK(r2 > BigReal(Rational(7, 2)));
      CHECK(r2 < BigReal(Rational(9, 2)));
    }
  }
}
