#include <cmath>

#include "doctest.h"
#include "mwb/elliptic.hpp"
#include "mwb/errors.hpp"
#include "support/oracles.hpp"

using namespace mwb;

namespace {

const double kTol = 1e-10;

ECPoint pt(long x, long y) { return ECPoint(Rational(x), Rational(y)); }

double h(const EllipticCurve& e, const ECPoint& p) { return canonical_height(e, p).value; }

}  // namespace

TEST_CASE("group law on y^2 = x^3 + 1") {
  EllipticCurve e(0, 1);
  ECPoint p = pt(2, 3);
  CHECK(e.add(p, ECPoint::infinity()) == p);
  CHECK(e.add(p, pt(2, -3)).is_infinity());
  CHECK(e.add(p, p) == pt(0, 1));
  CHECK(e.dbl(p) == oracle::repeated_add(e, 2, p));
  CHECK(e.multiply(6, p).is_infinity());
  CHECK(e.multiply(-1, p) == e.negate(p));
}

TEST_CASE("group law rejects bad input") {
  CHECK_THROWS_AS(EllipticCurve(0, 0), InputError);
  EllipticCurve e(0, 1);
  CHECK_THROWS_AS(e.add(pt(1, 1), pt(2, 3)), InputError);
  CHECK(e.discriminant() == Rational(-432));
}

TEST_CASE("multiply agrees with repeated addition") {
  EllipticCurve e(0, -2);
  ECPoint p = pt(3, 5);
  for (unsigned n = 0; n <= 7; ++n) CHECK(e.multiply(static_cast<long>(n), p) == oracle::repeated_add(e, n, p));
  CHECK(e.combination({p}, {3}) == e.multiply(3, p));
}

TEST_CASE("naive height of the x-coordinate") {
  CHECK(naive_height(ECPoint::infinity()).value == 0.0);
  CHECK(naive_height(ECPoint(Rational(0), Rational(1))).value == 0.0);
  CHECK(naive_height(ECPoint(Rational(3, 2), Rational(0))).value == doctest::Approx(std::log(3.0)));
  CHECK(naive_height(ECPoint(Rational(-7, 5), Rational(0))).value == doctest::Approx(std::log(7.0)));
}

TEST_CASE("canonical height examples") {
  EllipticCurve e1(0, 1);
  CHECK(h(e1, ECPoint::infinity()) == 0.0);
  CHECK(h(e1, pt(2, 3)) < kTol);

  EllipticCurve e(0, -2);
  ECPoint p = pt(3, 5);
  HeightValue hp = canonical_height(e, p);
  CHECK(hp.value > 0.5);
  CHECK(hp.error_bound <= kTol);
  CHECK(std::fabs(h(e, e.dbl(p)) - 4 * hp.value) < 4 * kTol);
  // Stable under re-run.
  CHECK(canonical_height(e, p).value == hp.value);
}

TEST_CASE("streamed iterates match explicit doubling") {
  for (auto [a4, a6, x, y] : {std::tuple{0, -2, 3, 5}, std::tuple{0, -11, 3, 4}, std::tuple{-25, 0, -4, 6}}) {
    EllipticCurve e(a4, a6);
    ECPoint p = pt(x, y);
    auto fast = tate_iterates(e, p, 7);
    auto slow = oracle::explicit_tate_iterates(e, p, 7);
    REQUIRE(fast.size() == slow.size());
    for (std::size_t k = 0; k < fast.size(); ++k) CHECK(fast[k] == doctest::Approx(slow[k]).epsilon(1e-12));
  }
}

TEST_CASE("bit budget exhaustion is a resource error") {
  EllipticCurve e(0, -2);
  HeightOptions opts;
  opts.bit_budget = 64;
  CHECK_THROWS_AS(canonical_height(e, pt(3, 5), opts), ResourceError);
}

TEST_CASE("pairing examples") {
  EllipticCurve e(0, -2);
  ECPoint p = pt(3, 5);
  double hp = h(e, p);
  CHECK(std::fabs(nt_pairing(e, p, ECPoint::infinity()).value) < 2 * kTol);
  CHECK(std::fabs(nt_pairing(e, p, p).value - hp) < 4 * kTol);
  CHECK(std::fabs(nt_pairing(e, p, e.negate(p)).value + hp) < 4 * kTol);
}

TEST_CASE("pairing is symmetric and bilinear on small combinations") {
  EllipticCurve e(-25, 0);
  ECPoint p = pt(-4, 6);
  ECPoint q = e.multiply(2, p);
  double pq = nt_pairing(e, p, q).value;
  CHECK(pq == doctest::Approx(nt_pairing(e, q, p).value).epsilon(1e-12));
  CHECK(pq == doctest::Approx(2 * h(e, p)).epsilon(1e-9));
}

TEST_CASE("torsion detection") {
  EllipticCurve e1(0, 1);
  CHECK(is_torsion(e1, ECPoint::infinity()));
  CHECK(is_torsion(e1, pt(2, 3)));
  EllipticCurve e(0, -2);
  CHECK_FALSE(is_torsion(e, pt(3, 5)));
  EllipticCurve e8(0, 8);
  CHECK(is_torsion(e8, pt(-2, 0)));
}

TEST_CASE("height laws on sampled points") {
  struct Case {
    EllipticCurve e;
    ECPoint gen;
    ECPoint torsion;
  };
  std::vector<Case> cases = {{EllipticCurve(0, 8), pt(1, 3), pt(-2, 0)},
                             {EllipticCurve(-25, 0), pt(-4, 6), pt(0, 0)}};
  for (const auto& c : cases) {
    for (int a = 1; a <= 3; ++a) {
      for (int b = -2; b <= 2; ++b) {
        ECPoint p = c.e.multiply(a, c.gen);
        ECPoint q = c.e.multiply(b, c.gen);
        double par = h(c.e, c.e.add(p, q)) + h(c.e, c.e.sub(p, q)) - 2 * h(c.e, p) - 2 * h(c.e, q);
        CHECK(std::fabs(par) < 8 * kTol);
      }
      ECPoint p = c.e.multiply(a, c.gen);
      CHECK(std::fabs(h(c.e, c.e.add(p, c.torsion)) - h(c.e, p)) < 4 * kTol);
    }
    double h1 = h(c.e, c.gen);
    for (long n = 2; n <= 6; ++n) {
      CHECK(std::fabs(h(c.e, c.e.multiply(n, c.gen)) - n * n * h1) < n * n * 2 * kTol);
    }
  }
}

TEST_CASE("canonical minus naive height stays bounded") {
  EllipticCurve e(0, -2);
  ECPoint p = pt(3, 5);
  double worst = 0.0;
  for (long n = 1; n <= 8; ++n) {
    ECPoint q = e.multiply(n, p);
    worst = std::max(worst, std::fabs(h(e, q) - naive_height(q).value));
  }
  CHECK(worst < 5.0);
}
