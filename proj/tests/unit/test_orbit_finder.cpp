#include <cmath>

#include "bslab/errors.hpp"
#include "bslab/fixtures.hpp"
#include "bslab/orbit_finder.hpp"
#include "bslab/semiconjugacy.hpp"
#include "doctest.h"

using namespace bslab;

TEST_SUITE("orbit-finder") {
  TEST_CASE("fixed point enclosures") {
    AffineModel m = standard_model(2);
    FixedPointSet f = fixed_point_enclosures(m.f0);
    REQUIRE(f.intervals.size() == 1);
    CHECK(f.intervals[0].representative().angle() == 0.0);
    CHECK_THROWS_AS(fixed_point_enclosures(CircleMap::rotation(Rational(1, 7))), NoFixedPoint);
    FixedPointSet h = fixed_point_enclosures(m.h0);
    REQUIRE(h.intervals.size() == 2);
    CHECK(h.intervals[0].representative().angle() == 0.0);
    CHECK(h.intervals[1].representative().angle() == 0.5);
  }

  TEST_CASE("sets are sorted and disjoint for a floating map") {
    double eps = 0.08;
    auto lift = [eps](double x) { return x + eps * std::sin(4 * M_PI * x); };
    auto deriv = [eps](double x) { return 1 + 4 * M_PI * eps * std::cos(4 * M_PI * x); };
    auto g = CircleMap::oracle(lift, deriv, 16 * M_PI * M_PI * eps);
    FixedPointSet s = fixed_point_enclosures(g, 512, 1e-12);
    REQUIRE(s.intervals.size() == 4);
    for (std::size_t i = 0; i < s.intervals.size(); ++i) {
      CHECK(s.intervals[i].lo <= s.intervals[i].hi);
      CHECK(s.intervals[i].hi - s.intervals[i].lo <= 1e-11);
      if (i + 1 < s.intervals.size()) CHECK(s.intervals[i].hi < s.intervals[i + 1].lo);
      CHECK(s.intervals[i].representative().angle() * 4 == doctest::Approx(std::round(s.intervals[i].lo * 4)));
    }
  }

  TEST_CASE("fix invariance") {
    AffineModel m = standard_model(2);
    CHECK(fix_invariance_check(m.f0, m.h0, 2, fixed_point_enclosures(m.f0), 1e-12).pass);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      ConjugatedAction a = pl_conjugated(2, seed);
      InvarianceReport r = fix_invariance_check(a.f, a.h, 2, fixed_point_enclosures(a.f), 0.0);
      CHECK(r.pass);
      for (const auto& e : r.entries) CHECK(e.distance.sign() == 0);
    }
    // h = rotation 1/4 moves the fixed point of f0 off the fixed set
    InvarianceReport broken =
        fix_invariance_check(m.f0, CircleMap::rotation(Rational(1, 4)), 2, fixed_point_enclosures(m.f0), 1e-9);
    CHECK_FALSE(broken.pass);
  }

  TEST_CASE("minimal power m") {
    CHECK(*minimal_power_m(standard_model(2).h0, 5) == 1);
    CircleMap P = CircleMap::pl({0, Rational(1, 4)}, {2, Rational(2, 3)}, 0);
    CircleMap h = compose(P, compose(CircleMap::rotation(Rational(1, 3)), P.inverse()));
    CHECK(*minimal_power_m(h, 10) == 3);
    CHECK_FALSE(minimal_power_m(CircleMap::rotation(Scalar((std::sqrt(5.0) - 1) / 2)), 20).has_value());
  }

  TEST_CASE("common fixed point of the standard model is infinity") {
    AffineModel m = standard_model(2);
    CommonFixedPoint u = common_fixed_point(m.f0, m.h0, 2, 1);
    CHECK(u.point.is_infinity());
  }

  TEST_CASE("common fixed point of conjugated models") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      ConjugatedAction a = pl_conjugated(2 + static_cast<int>(seed % 2), seed);
      CommonFixedPoint u = common_fixed_point(a.f, a.h, a.n, 1);
      CHECK(angular_distance(u.point, a.fixed_point).approx() < 1e-8);
      // independent check: C(inf) = M(inf) = a/c of the elliptic part
      const Moebius& M = std::get<Moebius>(a.moebius_part.repr());
      CHECK(u.point == CirclePoint::projective(Rational(M.a / M.c)));
    }
  }

  TEST_CASE("identity pair returns its starting point") {
    CommonFixedPoint u = common_fixed_point(CircleMap(), CircleMap(), 2, 1);
    CHECK(u.point == u.start);
  }

  TEST_CASE("accumulation under a hyperbolic h") {
    // f = identity, h has an attracting fixed point at the golden ratio
    CircleMap h = CircleMap::moebius(2, 1, 1, 1);
    CommonFixedPoint u = common_fixed_point(CircleMap(), h, 2, 1, 10000, 1e-10);
    CHECK(u.point.line() == doctest::Approx((1 + std::sqrt(5.0)) / 2).epsilon(1e-9));
    CHECK(u.h_distance < Scalar(1e-10));
    // the tail moves monotonically toward the limit
    CirclePoint x = u.start;
    int sign = 0;
    for (long i = 0; i < u.iterations; ++i) {
      CirclePoint y = h(x);
      double d = y.angle() - x.angle();
      d -= std::round(d);
      if (i > 2 && d != 0) {
        int s = d > 0 ? 1 : -1;
        if (sign == 0) sign = s;
        CHECK(s == sign);
      }
      x = y.is_exact() && bit_size(y.value().exact()) < 2000 ? y : CirclePoint::angular(y.angle());
    }
  }

  TEST_CASE("no common fixed point without a fixed point of h^m") {
    // h^m never settles: an irrational rotation
    CircleMap h = CircleMap::rotation(Scalar((std::sqrt(5.0) - 1) / 2));
    CHECK_THROWS_AS(common_fixed_point(standard_model(2).f0, h, 2, 1, 200, 1e-10), NotConverged);
  }
}
