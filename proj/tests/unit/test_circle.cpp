#include <cmath>
#include <random>

#include "bslab/circle_map.hpp"
#include "bslab/errors.hpp"
#include "bslab/fixed_points.hpp"
#include "doctest.h"

using namespace bslab;

TEST_SUITE("circle") {
  TEST_CASE("rationals parse and print canonically") {
    CHECK(parse_rational("3/6") == Rational(1, 2));
    CHECK(parse_rational("-7") == Rational(-7));
    CHECK(to_string(Rational(4, 6)) == "2/3");
    CHECK_THROWS(parse_rational("1/0"));
    CHECK_THROWS(parse_rational("x"));
    CHECK(from_double(0.5) == Rational(1, 2));
  }

  TEST_CASE("scalar arithmetic stays exact on exact operands") {
    Scalar a(Rational(1, 3)), b(Rational(1, 6));
    CHECK((a + b).is_exact());
    CHECK((a + b) == Scalar(Rational(1, 2)));
    CHECK_FALSE((a + Scalar(0.5)).is_exact());
    CHECK(frac(Scalar(Rational(-1, 4))) == Scalar(Rational(3, 4)));
  }

  TEST_CASE("chart-compatible points convert exactly") {
    CHECK(CirclePoint::angular(Rational(0)).to(Chart::Projective).is_infinity());
    CHECK(CirclePoint::angular(Rational(1, 2)).to(Chart::Projective) == CirclePoint::projective(Rational(0)));
    CHECK(CirclePoint::angular(Rational(1, 4)).to(Chart::Projective) == CirclePoint::projective(Rational(-1)));
    CHECK(CirclePoint::angular(Rational(3, 4)).to(Chart::Projective) == CirclePoint::projective(Rational(1)));
    CHECK(CirclePoint::infinity().to(Chart::Angular) == CirclePoint::angular(Rational(0)));
    CHECK(CirclePoint::angular(Rational(5, 4)) == CirclePoint::angular(Rational(1, 4)));
  }

  TEST_CASE("generic chart conversion matches tan") {
    for (double t : {-3.5, -0.2, 0.7, 12.0}) {
      CirclePoint p = CirclePoint::projective(t);
      double theta = p.to(Chart::Angular).angle();
      CHECK(std::tan(M_PI * (theta - 0.5)) == doctest::Approx(t).epsilon(1e-12));
    }
  }

  TEST_CASE("angular distance is exact and symmetric") {
    auto a = CirclePoint::angular(Rational(1, 10));
    auto b = CirclePoint::angular(Rational(9, 10));
    CHECK(angular_distance(a, b) == Scalar(Rational(1, 5)));
    CHECK(angular_distance(b, a) == Scalar(Rational(1, 5)));
    CHECK(angular_distance(CirclePoint::infinity(), CirclePoint::angular(Rational(0))).sign() == 0);
  }

  TEST_CASE("arc lengths and containment") {
    Arc wrap{CirclePoint::angular(Rational(7, 8)), CirclePoint::angular(Rational(1, 8))};
    CHECK(length(wrap) == Scalar(Rational(1, 4)));
    CHECK(arc_contains(wrap, CirclePoint::angular(Rational(0))));
    CHECK_FALSE(arc_contains(wrap, CirclePoint::angular(Rational(1, 2))));
    Arc line{CirclePoint::projective(Rational(-1)), CirclePoint::projective(Rational(3))};
    CHECK(length(line) == Scalar(Rational(4)));
    Arc through{CirclePoint::projective(Rational(3)), CirclePoint::projective(Rational(-1))};
    CHECK_THROWS_AS(length(through), std::domain_error);
  }

  TEST_CASE("moebius maps are stored canonically") {
    CHECK(Moebius::make(2, 0, 0, 2) == Moebius::identity());
    Moebius m = Moebius::make(Rational(1, 2), 1, 0, Rational(1, 2));
    CHECK(m.a == 1);
    CHECK(m.b == 2);
    CHECK(m * m.inverse() == Moebius::identity());
  }

  TEST_CASE("standard relation holds as matrices") {
    for (int n : {2, 3, 5}) {
      auto f0 = CircleMap::moebius(1, 1, 0, 1);
      auto h0 = CircleMap::moebius(n, 0, 0, 1);
      CHECK(compose(h0, compose(f0, h0.inverse())) == power(f0, n));
    }
  }

  TEST_CASE("moebius evaluation in both charts") {
    auto f0 = CircleMap::moebius(1, 1, 0, 1);
    CHECK(f0(CirclePoint::projective(Rational(2))) == CirclePoint::projective(Rational(3)));
    CHECK(f0(CirclePoint::infinity()).is_infinity());
    // angular 1/2 is projective 0, whose image 1 is angular 3/4
    CHECK(f0(CirclePoint::angular(Rational(1, 2))) == CirclePoint::angular(Rational(3, 4)));
  }

  TEST_CASE("PL maps: breakpoints, lift, inverse") {
    auto g = CircleMap::pl({0, Rational(1, 2)}, {Rational(3, 2), Rational(1, 2)}, Rational(1, 8));
    CHECK(g.is_exact());
    CHECK(*g.lift_exact(Rational(0)) == Rational(1, 8));
    CHECK(*g.lift_exact(Rational(1, 2)) == Rational(7, 8));
    CHECK(*g.lift_exact(Rational(1)) == Rational(9, 8));
    CHECK(*g.lift_exact(Rational(3, 2)) == Rational(15, 8));
    CHECK(compose(g, g.inverse()).is_identity());
    CHECK(g.derivative(CirclePoint::angular(Rational(1, 2)), Side::Left) == Scalar(Rational(3, 2)));
    CHECK(g.derivative(CirclePoint::angular(Rational(1, 2)), Side::Right) == Scalar(Rational(1, 2)));
    CHECK_THROWS(CircleMap::pl({0, Rational(1, 2)}, {1, 2}, 0));  // slopes do not integrate to 1
  }

  TEST_CASE("PL composition is exact and associative on random maps") {
    std::mt19937_64 rng(11);
    auto random_pl = [&] {
      std::uniform_int_distribution<int> d(1, 7);
      Rational k1(d(rng), 16), k2 = k1 + Rational(d(rng), 32);
      Rational s0(d(rng), 4), s1(d(rng), 4);
      Rational rest = 1 - s0 * k1 - s1 * (k2 - k1);
      if (rest <= 0) return CircleMap::rotation(Rational(d(rng), 9));
      return CircleMap::pl({0, k1, k2}, {s0, s1, Rational(rest / (1 - k2))}, Rational(d(rng), 11));
    };
    for (int i = 0; i < 30; ++i) {
      auto a = random_pl(), b = random_pl(), c = random_pl();
      auto left = compose(a, compose(b, c));
      auto right = compose(compose(a, b), c);
      CHECK(left == right);
      Rational x(i, 31);
      // canonical lifts agree up to an integer
      CHECK(frac(*left.lift_exact(x)) == frac(*a.lift_exact(*b.lift_exact(*c.lift_exact(x)))));
    }
  }

  TEST_CASE("rotations compose with PL maps into PL maps") {
    auto r = CircleMap::rotation(Rational(1, 3));
    auto g = CircleMap::pl({0, Rational(1, 2)}, {Rational(3, 2), Rational(1, 2)}, 0);
    auto c = compose(r, g);
    CHECK(c.kind() == "pl");
    CHECK(*c.lift_exact(Rational(1, 4)) == Rational(3, 8) + Rational(1, 3));
    CHECK(power(r, 3).is_identity());
  }

  TEST_CASE("line PL maps fix infinity and are exact") {
    auto P = CircleMap::line_pl({-1, 0, 2}, {-1, Rational(1, 3), 2}, 1, 1);
    CHECK(P(CirclePoint::infinity()).is_infinity());
    CHECK(P(CirclePoint::projective(Rational(0))) == CirclePoint::projective(Rational(1, 3)));
    CHECK(P(CirclePoint::projective(Rational(5))) == CirclePoint::projective(Rational(5)));
    CHECK(P(CirclePoint::projective(Rational(1))) == CirclePoint::projective(Rational(7, 6)));
    CHECK(compose(P.inverse(), P).is_identity());
  }

  TEST_CASE("oracle maps evaluate through their lift") {
    double eps = 0.05;
    auto lift = [eps](double x) { return x + 0.2 + eps * std::sin(2 * M_PI * x); };
    auto deriv = [eps](double x) { return 1 + 2 * M_PI * eps * std::cos(2 * M_PI * x); };
    auto m = CircleMap::oracle(lift, deriv, 4 * M_PI * M_PI * eps, 1e-15, "sine");
    CHECK_FALSE(m.is_exact());
    CHECK(m.lift(0.25) == doctest::Approx(0.5));
    auto back = m.inverse();
    double r = back.lift(m.lift(0.3));
    CHECK(r - std::floor(r) == doctest::Approx(0.3).epsilon(1e-12));
  }

  TEST_CASE("fixed points") {
    auto f0 = CircleMap::moebius(1, 1, 0, 1);
    auto fps = solve_fixed_points(f0, 2048, 1e-10);
    REQUIRE(fps.size() == 1);
    CHECK(fps[0].exact->is_infinity());

    auto h0 = CircleMap::moebius(2, 0, 0, 1);
    auto two = solve_fixed_points(h0, 2048, 1e-10);
    REQUIRE(two.size() == 2);
    CHECK(two[0].representative().angle() == doctest::Approx(0.0));
    CHECK(two[1].representative().angle() == doctest::Approx(0.5));

    CHECK(solve_fixed_points(CircleMap::rotation(Rational(1, 7)), 2048, 1e-10).empty());

    // irrational fixed points of a hyperbolic map are bracketed
    auto hyp = CircleMap::moebius(2, 1, 1, 1);
    auto roots = solve_fixed_points(hyp, 2048, 1e-12);
    REQUIRE(roots.size() == 2);
    for (const auto& r : roots) CHECK(std::abs(displacement(hyp, r.representative().angle())) < 1e-9);
  }
}
