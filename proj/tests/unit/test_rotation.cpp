#include <cmath>
#include <random>

#include "bslab/errors.hpp"
#include "bslab/fixtures.hpp"
#include "bslab/rotation.hpp"
#include "bslab/semiconjugacy.hpp"
#include "doctest.h"

using namespace bslab;

namespace {

const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;

CircleMap sample_pl() {
  return CircleMap::pl({0, Rational(1, 4), Rational(3, 4)}, {2, Rational(1, 2), 1}, Rational(1, 10));
}

}  // namespace

TEST_SUITE("rotation") {
  TEST_CASE("rigid rotation enclosure") {
    auto e = rotation_enclosure(CircleMap::rotation(Rational(1, 3)), 300);
    CHECK(e.exact());
    CHECK(e.contains(Scalar(Rational(1, 3))));
    CHECK(e.width() <= Scalar(Rational(1, 150)));
  }

  TEST_CASE("parabolic f0 has rotation number 0") {
    auto e = rotation_enclosure(standard_model(2).f0, 100);
    CHECK(e.contains(Scalar(0.0)));
  }

  TEST_CASE("conjugating a rotation by a PL map keeps its rotation number") {
    CircleMap P = sample_pl();
    CircleMap g = compose(P, compose(CircleMap::rotation(Rational(2, 5)), P.inverse()));
    auto e = rotation_enclosure(g, 500);
    CHECK(e.contains(Scalar(Rational(2, 5))));
  }

  TEST_CASE("enclosure soundness and width law for rational rotations") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 60; ++i) {
      long q = 1 + static_cast<long>(rng() % 1000);
      long p = static_cast<long>(rng() % static_cast<unsigned long>(q));
      Rational rho(p, q);
      rho.canonicalize();
      long N = 1 + static_cast<long>(rng() % 400);
      auto r = CircleMap::rotation(rho);
      for (const auto& bp : default_basepoints()) {
        auto single = rotation_enclosure(r, N, {bp});
        CHECK(single.contains(Scalar(rho)));
        CHECK(single.width() <= Scalar(Rational(2, N)));
      }
      auto all = rotation_enclosure(r, N);
      CHECK(all.contains(Scalar(rho)));
      CHECK(all.width() <= rotation_enclosure(r, N, {Rational(0)}).width());
    }
  }

  TEST_CASE("doubling N keeps enclosures overlapping") {
    CircleMap P = sample_pl();
    for (long N : {10L, 40L, 160L}) {
      auto a = rotation_enclosure(P, N);
      auto b = rotation_enclosure(P, 2 * N);
      CHECK(max(a.lo, b.lo) <= min(a.hi, b.hi));
    }
  }

  TEST_CASE("floating enclosures account for the step error") {
    auto g = CircleMap::rotation(Scalar(kGolden));
    auto e = rotation_enclosure(g, 1000);
    CHECK_FALSE(e.exact());
    CHECK(e.contains(Scalar(kGolden)));
  }

  TEST_CASE("rational rotation detection") {
    CHECK(*rational_rotation_detect(CircleMap::rotation(Rational(1, 2))) == Rational(1, 2));
    CHECK_FALSE(rational_rotation_detect(CircleMap::rotation(Scalar(kGolden)), 50).has_value());
    CHECK(*rational_rotation_detect(standard_model(2).h0) == 0);
    CircleMap P = sample_pl();
    CircleMap g = compose(P, compose(CircleMap::rotation(Rational(3, 7)), P.inverse()));
    CHECK(*rational_rotation_detect(g) == Rational(3, 7));
  }

  TEST_CASE("rho rational form") {
    CHECK(rho_rational_form(standard_model(2).f0, 2, 100).l == 0);
    RhoForm half = rho_rational_form(CircleMap::rotation(Rational(1, 2)), 3, 100);
    CHECK(half.l == 1);
    CHECK(half.raw_l == 1);
    CHECK_THROWS_AS(rho_rational_form(CircleMap::rotation(Scalar(kGolden)), 2, 1000), NoAdmissibleL);
    CHECK_THROWS_AS(rho_rational_form(CircleMap::rotation(Rational(1, 3)), 4, 1), EnclosureTooWide);
    for (int n = 2; n <= 6; ++n) {
      for (int l = 0; l < n - 1; ++l) {
        CHECK(rho_rational_form(CircleMap::rotation(Rational(l, n - 1)), n, 1000).l == l);
      }
    }
  }

  TEST_CASE("actions satisfying the relation always admit l") {
    for (int n = 2; n <= 5; ++n) {
      AffineModel m = standard_model(n);
      CHECK_NOTHROW(rho_rational_form(m.f0, n, 1000));
      for (std::uint64_t seed = 0; seed < 4; ++seed) {
        ConjugatedAction a = pl_conjugated(n, seed);
        CHECK_NOTHROW(rho_rational_form(a.f, n, 1000));
      }
    }
  }

  TEST_CASE("conjugacy invariance") {
    AffineModel m = standard_model(2);
    ConjugacyReport r = conjugacy_invariance_check(m.f0, m.h0, 2, 200);
    CHECK(r.consistent);
    CHECK(r.rho_f.contains(Scalar(0.0)));
    CHECK(r.rho_conj.contains(Scalar(0.0)));
    CHECK(r.rho_power.contains(Scalar(0.0)));

    ConjugatedAction a = pl_conjugated(3, 9);
    CHECK(conjugacy_invariance_check(a.f, a.h, 3, 200).consistent);

    ConjugacyReport bad = conjugacy_invariance_check(CircleMap::rotation(Rational(1, 3)), CircleMap(), 2, 200);
    CHECK_FALSE(bad.consistent);
    CHECK_FALSE(bad.conj_meets_power);
  }

  TEST_CASE("mod-one intersection") {
    CHECK(intersects_mod1(Scalar(Rational(9, 10)), Scalar(Rational(11, 10)), Scalar(Rational(0)), Scalar(Rational(0))));
    CHECK_FALSE(intersects_mod1(Scalar(Rational(1, 10)), Scalar(Rational(2, 10)), Scalar(Rational(1, 2)),
                                Scalar(Rational(1, 2))));
  }
}
