#include <cmath>

#include "bslab/errors.hpp"
#include "bslab/fixtures.hpp"
#include "bslab/semiconjugacy.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bslab;

TEST_SUITE("semiconjugacy") {
  TEST_CASE("standard model tabulates the identity") {
    AffineModel m = standard_model(2);
    MonotoneMapTable t = build_semiconjugacy(m.f0, m.h0, 2, CirclePoint::projective(0), 6);
    CHECK(t.samples.size() > 20);
    for (const auto& s : t.samples) CHECK(s.source == s.target);
    CHECK(monotone_check(t));
    CHECK(semiconjugacy_defect(t, m.f0, m.f0, 1000).sign() == 0);
    CHECK(semiconjugacy_defect(t, m.h0, m.h0, 1000).sign() == 0);
  }

  TEST_CASE("samples follow the affine orbit") {
    AffineModel m = standard_model(3);
    MonotoneMapTable t = build_semiconjugacy(m.f0, m.h0, 3, CirclePoint::projective(0), 4);
    for (const auto& s : t.samples) {
      CHECK(s.target == CirclePoint::projective(s.element.translation()));
      CHECK(s.element.act(0) == s.element.translation());
    }
    std::string w = "abAAbaB";
    Rational img = oracle::affine_word(w, 3, 0);
    bool found = false;
    for (const auto& s : t.samples) found = found || s.target == CirclePoint::projective(img);
    CHECK(found);
  }

  TEST_CASE("conjugated actions recover the inverse conjugator on the orbit") {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      ConjugatedAction a = pl_conjugated(2, seed);
      MonotoneMapTable t = build_semiconjugacy(a.f, a.h, 2, a.base, 6, a.fixed_point);
      CircleMap cinv = a.conjugator.inverse();
      for (const auto& s : t.samples) CHECK(cinv(s.source) == s.target);
      CHECK(monotone_check(t));
      CHECK(semiconjugacy_defect(t, a.f, standard_model(2).f0, 2000).approx() < 1e-6);
    }
  }

  TEST_CASE("depth improves the defect") {
    ConjugatedAction a = pl_conjugated(2, 4);
    AffineModel m = standard_model(2);
    auto shallow = build_semiconjugacy(a.f, a.h, 2, a.base, 2, a.fixed_point);
    auto deep = build_semiconjugacy(a.f, a.h, 2, a.base, 10, a.fixed_point);
    double d2 = semiconjugacy_defect(shallow, a.h, m.h0, 2000).approx();
    double d10 = semiconjugacy_defect(deep, a.h, m.h0, 2000).approx();
    CHECK(d10 <= d2);
    CHECK(d10 < 1e-6);
  }

  TEST_CASE("swapped generators violate the order") {
    AffineModel m = standard_model(2);
    CHECK_THROWS_AS(build_semiconjugacy(m.h0, m.f0, 2, CirclePoint::projective(1), 4), OrderViolation);
  }

  TEST_CASE("monotone check detects a reversal") {
    AffineModel m = standard_model(2);
    MonotoneMapTable t = build_semiconjugacy(m.f0, m.h0, 2, CirclePoint::projective(0), 4);
    REQUIRE(t.samples.size() > 3);
    std::swap(t.samples[1].target, t.samples[2].target);
    CHECK_FALSE(monotone_check(t));
  }

  TEST_CASE("equivariance on sample points") {
    ConjugatedAction a = pl_conjugated(2, 9);
    AffineModel m = standard_model(2);
    MonotoneMapTable t = build_semiconjugacy(a.f, a.h, 2, a.base, 8, a.fixed_point);
    int checked = 0;
    for (const auto& s : t.samples) {
      const Rational& y = s.target.value().exact();
      if (abs(y) > 16) continue;
      CHECK(angular_distance(t(a.f(s.source)), m.f0(s.target)).approx() < 1e-12);
      CHECK(angular_distance(t(a.h(s.source)), m.h0(s.target)).approx() < 1e-12);
      ++checked;
    }
    CHECK(checked > 10);
  }

  TEST_CASE("a base point off the orbit order is rejected") {
    // phi(-1) = 0 is the translation x + 1, which does not commute with h0
    AffineModel m = standard_model(2);
    CHECK_THROWS_AS(build_semiconjugacy(m.f0, m.h0, 2, CirclePoint::projective(-1), 3), OrderViolation);
  }

  TEST_CASE("step interpolation is left-continuous and piecewise constant") {
    AffineModel m = standard_model(2);
    MonotoneMapTable t =
        build_semiconjugacy(m.f0, m.h0, 2, CirclePoint::projective(0), 4, CirclePoint::infinity(), Interpolation::Step);
    CHECK(t(CirclePoint::projective(0)) == CirclePoint::projective(0));
    CirclePoint a = t(CirclePoint::projective(Rational(1, 1000)));
    CirclePoint b = t(CirclePoint::projective(Rational(1, 999)));
    CHECK(a == b);
    CHECK(to_string(Interpolation::Step) == "step");
  }

  TEST_CASE("fallback uses powers when the first attempt fails") {
    AffineModel m = standard_model(2);
    auto attempts = semiconjugacy_with_fallback(m.h0, m.f0, 2, 1, CirclePoint::projective(1), 3, CirclePoint::infinity());
    REQUIRE(attempts.size() == 2);
    CHECK_FALSE(attempts[0].table.has_value());
    CHECK_FALSE(attempts[0].error.empty());
    auto ok = semiconjugacy_with_fallback(m.f0, m.h0, 2, 1, CirclePoint::projective(0), 3, CirclePoint::infinity());
    REQUIRE(ok.size() == 1);
    CHECK(ok[0].table.has_value());
    CHECK(ok[0].modulus == 2);
  }
}
