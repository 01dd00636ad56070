#include <cmath>

#include "bslab/errors.hpp"
#include "bslab/fixtures.hpp"
#include "bslab/obstruction.hpp"
#include "bslab/semiconjugacy.hpp"
#include "bslab/synthetic.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bslab;

namespace {

Arc line_arc(Rational lo, Rational hi) { return {CirclePoint::projective(lo), CirclePoint::projective(hi)}; }
Arc angular_arc(Rational lo, Rational hi) { return {CirclePoint::angular(lo), CirclePoint::angular(hi)}; }

}  // namespace

TEST_SUITE("obstruction") {
  TEST_CASE("epsilon admissibility") {
    CHECK(epsilon_admissible(Scalar(0.1)));
    CHECK_FALSE(epsilon_admissible(Scalar(0.2)));
    CHECK(epsilon_admissible(Scalar(0)));
    CHECK(epsilon_admissible(Scalar(Rational(1339, 10000))));
    CHECK_FALSE(epsilon_admissible(Scalar(Rational(134, 1000))));
    CHECK_FALSE(epsilon_admissible(Scalar(-0.5)));
  }

  TEST_CASE("wandering depth") {
    CHECK_FALSE(wandering_depth_check(CircleMap(), angular_arc(Rational(1, 10), Rational(1, 5)), 1));
    CircleMap rot = CircleMap::rotation(Rational(6765, 10946));
    CHECK(wandering_depth_check(rot, angular_arc(Rational(1, 10), Rational(1, 10) + Rational(1, 1000)), 5));
    CHECK_FALSE(wandering_depth_check(rot, angular_arc(Rational(1, 10), Rational(3, 10)), 5));
  }

  TEST_CASE("derivative bounds") {
    Arc J = angular_arc(Rational(1, 10), Rational(1, 5));
    CircleMap rot = CircleMap::rotation(Rational(1, 7));
    CHECK(derivative_bounds_check(CircleMap(), rot, J, 3, Scalar(0.1), 16));
    // slope 1/2 on [0, 1/2] meets J
    CircleMap half = CircleMap::pl({0, Rational(1, 2)}, {Rational(1, 2), Rational(3, 2)}, 0);
    CHECK_FALSE(derivative_bounds_check(half, rot, J, 3, Scalar(0.1), 16));
  }

  TEST_CASE("family of the standard model") {
    AffineModel m = standard_model(2);
    PsiFamily fam = psi_interval_family(m.f0, m.h0, line_arc(0, 1), 1);
    REQUIRE(fam.images.size() == 4);
    std::vector<Arc> arcs;
    for (std::size_t i = 0; i < 4; ++i) {
      Rational b(oracle::beta(fam.alpha(i).bits(), 2));
      CHECK(fam.images[i].lo == CirclePoint::projective(b));
      CHECK(fam.images[i].hi == CirclePoint::projective(Rational(b + 1)));
    }
    CHECK(disjointness_check(fam.images));
    std::vector<Arc> dup = fam.images;
    dup.push_back(fam.images[2]);
    CHECK_FALSE(disjointness_check(dup));

    PsiFamily zero = psi_interval_family(m.f0, m.h0, line_arc(0, 1), 0);
    REQUIRE(zero.images.size() == 2);
    CHECK(zero.images[1].lo == CirclePoint::projective(1));
    CHECK_THROWS_AS(psi_interval_family(m.f0, m.h0, line_arc(0, 1), 4, 16), DepthLimit);
  }

  TEST_CASE("word images agree with f^beta on a conjugated action") {
    ConjugatedAction a = pl_conjugated(3, 7);
    Arc I = line_arc(Rational(-1, 3), Rational(1, 5));
    PsiFamily fam = psi_interval_family(a.f, a.h, I, 3);
    for (std::size_t i = 0; i < fam.images.size(); ++i) {
      long b = oracle::beta(fam.alpha(i).bits(), 3).get_si();
      CircleMap fb = power(a.f, b);
      CHECK(fam.images[i].lo == fb(I.lo));
      CHECK(fam.images[i].hi == fb(I.hi));
    }
  }

  TEST_CASE("extending a family matches direct construction") {
    AffineModel m = standard_model(3);
    PsiFamily fam = psi_interval_family(m.f0, m.h0, line_arc(0, 1), 1);
    extend_family(fam, m.f0, m.h0);
    PsiFamily direct = psi_interval_family(m.f0, m.h0, line_arc(0, 1), 2);
    REQUIRE(fam.images.size() == direct.images.size());
    for (std::size_t i = 0; i < fam.images.size(); ++i) CHECK(fam.images[i].lo == direct.images[i].lo);
  }

  TEST_CASE("decomposition exponents") {
    for (std::size_t len = 1; len <= 8; ++len) {
      for (std::uint64_t v = 0; v < (1ULL << len); ++v) {
        BitWord a = BitWord::from_index(v, len);
        Decomposition d = decompose(a);
        int ones = 0;
        for (bool b : a.bits()) ones += b;
        CHECK(d.r == ones);
        int sum = 0;
        for (int l : d.l) sum += l;
        CHECK(sum == d.k);
        CHECK(d.k <= static_cast<int>(a.m()) + 1);
      }
    }
  }

  TEST_CASE("ledger on the standard model") {
    AffineModel m = standard_model(2);
    LengthLedger led = length_ledger(m.f0, m.h0, line_arc(0, 1), 3, Scalar(Rational(1, 10)));
    CHECK(led.entries.size() == 16);
    Rational bound = pow(Rational(9, 10), 8);
    CHECK(led.bound == Scalar(bound));
    CHECK(led.floor_bound == Scalar(pow(Rational(3, 4), 4)));
    for (const auto& e : led.entries) {
      CHECK(e.length == Scalar(1));
      CHECK(e.above_bound);
      // h doubles lengths in the line chart; the ratios multiply to 1
      Scalar product(1);
      for (const auto& w : e.witnesses) product *= w.ratio;
      CHECK(product == Scalar(1));
    }
  }

  TEST_CASE("theoretical series") {
    CHECK(theoretical_bound(9, 1) == pow(Rational(3, 2), 10));
    CHECK(theoretical_bound(9, 1).get_d() > 57.0);
    CHECK(theoretical_bound(9, 1).get_d() == doctest::Approx(57.665).epsilon(1e-4));
    for (int m = 0; m < 30; ++m) {
      CHECK(theoretical_bound(m, Rational(1, 3)).get_d() == doctest::Approx(oracle::three_halves_power(m) / 3));
      CHECK(theoretical_bound(m + 1, 1) > theoretical_bound(m, 1));
    }
  }

  TEST_CASE("standard model admits no gap") {
    AffineModel m = standard_model(2);
    ObstructionConfig cfg;
    cfg.epsilon = Scalar(Rational(1, 10));
    cfg.J = line_arc(0, 64);
    cfg.I = line_arc(0, 1);
    Certificate c = growth_certificate(m.f0, m.h0, cfg);
    CHECK(c.verdict == Verdict::PreconditionFailed);
    CHECK(c.reason.find("not fixed") != std::string::npos);
    cfg.epsilon = Scalar(0.2);
    CHECK(growth_certificate(m.f0, m.h0, cfg).verdict == Verdict::PreconditionFailed);
  }

  TEST_CASE("synthetic pair invariants") {
    SyntheticPair p = synthetic_denjoy_pair(2, 8, 42);
    CHECK(wandering_depth_check(p.h, p.cfg.J, 8));
    CHECK(epsilon_admissible(p.cfg.epsilon));
    CHECK(derivative_bounds_check(p.f, p.h, p.cfg.J, p.cfg.s_max, p.cfg.epsilon, p.cfg.grid));
    CHECK(relation_defect(p.f, p.h, 2, 16, p.relation_domain).sign() == 0);
    // endpoints of J fixed by f
    CHECK(p.f(p.cfg.J.lo) == p.cfg.J.lo);
    CHECK(p.f(p.cfg.J.hi) == p.cfg.J.hi);
    // f is the identity off the levels
    std::vector<Arc> levels = backward_levels(p.h, p.cfg.J, p.cfg.s_max);
    int outside = 0;
    for (int j = 0; j < 997; ++j) {
      CirclePoint x = CirclePoint::angular(Rational(j, 997));
      bool inside = false;
      for (const auto& L : levels) inside = inside || arc_contains(L, x);
      if (inside) continue;
      ++outside;
      CHECK(p.f(x) == x);
    }
    CHECK(outside > 600);  // 21 levels of length 1/64
    // I = (x, f(x)) inside J
    CHECK(arc_contains(p.cfg.J, p.cfg.I));
    CHECK(p.f(p.cfg.I.lo) == p.cfg.I.hi);
  }

  TEST_CASE("synthetic bump matches the two-slope oracle") {
    SyntheticPair p = synthetic_denjoy_pair(2, 3, 1);
    Rational tau = 1 - Rational(1, 8 * 8);
    for (int j = 0; j <= 64; ++j) {
      Rational u(j, 64);
      Rational expect = u <= Rational(1, 2) ? Rational((2 - tau) * u) : Rational((2 - tau) / 2 + tau * (u - Rational(1, 2)));
      CHECK(*p.bump.lift_exact(u) == expect);
    }
    CHECK(oracle::bump(Rational(1, 2), 2 - tau) == (2 - tau) / 2);
  }

  TEST_CASE("synthetic construction limits") {
    CHECK_THROWS_AS(synthetic_denjoy_pair(2, 0, 1), ConstructionFailed);
    CHECK_THROWS_AS(synthetic_denjoy_pair(1, 3, 1), ConstructionFailed);
    CHECK_THROWS_AS(synthetic_denjoy_pair(5, 8, 1), ConstructionFailed);
  }

  TEST_CASE("certificate on a short synthetic pair") {
    SyntheticPair p = synthetic_denjoy_pair(2, 4, 3);
    ObstructionConfig cfg = p.cfg;
    cfg.m_max = 6;
    Certificate c = growth_certificate(p.f, p.h, cfg);
    CHECK(c.verdict != Verdict::PreconditionFailed);
    CHECK(c.relation_depth == 4);
    for (const auto& row : c.rows) {
      CHECK(row.count == (2ULL << row.m));
      CHECK(row.theoretical == theoretical_bound(row.m, p.cfg.I.hi.value().exact() - p.cfg.I.lo.value().exact()));
    }
    if (c.verdict == Verdict::ContradictionAt) {
      CHECK(c.rows.back().total_length > c.J_length);
    }
  }
}
