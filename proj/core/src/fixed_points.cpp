#include "bslab/fixed_points.hpp"

#include <algorithm>
#include <cmath>

namespace bslab {

namespace {

bool is_square(const Rational& q) {
  return q >= 0 && mpz_perfect_square_p(q.get_num_mpz_t()) && mpz_perfect_square_p(q.get_den_mpz_t());
}

Rational exact_sqrt(const Rational& q) {
  Integer n, d;
  mpz_sqrt(n.get_mpz_t(), q.get_num_mpz_t());
  mpz_sqrt(d.get_mpz_t(), q.get_den_mpz_t());
  return Rational(n, d);
}

FixedPointCandidate point_candidate(const CirclePoint& p) {
  double a = p.angle();
  FixedPointCandidate c{a, a, std::nullopt, false};
  if (p.is_exact()) c.exact = p;
  return c;
}

/// Fixed points of a Moebius map, as projective points. `identity` is set
/// when every point is fixed.
std::vector<CirclePoint> moebius_fixed(const Moebius& m, bool& identity) {
  identity = false;
  std::vector<CirclePoint> out;
  if (m.c == 0) {
    out.push_back(CirclePoint::infinity());
    if (m.a != m.d) {
      out.push_back(CirclePoint::projective(Rational(m.b / (m.d - m.a))));
    } else if (m.b == 0) {
      identity = true;
    }
    return out;
  }
  Rational disc = (m.d - m.a) * (m.d - m.a) + 4 * m.b * m.c;
  if (disc < 0) return out;
  if (disc == 0) {
    out.push_back(CirclePoint::projective(Rational((m.a - m.d) / (2 * m.c))));
    return out;
  }
  if (is_square(disc)) {
    Rational s = exact_sqrt(disc);
    out.push_back(CirclePoint::projective(Rational((m.a - m.d - s) / (2 * m.c))));
    out.push_back(CirclePoint::projective(Rational((m.a - m.d + s) / (2 * m.c))));
    return out;
  }
  double s = std::sqrt(disc.get_d());
  double ad = Rational(m.a - m.d).get_d();
  double c2 = 2 * m.c.get_d();
  out.push_back(CirclePoint::projective((ad - s) / c2));
  out.push_back(CirclePoint::projective((ad + s) / c2));
  return out;
}

/// Whether p lies in the half-open arc [from, to) in circle order.
bool in_arc(const CirclePoint& p, const CirclePoint& from, const CirclePoint& to) {
  bool after_from = !circle_less(p, from);
  bool before_to = circle_less(p, to);
  if (circle_less(from, to)) return after_from && before_to;
  return after_from || before_to;  // wrapping arc
}

std::vector<FixedPointCandidate> pl_fixed(const PLRational& pl) {
  std::vector<FixedPointCandidate> out;
  for (std::size_t i = 0; i < pl.pieces(); ++i) {
    Rational k0 = pl.knots[i], k1 = pl.knot_end(i);
    Rational s = pl.slope(i);
    Rational d0 = pl.values[i] - k0;
    Rational d1 = pl.value_end(i) - k1;
    if (s == 1) {
      if (d0.get_den() == 1) {
        FixedPointCandidate c{k0.get_d(), k1.get_d(), CirclePoint::angular(k0), true};
        out.push_back(c);
      }
      continue;
    }
    Rational lo = std::min(d0, d1), hi = std::max(d0, d1);
    for (Integer z = ceil(lo); Rational(z) <= hi; ++z) {
      Rational x = k0 + (Rational(z) - d0) / (s - 1);
      if (x >= k0 && x < k1) out.push_back(point_candidate(CirclePoint::angular(x)));
    }
  }
  return out;
}

std::vector<FixedPointCandidate> projective_fixed(const std::vector<CirclePoint>& knots,
                                                  const std::vector<Moebius>& pieces) {
  std::vector<FixedPointCandidate> out;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    bool identity = false;
    auto roots = moebius_fixed(pieces[i], identity);
    if (knots.empty()) {
      if (identity) {
        out.push_back({0.0, 1.0, CirclePoint::angular(Rational(0)), true});
      } else {
        for (const auto& r : roots) out.push_back(point_candidate(r));
      }
      continue;
    }
    const CirclePoint& from = knots[i];
    const CirclePoint& to = knots[(i + 1) % knots.size()];
    if (identity) {
      out.push_back({from.angle(), to.angle(), from, true});
      continue;
    }
    for (const auto& r : roots) {
      if (in_arc(r, from, to)) out.push_back(point_candidate(r));
    }
  }
  return out;
}

std::vector<FixedPointCandidate> numeric_fixed(const CircleMap& map, int grid, double tol) {
  std::vector<FixedPointCandidate> out;
  std::vector<double> d(static_cast<std::size_t>(grid) + 1);
  for (int j = 0; j <= grid; ++j) d[j] = displacement(map, static_cast<double>(j) / grid);
  for (int j = 0; j < grid; ++j) {
    double x0 = static_cast<double>(j) / grid, x1 = static_cast<double>(j + 1) / grid;
    if (std::fabs(d[j]) <= tol) {
      out.push_back({x0, x0, std::nullopt, false});
      if (d[j] == 0.0) out.back().exact = CirclePoint::angular(Rational(j, grid));
      continue;
    }
    if (std::fabs(d[j + 1]) <= tol) continue;  // picked up at j + 1
    bool change = (d[j] < 0) != (d[j + 1] < 0);
    if (!change || std::fabs(d[j]) > 0.25 || std::fabs(d[j + 1]) > 0.25) continue;
    double lo = x0, hi = x1, dlo = d[j];
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
      double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      double dm = displacement(map, mid);
      if (dm == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((dm < 0) == (dlo < 0)) {
        lo = mid;
        dlo = dm;
      } else {
        hi = mid;
      }
    }
    out.push_back({lo, hi, std::nullopt, false});
  }
  return out;
}

}  // namespace

CirclePoint FixedPointCandidate::representative() const {
  if (exact) return *exact;
  return CirclePoint::angular(0.5 * (lo + hi));
}

double displacement(const CircleMap& map, double x) {
  double d = map.lift(x) - x;
  d -= std::round(d);
  if (d <= -0.5) d += 1.0;
  return d;
}

std::vector<FixedPointCandidate> solve_fixed_points(const CircleMap& map, int grid, double tol) {
  std::vector<FixedPointCandidate> out;
  const auto& repr = map.repr();
  if (auto* m = std::get_if<Moebius>(&repr)) {
    out = projective_fixed({}, {*m});
  } else if (auto* pp = std::get_if<PiecewiseProjective>(&repr)) {
    out = projective_fixed(pp->knots, pp->pieces);
  } else if (auto* pl = std::get_if<PLRational>(&repr)) {
    out = pl_fixed(*pl);
  } else if (auto* r = std::get_if<RigidRotation>(&repr)) {
    bool fixed = r->angle.is_exact() ? r->angle.sign() == 0
                                     : (r->angle.approx() <= tol || r->angle.approx() >= 1.0 - tol);
    if (fixed) out.push_back({0.0, 1.0, CirclePoint::angular(Rational(0)), true});
  } else {
    out = numeric_fixed(map, grid, tol);
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.lo < y.lo; });
  return out;
}

}  // namespace bslab
