#include "bslab/circle_map.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "bslab/errors.hpp"

namespace bslab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Integer lcm(const Integer& a, const Integer& b) {
  Integer r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

Integer gcd(const Integer& a, const Integer& b) {
  Integer r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

/// (1 + t'^2) / (1 + t^2), the factor turning an angular derivative into a
/// line-chart derivative at a point t with image t'.
Scalar angular_to_line_factor(const CirclePoint& p, const CirclePoint& image) {
  CirclePoint t = p.to(Chart::Projective);
  CirclePoint u = image.to(Chart::Projective);
  if (t.is_infinity()) throw std::domain_error("line-chart derivative undefined at infinity");
  if (u.is_infinity()) throw std::domain_error("line-chart derivative infinite (image at infinity)");
  Scalar one(Rational(1));
  return (one + u.value() * u.value()) / (one + t.value() * t.value());
}

PLRational make_pl(std::vector<Rational> knots, std::vector<Rational> values) {
  if (knots.empty() || knots.size() != values.size()) {
    throw std::invalid_argument("PL map needs matching nonempty knot and value lists");
  }
  if (knots.front() != 0) throw std::invalid_argument("PL knots must start at 0");
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (knots[i] < 0 || knots[i] >= 1) throw std::invalid_argument("PL knots must lie in [0,1)");
    if (i > 0 && knots[i] <= knots[i - 1]) throw std::invalid_argument("PL knots must be strictly ascending");
    Rational next = i + 1 < values.size() ? values[i + 1] : Rational(values.front() + 1);
    if (next <= values[i]) throw std::invalid_argument("PL map must be strictly increasing (positive slopes)");
  }
  Rational shift(floor(values.front()));
  for (auto& v : values) v -= shift;

  PLRational pl;
  auto slope_of = [&](std::size_t i) {
    Rational k1 = i + 1 < knots.size() ? knots[i + 1] : Rational(1);
    Rational v1 = i + 1 < values.size() ? values[i + 1] : Rational(values.front() + 1);
    return Rational((v1 - values[i]) / (k1 - knots[i]));
  };
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (i > 0 && slope_of(i) == slope_of(i - 1)) continue;
    pl.knots.push_back(knots[i]);
    pl.values.push_back(values[i]);
  }
  for (std::size_t i = 0; i < pl.knots.size(); ++i) {
    pl.knots_d.push_back(pl.knots[i].get_d());
    pl.values_d.push_back(pl.values[i].get_d());
    pl.slopes_d.push_back(pl.slope(i).get_d());
  }
  return pl;
}

PLRational rotation_as_pl(const Rational& angle) { return make_pl({Rational(0)}, {frac(angle)}); }

/// A Moebius map or a PiecewiseProjective, uniformly viewed as pieces.
struct ProjectiveView {
  std::vector<CirclePoint> knots;  // empty for a single Moebius map
  std::vector<Moebius> pieces;

  std::size_t piece_at(const CirclePoint& p) const {
    if (knots.empty()) return 0;
    auto it = std::upper_bound(knots.begin(), knots.end(), p,
                               [](const CirclePoint& x, const CirclePoint& k) { return circle_less(x, k); });
    if (it == knots.begin()) return pieces.size() - 1;
    return static_cast<std::size_t>(it - knots.begin()) - 1;
  }
  CirclePoint apply(const CirclePoint& p) const { return pieces[piece_at(p)].apply(p); }
};

std::optional<ProjectiveView> projective_view(const CircleMap& m) {
  if (auto* mo = std::get_if<Moebius>(&m.repr())) return ProjectiveView{{}, {*mo}};
  if (auto* pp = std::get_if<PiecewiseProjective>(&m.repr())) return ProjectiveView{pp->knots, pp->pieces};
  return std::nullopt;
}

std::optional<PLRational> pl_view(const CircleMap& m) {
  if (auto* pl = std::get_if<PLRational>(&m.repr())) return *pl;
  if (auto* r = std::get_if<RigidRotation>(&m.repr())) {
    if (r->angle.is_exact()) return rotation_as_pl(r->angle.exact());
  }
  return std::nullopt;
}

CircleMap make_projective(std::vector<CirclePoint> knots, std::vector<Moebius> pieces) {
  if (knots.size() != pieces.size() || pieces.empty()) {
    if (knots.empty() && pieces.size() == 1) return CircleMap::moebius(pieces.front());
    throw std::invalid_argument("piecewise projective map needs one piece per knot");
  }
  // Sort knots cyclically, keeping pieces attached.
  std::vector<std::size_t> order(knots.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return circle_less(knots[i], knots[j]); });
  std::vector<CirclePoint> k;
  std::vector<Moebius> p;
  for (auto i : order) {
    if (!knots[i].is_exact() || knots[i].chart() != Chart::Projective) {
      throw std::invalid_argument("piecewise projective knots must be exact projective points");
    }
    if (!k.empty() && k.back() == knots[i]) {
      throw std::invalid_argument("duplicate knot in piecewise projective map");
    }
    k.push_back(knots[i]);
    p.push_back(pieces[i]);
  }
  // Merge equal neighbours, including across the wrap.
  std::vector<CirclePoint> mk;
  std::vector<Moebius> mp;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (!mp.empty() && mp.back() == p[i]) continue;
    mk.push_back(k[i]);
    mp.push_back(p[i]);
  }
  if (mp.size() > 1 && mp.back() == mp.front()) {
    mk.erase(mk.begin());
    mp.erase(mp.begin());
  }
  if (mp.size() == 1) return CircleMap::moebius(mp.front());
  // Continuity check at each knot.
  for (std::size_t i = 0; i < mk.size(); ++i) {
    const Moebius& left = mp[(i + mp.size() - 1) % mp.size()];
    if (!same_point(left.apply(mk[i]), mp[i].apply(mk[i]))) {
      throw std::invalid_argument("piecewise projective map is discontinuous at " + mk[i].str());
    }
  }
  return CircleMap::from_repr(PiecewiseProjective{std::move(mk), std::move(mp)});
}

CircleMap compose_projective(const ProjectiveView& g, const ProjectiveView& f, const CircleMap& f_map) {
  if (g.knots.empty() && f.knots.empty()) return CircleMap::moebius(g.pieces[0] * f.pieces[0]);
  std::vector<CirclePoint> knots = f.knots;
  if (!g.knots.empty()) {
    CircleMap f_inv = f_map.inverse();
    for (const auto& k : g.knots) knots.push_back(f_inv(k));
  }
  std::sort(knots.begin(), knots.end(), circle_less);
  knots.erase(std::unique(knots.begin(), knots.end(), [](const auto& x, const auto& y) { return same_point(x, y); }),
              knots.end());
  std::vector<Moebius> pieces;
  for (const auto& k : knots) {
    const Moebius& fp = f.pieces[f.piece_at(k)];
    CirclePoint y = fp.apply(k);
    pieces.push_back(g.pieces[g.piece_at(y)] * fp);
  }
  return make_projective(std::move(knots), std::move(pieces));
}

CircleMap compose_pl(const PLRational& g, const PLRational& f) {
  std::vector<Rational> knots = f.knots;
  const Rational& v0 = f.values.front();
  for (const auto& gk : g.knots) {
    Rational target = gk + Rational(ceil(Rational(v0 - gk)));
    // target lies in [v0, v0 + 1): invert f's lift on [0,1).
    for (std::size_t i = 0; i < f.pieces(); ++i) {
      if (f.values[i] <= target && target < f.value_end(i)) {
        knots.push_back(f.knots[i] + (target - f.values[i]) / f.slope(i));
        break;
      }
    }
  }
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  std::vector<Rational> values;
  values.reserve(knots.size());
  for (const auto& k : knots) values.push_back(g.lift(f.lift(k)));
  return CircleMap::from_repr(make_pl(std::move(knots), std::move(values)));
}

double generic_lift(const CircleMap& map, double x) {
  double fl = std::floor(x);
  double y = x - fl;
  if (y >= 1.0) {
    y = 0.0;
    fl += 1.0;
  }
  double g0 = map(CirclePoint::angular(Rational(0))).angle();
  double gy = map(CirclePoint::angular(y)).angle();
  double F = gy;
  if (gy < g0 || (gy == g0 && y > 0.5)) F += 1.0;
  return F + fl;
}

}  // namespace

// ---------------------------------------------------------------- Moebius

Moebius Moebius::make(Rational a, Rational b, Rational c, Rational d) {
  for (auto* q : {&a, &b, &c, &d}) q->canonicalize();
  Integer den = lcm(lcm(a.get_den(), b.get_den()), lcm(c.get_den(), d.get_den()));
  Integer na = Integer(a * den), nb = Integer(b * den), nc = Integer(c * den), nd = Integer(d * den);
  Integer g = gcd(gcd(na, nb), gcd(nc, nd));
  if (g == 0) throw std::invalid_argument("zero matrix is not a Moebius map");
  for (auto* z : {&na, &nb, &nc, &nd}) *z /= g;
  Integer first = na != 0 ? na : (nb != 0 ? nb : nc);
  if (first < 0) {
    for (auto* z : {&na, &nb, &nc, &nd}) *z = -*z;
  }
  Moebius m{Rational(na), Rational(nb), Rational(nc), Rational(nd)};
  if (m.det() <= 0) throw std::invalid_argument("Moebius map must have positive determinant");
  return m;
}

Moebius Moebius::inverse() const { return make(d, -b, -c, a); }

bool Moebius::is_identity() const { return b == 0 && c == 0 && a == d; }

CirclePoint Moebius::apply(const CirclePoint& p) const {
  CirclePoint q = p.to(Chart::Projective);
  if (q.is_infinity()) {
    if (c == 0) return CirclePoint::infinity();
    return CirclePoint::projective(Rational(a / c));
  }
  if (q.value().is_exact()) {
    const Rational& t = q.value().exact();
    Rational den = c * t + d;
    if (den == 0) return CirclePoint::infinity();
    return CirclePoint::projective(Rational((a * t + b) / den));
  }
  double t = q.value().approx();
  double den = c.get_d() * t + d.get_d();
  if (den == 0.0) return CirclePoint::infinity();
  return CirclePoint::projective((a.get_d() * t + b.get_d()) / den);
}

Scalar Moebius::line_derivative(const Scalar& t) const {
  Scalar den = Scalar(c) * t + Scalar(d);
  if (den.sign() == 0) throw std::domain_error("Moebius derivative at its pole");
  return Scalar(det()) / (den * den);
}

Scalar Moebius::angular_derivative(const CirclePoint& p) const {
  CirclePoint q = p.to(Chart::Projective);
  if (q.is_infinity()) return Scalar(Rational(det() / (a * a + c * c)));
  const Scalar& t = q.value();
  Scalar num = Scalar(a) * t + Scalar(b);
  Scalar den = Scalar(c) * t + Scalar(d);
  Scalar one(Rational(1));
  return Scalar(det()) * (one + t * t) / (den * den + num * num);
}

Moebius operator*(const Moebius& g, const Moebius& f) {
  return Moebius::make(g.a * f.a + g.b * f.c, g.a * f.b + g.b * f.d, g.c * f.a + g.d * f.c,
                       g.c * f.b + g.d * f.d);
}

bool operator==(const Moebius& x, const Moebius& y) {
  return x.a * y.b == x.b * y.a && x.a * y.c == x.c * y.a && x.a * y.d == x.d * y.a && x.b * y.c == x.c * y.b &&
         x.b * y.d == x.d * y.b && x.c * y.d == x.d * y.c;
}

// ------------------------------------------------------------- PLRational

Rational PLRational::knot_end(std::size_t i) const { return i + 1 < knots.size() ? knots[i + 1] : Rational(1); }

Rational PLRational::value_end(std::size_t i) const {
  return i + 1 < values.size() ? values[i + 1] : Rational(values.front() + 1);
}

Rational PLRational::slope(std::size_t i) const { return (value_end(i) - values[i]) / (knot_end(i) - knots[i]); }

std::size_t PLRational::piece_at(const Rational& y) const {
  auto it = std::upper_bound(knots.begin(), knots.end(), y);
  return static_cast<std::size_t>(it - knots.begin()) - 1;
}

std::size_t PLRational::piece_at(double y) const {
  auto it = std::upper_bound(knots_d.begin(), knots_d.end(), y);
  if (it == knots_d.begin()) return 0;
  return static_cast<std::size_t>(it - knots_d.begin()) - 1;
}

Rational PLRational::lift(const Rational& x) const {
  Integer fl = floor(x);
  Rational y = x - Rational(fl);
  std::size_t i = piece_at(y);
  return values[i] + slope(i) * (y - knots[i]) + Rational(fl);
}

double PLRational::lift(double x) const {
  double fl = std::floor(x);
  double y = x - fl;
  if (y >= 1.0) {
    y = 0.0;
    fl += 1.0;
  }
  std::size_t i = piece_at(y);
  return values_d[i] + slopes_d[i] * (y - knots_d[i]) + fl;
}

std::size_t PiecewiseProjective::piece_at(const CirclePoint& p) const {
  return ProjectiveView{knots, pieces}.piece_at(p);
}

// -------------------------------------------------------------- factories

CircleMap::CircleMap() : CircleMap(Repr(make_pl({Rational(0)}, {Rational(0)}))) {}

CircleMap CircleMap::moebius(Rational a, Rational b, Rational c, Rational d) {
  return CircleMap(Repr(Moebius::make(std::move(a), std::move(b), std::move(c), std::move(d))));
}

CircleMap CircleMap::moebius(const Moebius& m) { return CircleMap(Repr(m)); }

CircleMap CircleMap::pl(std::vector<Rational> breakpoints, std::vector<Rational> slopes, Rational offset) {
  if (breakpoints.empty() || breakpoints.size() != slopes.size()) {
    throw std::invalid_argument("PL map needs one slope per breakpoint");
  }
  if (breakpoints.front() != 0) {
    breakpoints.insert(breakpoints.begin(), Rational(0));
    slopes.insert(slopes.begin(), slopes.back());
  }
  std::vector<Rational> values{offset};
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (slopes[i] <= 0) throw std::invalid_argument("PL slopes must be positive");
    values.push_back(values.back() + slopes[i] * (breakpoints[i + 1] - breakpoints[i]));
  }
  if (slopes.back() <= 0) throw std::invalid_argument("PL slopes must be positive");
  Rational end = values.back() + slopes.back() * (1 - breakpoints.back());
  if (end != offset + 1) throw std::invalid_argument("PL slopes must integrate to 1 over the circle");
  return CircleMap(Repr(make_pl(std::move(breakpoints), std::move(values))));
}

CircleMap CircleMap::pl_from_values(std::vector<Rational> knots, std::vector<Rational> values) {
  return CircleMap(Repr(make_pl(std::move(knots), std::move(values))));
}

CircleMap CircleMap::rotation(Scalar angle) { return CircleMap(Repr(RigidRotation{frac(angle)})); }

CircleMap CircleMap::piecewise_projective(std::vector<CirclePoint> knots, std::vector<Moebius> pieces) {
  return make_projective(std::move(knots), std::move(pieces));
}

CircleMap CircleMap::line_pl(std::vector<Rational> xs, std::vector<Rational> ys, Rational left_slope,
                             Rational right_slope) {
  if (xs.empty() || xs.size() != ys.size()) throw std::invalid_argument("line PL map needs matching points");
  if (left_slope <= 0 || right_slope <= 0) throw std::invalid_argument("line PL slopes must be positive");
  std::vector<CirclePoint> knots{CirclePoint::infinity()};
  std::vector<Moebius> pieces{Moebius::make(left_slope, ys.front() - left_slope * xs.front(), 0, 1)};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    knots.push_back(CirclePoint::projective(xs[i]));
    if (i + 1 < xs.size()) {
      if (xs[i + 1] <= xs[i] || ys[i + 1] <= ys[i]) {
        throw std::invalid_argument("line PL points must be strictly increasing");
      }
      Rational s = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
      pieces.push_back(Moebius::make(s, ys[i] - s * xs[i], 0, 1));
    } else {
      pieces.push_back(Moebius::make(right_slope, ys[i] - right_slope * xs[i], 0, 1));
    }
  }
  return make_projective(std::move(knots), std::move(pieces));
}

CircleMap CircleMap::oracle(std::function<double(double)> lift, std::function<double(double)> derivative,
                            double derivative_modulus, double step_error, std::string name) {
  double f0 = lift(0.0);
  if (!std::isfinite(f0)) throw OracleDomainError("oracle lift is not finite at 0");
  return CircleMap(Repr(OracleMap{std::move(lift), std::move(derivative), derivative_modulus, step_error,
                                  std::floor(f0), std::move(name)}));
}

// ---------------------------------------------------------------- queries

std::string CircleMap::kind() const {
  return std::visit(overloaded{[](const Moebius&) { return std::string("moebius"); },
                               [](const PLRational&) { return std::string("pl"); },
                               [](const RigidRotation&) { return std::string("rotation"); },
                               [](const PiecewiseProjective&) { return std::string("piecewise_projective"); },
                               [](const OracleMap&) { return std::string("oracle"); },
                               [](const Composite&) { return std::string("composite"); }},
                    repr());
}

bool CircleMap::is_exact() const {
  return std::visit(overloaded{[](const RigidRotation& r) { return r.angle.is_exact(); },
                               [](const OracleMap&) { return false; },
                               [](const Composite& c) {
                                 return std::all_of(c.factors.begin(), c.factors.end(),
                                                    [](const CircleMap& m) { return m.is_exact(); });
                               },
                               [](const auto&) { return true; }},
                    repr());
}

Chart CircleMap::native_chart() const {
  if (std::holds_alternative<Moebius>(repr()) || std::holds_alternative<PiecewiseProjective>(repr())) {
    return Chart::Projective;
  }
  return Chart::Angular;
}

bool CircleMap::is_identity() const {
  return std::visit(overloaded{[](const Moebius& m) { return m.is_identity(); },
                               [](const PLRational& pl) { return pl.pieces() == 1 && pl.values[0] == 0; },
                               [](const RigidRotation& r) { return r.angle.sign() == 0; },
                               [](const auto&) { return false; }},
                    repr());
}

CirclePoint CircleMap::operator()(const CirclePoint& p) const {
  return std::visit(
      overloaded{
          [&](const Moebius& m) { return m.apply(p.to(Chart::Projective)).to(p.chart()); },
          [&](const PiecewiseProjective& pp) {
            CirclePoint q = p.to(Chart::Projective);
            return pp.pieces[pp.piece_at(q)].apply(q).to(p.chart());
          },
          [&](const PLRational& pl) {
            if (pl.pieces() == 1 && pl.values[0] == 0) return p;  // identity, in any chart
            CirclePoint q = p.to(Chart::Angular);
            if (q.is_exact()) return CirclePoint::angular(pl.lift(q.value().exact())).to(p.chart());
            return CirclePoint::angular(pl.lift(q.value().approx())).to(p.chart());
          },
          [&](const RigidRotation& r) {
            CirclePoint q = p.to(Chart::Angular);
            return CirclePoint::angular(q.value() + r.angle).to(p.chart());
          },
          [&](const OracleMap& o) {
            double y = o.lift(p.angle());
            if (!std::isfinite(y)) throw OracleDomainError("oracle '" + o.name + "' rejected the input");
            return CirclePoint::angular(y - o.lift_shift).to(p.chart());
          },
          [&](const Composite& c) {
            CirclePoint q = p;
            for (const auto& f : c.factors) q = f(q);
            return q;
          }},
      repr());
}

double CircleMap::lift(double x) const {
  return std::visit(overloaded{[&](const PLRational& pl) { return pl.lift(x); },
                               [&](const RigidRotation& r) { return x + r.angle.approx(); },
                               [&](const OracleMap& o) {
                                 double y = o.lift(x);
                                 if (!std::isfinite(y)) {
                                   throw OracleDomainError("oracle '" + o.name + "' rejected the input");
                                 }
                                 return y - o.lift_shift;
                               },
                               [&](const Composite& c) {
                                 auto run = [&](double v) {
                                   for (const auto& f : c.factors) v = f.lift(v);
                                   return v;
                                 };
                                 return run(x) - std::floor(run(0.0));
                               },
                               [&](const auto&) { return generic_lift(*this, x); }},
                    repr());
}

std::optional<Rational> CircleMap::lift_exact(const Rational& x) const {
  return std::visit(overloaded{[&](const PLRational& pl) -> std::optional<Rational> { return pl.lift(x); },
                               [&](const RigidRotation& r) -> std::optional<Rational> {
                                 if (!r.angle.is_exact()) return std::nullopt;
                                 return Rational(x + r.angle.exact());
                               },
                               [&](const Composite& c) -> std::optional<Rational> {
                                 auto run = [&](Rational v) -> std::optional<Rational> {
                                   for (const auto& f : c.factors) {
                                     auto next = f.lift_exact(v);
                                     if (!next) return std::nullopt;
                                     v = *next;
                                   }
                                   return v;
                                 };
                                 auto at0 = run(Rational(0));
                                 auto at = run(x);
                                 if (!at0 || !at) return std::nullopt;
                                 return Rational(*at - Rational(floor(*at0)));
                               },
                               [&](const auto&) -> std::optional<Rational> { return std::nullopt; }},
                    repr());
}

Scalar CircleMap::derivative(const CirclePoint& p, Side side) const {
  auto to_chart = [&](const Scalar& angular_value) -> Scalar {
    if (p.chart() == Chart::Angular) return angular_value;
    return angular_value * angular_to_line_factor(p, (*this)(p));
  };
  return std::visit(
      overloaded{
          [&](const Moebius& m) -> Scalar {
            CirclePoint q = p.to(Chart::Projective);
            if (p.chart() == Chart::Angular) return m.angular_derivative(q);
            if (q.is_infinity()) throw std::domain_error("line-chart derivative undefined at infinity");
            return m.line_derivative(q.value());
          },
          [&](const PiecewiseProjective& pp) -> Scalar {
            CirclePoint q = p.to(Chart::Projective);
            std::size_t i = pp.piece_at(q);
            auto d = [&](const Moebius& m) -> Scalar {
              if (p.chart() == Chart::Angular) return m.angular_derivative(q);
              if (q.is_infinity()) throw std::domain_error("line-chart derivative undefined at infinity");
              return m.line_derivative(q.value());
            };
            if (q.is_exact() && pp.knots[i] == q) {
              const Moebius& left = pp.pieces[(i + pp.pieces.size() - 1) % pp.pieces.size()];
              Scalar dl = d(left), dr = d(pp.pieces[i]);
              if (side == Side::Left) return dl;
              if (side == Side::Right || dl == dr) return dr;
              throw BreakpointError("derivative requested at corner " + q.str() + " without a side");
            }
            return d(pp.pieces[i]);
          },
          [&](const PLRational& pl) -> Scalar {
            CirclePoint q = p.to(Chart::Angular);
            std::size_t i;
            bool at_knot;
            if (q.is_exact()) {
              i = pl.piece_at(q.value().exact());
              at_knot = pl.knots[i] == q.value().exact();
            } else {
              i = pl.piece_at(q.value().approx());
              at_knot = pl.knots_d[i] == q.value().approx();
            }
            Rational right = pl.slope(i);
            if (at_knot) {
              Rational left = pl.slope((i + pl.pieces() - 1) % pl.pieces());
              if (side == Side::Left) return to_chart(Scalar(left));
              if (side != Side::Right && left != right) {
                throw BreakpointError("derivative requested at PL corner " + q.str() + " without a side");
              }
            }
            return to_chart(Scalar(right));
          },
          [&](const RigidRotation&) -> Scalar { return to_chart(Scalar(Rational(1))); },
          [&](const OracleMap& o) -> Scalar {
            double v = o.derivative(p.angle());
            if (!std::isfinite(v) || v <= 0) throw OracleDomainError("oracle '" + o.name + "' derivative rejected");
            return to_chart(Scalar(v));
          },
          [&](const Composite& c) -> Scalar {
            Scalar acc(Rational(1));
            CirclePoint q = p;
            for (const auto& f : c.factors) {
              acc *= f.derivative(q, side);
              q = f(q);
            }
            return acc;
          }},
      repr());
}

CircleMap CircleMap::inverse() const {
  return std::visit(
      overloaded{
          [&](const Moebius& m) { return CircleMap::moebius(m.inverse()); },
          [&](const PiecewiseProjective& pp) {
            std::vector<CirclePoint> knots;
            std::vector<Moebius> pieces;
            for (std::size_t i = 0; i < pp.knots.size(); ++i) {
              knots.push_back(pp.pieces[i].apply(pp.knots[i]));
              pieces.push_back(pp.pieces[i].inverse());
            }
            return make_projective(std::move(knots), std::move(pieces));
          },
          [&](const PLRational& pl) {
            std::vector<std::pair<Rational, Rational>> pts;
            for (std::size_t i = 0; i < pl.pieces(); ++i) {
              Integer fl = floor(pl.values[i]);
              pts.emplace_back(pl.values[i] - Rational(fl), pl.knots[i] - Rational(fl));
            }
            if (pl.values.front() != 0) {
              // Preimage of the integer 1 inside [v0, v0 + 1).
              for (std::size_t i = 0; i < pl.pieces(); ++i) {
                if (pl.values[i] <= 1 && 1 < pl.value_end(i)) {
                  Rational x = pl.knots[i] + (1 - pl.values[i]) / pl.slope(i);
                  pts.emplace_back(Rational(0), x - 1);
                  break;
                }
              }
            }
            std::sort(pts.begin(), pts.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
            pts.erase(std::unique(pts.begin(), pts.end(),
                                  [](const auto& x, const auto& y) { return x.first == y.first; }),
                      pts.end());
            std::vector<Rational> knots, values;
            for (auto& [k, v] : pts) {
              knots.push_back(k);
              values.push_back(v);
            }
            return CircleMap::pl_from_values(std::move(knots), std::move(values));
          },
          [&](const RigidRotation& r) { return CircleMap::rotation(-r.angle); },
          [&](const OracleMap& o) {
            auto fwd = o.lift;
            double shift = o.lift_shift;
            double f0 = fwd(0.0) - shift;
            auto inv = [fwd, shift, f0](double y) {
              double lo = y - f0 - 1.0, hi = y - f0 + 1.0;
              for (int it = 0; it < 200 && hi - lo > 0; ++it) {
                double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;
                if (fwd(mid) - shift < y) {
                  lo = mid;
                } else {
                  hi = mid;
                }
              }
              return 0.5 * (lo + hi);
            };
            auto deriv = o.derivative;
            auto inv_d = [inv, deriv](double y) { return 1.0 / deriv(inv(y)); };
            return CircleMap::oracle(inv, inv_d, o.derivative_modulus, std::max(1e-13, 4 * o.step_error),
                                     o.name + "^-1");
          },
          [&](const Composite& c) {
            Composite inv;
            for (auto it = c.factors.rbegin(); it != c.factors.rend(); ++it) inv.factors.push_back(it->inverse());
            return CircleMap::from_repr(std::move(inv));
          }},
      repr());
}

double CircleMap::step_error() const {
  return std::visit(overloaded{[](const Moebius&) { return 1e-12; },
                               [](const PiecewiseProjective&) { return 1e-12; },
                               [](const PLRational&) { return 1e-15; },
                               [](const RigidRotation&) { return 1e-15; },
                               [](const OracleMap& o) { return o.step_error; },
                               [](const Composite& c) {
                                 double e = 0;
                                 for (const auto& f : c.factors) e += f.step_error();
                                 return e;
                               }},
                    repr());
}

double CircleMap::derivative_modulus() const {
  if (auto* o = std::get_if<OracleMap>(&repr())) return o->derivative_modulus;
  return 0.0;
}

std::string CircleMap::str() const {
  std::ostringstream os;
  std::visit(overloaded{[&](const Moebius& m) {
                          os << "moebius[[" << m.a << "," << m.b << "],[" << m.c << "," << m.d << "]]";
                        },
                        [&](const PLRational& pl) {
                          os << "pl{";
                          for (std::size_t i = 0; i < pl.pieces(); ++i) {
                            os << (i ? "; " : "") << pl.knots[i] << "->" << pl.values[i];
                          }
                          os << "}";
                        },
                        [&](const RigidRotation& r) { os << "rotation(" << r.angle.str() << ")"; },
                        [&](const PiecewiseProjective& pp) { os << "piecewise_projective(" << pp.knots.size() << " knots)"; },
                        [&](const OracleMap& o) { os << "oracle(" << o.name << ")"; },
                        [&](const Composite& c) { os << "composite(" << c.factors.size() << " factors)"; }},
             repr());
  return os.str();
}

bool operator==(const CircleMap& x, const CircleMap& y) {
  if (x.repr_ == y.repr_) return true;
  if (x.is_identity() && y.is_identity()) return true;
  if (auto px = projective_view(x)) {
    auto py = projective_view(y);
    if (!py || px->pieces.size() != py->pieces.size() || px->knots.size() != py->knots.size()) return false;
    for (std::size_t i = 0; i < px->knots.size(); ++i) {
      if (!(px->knots[i] == py->knots[i])) return false;
    }
    for (std::size_t i = 0; i < px->pieces.size(); ++i) {
      if (!(px->pieces[i] == py->pieces[i])) return false;
    }
    return true;
  }
  auto lx = pl_view(x);
  auto ly = pl_view(y);
  if (lx && ly) return lx->knots == ly->knots && lx->values == ly->values;
  auto* rx = std::get_if<RigidRotation>(&x.repr());
  auto* ry = std::get_if<RigidRotation>(&y.repr());
  if (rx && ry) return rx->angle == ry->angle;
  return false;
}

// ------------------------------------------------------------ composition

CircleMap compose(const CircleMap& g, const CircleMap& f) {
  if (f.is_identity()) return g;
  if (g.is_identity()) return f;
  auto pg = projective_view(g);
  auto pf = projective_view(f);
  if (pg && pf) return compose_projective(*pg, *pf, f);
  auto lg = pl_view(g);
  auto lf = pl_view(f);
  if (lg && lf) {
    auto* rg = std::get_if<RigidRotation>(&g.repr());
    auto* rf = std::get_if<RigidRotation>(&f.repr());
    if (rg && rf) return CircleMap::rotation(rg->angle + rf->angle);
    return compose_pl(*lg, *lf);
  }
  auto* rg = std::get_if<RigidRotation>(&g.repr());
  auto* rf = std::get_if<RigidRotation>(&f.repr());
  if (rg && rf) return CircleMap::rotation(rg->angle + rf->angle);
  Composite c;
  for (const CircleMap* m : {&f, &g}) {
    if (auto* inner = std::get_if<Composite>(&m->repr())) {
      c.factors.insert(c.factors.end(), inner->factors.begin(), inner->factors.end());
    } else {
      c.factors.push_back(*m);
    }
  }
  return CircleMap::from_repr(std::move(c));
}

CircleMap power(const CircleMap& map, long k) {
  CircleMap base = k < 0 ? map.inverse() : map;
  unsigned long e = k < 0 ? static_cast<unsigned long>(-k) : static_cast<unsigned long>(k);
  CircleMap result;
  while (e > 0) {
    if (e & 1UL) result = compose(base, result);
    e >>= 1;
    if (e > 0) base = compose(base, base);
  }
  return result;
}

}  // namespace bslab
