#include "bslab/circle_point.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace bslab {

namespace {

double angle_of_line(double t) {
  if (std::isinf(t)) return 0.0;
  double theta = 0.5 + std::atan(t) / std::numbers::pi;
  if (theta >= 1.0 || theta < 0.0) theta = 0.0;
  return theta;
}

double line_of_angle(double theta) {
  if (theta == 0.0) return std::numeric_limits<double>::infinity();
  return std::tan(std::numbers::pi * (theta - 0.5));
}

}  // namespace

std::string to_string(Chart chart) { return chart == Chart::Angular ? "angular" : "projective"; }

CirclePoint CirclePoint::angular(Scalar value) {
  return CirclePoint(Chart::Angular, frac(value), false);
}

CirclePoint CirclePoint::projective(Scalar value) {
  if (!value.is_exact() && std::isinf(value.approx())) return infinity();
  return CirclePoint(Chart::Projective, std::move(value), false);
}

CirclePoint CirclePoint::infinity() { return CirclePoint(Chart::Projective, Scalar(0), true); }

CirclePoint CirclePoint::to(Chart target) const {
  if (target == chart_) return *this;
  if (target == Chart::Angular) {
    if (infinite_) return angular(Rational(0));
    if (value_.is_exact()) {
      const Rational& t = value_.exact();
      if (t == 0) return angular(Rational(1, 2));
      if (t == 1) return angular(Rational(3, 4));
      if (t == -1) return angular(Rational(1, 4));
    }
    return angular(angle_of_line(value_.approx()));
  }
  if (value_.is_exact()) {
    const Rational& th = value_.exact();
    if (th == 0) return infinity();
    if (th == Rational(1, 2)) return projective(Rational(0));
    if (th == Rational(3, 4)) return projective(Rational(1));
    if (th == Rational(1, 4)) return projective(Rational(-1));
  }
  return projective(line_of_angle(value_.approx()));
}

double CirclePoint::angle() const {
  if (chart_ == Chart::Angular) return value_.approx();
  return to(Chart::Angular).value().approx();
}

double CirclePoint::line() const {
  if (infinite_) return std::numeric_limits<double>::infinity();
  if (chart_ == Chart::Projective) return value_.approx();
  return line_of_angle(value_.approx());
}

std::string CirclePoint::str() const {
  if (infinite_) return "inf";
  return (chart_ == Chart::Angular ? "a:" : "p:") + value_.str();
}

bool operator==(const CirclePoint& a, const CirclePoint& b) {
  if (a.infinite_ || b.infinite_) return a.infinite_ && b.infinite_;
  return a.chart_ == b.chart_ && a.value_.is_exact() == b.value_.is_exact() && a.value_ == b.value_;
}

namespace {

/// Both points exact in one common chart, if possible.
std::optional<std::pair<CirclePoint, CirclePoint>> common_exact(const CirclePoint& a,
                                                                const CirclePoint& b) {
  if (!a.is_exact() || !b.is_exact()) return std::nullopt;
  if (a.chart() == b.chart()) return std::make_pair(a, b);
  CirclePoint b2 = b.to(a.chart());
  if (b2.is_exact()) return std::make_pair(a, b2);
  CirclePoint a2 = a.to(b.chart());
  if (a2.is_exact()) return std::make_pair(a2, b);
  return std::nullopt;
}

/// Circle-order key for a projective point: infinity first.
int projective_cmp(const CirclePoint& a, const CirclePoint& b) {
  if (a.is_infinity()) return b.is_infinity() ? 0 : -1;
  if (b.is_infinity()) return 1;
  return cmp(a.value().exact(), b.value().exact());
}

}  // namespace

Scalar angular_distance(const CirclePoint& a, const CirclePoint& b) {
  if (auto pair = common_exact(a, b)) {
    const auto& [x, y] = *pair;
    if (x.chart() == Chart::Angular) {
      Rational d = frac(Rational(x.value().exact() - y.value().exact()));
      if (d > Rational(1, 2)) d = 1 - d;
      return Scalar(d);
    }
    if (projective_cmp(x, y) == 0) return Scalar(Rational(0));
  }
  double d = std::fabs(a.angle() - b.angle());
  d = d - std::floor(d);
  return Scalar(std::min(d, 1.0 - d));
}

bool circle_less(const CirclePoint& a, const CirclePoint& b) {
  if (auto pair = common_exact(a, b)) {
    const auto& [x, y] = *pair;
    if (x.chart() == Chart::Angular) return x.value().exact() < y.value().exact();
    return projective_cmp(x, y) < 0;
  }
  if (a.chart() == Chart::Projective && b.chart() == Chart::Projective) {
    if (a.is_infinity()) return !b.is_infinity();
    if (b.is_infinity()) return false;
    return a.value().approx() < b.value().approx();
  }
  return a.angle() < b.angle();
}

bool same_point(const CirclePoint& a, const CirclePoint& b) {
  if (auto pair = common_exact(a, b)) {
    const auto& [x, y] = *pair;
    if (x.chart() == Chart::Angular) return x.value().exact() == y.value().exact();
    return projective_cmp(x, y) == 0;
  }
  if (a.chart() == Chart::Projective && b.chart() == Chart::Projective) {
    return a.line() == b.line();
  }
  return a.angle() == b.angle();
}

std::string Arc::str() const { return "[" + lo.str() + ", " + hi.str() + "]"; }

std::optional<Scalar> offset_from(const CirclePoint& base, const CirclePoint& p) {
  if (base.chart() == Chart::Angular) {
    CirclePoint q = p.to(Chart::Angular);
    return frac(q.value() - base.value());
  }
  CirclePoint q = p.to(Chart::Projective);
  if (base.is_infinity()) {
    // Measuring from infinity is only meaningful for infinity itself.
    if (q.is_infinity()) return Scalar(Rational(0));
    return std::nullopt;
  }
  if (q.is_infinity()) return std::nullopt;
  Scalar d = q.value() - base.value();
  if (d.sign() < 0) return std::nullopt;
  return d;
}

Scalar length(const Arc& arc) {
  if (arc.lo.chart() == Chart::Angular) {
    return frac(arc.hi.to(Chart::Angular).value() - arc.lo.value());
  }
  auto d = offset_from(arc.lo, arc.hi);
  if (!d) throw std::domain_error("projective arc " + arc.str() + " passes through infinity");
  return *d;
}

bool arc_contains(const Arc& outer, const CirclePoint& p) {
  auto span = offset_from(outer.lo, outer.hi);
  auto pos = offset_from(outer.lo, p);
  if (!span || !pos) return false;
  return *pos <= *span;
}

bool arc_contains(const Arc& outer, const Arc& inner) {
  auto span = offset_from(outer.lo, outer.hi);
  auto a = offset_from(outer.lo, inner.lo);
  auto b = offset_from(outer.lo, inner.hi);
  if (!span || !a || !b) return false;
  return *a <= *b && *b <= *span;
}

}  // namespace bslab
