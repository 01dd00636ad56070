#pragma once

#include <optional>
#include <string>

#include "bslab/scalar.hpp"

namespace bslab {

/// Angular: R/Z with values in [0,1). Projective: R u {inf}, related to the
/// angular chart by t = tan(pi (theta - 1/2)), so theta = 0 is infinity and
/// theta = 1/2 is 0.
enum class Chart { Angular, Projective };

std::string to_string(Chart chart);

class CirclePoint {
 public:
  /// Angular point; the value is reduced mod 1.
  static CirclePoint angular(Scalar value);
  static CirclePoint projective(Scalar value);
  static CirclePoint infinity();

  Chart chart() const { return chart_; }
  bool is_infinity() const { return infinite_; }
  bool is_exact() const { return infinite_ || value_.is_exact(); }
  /// Coordinate in the point's chart. Meaningless for infinity.
  const Scalar& value() const { return value_; }

  /// Re-expresses the point in `target`, exactly when the point is one of
  /// the chart-compatible rationals (0, 1/4, 1/2, 3/4 <-> inf, -1, 0, 1).
  CirclePoint to(Chart target) const;
  /// Angular coordinate as a double in [0,1).
  double angle() const;
  /// Projective coordinate as a double (+inf for the point at infinity).
  double line() const;

  std::string str() const;

  /// Same chart and exactly equal coordinates, or both at infinity.
  friend bool operator==(const CirclePoint& a, const CirclePoint& b);

 private:
  CirclePoint(Chart chart, Scalar value, bool infinite)
      : chart_(chart), value_(std::move(value)), infinite_(infinite) {}

  Chart chart_;
  Scalar value_;
  bool infinite_;
};

/// Angular distance in [0, 1/2]. Exact (a Rational) when both points are
/// exactly representable in the angular chart; exactly zero whenever the
/// points coincide exactly in a common chart.
Scalar angular_distance(const CirclePoint& a, const CirclePoint& b);

/// Strict circle order starting at angular 0 (the point at infinity).
/// Exact when both points are exact in a common chart.
bool circle_less(const CirclePoint& a, const CirclePoint& b);

/// Exact equality when both are exact in a common chart, else equality of
/// the angular doubles.
bool same_point(const CirclePoint& a, const CirclePoint& b);

/// An arc traversed counterclockwise from `lo` to `hi`. Both endpoints are
/// expected in the same chart.
struct Arc {
  CirclePoint lo = CirclePoint::angular(Rational(0));
  CirclePoint hi = CirclePoint::angular(Rational(0));

  Chart chart() const { return lo.chart(); }
  std::string str() const;
};

/// Length in the arc's chart: angular length on R/Z, or Euclidean length for
/// finite projective endpoints (an arc through infinity has no finite
/// length and raises std::domain_error).
Scalar length(const Arc& arc);

/// Position of `p` measured counterclockwise from `base`, in the chart of
/// `base`. Returns nothing for projective positions that pass through
/// infinity.
std::optional<Scalar> offset_from(const CirclePoint& base, const CirclePoint& p);

/// Whether `inner` lies inside `outer` (closed containment).
bool arc_contains(const Arc& outer, const Arc& inner);
bool arc_contains(const Arc& outer, const CirclePoint& p);

}  // namespace bslab
