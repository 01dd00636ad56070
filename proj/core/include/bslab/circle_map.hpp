#pragma once

#include <functional>
#include <optional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "bslab/circle_point.hpp"
#include "bslab/scalar.hpp"

namespace bslab {

class CircleMap;

/// Which one-sided derivative to use at a corner.
enum class Side { None, Left, Right };

/// 2x2 matrix [[a,b],[c,d]] acting on the projective chart by
/// t -> (a t + b) / (c t + d). Stored in canonical form: primitive integer
/// entries with the first nonzero entry positive. det > 0.
struct Moebius {
  Rational a, b, c, d;

  static Moebius make(Rational a, Rational b, Rational c, Rational d);
  static Moebius identity() { return make(1, 0, 0, 1); }

  Rational det() const { return a * d - b * c; }
  Moebius inverse() const;
  bool is_identity() const;
  /// Projective point image; exact for exact input.
  CirclePoint apply(const CirclePoint& projective_point) const;
  /// Derivative in the line chart at finite t.
  Scalar line_derivative(const Scalar& t) const;
  /// Derivative in the angular chart at the angular point matching the
  /// projective point `p`.
  Scalar angular_derivative(const CirclePoint& p) const;

  friend Moebius operator*(const Moebius& g, const Moebius& f);
  /// Equality as maps (proportional matrices).
  friend bool operator==(const Moebius& x, const Moebius& y);
};

/// Degree-one PL homeomorphism of R/Z with rational data. Stored as the
/// canonical lift F on [0,1): knots[0] = 0 < knots[1] < ... < 1 and
/// values[i] = F(knots[i]), with F(0) in [0,1) and F(1) = F(0) + 1.
/// Adjacent pieces with equal slope are merged (knot 0 always kept).
struct PLRational {
  std::vector<Rational> knots;
  std::vector<Rational> values;
  std::vector<double> knots_d;
  std::vector<double> values_d;
  std::vector<double> slopes_d;

  std::size_t pieces() const { return knots.size(); }
  Rational knot_end(std::size_t i) const;
  Rational value_end(std::size_t i) const;
  Rational slope(std::size_t i) const;
  std::size_t piece_at(const Rational& y) const;
  std::size_t piece_at(double y) const;
  Rational lift(const Rational& x) const;
  double lift(double x) const;
  Rational offset() const { return values.front(); }
};

struct RigidRotation {
  Scalar angle;  // in [0,1)
};

/// Piecewise-Moebius homeomorphism of RP^1 with exact knots (cyclically
/// ordered, infinity first when present). pieces[i] acts on the half-open
/// arc [knots[i], knots[i+1]); points before knots[0] use the last piece.
/// Continuous by construction. Invariant: at least two knots and adjacent
/// pieces distinct; a single piece is stored as Moebius instead.
struct PiecewiseProjective {
  std::vector<CirclePoint> knots;
  std::vector<Moebius> pieces;

  std::size_t piece_at(const CirclePoint& projective_point) const;
};

/// A C^1 candidate given by callbacks on the lift. `derivative_modulus` is a
/// Lipschitz bound for the derivative, used as sampling slack.
struct OracleMap {
  std::function<double(double)> lift;
  std::function<double(double)> derivative;
  double derivative_modulus = 0.0;
  double step_error = 1e-14;
  double lift_shift = 0.0;  // subtracted so that F(0) is in [0,1)
  std::string name;
};

/// factors[0] is applied first.
struct Composite {
  std::vector<CircleMap> factors;
};

/// Orientation-preserving circle homeomorphism. Immutable value type; cheap
/// to copy (shared representation).
class CircleMap {
 public:
  using Repr = std::variant<Moebius, PLRational, RigidRotation, PiecewiseProjective, OracleMap, Composite>;

  CircleMap();  // identity

  static CircleMap identity() { return CircleMap(); }
  static CircleMap moebius(Rational a, Rational b, Rational c, Rational d);
  static CircleMap moebius(const Moebius& m);
  /// Knots must start at 0 and ascend in [0,1); slopes positive; the slope
  /// integral must equal 1. The offset is F(0), reduced mod 1.
  static CircleMap pl(std::vector<Rational> breakpoints, std::vector<Rational> slopes, Rational offset);
  /// From knot/value pairs of a lift on [0,1) (knots[0] = 0), with the
  /// lift's value at 1 equal to values[0] + 1.
  static CircleMap pl_from_values(std::vector<Rational> knots, std::vector<Rational> values);
  static CircleMap rotation(Scalar angle);
  static CircleMap piecewise_projective(std::vector<CirclePoint> knots, std::vector<Moebius> pieces);
  /// PL homeomorphism of the line (fixing infinity) through the points
  /// (x_i, y_i), affine with the given slopes beyond the first/last knot.
  static CircleMap line_pl(std::vector<Rational> xs, std::vector<Rational> ys, Rational left_slope,
                           Rational right_slope);
  /// `lift` must satisfy F(x+1) = F(x)+1 and be increasing.
  static CircleMap oracle(std::function<double(double)> lift, std::function<double(double)> derivative,
                          double derivative_modulus, double step_error = 1e-14, std::string name = "oracle");

  /// Wraps a representation without validation; prefer the named factories.
  static CircleMap from_repr(Repr repr) { return CircleMap(std::move(repr)); }

  const Repr& repr() const { return *repr_; }
  std::string kind() const;

  /// Exact evaluation is possible on compatible exact points.
  bool is_exact() const;
  /// Chart in which the map is exact (Projective for Moebius and
  /// PiecewiseProjective, Angular otherwise).
  Chart native_chart() const;
  bool is_identity() const;

  /// Image of p, expressed in p's chart.
  CirclePoint operator()(const CirclePoint& p) const;
  /// Canonical lift (F(0) in [0,1)) evaluated in floating point.
  double lift(double x) const;
  /// Canonical lift evaluated exactly; available for PL, rational
  /// rotations and composites of those.
  std::optional<Rational> lift_exact(const Rational& x) const;
  /// Derivative in the chart of p.
  Scalar derivative(const CirclePoint& p, Side side = Side::None) const;
  CircleMap inverse() const;
  /// Declared absolute error of one floating-point lift step (0 for maps
  /// whose lift is computed exactly).
  double step_error() const;
  /// Lipschitz bound of the derivative in the angular chart, if declared.
  double derivative_modulus() const;

  std::string str() const;

  /// Representation-level equality for exact variants; identity of the
  /// shared representation otherwise.
  friend bool operator==(const CircleMap& x, const CircleMap& y);

 private:
  explicit CircleMap(Repr repr) : repr_(std::make_shared<const Repr>(std::move(repr))) {}
  std::shared_ptr<const Repr> repr_;
};

/// g o f. Closed on Moebius/PiecewiseProjective and on PL/rational
/// rotations; other mixtures yield a Composite.
CircleMap compose(const CircleMap& g, const CircleMap& f);
/// map^k for any integer k.
CircleMap power(const CircleMap& map, long k);

inline CirclePoint evaluate(const CircleMap& map, const CirclePoint& p) { return map(p); }
inline Scalar derivative(const CircleMap& map, const CirclePoint& p, Side side = Side::None) {
  return map.derivative(p, side);
}
inline CircleMap inverse(const CircleMap& map) { return map.inverse(); }
inline double lift_eval(const CircleMap& map, double x) { return map.lift(x); }
inline CirclePoint chart_convert(const CirclePoint& p, Chart target) { return p.to(target); }

}  // namespace bslab
