#pragma once

#include <optional>
#include <vector>

#include "bslab/circle_map.hpp"

namespace bslab {

/// An angular interval [lo, hi] certified to contain a fixed point, or (when
/// `whole_arc`) an arc of fixed points. `exact` carries the exactly solved
/// fixed point (or the arc's start) when the representation allows it.
struct FixedPointCandidate {
  double lo = 0.0;
  double hi = 0.0;
  std::optional<CirclePoint> exact;
  bool whole_arc = false;

  CirclePoint representative() const;
};

/// Signed displacement F(x) - x reduced to (-1/2, 1/2].
double displacement(const CircleMap& map, double x);

/// Fixed points of `map`. Exact root solving for Moebius, piecewise
/// projective, PL and rotations; grid sign changes refined by bisection to
/// width `tol` otherwise. Sorted by lo.
std::vector<FixedPointCandidate> solve_fixed_points(const CircleMap& map, int grid, double tol);

}  // namespace bslab
