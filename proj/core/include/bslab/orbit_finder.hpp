#pragma once

#include <optional>
#include <vector>

#include "bslab/circle_map.hpp"
#include "bslab/fixed_points.hpp"

namespace bslab {

/// Disjoint, sorted angular intervals each containing a fixed point.
struct FixedPointSet {
  std::vector<FixedPointCandidate> intervals;
  double tol = 1e-10;
};

/// Throws NoFixedPoint when the map has none at this resolution.
FixedPointSet fixed_point_enclosures(const CircleMap& map, int grid = 2048, double tol = 1e-10);

struct InvarianceEntry {
  CirclePoint q;
  CirclePoint hq;
  Scalar distance;  // angular distance of f^{n k}(h(q)) from h(q)
  bool pass = false;
};

struct InvarianceReport {
  std::vector<InvarianceEntry> entries;
  bool pass = false;
};

/// For fixed points q of f^period, checks that h(q) is fixed by
/// f^{n * period}. Exact zero distance always passes.
InvarianceReport fix_invariance_check(const CircleMap& f, const CircleMap& h, int n, const FixedPointSet& fixset,
                                      double tol, long period = 1);

/// Smallest m <= mmax such that h^m has a detected fixed point.
std::optional<int> minimal_power_m(const CircleMap& h, int mmax);

struct CommonFixedPoint {
  CirclePoint point;
  CirclePoint start;  // fixed point of f^{n-1} the iteration began from
  long iterations = 0;
  Scalar f_distance;  // angular distance of f^{n-1}(u) from u
  Scalar h_distance;  // angular distance of h^m(u) from u
};

/// Iterates h^m from fixed points of f^{n-1} and returns a limit point
/// fixed (within tol) by both. Throws NotConverged otherwise.
CommonFixedPoint common_fixed_point(const CircleMap& f, const CircleMap& h, int n, int m, long iters = 10000,
                                    double tol = 1e-10);

}  // namespace bslab
