#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bslab/bs_algebra.hpp"
#include "bslab/circle_map.hpp"

namespace bslab {

/// f0(x) = x + 1 and h0(x) = n x on the projective line.
struct AffineModel {
  int n = 2;
  CircleMap f0;
  CircleMap h0;
};

AffineModel standard_model(int n);

enum class Interpolation { Linear, Step };
std::string to_string(Interpolation mode);

struct TableSample {
  CirclePoint source;
  CirclePoint target;
  Scalar key;  // source in the chart sending the fixed point to infinity
  BSElement element;
};

/// Samples of a monotone degree-one map phi with phi(fixed_point) = infinity,
/// sorted by source in the circle order starting at fixed_point.
struct MonotoneMapTable {
  int n = 2;
  CirclePoint fixed_point = CirclePoint::infinity();
  Interpolation mode = Interpolation::Linear;
  std::vector<TableSample> samples;

  /// Coordinate of p in which fixed_point sits at infinity; nothing for the
  /// fixed point itself.
  std::optional<Scalar> key(const CirclePoint& p) const;
  /// Interpolated phi(p) as a projective point.
  CirclePoint operator()(const CirclePoint& p) const;
};

/// Tabulates w(f,h)(base) -> w(f0,h0)(0) over group elements reachable by
/// words of length <= depth (one sample per element). Throws OrderViolation
/// with a witness pair when the orbit orders disagree.
MonotoneMapTable build_semiconjugacy(const CircleMap& f, const CircleMap& h, int n, const CirclePoint& base,
                                     int depth, const CirclePoint& fixed_point = CirclePoint::infinity(),
                                     Interpolation mode = Interpolation::Linear);

/// sup over angular grid points of the angular distance between
/// phi(g(x)) and g0(phi(x)). Exactly 0 when every comparison is exact and
/// equal.
Scalar semiconjugacy_defect(const MonotoneMapTable& phi, const CircleMap& g, const CircleMap& g0, int grid);

/// Targets nondecreasing along sources; equal sources have equal targets.
bool monotone_check(const MonotoneMapTable& phi);

struct SemiconjugacyAttempt {
  std::string generators;  // "f,h" or "f^(n-1),h^m"
  int modulus = 0;         // n of the BS(1, n) model used
  std::optional<MonotoneMapTable> table;
  std::string error;       // OrderViolation message when the attempt failed
};

/// Tries the given generators, then (f^{n-1}, h^m) against the BS(1, n^m)
/// model when the first attempt violates the order.
std::vector<SemiconjugacyAttempt> semiconjugacy_with_fallback(const CircleMap& f, const CircleMap& h, int n, int m,
                                                              const CirclePoint& base, int depth,
                                                              const CirclePoint& fixed_point,
                                                              Interpolation mode = Interpolation::Linear);

}  // namespace bslab
