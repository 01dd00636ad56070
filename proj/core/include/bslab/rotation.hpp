#pragma once

#include <optional>
#include <vector>

#include "bslab/circle_map.hpp"
#include "bslab/scalar.hpp"

namespace bslab {

/// Closed interval [lo, hi] of the real line known to contain the rotation
/// number of the canonical lift. Exact endpoints when the lift was iterated
/// in exact arithmetic.
struct RotationEnclosure {
  Scalar lo;
  Scalar hi;
  long iterations = 0;
  std::vector<Rational> basepoints;

  Scalar width() const { return hi - lo; }
  bool exact() const { return lo.is_exact() && hi.is_exact(); }
  bool contains(const Scalar& x) const { return lo <= x && x <= hi; }
  /// Whether x + Z meets the enclosure.
  bool contains_mod1(const Scalar& x) const;
};

std::vector<Rational> default_basepoints();

/// Intersection over basepoints of [(F^N x - x - 1)/N, (F^N x - x + 1)/N].
/// Floating lifts are widened by the map's declared step error and rounded
/// outward.
RotationEnclosure rotation_enclosure(const CircleMap& map, long N,
                                     const std::vector<Rational>& basepoints = default_basepoints());

/// p/q in [0,1) certified by a periodic point, or nothing (inconclusive).
std::optional<Rational> rational_rotation_detect(const CircleMap& map, int qmax = 64, double tol = 1e-9,
                                                 long N = 1000);

struct RhoForm {
  long l = 0;         // normalized, 0 <= l < n-1
  Integer raw_l = 0;  // (n-1) * rho for the matching representative of rho
  RotationEnclosure enclosure;
};

/// Finds l with rho(f) = l/(n-1) mod 1 inside the enclosure.
RhoForm rho_rational_form(const CircleMap& f, int n, long N);

struct ConjugacyReport {
  RotationEnclosure rho_f;
  RotationEnclosure rho_conj;   // rho(h f h^-1)
  RotationEnclosure rho_power;  // rho(f^n)
  bool conj_meets_f = false;        // rho(hfh^-1) vs rho(f)
  bool power_meets_scaled = false;  // rho(f^n) vs n rho(f)
  bool conj_meets_power = false;    // rho(hfh^-1) vs rho(f^n)
  bool consistent = false;
};

ConjugacyReport conjugacy_invariance_check(const CircleMap& f, const CircleMap& h, int n, long N);

/// Whether [a.lo, a.hi] and [b.lo, b.hi] + j meet for some integer j.
bool intersects_mod1(const Scalar& alo, const Scalar& ahi, const Scalar& blo, const Scalar& bhi);

}  // namespace bslab
