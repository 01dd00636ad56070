#pragma once

#include <cstdint>

#include "bslab/circle_map.hpp"

namespace bslab {

/// The standard action conjugated by C = M o P, where P is a PL map of the
/// line (identity outside [-4, 4], dyadic knots, random rational values) and
/// M(t) = (p t - q) / (q t + p) is a rational elliptic Moebius map.
/// f = C f0 C^-1 and h = C h0 C^-1 are exact piecewise projective maps.
struct ConjugatedAction {
  int n = 2;
  CircleMap f;
  CircleMap h;
  CircleMap conjugator;      // C
  CircleMap line_part;       // P
  CircleMap moebius_part;    // M
  CirclePoint fixed_point = CirclePoint::infinity();  // C(inf), fixed by f and h
  CirclePoint base = CirclePoint::infinity();         // C(0)
};

ConjugatedAction pl_conjugated(int n, std::uint64_t seed);

/// Conjugates the pair (f, h) by c: (c f c^-1, c h c^-1).
std::pair<CircleMap, CircleMap> conjugate_pair(const CircleMap& f, const CircleMap& h, const CircleMap& c);

}  // namespace bslab
