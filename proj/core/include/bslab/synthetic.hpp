#pragma once

#include <cstdint>

#include "bslab/circle_map.hpp"
#include "bslab/obstruction.hpp"

namespace bslab {

/// A finite-depth candidate for an exotic action: h is a rigid rotation by
/// a Fibonacci ratio, J a short arc whose backward h-orbit stays disjoint,
/// and f is supported on the levels h^{-s}(J), s <= depth, where it acts as
/// a rescaled copy of g^{n^s} for a PL bump g fixing the ends of [0,1]. The
/// relation h f h^-1 = f^n then holds exactly on h^{-s}(J) for s < depth.
struct SyntheticPair {
  CircleMap f;
  CircleMap h;
  ObstructionConfig cfg;
  int n = 2;
  int depth = 0;
  Rational theta;            // rotation angle of h
  Rational J_start;          // c
  Rational J_length;         // |J|
  Rational start;            // x, with I = (x, f(x))
  CircleMap bump;            // g, on [0,1) as a circle map fixing 0
  std::vector<Arc> relation_domain;  // h^{-s}(J), s < depth
};

/// Throws ConstructionFailed if the depth is infeasible (n^depth > 2^16) or
/// no placement of J avoids wrapping through 0.
SyntheticPair synthetic_denjoy_pair(int n, int depth, std::uint64_t seed);

}  // namespace bslab
