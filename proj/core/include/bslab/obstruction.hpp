#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bslab/bs_algebra.hpp"
#include "bslab/circle_map.hpp"

namespace bslab {

struct ObstructionConfig {
  Scalar epsilon;
  Arc J;
  Arc I;
  int m_max = 20;
  int s_max = 20;
  int grid = 32;                     // derivative samples per level
  std::uint64_t cap = 1ULL << 21;    // maximal family size 2^{m+1}
  std::optional<int> relation_depth; // depth to which a synthetic pair satisfies the relation
};

/// (1 - eps)^2 > 3/4, decided exactly (doubles are converted exactly).
bool epsilon_admissible(const Scalar& epsilon);

/// Arc length in its own chart, falling back to the angular chart for
/// projective arcs through infinity.
Scalar arc_length(const Arc& arc);

/// The arcs h^{-s}(J), s = 0..s_max.
std::vector<Arc> backward_levels(const CircleMap& h, const Arc& J, int s_max);

/// True iff h^{-s}(J), s = 0..s_max, are pairwise disjoint.
bool wandering_depth_check(const CircleMap& h, const Arc& J, int s_max);

struct DerivativeBounds {
  Scalar min_f;        // smallest sampled f' over the levels
  Scalar min_h_ratio;  // smallest sampled min h' / max h' on a level
  bool pass = false;
};

DerivativeBounds measure_derivative_bounds(const CircleMap& f, const CircleMap& h, const Arc& J, int s_max,
                                           int grid);
bool derivative_bounds_check(const CircleMap& f, const CircleMap& h, const Arc& J, int s_max,
                             const Scalar& epsilon, int grid);

/// Images Psi(alpha)(I) for all 2^{m+1} bit words; images[i] belongs to
/// BitWord::from_index(i, m + 1).
struct PsiFamily {
  int m = 0;
  std::vector<Arc> images;

  BitWord alpha(std::size_t i) const { return BitWord::from_index(i, static_cast<std::size_t>(m) + 1); }
};

/// Built level by level from the factors h^i f^{alpha_i} h^{-i}. Throws
/// DepthLimit when 2^{m+1} exceeds `cap`.
PsiFamily psi_interval_family(const CircleMap& f, const CircleMap& h, const Arc& I, int m,
                              std::uint64_t cap = 1ULL << 21);
/// Appends level m+1 to a family.
void extend_family(PsiFamily& family, const CircleMap& f, const CircleMap& h);

/// Open arcs pairwise disjoint (shared endpoints allowed) and, when J is
/// given, each contained in J.
bool disjointness_check(const std::vector<Arc>& arcs, const std::optional<Arc>& J = std::nullopt);

/// Decomposition Psi = h^k f h^{-l_1} f ... f h^{-l_r}.
struct Decomposition {
  int r = 0;
  int k = 0;
  std::vector<int> l;
};

Decomposition decompose(const BitWord& alpha);

/// One elementary step of the decomposition applied to an interval.
struct WitnessStep {
  char letter;   // 'f' or 'h' or 'H' (h^-1)
  Arc before;
  Scalar ratio;  // |after| / |before|, the mean slope of the step
};

struct LedgerEntry {
  BitWord alpha;
  Arc image;
  Scalar length;
  Decomposition decomposition;
  Scalar bound;        // |I| (1 - eps)^{2m+2}
  bool above_bound = false;
  std::vector<WitnessStep> witnesses;
};

struct LengthLedger {
  int m = 0;
  Scalar epsilon;
  Scalar interval_length;
  Scalar bound;        // |I| (1 - eps)^{2m+2}
  Scalar floor_bound;  // |I| (3/4)^{m+1}
  std::vector<LedgerEntry> entries;
};

/// Throws DecompositionError if replaying a decomposition does not reproduce
/// the family image.
LengthLedger length_ledger(const CircleMap& f, const CircleMap& h, const Arc& I, int m, const Scalar& epsilon);

/// 2^{m+1} (3/4)^{m+1} |I| = (3/2)^{m+1} |I|, exactly.
Rational theoretical_bound(int m, const Rational& interval_length);

enum class Verdict { ContradictionAt, BoundsNotViolated, PreconditionFailed };
std::string to_string(Verdict v);

struct CertificateRow {
  int m = 0;
  std::uint64_t count = 0;
  Scalar total_length;
  Rational theoretical;  // (3/2)^{m+1} |I| when |I| is exact
  double theoretical_d = 0.0;
  Scalar J_length;
  bool disjoint = false;
  bool contained = false;
};

struct Certificate {
  Verdict verdict = Verdict::BoundsNotViolated;
  int m = 0;           // level of the contradiction
  std::string reason;  // for PreconditionFailed
  Scalar epsilon;
  Scalar J_length;
  Scalar I_length;
  std::optional<int> relation_depth;
  std::vector<CertificateRow> rows;
  std::string str() const;
};

Certificate growth_certificate(const CircleMap& f, const CircleMap& h, const ObstructionConfig& cfg);

}  // namespace bslab
