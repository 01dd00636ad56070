#include "bslab/synthetic.hpp"

#include <random>
#include <stdexcept>

#include "bslab/errors.hpp"

namespace bslab {

namespace {

constexpr int kLevels = 20;
const Rational kTheta(6765, 10946);
const Rational kJLength(1, 64);
constexpr long kPlacementDenominator = 4096;
constexpr long kMaxPower = 1L << 16;

/// ||x|| = distance to the nearest integer.
Rational dist_to_int(const Rational& x) {
  Rational fr = frac(x);
  Rational other = 1 - fr;
  return fr < other ? fr : other;
}

const PLRational& pl_of(const CircleMap& g) { return std::get<PLRational>(g.repr()); }

}  // namespace

SyntheticPair synthetic_denjoy_pair(int n, int depth, std::uint64_t seed) {
  if (n < 2) throw ConstructionFailed("n must be >= 2");
  if (depth < 1) throw ConstructionFailed("depth must be >= 1");
  Integer top = pow(Integer(n), static_cast<unsigned long>(depth));
  if (top > kMaxPower) {
    throw ConstructionFailed("n^depth = " + to_string(top) + " exceeds the supported 2^16 iterations");
  }
  if (depth > kLevels) throw ConstructionFailed("depth exceeds the wandering depth 20");

  for (int j = 1; j <= kLevels; ++j) {
    if (!(kJLength < dist_to_int(Rational(j * kTheta)))) {
      throw ConstructionFailed("|J| too large for the rotation at j=" + std::to_string(j));
    }
  }

  // start of J: random k/4096 such that no level h^{-s}(J) wraps through 0
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> pick(1, kPlacementDenominator - 1);
  std::optional<Rational> c;
  for (int attempt = 0; attempt < 4096 && !c; ++attempt) {
    Rational cand(pick(rng), kPlacementDenominator);
    cand.canonicalize();
    bool ok = true;
    for (int s = 0; s <= kLevels && ok; ++s) {
      Rational cs = frac(Rational(cand - s * kTheta));
      ok = cs > 0 && Rational(cs + kJLength) < 1;
    }
    if (ok) c = cand;
  }
  if (!c) throw ConstructionFailed("no placement of J avoids wrapping through 0");

  // bump g: slope sigma on [0,1/2], tau on [1/2,1]
  Rational tau = 1 - Rational(Integer(1), Integer(8 * top));
  Rational sigma = 2 - tau;
  CircleMap g = CircleMap::pl_from_values({Rational(0), Rational(1, 2)}, {Rational(0), Rational(sigma / 2)});

  SyntheticPair out;
  out.n = n;
  out.depth = depth;
  out.theta = kTheta;
  out.J_start = *c;
  out.J_length = kJLength;
  out.bump = g;
  out.h = CircleMap::rotation(kTheta);

  // levels ordered by their start on [0,1)
  struct Level {
    Rational start;
    int s;
  };
  std::vector<Level> levels;
  for (int s = 0; s <= depth; ++s) levels.push_back({frac(Rational(*c - s * kTheta)), s});
  std::sort(levels.begin(), levels.end(), [](const Level& a, const Level& b) { return a.start < b.start; });

  std::vector<Rational> knots{Rational(0)}, values{Rational(0)};
  Rational min_slope = 1;
  CircleMap gs = g;  // g^{n^s}
  std::vector<CircleMap> local(static_cast<std::size_t>(depth) + 1);
  for (int s = 0; s <= depth; ++s) {
    local[static_cast<std::size_t>(s)] = gs;
    gs = power(gs, n);
  }
  for (const auto& lv : levels) {
    const PLRational& pl = pl_of(local[static_cast<std::size_t>(lv.s)]);
    for (std::size_t i = 0; i < pl.pieces(); ++i) {
      Rational u = pl.knots[i];
      knots.push_back(Rational(lv.start + kJLength * u));
      values.push_back(Rational(lv.start + kJLength * pl.values[i]));
      Rational sl = pl.slope(i);
      if (sl < min_slope) min_slope = sl;
    }
    knots.push_back(Rational(lv.start + kJLength));
    values.push_back(Rational(lv.start + kJLength));
  }
  out.f = CircleMap::pl_from_values(std::move(knots), std::move(values));

  out.start = Rational(*c + kJLength / 4);
  Rational x_end = *out.f.lift_exact(out.start);

  ObstructionConfig& cfg = out.cfg;
  cfg.epsilon = Scalar(Rational(1 - min_slope));
  cfg.J = Arc{CirclePoint::angular(*c), CirclePoint::angular(Rational(*c + kJLength))};
  cfg.I = Arc{CirclePoint::angular(out.start), CirclePoint::angular(x_end)};
  cfg.m_max = kLevels;
  cfg.s_max = kLevels;
  cfg.relation_depth = depth;

  for (int s = 0; s < depth; ++s) {
    Rational cs = frac(Rational(*c - s * kTheta));
    out.relation_domain.push_back(Arc{CirclePoint::angular(cs), CirclePoint::angular(Rational(cs + kJLength))});
  }
  return out;
}

}  // namespace bslab
