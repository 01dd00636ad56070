#include "bslab/fixtures.hpp"

#include <algorithm>
#include <array>
#include <random>
#include <set>

#include "bslab/semiconjugacy.hpp"

namespace bslab {

std::pair<CircleMap, CircleMap> conjugate_pair(const CircleMap& f, const CircleMap& h, const CircleMap& c) {
  CircleMap ci = c.inverse();
  return {compose(c, compose(f, ci)), compose(c, compose(h, ci))};
}

ConjugatedAction pl_conjugated(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uniform = [&rng](long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); };

  const std::vector<Rational> interior{Rational(-2), Rational(-1), Rational(-1, 2), Rational(0),
                                       Rational(1, 2), Rational(1), Rational(2)};
  std::vector<Rational> xs{Rational(-4)};
  for (const auto& k : interior)
    if (uniform(0, 1) == 1) xs.push_back(k);
  if (xs.size() == 1) xs.push_back(interior[static_cast<std::size_t>(uniform(0, 6))]);
  xs.push_back(Rational(4));

  long den = std::array<long, 3>{3, 5, 7}[static_cast<std::size_t>(uniform(0, 2))];
  std::set<long> picks;
  while (picks.size() < xs.size() - 2) picks.insert(uniform(-4 * den + 1, 4 * den - 1));
  std::vector<Rational> ys{Rational(-4)};
  for (long k : picks) {
    Rational y(k, den);
    y.canonicalize();
    ys.push_back(y);
  }
  ys.push_back(Rational(4));

  long p = uniform(1, 5), q = uniform(1, 5);

  ConjugatedAction out;
  out.n = n;
  out.line_part = CircleMap::line_pl(xs, ys, 1, 1);
  out.moebius_part = CircleMap::moebius(p, -q, q, p);
  out.conjugator = compose(out.moebius_part, out.line_part);
  AffineModel model = standard_model(n);
  std::tie(out.f, out.h) = conjugate_pair(model.f0, model.h0, out.conjugator);
  out.fixed_point = out.conjugator(CirclePoint::infinity());
  out.base = out.conjugator(CirclePoint::projective(Rational(0)));
  return out;
}

}  // namespace bslab
