#include "bslab/semiconjugacy.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <map>
#include <stdexcept>

#include "bslab/errors.hpp"

namespace bslab {

namespace {

const std::array<Letter, 4> kLetters{Letter::A, Letter::AInv, Letter::B, Letter::BInv};

bool less_key(const TableSample& x, const TableSample& y) { return x.key < y.key; }

Scalar interpolate(const Scalar& z, const Scalar& z0, const Scalar& t0, const Scalar& z1, const Scalar& t1) {
  return t0 + (t1 - t0) * (z - z0) / (z1 - z0);
}

}  // namespace

AffineModel standard_model(int n) {
  if (n < 2) throw std::invalid_argument("standard model needs n >= 2");
  return {n, CircleMap::moebius(1, 1, 0, 1), CircleMap::moebius(n, 0, 0, 1)};
}

std::string to_string(Interpolation mode) { return mode == Interpolation::Linear ? "linear" : "step"; }

std::optional<Scalar> MonotoneMapTable::key(const CirclePoint& p) const {
  CirclePoint x = p.to(Chart::Projective);
  if (fixed_point.is_infinity()) {
    if (x.is_infinity()) return std::nullopt;
    return x.value();
  }
  CirclePoint u = fixed_point.to(Chart::Projective);
  if (x.is_infinity()) return Scalar(Rational(0));
  Scalar d = u.value() - x.value();
  if (d.sign() == 0) return std::nullopt;
  return Scalar(Rational(1)) / d;
}

CirclePoint MonotoneMapTable::operator()(const CirclePoint& p) const {
  if (samples.empty()) throw std::logic_error("empty semiconjugacy table");
  auto z = key(p);
  if (!z) return CirclePoint::infinity();
  auto it = std::lower_bound(samples.begin(), samples.end(), *z,
                             [](const TableSample& s, const Scalar& v) { return s.key < v; });
  if (it != samples.end() && it->key == *z) return it->target;
  if (mode == Interpolation::Step) {
    // left-continuous: the value of the next sample to the right
    if (it == samples.end()) return samples.back().target;
    return it->target;
  }
  if (samples.size() == 1) {
    // a single sample: translate
    return CirclePoint::projective(samples.front().target.value() + (*z - samples.front().key));
  }
  std::size_t i;
  if (it == samples.begin()) {
    i = 0;
  } else if (it == samples.end()) {
    i = samples.size() - 2;
  } else {
    i = static_cast<std::size_t>(it - samples.begin()) - 1;
  }
  const auto& a = samples[i];
  const auto& b = samples[i + 1];
  return CirclePoint::projective(interpolate(*z, a.key, a.target.value(), b.key, b.target.value()));
}

MonotoneMapTable build_semiconjugacy(const CircleMap& f, const CircleMap& h, int n, const CirclePoint& base,
                                     int depth, const CirclePoint& fixed_point, Interpolation mode) {
  if (depth < 0) throw std::invalid_argument("build_semiconjugacy needs depth >= 0");
  MonotoneMapTable table;
  table.n = n;
  table.fixed_point = fixed_point;
  table.mode = mode;
  if (!table.key(base)) throw std::invalid_argument("base point coincides with the fixed point");

  const CircleMap gens[4] = {h, h.inverse(), f, f.inverse()};
  CirclePoint start = base.to(Chart::Projective);
  std::map<BSElement, std::size_t> seen;
  std::vector<TableSample> samples;
  std::deque<std::pair<std::size_t, int>> queue;
  BSElement id = BSElement::identity(n);
  samples.push_back({start, CirclePoint::projective(Rational(0)), *table.key(start), id});
  seen.emplace(id, 0);
  queue.emplace_back(0, 0);
  while (!queue.empty()) {
    auto [idx, len] = queue.front();
    queue.pop_front();
    if (len == depth) continue;
    for (std::size_t g = 0; g < 4; ++g) {
      BSElement el = element_compose(BSElement::from_letter(kLetters[g], n), samples[idx].element);
      if (seen.count(el)) continue;
      CirclePoint src = gens[g](samples[idx].source);
      auto z = table.key(src);
      if (!z) {
        throw OrderViolation("orbit of the base point reaches the fixed point via element " + el.str());
      }
      seen.emplace(el, samples.size());
      samples.push_back({src, CirclePoint::projective(el.translation()), *z, el});
      queue.emplace_back(samples.size() - 1, len + 1);
    }
  }

  std::stable_sort(samples.begin(), samples.end(), less_key);
  std::vector<TableSample> merged;
  for (auto& s : samples) {
    if (!merged.empty() && merged.back().key == s.key) {
      if (!(merged.back().target == s.target)) {
        throw OrderViolation("source " + s.source.str() + " is hit by " + merged.back().element.str() + " and " +
                             s.element.str() + " with targets " + merged.back().target.str() + " and " +
                             s.target.str());
      }
      continue;
    }
    if (!merged.empty() && s.target.value() < merged.back().target.value()) {
      throw OrderViolation("order violation: sources " + merged.back().source.str() + " < " + s.source.str() +
                           " but targets " + merged.back().target.str() + " > " + s.target.str() +
                           " (elements " + merged.back().element.str() + ", " + s.element.str() + ")");
    }
    merged.push_back(std::move(s));
  }
  table.samples = std::move(merged);
  return table;
}

Scalar semiconjugacy_defect(const MonotoneMapTable& phi, const CircleMap& g, const CircleMap& g0, int grid) {
  if (grid < 1) throw std::invalid_argument("semiconjugacy_defect needs grid >= 1");
  Scalar worst(Rational(0));
  for (int j = 0; j < grid; ++j) {
    CirclePoint x = CirclePoint::angular(Rational(j, grid)).to(Chart::Projective);
    if (!x.is_infinity() && !x.value().is_exact()) x = CirclePoint::projective(from_double(x.value().approx()));
    Scalar d = angular_distance(phi(g(x)), g0(phi(x)));
    if (d > worst) worst = d;
  }
  return worst;
}

bool monotone_check(const MonotoneMapTable& phi) {
  for (std::size_t i = 0; i + 1 < phi.samples.size(); ++i) {
    const auto& a = phi.samples[i];
    const auto& b = phi.samples[i + 1];
    if (b.key < a.key) return false;
    if (b.key == a.key && !(a.target == b.target)) return false;
    if (b.target.value() < a.target.value()) return false;
  }
  return true;
}

std::vector<SemiconjugacyAttempt> semiconjugacy_with_fallback(const CircleMap& f, const CircleMap& h, int n, int m,
                                                              const CirclePoint& base, int depth,
                                                              const CirclePoint& fixed_point, Interpolation mode) {
  std::vector<SemiconjugacyAttempt> out;
  SemiconjugacyAttempt first{"f,h", n, std::nullopt, ""};
  try {
    first.table = build_semiconjugacy(f, h, n, base, depth, fixed_point, mode);
  } catch (const OrderViolation& e) {
    first.error = e.what();
  }
  bool done = first.table.has_value();
  out.push_back(std::move(first));
  if (done) return out;

  Integer mod = pow(Integer(n), static_cast<unsigned long>(m));
  SemiconjugacyAttempt second{"f^(n-1),h^m", 0, std::nullopt, ""};
  if (!mod.fits_sint_p()) {
    second.error = "model modulus n^m too large";
  } else {
    second.modulus = static_cast<int>(mod.get_si());
    try {
      second.table = build_semiconjugacy(power(f, n - 1), power(h, m), second.modulus, base, depth, fixed_point, mode);
    } catch (const OrderViolation& e) {
      second.error = e.what();
    }
  }
  out.push_back(std::move(second));
  return out;
}

}  // namespace bslab
