#include "bslab/obstruction.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "bslab/errors.hpp"

namespace bslab {

namespace {

Rational exact_of(const Scalar& s) { return s.is_exact() ? s.exact() : from_double(s.approx()); }

Arc image(const CircleMap& g, const Arc& a) { return Arc{g(a.lo), g(a.hi)}; }

struct Span {
  Scalar s, e;
};

std::optional<std::vector<Span>> line_spans(const std::vector<Arc>& arcs) {
  std::vector<Span> out;
  out.reserve(arcs.size());
  for (const auto& a : arcs) {
    if (a.lo.chart() != Chart::Projective || a.hi.chart() != Chart::Projective) return std::nullopt;
    if (a.lo.is_infinity() || a.hi.is_infinity()) return std::nullopt;
    if (a.hi.value() < a.lo.value()) return std::nullopt;
    out.push_back({a.lo.value(), a.hi.value()});
  }
  return out;
}

std::vector<Span> angular_spans(const std::vector<Arc>& arcs, const CirclePoint& ref) {
  std::vector<Span> out;
  out.reserve(arcs.size());
  for (const auto& a : arcs) {
    Arc ang{a.lo.to(Chart::Angular), a.hi.to(Chart::Angular)};
    Scalar s = *offset_from(ref, ang.lo);
    out.push_back({s, s + length(ang)});
  }
  return out;
}

bool spans_disjoint(std::vector<Span> spans, bool periodic) {
  if (spans.size() < 2) return true;
  std::sort(spans.begin(), spans.end(), [](const Span& x, const Span& y) {
    if (x.s < y.s) return true;
    if (y.s < x.s) return false;
    return x.e < y.e;
  });
  for (std::size_t i = 0; i + 1 < spans.size(); ++i) {
    if (spans[i + 1].s < spans[i].e) return false;
    // two degenerate arcs at the same point, or a duplicate
    if (spans[i + 1].s == spans[i].s && spans[i + 1].e == spans[i].e) return false;
  }
  if (periodic && spans.front().s + Scalar(1) < spans.back().e) return false;
  return true;
}

bool is_fixed(const CircleMap& f, const CirclePoint& p) {
  Scalar d = angular_distance(f(p), p);
  return d.sign() == 0 || d < Scalar(1e-12);
}

Scalar power_of(const Scalar& base, int e) {
  Scalar out(Rational(1));
  for (int i = 0; i < e; ++i) out *= base;
  return out;
}

}  // namespace

bool epsilon_admissible(const Scalar& epsilon) {
  Rational eps = exact_of(epsilon);
  if (eps < 0) return false;
  Rational one_minus = 1 - eps;
  return Rational(one_minus * one_minus) > Rational(3, 4);
}

Scalar arc_length(const Arc& arc) {
  try {
    return length(arc);
  } catch (const std::domain_error&) {
    return length(Arc{arc.lo.to(Chart::Angular), arc.hi.to(Chart::Angular)});
  }
}

std::vector<Arc> backward_levels(const CircleMap& h, const Arc& J, int s_max) {
  CircleMap h_inv = h.inverse();
  std::vector<Arc> levels{J};
  for (int s = 1; s <= s_max; ++s) levels.push_back(image(h_inv, levels.back()));
  return levels;
}

bool wandering_depth_check(const CircleMap& h, const Arc& J, int s_max) {
  if (s_max < 1) throw std::invalid_argument("wandering_depth_check needs s_max >= 1");
  return disjointness_check(backward_levels(h, J, s_max));
}

DerivativeBounds measure_derivative_bounds(const CircleMap& f, const CircleMap& h, const Arc& J, int s_max,
                                           int grid) {
  if (grid < 1) throw std::invalid_argument("derivative bounds need grid >= 1");
  DerivativeBounds out;
  bool first = true;
  double slack = (f.derivative_modulus() + h.derivative_modulus()) * 0.5 / grid;
  for (const auto& level : backward_levels(h, J, s_max)) {
    Arc base = level;
    if (!offset_from(level.lo, level.hi)) base = Arc{level.lo.to(Chart::Angular), level.hi.to(Chart::Angular)};
    Scalar len = length(base);
    Scalar hmin, hmax;
    bool hfirst = true;
    for (int j = 0; j <= grid; ++j) {
      Scalar off = len * Scalar(Rational(j, grid));
      CirclePoint p = base.lo.chart() == Chart::Angular ? CirclePoint::angular(base.lo.value() + off)
                                                          : CirclePoint::projective(base.lo.value() + off);
      std::vector<Side> sides;
      if (j > 0) sides.push_back(Side::Left);
      if (j < grid) sides.push_back(Side::Right);
      for (Side side : sides) {
        Scalar df = f.derivative(p, side);
        Scalar dh = h.derivative(p, side);
        if (first || df < out.min_f) out.min_f = df;
        first = false;
        if (hfirst) {
          hmin = hmax = dh;
          hfirst = false;
        } else {
          hmin = min(hmin, dh);
          hmax = max(hmax, dh);
        }
      }
    }
    Scalar ratio = hmin / hmax;
    if (out.min_h_ratio.sign() == 0 || ratio < out.min_h_ratio) out.min_h_ratio = ratio;
  }
  if (slack > 0) {
    out.min_f = Scalar(out.min_f.approx() - slack);
    out.min_h_ratio = Scalar(out.min_h_ratio.approx() - slack);
  }
  return out;
}

bool derivative_bounds_check(const CircleMap& f, const CircleMap& h, const Arc& J, int s_max,
                             const Scalar& epsilon, int grid) {
  Scalar floor_value(Rational(1 - exact_of(epsilon)));
  DerivativeBounds b = measure_derivative_bounds(f, h, J, s_max, grid);
  return b.min_f >= floor_value && b.min_h_ratio >= floor_value;
}

PsiFamily psi_interval_family(const CircleMap& f, const CircleMap& h, const Arc& I, int m, std::uint64_t cap) {
  if (m < 0) throw std::invalid_argument("psi_interval_family needs m >= 0");
  if (m >= 63 || (1ULL << (m + 1)) > cap) {
    throw DepthLimit("family of size 2^" + std::to_string(m + 1) + " exceeds the cap " + std::to_string(cap));
  }
  PsiFamily family;
  family.m = 0;
  family.images = {I, image(f, I)};
  while (family.m < m) extend_family(family, f, h);
  return family;
}

void extend_family(PsiFamily& family, const CircleMap& f, const CircleMap& h) {
  int next = family.m + 1;
  // the factor h^next f h^-next, realized from its letters
  std::vector<Letter> letters(static_cast<std::size_t>(next), Letter::A);
  letters.push_back(Letter::B);
  letters.insert(letters.end(), static_cast<std::size_t>(next), Letter::AInv);
  CircleMap factor = realize_word(Word(std::move(letters), 2), f, h);
  std::size_t count = family.images.size();
  family.images.reserve(2 * count);
  for (std::size_t i = 0; i < count; ++i) family.images.push_back(image(factor, family.images[i]));
  family.m = next;
}

bool disjointness_check(const std::vector<Arc>& arcs, const std::optional<Arc>& J) {
  if (J) {
    for (const auto& a : arcs)
      if (!arc_contains(*J, a)) return false;
  }
  if (auto spans = line_spans(arcs)) return spans_disjoint(std::move(*spans), false);
  if (arcs.empty()) return true;
  CirclePoint ref = (J ? J->lo : arcs.front().lo).to(Chart::Angular);
  return spans_disjoint(angular_spans(arcs, ref), true);
}

Decomposition decompose(const BitWord& alpha) {
  Decomposition d;
  std::vector<int> set;
  for (std::size_t i = alpha.size(); i-- > 0;)
    if (alpha[i]) set.push_back(static_cast<int>(i));
  d.r = static_cast<int>(set.size());
  d.k = set.empty() ? 0 : set.front();
  for (std::size_t j = 0; j < set.size(); ++j) d.l.push_back(j + 1 < set.size() ? set[j] - set[j + 1] : set[j]);
  int sum = 0;
  for (int l : d.l) sum += l;
  int m = static_cast<int>(alpha.m());
  if (sum != d.k || d.r > d.k + 1 || d.k > m || d.r + d.k > 2 * m + 2) {
    throw DecompositionError("inconsistent decomposition for alpha=" + alpha.str());
  }
  return d;
}

LengthLedger length_ledger(const CircleMap& f, const CircleMap& h, const Arc& I, int m, const Scalar& epsilon) {
  PsiFamily family = psi_interval_family(f, h, I, m);
  CircleMap h_inv = h.inverse();
  LengthLedger ledger;
  ledger.m = m;
  ledger.epsilon = epsilon;
  ledger.interval_length = arc_length(I);
  Scalar one_minus(Rational(1 - exact_of(epsilon)));
  ledger.bound = ledger.interval_length * power_of(one_minus, 2 * m + 2);
  ledger.floor_bound = ledger.interval_length * power_of(Scalar(Rational(3, 4)), m + 1);

  for (std::size_t i = 0; i < family.images.size(); ++i) {
    LedgerEntry e{family.alpha(i), family.images[i], arc_length(family.images[i]), {}, ledger.bound, false, {}};
    e.decomposition = decompose(e.alpha);
    Arc cur = I;
    auto step = [&](char letter, const CircleMap& g) {
      Arc next = image(g, cur);
      e.witnesses.push_back({letter, cur, arc_length(next) / arc_length(cur)});
      cur = next;
    };
    for (std::size_t j = e.decomposition.l.size(); j-- > 0;) {
      for (int t = 0; t < e.decomposition.l[j]; ++t) step('H', h_inv);
      step('f', f);
    }
    for (int t = 0; t < e.decomposition.k; ++t) step('h', h);
    auto agree = [](const CirclePoint& a, const CirclePoint& b) {
      Scalar d = angular_distance(a, b);
      return d.sign() == 0 || (!d.is_exact() && d < Scalar(1e-9));
    };
    if (!agree(cur.lo, e.image.lo) || !agree(cur.hi, e.image.hi)) {
      throw DecompositionError("decomposition of alpha=" + e.alpha.str() + " gives " + cur.str() +
                               ", family has " + e.image.str());
    }
    e.above_bound = e.length >= e.bound;
    ledger.entries.push_back(std::move(e));
  }
  return ledger;
}

Rational theoretical_bound(int m, const Rational& interval_length) {
  return pow(Rational(3, 2), static_cast<unsigned long>(m + 1)) * interval_length;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::ContradictionAt: return "ContradictionAt";
    case Verdict::BoundsNotViolated: return "BoundsNotViolated";
    case Verdict::PreconditionFailed: return "PreconditionFailed";
  }
  return "?";
}

std::string Certificate::str() const {
  std::ostringstream os;
  os << to_string(verdict);
  if (verdict == Verdict::ContradictionAt) os << "(" << m << ")";
  if (verdict == Verdict::PreconditionFailed) os << "(" << reason << ")";
  return os.str();
}

Certificate growth_certificate(const CircleMap& f, const CircleMap& h, const ObstructionConfig& cfg) {
  Certificate cert;
  cert.epsilon = cfg.epsilon;
  cert.relation_depth = cfg.relation_depth;
  auto fail = [&](std::string reason) {
    cert.verdict = Verdict::PreconditionFailed;
    cert.reason = std::move(reason);
    return cert;
  };
  try {
    cert.J_length = arc_length(cfg.J);
    cert.I_length = arc_length(cfg.I);
  } catch (const std::exception& e) {
    return fail(std::string("interval lengths: ") + e.what());
  }
  if (cfg.m_max < 1) return fail("m_max must be >= 1");
  if (!epsilon_admissible(cfg.epsilon)) return fail("epsilon is not admissible: (1-eps)^2 <= 3/4");
  if (!arc_contains(cfg.J, cfg.I)) return fail("I is not contained in J");
  if (!is_fixed(f, cfg.J.lo) || !is_fixed(f, cfg.J.hi)) return fail("endpoints of J are not fixed by f");
  if (!same_point(f(cfg.I.lo), cfg.I.hi)) return fail("I is not of the form (x, f(x))");
  if (cfg.m_max > cfg.s_max) return fail("m_max exceeds the verified depth s_max");
  if (!wandering_depth_check(h, cfg.J, cfg.s_max)) return fail("J is not h-wandering up to s_max");
  if (!derivative_bounds_check(f, h, cfg.J, cfg.s_max, cfg.epsilon, cfg.grid))
    return fail("derivative bounds fail for the given epsilon");

  Rational I_exact = exact_of(cert.I_length);
  PsiFamily family = psi_interval_family(f, h, cfg.I, 0, cfg.cap);
  for (int m = 1; m <= cfg.m_max; ++m) {
    if (m >= 62 || (1ULL << (m + 1)) > cfg.cap) {
      cert.verdict = Verdict::BoundsNotViolated;
      cert.reason = "family cap reached at m=" + std::to_string(m);
      return cert;
    }
    extend_family(family, f, h);
    CertificateRow row;
    row.m = m;
    row.count = family.images.size();
    row.total_length = Scalar(Rational(0));
    for (const auto& a : family.images) row.total_length += arc_length(a);
    row.theoretical = theoretical_bound(m, I_exact);
    row.theoretical_d = to_double(row.theoretical);
    row.J_length = cert.J_length;
    row.contained = true;
    for (const auto& a : family.images) row.contained = row.contained && arc_contains(cfg.J, a);
    row.disjoint = disjointness_check(family.images);
    cert.rows.push_back(row);
    if (row.total_length > cert.J_length) {
      cert.verdict = Verdict::ContradictionAt;
      cert.m = m;
      return cert;
    }
  }
  cert.verdict = Verdict::BoundsNotViolated;
  return cert;
}

}  // namespace bslab
