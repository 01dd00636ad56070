#include "bslab/rotation.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "bslab/errors.hpp"
#include "bslab/fixed_points.hpp"

namespace bslab {

namespace {

constexpr std::size_t kExactBitLimit = 4096;

Scalar ceil_s(const Scalar& x) { return -floor(-x); }

std::optional<Rational> iterate_exact(const CircleMap& map, const Rational& x, long N) {
  Rational y = x;
  for (long i = 0; i < N; ++i) {
    auto next = map.lift_exact(y);
    if (!next) return std::nullopt;
    y = std::move(*next);
    if (bit_size(y) > kExactBitLimit) return std::nullopt;
  }
  return y;
}

double down(double x) { return std::nextafter(x, -std::numeric_limits<double>::infinity()); }
double up(double x) { return std::nextafter(x, std::numeric_limits<double>::infinity()); }

}  // namespace

bool RotationEnclosure::contains_mod1(const Scalar& x) const { return intersects_mod1(lo, hi, x, x); }

bool intersects_mod1(const Scalar& alo, const Scalar& ahi, const Scalar& blo, const Scalar& bhi) {
  // need j with blo + j <= ahi and bhi + j >= alo
  return ceil_s(alo - bhi) <= floor(ahi - blo);
}

std::vector<Rational> default_basepoints() { return {Rational(0), Rational(1, 3), Rational(2, 3)}; }

RotationEnclosure rotation_enclosure(const CircleMap& map, long N, const std::vector<Rational>& basepoints) {
  if (N < 1) throw std::invalid_argument("rotation_enclosure needs N >= 1");
  if (basepoints.empty()) throw std::invalid_argument("rotation_enclosure needs a basepoint");
  RotationEnclosure enc;
  enc.iterations = N;
  enc.basepoints = basepoints;
  const double e = map.step_error();
  bool first = true;
  for (const auto& x : basepoints) {
    Scalar lo, hi;
    auto exact = iterate_exact(map, x, N);
    if (exact) {
      Rational disp = *exact - x;
      lo = Rational((disp - 1) / N);
      hi = Rational((disp + 1) / N);
    } else {
      double y = to_double(x);
      for (long i = 0; i < N; ++i) y = map.lift(y);
      double disp = y - to_double(x);
      double nd = static_cast<double>(N);
      lo = down(down((disp - 1.0) / nd) - e);
      hi = up(up((disp + 1.0) / nd) + e);
    }
    if (first) {
      enc.lo = lo;
      enc.hi = hi;
      first = false;
    } else {
      enc.lo = max(enc.lo, lo);
      enc.hi = min(enc.hi, hi);
    }
  }
  if (enc.hi < enc.lo) {
    throw EmptyIntersection("rotation enclosures over basepoints do not meet: [" + enc.lo.str() + ", " +
                            enc.hi.str() + "]");
  }
  return enc;
}

std::optional<Rational> rational_rotation_detect(const CircleMap& map, int qmax, double tol, long N) {
  if (qmax < 1) throw std::invalid_argument("rational_rotation_detect needs qmax >= 1");
  std::optional<RotationEnclosure> enc;
  CircleMap mq;
  for (int q = 1; q <= qmax; ++q) {
    mq = compose(map, mq);
    std::vector<FixedPointCandidate> fps = solve_fixed_points(mq, 2048, std::min(tol, 1e-10));
    for (const auto& fp : fps) {
      CirclePoint x = fp.representative();
      Scalar dist = angular_distance(mq(x), x);
      if (!(dist < Scalar(tol))) continue;
      double start = x.angle();
      double y = start;
      for (int i = 0; i < q; ++i) y = map.lift(y);
      long p = std::lround(y - start);
      Rational rho(p, q);
      rho.canonicalize();
      if (!enc) enc = rotation_enclosure(map, N);
      if (!enc->contains_mod1(rho)) continue;
      return frac(rho);
    }
  }
  return std::nullopt;
}

RhoForm rho_rational_form(const CircleMap& f, int n, long N) {
  if (n < 2) throw std::invalid_argument("rho_rational_form needs n >= 2");
  RhoForm out;
  out.enclosure = rotation_enclosure(f, N);
  const Rational limit(1, 2 * (n - 1));
  if (!(out.enclosure.width() < Scalar(limit))) {
    throw EnclosureTooWide("enclosure width " + out.enclosure.width().str() + " is not below 1/(2(n-1)) at N=" +
                           std::to_string(N));
  }
  for (long l = 0; l < n - 1; ++l) {
    Rational c(l, n - 1);
    c.canonicalize();
    Scalar j = ceil_s(out.enclosure.lo - Scalar(c));
    if (Scalar(c) + j <= out.enclosure.hi) {
      out.l = l;
      Rational jq = Scalar(j).is_exact() ? j.exact() : Rational(static_cast<long>(j.approx()));
      out.raw_l = Integer(l + jq.get_num() * (n - 1));
      return out;
    }
  }
  throw NoAdmissibleL("no l/(n-1) mod 1 lies in [" + out.enclosure.lo.str() + ", " + out.enclosure.hi.str() +
                      "] for n=" + std::to_string(n));
}

ConjugacyReport conjugacy_invariance_check(const CircleMap& f, const CircleMap& h, int n, long N) {
  ConjugacyReport r;
  r.rho_f = rotation_enclosure(f, N);
  r.rho_conj = rotation_enclosure(compose(h, compose(f, h.inverse())), N);
  r.rho_power = rotation_enclosure(power(f, n), N);
  r.conj_meets_f = intersects_mod1(r.rho_conj.lo, r.rho_conj.hi, r.rho_f.lo, r.rho_f.hi);
  Scalar nn(n);
  r.power_meets_scaled = intersects_mod1(r.rho_power.lo, r.rho_power.hi, nn * r.rho_f.lo, nn * r.rho_f.hi);
  r.conj_meets_power = intersects_mod1(r.rho_conj.lo, r.rho_conj.hi, r.rho_power.lo, r.rho_power.hi);
  r.consistent = r.conj_meets_f && r.power_meets_scaled && r.conj_meets_power;
  return r;
}

}  // namespace bslab
