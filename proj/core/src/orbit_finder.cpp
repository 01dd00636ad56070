#include "bslab/orbit_finder.hpp"

#include <deque>
#include <stdexcept>

#include "bslab/errors.hpp"
#include "bslab/rotation.hpp"

namespace bslab {

namespace {

constexpr std::size_t kExactBitLimit = 2000;
constexpr std::size_t kCauchyWindow = 10;

bool too_big(const CirclePoint& p) {
  if (!p.is_exact() || p.is_infinity()) return false;
  return bit_size(p.value().exact()) > kExactBitLimit;
}

CirclePoint to_floating(const CirclePoint& p) { return CirclePoint::angular(p.angle()); }

bool close(const Scalar& d, double tol) { return d.sign() == 0 || d < Scalar(tol); }

}  // namespace

FixedPointSet fixed_point_enclosures(const CircleMap& map, int grid, double tol) {
  if (grid < 2) throw std::invalid_argument("fixed_point_enclosures needs grid >= 2");
  FixedPointSet set;
  set.tol = tol;
  set.intervals = solve_fixed_points(map, grid, tol);
  if (set.intervals.empty()) throw NoFixedPoint("no fixed point found for " + map.str());
  return set;
}

InvarianceReport fix_invariance_check(const CircleMap& f, const CircleMap& h, int n, const FixedPointSet& fixset,
                                      double tol, long period) {
  if (period < 1) throw std::invalid_argument("fix_invariance_check needs period >= 1");
  CircleMap fnk = power(f, static_cast<long>(n) * period);
  InvarianceReport report;
  report.pass = true;
  for (const auto& fp : fixset.intervals) {
    CirclePoint q = fp.representative();
    CirclePoint hq = h(q);
    Scalar d = angular_distance(fnk(hq), hq);
    bool ok = close(d, tol);
    report.entries.push_back({q, hq, d, ok});
    report.pass = report.pass && ok;
  }
  return report;
}

std::optional<int> minimal_power_m(const CircleMap& h, int mmax) {
  if (mmax < 1) throw std::invalid_argument("minimal_power_m needs mmax >= 1");
  CircleMap hm;
  for (int m = 1; m <= mmax; ++m) {
    hm = compose(h, hm);
    auto rho = rational_rotation_detect(hm, 1);
    if (rho && *rho == 0) return m;
  }
  return std::nullopt;
}

CommonFixedPoint common_fixed_point(const CircleMap& f, const CircleMap& h, int n, int m, long iters, double tol) {
  if (n < 2 || m < 1) throw std::invalid_argument("common_fixed_point needs n >= 2 and m >= 1");
  CircleMap F = power(f, n - 1);
  CircleMap H = power(h, m);
  FixedPointSet fixset = fixed_point_enclosures(F, 2048, std::min(tol, 1e-10));

  long total = 0;
  for (const auto& fp : fixset.intervals) {
    CirclePoint start = fp.representative();
    CirclePoint x = start;
    std::deque<CirclePoint> tail{x};
    for (long i = 0; i < iters; ++i) {
      CirclePoint y = H(x);
      if (too_big(y)) y = to_floating(y);
      ++total;
      bool stationary = y.is_exact() && x.is_exact() && angular_distance(x, y).sign() == 0;
      tail.push_back(y);
      if (tail.size() > kCauchyWindow) tail.pop_front();
      x = y;
      bool cauchy = false;
      if (!stationary && tail.size() == kCauchyWindow) {
        cauchy = true;
        for (std::size_t a = 0; a < tail.size() && cauchy; ++a)
          for (std::size_t b = a + 1; b < tail.size() && cauchy; ++b)
            cauchy = angular_distance(tail[a], tail[b]) < Scalar(tol / 2);
      }
      if (!stationary && !cauchy) continue;
      Scalar fd = angular_distance(F(x), x);
      Scalar hd = angular_distance(H(x), x);
      if (close(fd, tol) && close(hd, tol)) return {x, start, i + 1, fd, hd};
      break;  // the orbit settled on a point not fixed by F; try the next start
    }
  }
  throw NotConverged("no common fixed point of f^" + std::to_string(n - 1) + " and h^" + std::to_string(m) +
                         " within " + std::to_string(iters) + " iterations",
                     total);
}

}  // namespace bslab
