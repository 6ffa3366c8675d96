#include "nearres/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nearres {

namespace {
void require_nonzero3(const WaveVector& n, const WaveVector& k, const WaveVector& m) {
  if (is_zero(n.n) || is_zero(k.n) || is_zero(m.n))
    throw std::invalid_argument("triplet: zero wavevector");
}
}  // namespace

double triplet_value(const WaveVector& n, const WaveVector& k, const WaveVector& m,
                     const SignTriple& s) {
  require_nonzero3(n, k, m);
  return s.s1 * n.adjusted[2] / n.norm + s.s2 * k.adjusted[2] / k.norm +
         s.s3 * m.adjusted[2] / m.norm;
}

double min_triplet(const WaveVector& n, const WaveVector& k, const WaveVector& m) {
  require_nonzero3(n, k, m);
  // fold signs into the sign choice and sort, so the result is bitwise
  // invariant under argument permutations and global negation (the zero-
  // bandwidth indicator relies on exact symmetry)
  double x = std::abs(n.adjusted[2] / n.norm);
  double y = std::abs(k.adjusted[2] / k.norm);
  double z = std::abs(m.adjusted[2] / m.norm);
  if (x > y) std::swap(x, y);
  if (y > z) std::swap(y, z);
  if (x > y) std::swap(x, y);
  const double v1 = (z + y) + x;
  const double v2 = (z + y) - x;
  const double v3 = (z - y) + x;
  const double v4 = std::abs((z - y) - x);
  return std::min(std::min(v1, v2), std::min(v3, v4));
}

double solve_bandwidth_branch(double c, double cap) {
  if (c <= 0.0) return 0.0;
  const double e_inv = std::exp(-1.0);
  if (c >= e_inv) return cap;
  // g(d) = d*log(1/d) is increasing on (0, 1/e); bisect to 1e-12 relative
  double lo = 0.0, hi = e_inv;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double g = mid * std::log(1.0 / mid);
    if (g < c)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-12 * hi) break;
  }
  return std::min(0.5 * (lo + hi), cap);
}

double bandwidth(const WaveVector& n, const WaveVector& k, const WaveVector& m,
                 const BandwidthSpec& spec) {
  require_nonzero3(n, k, m);
  switch (spec.mode) {
    case BandwidthMode::all_pass:
      return std::numeric_limits<double>::infinity();
    case BandwidthMode::zero:
      return 0.0;
    case BandwidthMode::constant:
      return std::min(spec.const_delta, spec.cap);
    case BandwidthMode::theorem: {
      const double nmax = std::max({n.norm, k.norm, m.norm});
      return solve_bandwidth_branch(spec.c_hat / nmax, spec.cap);
    }
  }
  return 0.0;
}

bool is_near_resonant(const WaveVector& n, const WaveVector& k, const WaveVector& m,
                      const BandwidthSpec& spec) {
  if (!is_zero(n.n + k.n + m.n))
    throw std::invalid_argument("is_near_resonant: convolution n+k+m=0 violated");
  if (spec.mode == BandwidthMode::all_pass) {
    require_nonzero3(n, k, m);
    return true;
  }
  return min_triplet(n, k, m) <= bandwidth(n, k, m, spec);
}

std::vector<Vec3i> enumerate_triads_for(const Vec3i& n, const TorusGeometry& geom,
                                        const BandwidthSpec& spec, TriadOrdering ordering,
                                        std::optional<double> radius) {
  if (is_zero(n)) throw std::invalid_argument("enumerate_triads_for: zero n");
  const WaveVector wn = adjust(n, geom);
  double box_r = 0.0;
  if (ordering == TriadOrdering::N0) {
    box_r = wn.norm;  // |k_adj| <= |n_adj| confines k
  } else {
    if (!radius) throw std::invalid_argument("enumerate_triads_for: radius required");
    box_r = *radius;
  }
  const double lmax = std::max({geom.l1, geom.l2, 1.0});
  const long long b = static_cast<long long>(std::ceil(box_r * lmax));

  std::vector<std::vector<Vec3i>> slabs(2 * b + 1);
#pragma omp parallel for schedule(dynamic)
  for (long long i3 = 0; i3 <= 2 * b; ++i3) {
    const long long k3 = i3 - b;
    auto& out = slabs[i3];
    for (long long k1 = -b; k1 <= b; ++k1)
      for (long long k2 = -b; k2 <= b; ++k2) {
        const Vec3i k{k1, k2, k3};
        if (is_zero(k)) continue;
        const Vec3i m = -(n + k);
        if (is_zero(m)) continue;
        if (ordering == TriadOrdering::N0) {
          if (geom.cmp_norm2(k, n) > 0) continue;  // need |k| <= |n|
          if (geom.cmp_norm2(m, k) > 0) continue;  // need |m| <= |k|
        } else {
          const WaveVector wk_probe = adjust(k, geom);
          if (wk_probe.norm >= *radius) continue;
        }
        const WaveVector wk = adjust(k, geom);
        const WaveVector wm = adjust(m, geom);
        if (is_near_resonant(wn, wk, wm, spec)) out.push_back(k);
      }
  }
  std::vector<Vec3i> all;
  for (auto& s : slabs) all.insert(all.end(), s.begin(), s.end());
  return all;
}

long long count_triads_n0(const Vec3i& n, const TorusGeometry& geom, const BandwidthSpec& spec) {
  return static_cast<long long>(
      enumerate_triads_for(n, geom, spec, TriadOrdering::N0).size());
}

std::vector<CountRow> count_report(std::span<const Vec3i> n_list, const TorusGeometry& geom,
                                   const BandwidthSpec& spec) {
  std::vector<CountRow> rows;
  rows.reserve(n_list.size());
  for (const Vec3i& n : n_list) {
    CountRow r;
    r.n = n;
    r.norm = adjust(n, geom).norm;
    r.count = count_triads_n0(n, geom, spec);
    rows.push_back(r);
  }
  if (rows.empty()) return rows;
  const auto smallest =
      std::min_element(rows.begin(), rows.end(),
                       [](const CountRow& a, const CountRow& b) { return a.norm < b.norm; });
  const double c_fit = static_cast<double>(smallest->count) / smallest->norm;
  for (auto& r : rows) {
    r.bound = c_fit * r.norm;
    r.ratio = r.bound > 0.0 ? static_cast<double>(r.count) / r.bound : 0.0;
  }
  return rows;
}

}  // namespace nearres
