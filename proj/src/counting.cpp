#include "nearres/counting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nearres/resonance.hpp"
#include "nearres/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nearres {

namespace {
constexpr double kTieMargin = 1e-12;
}

CountInterval count_sublevel_integers(const SublevelProblem& prob) {
  if (is_zero(prob.n)) throw std::invalid_argument("count_sublevel_integers: n must be nonzero");
  const WaveVector wn = adjust(prob.n, prob.geom);
  if (wn.norm > 256.0)
    throw std::invalid_argument("count_sublevel_integers: |n_adj| > 256 resource guard");
  CountInterval out;
  if (prob.delta < 0.0) return out;  // empty condition sentinel

  const auto n_num = prob.geom.norm2_num(prob.n);
  const long long b1 = static_cast<long long>(std::ceil(wn.norm * prob.geom.l1));
  const long long b2 = static_cast<long long>(std::ceil(wn.norm * prob.geom.l2));
  const long long b3 = static_cast<long long>(std::ceil(wn.norm));

  long long strict_total = 0, relaxed_total = 0;
#pragma omp parallel for schedule(dynamic) reduction(+ : strict_total, relaxed_total)
  for (long long i3 = 0; i3 <= 2 * b3; ++i3) {
    const long long k3 = i3 - b3;
    for (long long k1 = -b1; k1 <= b1; ++k1)
      for (long long k2 = -b2; k2 <= b2; ++k2) {
        const Vec3i k{k1, k2, k3};
        if (is_zero(k) || is_zero(k + prob.n)) continue;
        // closed annulus |n|/2 <= |k| <= |n|, exact when possible
        const auto k_num = prob.geom.norm2_num(k);
        if (n_num && k_num) {
          if (*k_num * 4 < *n_num || *k_num > *n_num) continue;
        } else {
          const double kn2 = prob.geom.norm2(k), nn2 = wn.norm * wn.norm;
          if (4.0 * kn2 < nn2 || kn2 > nn2) continue;
        }
        const double f = std::abs(f_value(
            prob, Vec3d{static_cast<double>(k1), static_cast<double>(k2),
                        static_cast<double>(k3)}));
        if (f <= prob.delta - kTieMargin) ++strict_total;
        if (f <= prob.delta + kTieMargin) ++relaxed_total;
      }
  }
  out.strict_count = strict_total;
  out.relaxed_count = relaxed_total;
  return out;
}

LowerBoundResult lower_bound_slow_fast(long long N, double delta) {
  if (N < 4) throw std::invalid_argument("lower_bound_slow_fast: N >= 4 required");
  if (!(delta >= 0.0) || delta >= 0.5)
    throw std::invalid_argument("lower_bound_slow_fast: delta in [0, 1/2) required");
  const double n_norm = 2.0 * static_cast<double>(N);
  LowerBoundResult res;

  for (long long k3 = -N; k3 <= N; ++k3) {
    if (k3 == 0) continue;
    const double x = (static_cast<double>(N) / 3.0) *
                     std::min(delta * n_norm / (2.0 * std::llabs(k3)), 1.0);
    const long long top = static_cast<long long>(std::floor(x));
    res.formula_count += (2 * N + 1) * (1 + top);
    for (long long j = 0; j <= top; ++j) {
      const long long k1 = N + j;
      for (long long k2 = -N; k2 <= N; ++k2) {
        ++res.exact_count;
        // verify localisation |n| >= |k| >= |n+k| >= |n|/3 exactly
        const long long k_sq = k1 * k1 + k2 * k2 + k3 * k3;
        const long long m1 = 2 * N - k1;
        const long long m_sq = m1 * m1 + k2 * k2 + k3 * k3;
        const long long n_sq = 4 * N * N;
        bool ok = (k_sq <= n_sq) && (m_sq <= k_sq) && (9 * m_sq >= n_sq);
        // triplet value with all-plus signs: k3 (1/|k| - 1/|m|)
        const double kk = std::sqrt(static_cast<double>(k_sq));
        const double mm = std::sqrt(static_cast<double>(m_sq));
        const double trip = k3 * (1.0 / kk - 1.0 / mm);
        ok = ok && std::abs(trip) <= delta * (1.0 + 1e-12);
        if (ok) ++res.checked;
        res.all_members = res.all_members && ok;
      }
    }
  }
  const double dn = 2.0 * static_cast<double>(N);
  res.scaling_expr =
      dn * dn + (delta > 0.0 ? dn * dn * dn * delta * std::log(1.0 / delta) : 0.0);
  return res;
}

LowerBoundResult lower_bound_fast_fast(long long N, double delta) {
  if (N < 8) throw std::invalid_argument("lower_bound_fast_fast: N >= 8 required");
  const double n_norm = std::sqrt(4.0 * N * N + 1.0);
  if (delta < 1.0 / (4.0 * N * N))
    throw std::invalid_argument("lower_bound_fast_fast: need delta >= 1/(2N)^2");
  LowerBoundResult res;
  const long long n_sq = 4 * N * N + 1;
  const double inner = n_norm / (1.0 + delta * n_norm);
  const double inner_sq = inner * inner;
  const long long k3_top = static_cast<long long>(std::floor(
      (static_cast<double>(N) / 3.0) * std::min(std::sqrt(delta * n_norm), 1.0)));

  for (long long k3 = 2; k3 <= k3_top; ++k3) {
    const double x = (static_cast<double>(N) / 3.0) *
                     std::min(delta * n_norm / (2.0 * (k3 - 1)), 1.0);
    const long long top = static_cast<long long>(std::floor(x));
    for (long long j = 0; j <= top; ++j) {
      const long long k1 = N + j;
      const long long base = k1 * k1 + k3 * k3;
      if (base > n_sq) continue;
      const long long k2_max_sq = n_sq - base;
      long long k2_max = static_cast<long long>(std::floor(std::sqrt(
          static_cast<double>(k2_max_sq))));
      while ((k2_max + 1) * (k2_max + 1) <= k2_max_sq) ++k2_max;  // exact boundary
      while (k2_max > 0 && k2_max * k2_max > k2_max_sq) --k2_max;
      for (long long k2 = -k2_max; k2 <= k2_max; ++k2) {
        const long long k_sq = base + k2 * k2;
        if (k_sq > n_sq) continue;
        if (static_cast<double>(k_sq) < inner_sq) continue;
        ++res.exact_count;
        // localisation, exact in integers
        const long long m1 = 2 * N - k1;
        const long long m3 = k3 - 1;  // |m3| with sign folded into square
        const long long m_sq = m1 * m1 + k2 * k2 + m3 * m3;
        bool ok = (k_sq <= n_sq) && (m_sq <= k_sq) && (9 * m_sq >= n_sq);
        // f_flat <= 0 <= f_sharp and |f_flat + f_sharp| <= delta
        const double kk = std::sqrt(static_cast<double>(k_sq));
        const double mm = std::sqrt(static_cast<double>(m_sq));
        const double f_flat = 1.0 / n_norm - 1.0 / kk;
        const double f_sharp = (k3 - 1.0) * (1.0 / mm - 1.0 / kk);
        ok = ok && f_flat <= 1e-15 && f_sharp >= -1e-15 &&
             std::abs(f_flat + f_sharp) <= delta * (1.0 + 1e-12);
        if (ok) ++res.checked;
        res.all_members = res.all_members && ok;
      }
    }
  }
  const double dn = n_norm;
  const double t1 = dn * dn * std::min(1.0, std::pow(delta * dn, 1.5));
  const double t2 =
      dn * dn * dn * delta * std::min(std::log(1.0 / delta), delta * dn * std::log(dn));
  res.scaling_expr = t1 + t2;
  res.formula_count = res.exact_count;  // no closed form claimed for this family
  return res;
}

// ---- Jordan curve counting ----

double Ellipse::area() const { return M_PI * semi_a() * semi_b(); }

double Ellipse::perimeter() const {
  const double A = std::max(semi_a(), semi_b());
  const double B = std::min(semi_a(), semi_b());
  if (A == B) return 2.0 * M_PI * A;
  const double e2 = 1.0 - (B * B) / (A * A);
  // 4 A E(e), complete second-kind integral by midpoint-refined Simpson
  const int n = 2048;
  double sum = 0.0;
  const double h = 0.5 * M_PI / n;
  for (int i = 0; i < n; ++i) {
    const double x0 = i * h, x1 = x0 + h, xm = x0 + 0.5 * h;
    auto f = [&](double x) {
      const double s = std::sin(x);
      return std::sqrt(1.0 - e2 * s * s);
    };
    sum += (f(x0) + 4.0 * f(xm) + f(x1)) * h / 6.0;
  }
  return 4.0 * A * sum;
}

int Ellipse::side(long long x, long long y) const {
  const __int128 dx = x * kCurveDen - cx;
  const __int128 dy = y * kCurveDen - cy;
  const __int128 lhs = dx * dx * (__int128)(b * b) + dy * dy * (__int128)(a * a);
  const __int128 rhs = (__int128)(a * a) * (__int128)(b * b);
  if (lhs < rhs) return -1;
  if (lhs > rhs) return 1;
  return 0;
}

namespace {

int curve_depth(const CurveFamily& fam, int i) {
  int d = 1;
  for (int p = fam.parent[i]; p >= 0; p = fam.parent[p]) ++d;
  return d;
}

// conservative certificates on bounding circles
bool certified_separate(const Ellipse& e1, const Ellipse& e2) {
  const double dx = e1.center_x() - e2.center_x();
  const double dy = e1.center_y() - e2.center_y();
  const double dist = std::hypot(dx, dy);
  const double r1 = std::max(e1.semi_a(), e1.semi_b());
  const double r2 = std::max(e2.semi_a(), e2.semi_b());
  return dist > r1 + r2 + 1e-9;
}

bool certified_inside(const Ellipse& inner, const Ellipse& outer) {
  const double dx = inner.center_x() - outer.center_x();
  const double dy = inner.center_y() - outer.center_y();
  const double dist = std::hypot(dx, dy);
  const double ri = std::max(inner.semi_a(), inner.semi_b());
  const double ro = std::min(outer.semi_a(), outer.semi_b());
  return dist + ri < ro - 1e-9;
}

}  // namespace

double CurveFamily::area() const {
  double a = 0.0;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const int d = curve_depth(*this, static_cast<int>(i));
    a += (d % 2 == 1) ? curves[i].area() : -curves[i].area();
  }
  return a;
}

double CurveFamily::length() const {
  double len = 0.0;
  for (const Ellipse& e : curves) len += e.perimeter();
  return len;
}

JordanReport jordan_count_check(const CurveFamily& fam) {
  const int K = static_cast<int>(fam.curves.size());
  if (K == 0) throw std::invalid_argument("jordan_count_check: empty family");
  // disjointness certificates consistent with the declared forest
  for (int i = 0; i < K; ++i)
    for (int j = i + 1; j < K; ++j) {
      const bool rel = certified_inside(fam.curves[i], fam.curves[j]) ||
                       certified_inside(fam.curves[j], fam.curves[i]) ||
                       certified_separate(fam.curves[i], fam.curves[j]);
      if (!rel) throw std::invalid_argument("jordan_count_check: curves not certified disjoint");
    }

  JordanReport rep;
  rep.area = fam.area();
  rep.length = fam.length();

  long long xmin = 1'000'000, xmax = -1'000'000, ymin = 1'000'000, ymax = -1'000'000;
  for (const Ellipse& e : fam.curves) {
    xmin = std::min(xmin, static_cast<long long>(std::floor(e.center_x() - e.semi_a())) - 1);
    xmax = std::max(xmax, static_cast<long long>(std::ceil(e.center_x() + e.semi_a())) + 1);
    ymin = std::min(ymin, static_cast<long long>(std::floor(e.center_y() - e.semi_b())) - 1);
    ymax = std::max(ymax, static_cast<long long>(std::ceil(e.center_y() + e.semi_b())) + 1);
  }

  for (long long x = xmin; x <= xmax; ++x)
    for (long long y = ymin; y <= ymax; ++y) {
      bool on_curve = false;
      int depth = 0;
      for (const Ellipse& e : fam.curves) {
        const int s = e.side(x, y);
        if (s == 0) on_curve = true;
        if (s < 0) ++depth;
      }
      const bool in_closure = on_curve || (depth % 2 == 1);
      if (!in_closure) continue;
      ++rep.count;
      // exceptional set: a curve with p in cl(interior) and area+len < 1
      for (const Ellipse& e : fam.curves) {
        if (e.side(x, y) <= 0 && e.area() + e.perimeter() < 1.0) {
          ++rep.exceptional;
          break;
        }
      }
    }
  rep.holds = static_cast<double>(rep.count) <=
              rep.area + rep.length + static_cast<double>(rep.exceptional) + 1e-9;
  return rep;
}

CurveFamily random_curve_family(std::uint64_t seed) {
  Rng rng(seed);
  CurveFamily fam;
  const int nroots = 1 + static_cast<int>(rng.uniform() * 3.0);
  for (int r = 0; r < nroots; ++r) {
    for (int attempt = 0; attempt < 64; ++attempt) {
      Ellipse e;
      e.cx = static_cast<long long>(std::llround(rng.uniform_in(-8, 8) * kCurveDen));
      e.cy = static_cast<long long>(std::llround(rng.uniform_in(-8, 8) * kCurveDen));
      e.a = static_cast<long long>(std::llround(rng.uniform_in(0.6, 3.0) * kCurveDen));
      e.b = static_cast<long long>(std::llround(rng.uniform_in(0.6, 3.0) * kCurveDen));
      bool ok = true;
      for (std::size_t i = 0; i < fam.curves.size(); ++i)
        if (fam.parent[i] == -1 && !certified_separate(e, fam.curves[i])) ok = false;
      if (!ok) continue;
      fam.curves.push_back(e);
      fam.parent.push_back(-1);
      const int root_idx = static_cast<int>(fam.curves.size()) - 1;
      // optional hole, and inside it an optional island
      if (rng.uniform() < 0.6) {
        Ellipse h;
        const double shrink = rng.uniform_in(0.25, 0.55);
        h.a = static_cast<long long>(std::llround(e.a * shrink));
        h.b = static_cast<long long>(std::llround(e.b * shrink));
        h.cx = e.cx + static_cast<long long>(std::llround(rng.uniform_in(-0.1, 0.1) * e.a));
        h.cy = e.cy + static_cast<long long>(std::llround(rng.uniform_in(-0.1, 0.1) * e.b));
        if (h.a >= 4 && h.b >= 4 && certified_inside(h, e)) {
          fam.curves.push_back(h);
          fam.parent.push_back(root_idx);
          const int hole_idx = static_cast<int>(fam.curves.size()) - 1;
          if (rng.uniform() < 0.5) {
            Ellipse is;
            is.a = std::max<long long>(2, h.a / 4);
            is.b = std::max<long long>(2, h.b / 4);
            is.cx = h.cx;
            is.cy = h.cy;
            if (certified_inside(is, h)) {
              fam.curves.push_back(is);
              fam.parent.push_back(hole_idx);
            }
          }
        }
      }
      break;
    }
  }
  if (fam.curves.empty()) {
    fam.curves.push_back(Ellipse{0, 0, 2 * kCurveDen, kCurveDen});
    fam.parent.push_back(-1);
  }
  return fam;
}

CurveFamily adversarial_curve_family(std::uint64_t seed) {
  // families made only of tiny curves around lattice points: every curve has
  // area + length < 1, so the count exceeds area + length and the bound
  // survives only through the exceptional set
  Rng rng(seed);
  CurveFamily fam;
  if (rng.uniform() < 0.5) {
    // a few standalone tiny circles at distinct lattice points
    const int k = 1 + static_cast<int>(rng.uniform() * 4.0);
    for (int i = 0; i < k; ++i) {
      Ellipse t;
      t.cx = (4 * i + static_cast<long long>(std::llround(rng.uniform_in(-1, 1)))) * kCurveDen;
      t.cy = static_cast<long long>(std::llround(rng.uniform_in(-1, 1))) * kCurveDen;
      t.a = 3 + static_cast<long long>(rng.uniform() * 3.999);  // radius in [3/64, 6/64]
      t.b = t.a;
      fam.curves.push_back(t);
      fam.parent.push_back(-1);
    }
  } else {
    // triple-nested micro-family: the lattice point sits inside the island,
    // at odd depth, with total area + length still below 1
    const long long px = static_cast<long long>(std::llround(rng.uniform_in(-2, 2)));
    const long long py = static_cast<long long>(std::llround(rng.uniform_in(-2, 2)));
    fam.curves.push_back(Ellipse{px * kCurveDen, py * kCurveDen, 4, 4});
    fam.curves.push_back(Ellipse{px * kCurveDen, py * kCurveDen, 2, 2});
    fam.curves.push_back(Ellipse{px * kCurveDen, py * kCurveDen, 1, 1});
    fam.parent = {-1, 0, 1};
  }
  return fam;
}

PlanarSliceReport planar_slice_check(const SublevelProblem& prob, double k3,
                                     long long area_samples, std::uint64_t seed) {
  const WaveVector wn = adjust(prob.n, prob.geom);
  const double n3 = wn.adjusted[2];
  if (k3 * (k3 + n3) * (2.0 * k3 + n3) == 0.0)
    throw std::invalid_argument("planar_slice_check: hypothesis k3(k3+n3)(2k3+n3) != 0 violated");
  PlanarSliceReport rep;
  rep.k3 = k3;
  const double nn2 = wn.norm * wn.norm;
  if (k3 * k3 > nn2) return rep;  // empty slice
  rep.bound_term = std::sqrt(nn2 - k3 * k3);

  auto member = [&](double x, double y) {
    const double kx = x / prob.geom.l1, ky = y / prob.geom.l2;
    const double k2 = kx * kx + ky * ky + k3 * k3;
    if (4.0 * k2 < nn2 || k2 > nn2) return false;
    const double mx = -wn.adjusted[0] - kx;
    const double my = -wn.adjusted[1] - ky;
    const double mz = -wn.adjusted[2] - k3;
    const double m2 = mx * mx + my * my + mz * mz;
    if (m2 == 0.0 || k2 == 0.0) return false;
    const double f = prob.sigma1 * wn.adjusted[2] / wn.norm + prob.sigma2 * k3 / std::sqrt(k2) +
                     mz / std::sqrt(m2);
    return std::abs(f) <= prob.delta;
  };

  const double rh = rep.bound_term;  // adjusted horizontal radius
  const long long b1 = static_cast<long long>(std::ceil(rh * prob.geom.l1));
  const long long b2 = static_cast<long long>(std::ceil(rh * prob.geom.l2));
  long long count = 0;
#pragma omp parallel for schedule(dynamic) reduction(+ : count)
  for (long long x = -b1; x <= b1; ++x)
    for (long long y = -b2; y <= b2; ++y)
      if (member(static_cast<double>(x), static_cast<double>(y))) ++count;
  rep.count = count;

  // 2D Monte-Carlo area in k-space over the bounding rectangle
  const double bx = rh * prob.geom.l1, by = rh * prob.geom.l2;
  const long long block = 1 << 16;
  const long long nblocks = (area_samples + block - 1) / block;
  std::vector<long long> hits_block(nblocks, 0);
#pragma omp parallel for schedule(dynamic)
  for (long long bidx = 0; bidx < nblocks; ++bidx) {
    Rng rng(Rng::mix(seed, static_cast<std::uint64_t>(bidx)));
    const long long lo = bidx * block, hi = std::min(area_samples, lo + block);
    long long h = 0;
    for (long long i = lo; i < hi; ++i) {
      const double x = rng.uniform_in(-bx, bx);
      const double y = rng.uniform_in(-by, by);
      if (member(x, y)) ++h;
    }
    hits_block[bidx] = h;
  }
  long long hits = 0;
  for (long long h : hits_block) hits += h;
  const double boxarea = 4.0 * bx * by;
  const double p = area_samples > 0 ? static_cast<double>(hits) / area_samples : 0.0;
  rep.area = p * boxarea;
  rep.area_se = boxarea * std::sqrt(std::max(p * (1.0 - p), 0.0) / std::max<long long>(area_samples, 1));
  return rep;
}

}  // namespace nearres
