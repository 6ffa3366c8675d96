#include "nearres/sublevel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "nearres/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nearres {

namespace {

constexpr double kDegeneracyGap = 1e-9;

// ---- adaptive Gauss-Kronrod 7/15 ----

const double kXgk[8] = {0.991455371120813, 0.949107912342759, 0.864864423359769,
                        0.741531185599394, 0.586087235467691, 0.405845151377397,
                        0.207784955007898, 0.0};
const double kWgk[8] = {0.022935322010529, 0.063092092629979, 0.104790010322250,
                        0.140653259715525, 0.169004726639267, 0.190350578064785,
                        0.204432940075298, 0.209482141084728};
const double kWg[4] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                       0.417959183673469};

struct GkEstimate {
  double integral;
  double error;
};

template <class F>
GkEstimate gk15(const F& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double resg = 0.0, resk = 0.0;
  for (int j = 0; j < 8; ++j) {
    const double x = h * kXgk[j];
    const double fv = (j == 7) ? f(c) : f(c - x) + f(c + x);
    resk += kWgk[j] * fv;
    if (j % 2 == 1) resg += kWg[j / 2] * fv;
  }
  if (!std::isfinite(resg)) resg = resk;  // Gauss nodes may straddle removed singularities
  return {resk * h, std::abs(resk - resg) * h};
}

template <class F>
double adaptive_gk(const F& f, double a, double b, double rel_tol, double abs_floor,
                   int depth = 0) {
  const GkEstimate e = gk15(f, a, b);
  if (depth >= 48 || e.error <= rel_tol * std::abs(e.integral) + abs_floor) return e.integral;
  const double c = 0.5 * (a + b);
  return adaptive_gk(f, a, c, rel_tol, abs_floor * 0.5, depth + 1) +
         adaptive_gk(f, c, b, rel_tol, abs_floor * 0.5, depth + 1);
}

double log_plus(double x) { return x > 1.0 ? std::log(x) : 0.0; }

}  // namespace

double f_value(const SublevelProblem& prob, const Vec3d& k) {
  const WaveVector wn = adjust(prob.n, prob.geom);
  const Vec3d ka = {k[0] / prob.geom.l1, k[1] / prob.geom.l2, k[2]};
  const Vec3d ma = {-wn.adjusted[0] - ka[0], -wn.adjusted[1] - ka[1], -wn.adjusted[2] - ka[2]};
  const double kn = norm(ka), mn = norm(ma);
  if (kn < 1e-300 || mn < 1e-300)
    throw std::invalid_argument("f_value: k at a singular point (0 or -n)");
  return prob.sigma1 * wn.adjusted[2] / wn.norm + prob.sigma2 * ka[2] / kn + ma[2] / mn;
}

McResult volume_mc(const SublevelProblem& prob, long long samples, std::uint64_t seed) {
  if (samples < 10'000) throw std::invalid_argument("volume_mc: need at least 1e4 samples");
  const WaveVector wn = adjust(prob.n, prob.geom);
  if (is_zero(prob.n)) throw std::invalid_argument("volume_mc: n must be nonzero");
  const double R = wn.norm;
  const double a = wn.adjusted[2] / wn.norm;  // fixed n-term of F
  const double lo2 = 0.25 * R * R, hi2 = R * R;

  const long long block = 1 << 16;
  const long long nblocks = (samples + block - 1) / block;
  std::vector<long long> hits_per_block(nblocks, 0);

#pragma omp parallel for schedule(dynamic)
  for (long long bidx = 0; bidx < nblocks; ++bidx) {
    Rng rng(Rng::mix(seed, static_cast<std::uint64_t>(bidx)));
    const long long lo = bidx * block;
    const long long hi = std::min(samples, lo + block);
    long long hits = 0;
    for (long long i = lo; i < hi; ++i) {
      const double x = rng.uniform_in(-R, R);
      const double y = rng.uniform_in(-R, R);
      const double z = rng.uniform_in(-R, R);
      const double r2 = x * x + y * y + z * z;
      if (r2 < lo2 || r2 > hi2) continue;
      const double mx = -wn.adjusted[0] - x;
      const double my = -wn.adjusted[1] - y;
      const double mz = -wn.adjusted[2] - z;
      const double m2 = mx * mx + my * my + mz * mz;
      if (m2 == 0.0 || r2 == 0.0) continue;
      const double f = a + prob.sigma2 * z / std::sqrt(r2) + mz / std::sqrt(m2);
      if (std::abs(f) <= prob.delta) ++hits;
    }
    hits_per_block[bidx] = hits;
  }
  long long hits = 0;
  for (long long h : hits_per_block) hits += h;

  const double boxvol = 8.0 * R * R * R * prob.geom.l1 * prob.geom.l2;
  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  McResult res;
  res.hits = hits;
  res.samples = samples;
  res.estimate = p * boxvol;
  res.std_error = boxvol * std::sqrt(std::max(p * (1.0 - p), 0.0) / samples);
  return res;
}

double theorem_volume_bound(const SublevelProblem& prob) {
  const WaveVector wn = adjust(prob.n, prob.geom);
  const double d = prob.delta;
  const double r = 2.0 * std::abs(wn.adjusted[2]) / wn.norm;
  const double body = (d <= 0.0) ? 0.0 : d + d * log_plus(1.0 / (d + r));
  return prob.geom.l1 * prob.geom.l2 * wn.norm * wn.norm * wn.norm * body;
}

double q_quartic(double lambda_k, double theta_k, double c_m, double c_n, double theta_n) {
  const double c_k = std::cos(theta_k);
  const double t1 = 2.0 * lambda_k * std::sin(theta_k) * std::sin(theta_n) * c_m * c_m;
  const double t2 =
      (lambda_k * lambda_k + 1.0 + 2.0 * lambda_k * c_n * c_k) * c_m * c_m -
      (lambda_k * c_k + c_n) * (lambda_k * c_k + c_n);
  return t1 * t1 - t2 * t2;
}

double azimuth_to_cm(double lambda_k, double theta_k, double phi_k, double theta_n,
                     double phi_n) {
  const double c_k = std::cos(theta_k), c_n = std::cos(theta_n);
  const double lm2 = lambda_k * lambda_k + 1.0 + 2.0 * lambda_k * c_k * c_n +
                     2.0 * lambda_k * std::sin(theta_k) * std::sin(theta_n) *
                         std::cos(phi_k - phi_n);
  if (lm2 <= 0.0) throw std::domain_error("azimuth_to_cm: degenerate lambda_m");
  return -(lambda_k * c_k + c_n) / std::sqrt(lm2);
}

PiProducts pi_products(double a, double b, double c, double d) {
  return {(a - c) * (b - d), (a - d) * (b - c), (a - b) * (c - d)};
}

std::array<double, 4> lambda_roots(double c_n, double c_k, double c_m, double theta_n,
                                   double theta_k, double theta_m) {
  const double s2[4] = {1.0, c_n * c_n, c_k * c_k, c_m * c_m};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (std::abs(s2[i] - s2[j]) < kDegeneracyGap)
        throw std::domain_error("lambda_roots: degenerate configuration (coincident squares)");
  const double den = c_m * c_m - c_k * c_k;
  std::array<double, 4> out{};
  int idx = 0;
  for (int sk = 1; sk >= -1; sk -= 2)
    for (int sn = 1; sn >= -1; sn -= 2) {
      const double c = std::cos(theta_m + sk * theta_k + sn * theta_n);
      out[idx++] = (c_n * c_k - c * c_m) / den;
    }
  return out;  // order: (++), (+-), (-+), (--)
}

namespace {

// descending-sort permutation of a 4-vector; perm[i] = source slot of rank i
std::array<int, 4> sort_perm(const std::array<double, 4>& v) {
  std::array<int, 4> idx{0, 1, 2, 3};
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return v[a] > v[b]; });
  return idx;
}

std::array<double, 4> apply_perm(const std::array<double, 4>& v, const std::array<int, 4>& p) {
  return {v[p[0]], v[p[1]], v[p[2]], v[p[3]]};
}

// Klein four-group on slots: identity and the three double transpositions
const std::array<std::array<int, 4>, 4> kKlein = {
    std::array<int, 4>{0, 1, 2, 3},
    std::array<int, 4>{2, 3, 0, 1},   // interlaced  a<->c, b<->d
    std::array<int, 4>{3, 2, 1, 0},   // enclosed    a<->d, b<->c
    std::array<int, 4>{1, 0, 3, 2}};  // separated   a<->b, c<->d

// sign-table representative: sorted order of slots (a, then b,c,d ranked)
std::array<int, 4> table_representative(int sg_ec, int sg_sp, int sg_il, bool& ok) {
  ok = true;
  if (sg_ec > 0 && sg_sp > 0 && sg_il > 0) return {0, 1, 2, 3};
  if (sg_ec < 0 && sg_sp < 0 && sg_il < 0) return {0, 3, 2, 1};
  if (sg_ec > 0 && sg_sp < 0 && sg_il < 0) return {0, 3, 1, 2};
  if (sg_ec < 0 && sg_sp > 0 && sg_il > 0) return {0, 2, 1, 3};
  if (sg_ec < 0 && sg_sp > 0 && sg_il < 0) return {0, 2, 3, 1};
  if (sg_ec > 0 && sg_sp < 0 && sg_il > 0) return {0, 1, 3, 2};
  ok = false;  // (+,+,-) and (-,-,+) cannot occur
  return {0, 1, 2, 3};
}

}  // namespace

CorrespondenceResidual correspondence_check(double theta_n, double theta_k, double theta_m) {
  const double c_n = std::cos(theta_n), c_k = std::cos(theta_k), c_m = std::cos(theta_m);
  std::array<double, 4> cvec{}, svec{1.0, c_n * c_n, c_k * c_k, c_m * c_m};
  int idx = 0;
  for (int sk = 1; sk >= -1; sk -= 2)
    for (int sn = 1; sn >= -1; sn -= 2)
      cvec[idx++] = std::cos(theta_m + sk * theta_k + sn * theta_n);

  CorrespondenceResidual res;
  // all 24 permutations, applied to both quartets simultaneously
  std::array<int, 4> perm{0, 1, 2, 3};
  std::sort(perm.begin(), perm.end());
  do {
    const auto cp = apply_perm(cvec, perm);
    const auto sp = apply_perm(svec, perm);
    const PiProducts pc = pi_products(cp[0], cp[1], cp[2], cp[3]);
    const PiProducts ps = pi_products(sp[0], sp[1], sp[2], sp[3]);
    res.res_first = std::max(res.res_first, std::abs(pc.il - 4.0 * ps.il));
    res.res_first = std::max(res.res_first, std::abs(pc.ec - 4.0 * ps.ec));
    res.res_first = std::max(res.res_first, std::abs(pc.sp - 4.0 * ps.sp));
  } while (std::next_permutation(perm.begin(), perm.end()));

  const auto cs = apply_perm(cvec, sort_perm(cvec));
  const auto ss = apply_perm(svec, sort_perm(svec));
  const PiProducts pc = pi_products(cs[0], cs[1], cs[2], cs[3]);
  const PiProducts ps = pi_products(ss[0], ss[1], ss[2], ss[3]);
  res.res_second = std::max({std::abs(pc.il - 4.0 * ps.il), std::abs(pc.ec - 4.0 * ps.ec),
                             std::abs(pc.sp - 4.0 * ps.sp)});

  // coset classification: sorted(C) must be a Klein-group rearrangement of
  // the sign-table representative applied to C
  const PiProducts praw = pi_products(cvec[0], cvec[1], cvec[2], cvec[3]);
  bool ok = true;
  const auto rep = table_representative(praw.ec > 0 ? 1 : -1, praw.sp > 0 ? 1 : -1,
                                        praw.il > 0 ? 1 : -1, ok);
  if (ok) {
    const auto target = apply_perm(cvec, rep);
    bool match = false;
    for (const auto& g : kKlein) match = match || (apply_perm(target, g) == cs);
    ok = match;
  }
  res.coset_ok = ok;
  return res;
}

double elliptic_f(double psi, double k) {
  if (!(k >= 0.0) || k >= 1.0) throw std::invalid_argument("elliptic_f: need 0 <= k < 1");
  if (psi == 0.0) return 0.0;
  const double k2 = k * k;
  auto f = [k2](double x) {
    const double s = std::sin(x);
    return 1.0 / std::sqrt(1.0 - k2 * s * s);
  };
  return adaptive_gk(f, 0.0, psi, 1e-13, 1e-300);
}

double quartic_edge_integral(double a, double b, double c, double d, double y) {
  if (!(a > y && y > b && b > c && c > d))
    throw std::invalid_argument("quartic_edge_integral: need a > y > b > c > d");
  // substitute l = b + s^2: integrand 2/sqrt((a-l)(l-c)(l-d)), smooth on (0, sqrt(y-b)]
  auto f = [&](double s) {
    const double l = b + s * s;
    return 2.0 / std::sqrt((a - l) * (l - c) * (l - d));
  };
  return adaptive_gk(f, 0.0, std::sqrt(y - b), 1e-12, 1e-300);
}

namespace {

// int over [lo,hi] of dl/sqrt(-(l-r1)(l-r2)(l-r3)(l-r4)) where [lo,hi] lies
// inside one positivity component whose (possibly) singular endpoints are
// roots; sqrt substitutions peel the 1/sqrt endpoints
double quartic_component_integral(const std::array<double, 4>& r, double lo, double hi,
                                  bool lo_singular, bool hi_singular) {
  if (hi - lo < 1e-14) return 0.0;
  auto poly = [&](double l) {
    return -(l - r[0]) * (l - r[1]) * (l - r[2]) * (l - r[3]);
  };
  auto plain = [&](double l) {
    const double p = poly(l);
    return p > 0.0 ? 1.0 / std::sqrt(p) : 0.0;
  };
  // reduced cubic factor after dividing out the singular root
  auto reduced = [&](double root, double l) {
    double p = -1.0;
    for (double rr : r)
      if (rr != root) p *= (l - rr);
    return p;
  };
  if (lo_singular && hi_singular) {
    const double mid = 0.5 * (lo + hi);
    return quartic_component_integral(r, lo, mid, true, false) +
           quartic_component_integral(r, mid, hi, false, true);
  }
  if (lo_singular) {
    auto f = [&](double s) {
      const double l = lo + s * s;
      const double p = -reduced(lo, l);  // sign: poly = -(l-lo)*prod_others
      return p > 0.0 ? 2.0 / std::sqrt(p) : 0.0;
    };
    return adaptive_gk(f, 0.0, std::sqrt(hi - lo), 1e-11, 1e-300);
  }
  if (hi_singular) {
    auto f = [&](double s) {
      const double l = hi - s * s;
      const double p = reduced(hi, l);
      return p > 0.0 ? 2.0 / std::sqrt(p) : 0.0;
    };
    return adaptive_gk(f, 0.0, std::sqrt(hi - lo), 1e-11, 1e-300);
  }
  return adaptive_gk(plain, lo, hi, 1e-11, 1e-300);
}

}  // namespace

double q_integral(double c_n, double c_k, double c_m) {
  const double theta_n = std::acos(c_n), theta_k = std::acos(c_k), theta_m = std::acos(c_m);
  const auto roots = lambda_roots(c_n, c_k, c_m, theta_n, theta_k, theta_m);
  std::array<double, 4> srt = roots;
  std::sort(srt.begin(), srt.end(), std::greater<double>());
  // positivity set of -(l-L1)(l-L2)(l-L3)(l-L4): (L4,L3) U (L2,L1)
  const double pref = std::abs(c_m) / std::abs(c_m * c_m - c_k * c_k);
  double total = 0.0;
  const std::array<std::pair<double, double>, 2> comps = {
      std::make_pair(srt[3], srt[2]), std::make_pair(srt[1], srt[0])};
  for (const auto& [clo, chi] : comps) {
    const double lo = std::max(clo, 0.5);
    const double hi = std::min(chi, 1.0);
    if (hi <= lo) continue;
    total += quartic_component_integral(srt, lo, hi, lo == clo, hi == chi);
  }
  return pref * total;
}

QBoundReport q_integral_bound_check(const std::vector<std::array<double, 3>>& grid) {
  QBoundReport rep;
  for (const auto& g : grid) {
    const double c_n = g[0], c_k = g[1], c_m = g[2];
    const double s2[4] = {1.0, c_n * c_n, c_k * c_k, c_m * c_m};
    bool degenerate = false;
    for (int i = 0; i < 4 && !degenerate; ++i)
      for (int j = i + 1; j < 4; ++j)
        if (std::abs(s2[i] - s2[j]) < kDegeneracyGap) {
          degenerate = true;
          break;
        }
    if (degenerate || c_n == 0.0 || c_k == 0.0 || c_m == 0.0) {
      ++rep.skipped;
      continue;
    }
    QBoundPoint pt;
    pt.c_n = c_n;
    pt.c_k = c_k;
    pt.c_m = c_m;
    pt.q_value = q_integral(c_n, c_k, c_m);
    std::array<double, 4> s{1.0, c_n * c_n, c_k * c_k, c_m * c_m};
    std::sort(s.begin(), s.end(), std::greater<double>());
    const PiProducts ps = pi_products(s[0], s[1], s[2], s[3]);
    pt.general_unit = (1.0 + std::log(std::sqrt(ps.il / ps.ec))) / std::sqrt(ps.il);
    pt.sharp_unit = 1.0 / std::sqrt(ps.il);
    pt.sharp_applies = std::abs(c_n) < std::min(std::abs(c_k), std::abs(c_m));
    rep.points.push_back(pt);
    rep.k_general = std::max(rep.k_general, pt.q_value / pt.general_unit);
    if (pt.sharp_applies) rep.k_sharp = std::max(rep.k_sharp, pt.q_value / pt.sharp_unit);
  }
  return rep;
}

}  // namespace nearres
