#include <doctest.h>

#include <algorithm>

#include "nearres/rng.hpp"
#include "nearres/sublevel.hpp"

using namespace nearres;

namespace {

const TorusGeometry kUnit = TorusGeometry::unit();

// independent oracle: complete elliptic integral K(k) by arithmetic-
// geometric mean
double agm_complete_k(double k) {
  double a = 1.0, b = std::sqrt(1.0 - k * k);
  for (int it = 0; it < 60 && std::abs(a - b) > 1e-16 * a; ++it) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return M_PI / (2.0 * a);
}

std::array<double, 3> random_cosines(Rng& rng) {
  while (true) {
    const double cn = rng.uniform_in(-0.95, 0.95);
    const double ck = rng.uniform_in(-0.95, 0.95);
    const double cm = rng.uniform_in(-0.95, 0.95);
    const double s2[4] = {1.0, cn * cn, ck * ck, cm * cm};
    bool ok = std::abs(cn) > 0.03 && std::abs(ck) > 0.03 && std::abs(cm) > 0.03;
    for (int i = 0; i < 4 && ok; ++i)
      for (int j = i + 1; j < 4; ++j)
        if (std::abs(s2[i] - s2[j]) < 1e-3) ok = false;
    if (ok) return {cn, ck, cm};
  }
}

}  // namespace

TEST_CASE("f_value: critical configuration, horizontal, azimuth reflection") {
  SublevelProblem prob;
  prob.geom = kUnit;
  prob.n = {0, 312, 25};
  prob.sigma1 = 1;
  prob.sigma2 = 1;
  CHECK(f_value(prob, {0.0, -156.0, -12.5}) ==
        doctest::Approx(-25.0 / 313.0).epsilon(1e-13));

  SublevelProblem hor;
  hor.geom = kUnit;
  hor.n = {5, 3, 0};
  for (int s1 : {1, -1})
    for (int s2 : {1, -1}) {
      hor.sigma1 = s1;
      hor.sigma2 = s2;
      CHECK(f_value(hor, {2.0, -7.0, 0.0}) == 0.0);
    }

  // G(r, phi) = G(r, 2 phi_n - phi): reflect k about the azimuth of n
  SublevelProblem ref;
  ref.geom = kUnit;
  ref.n = {3, 4, 5};
  ref.sigma1 = -1;
  ref.sigma2 = 1;
  const double phi_n = std::atan2(4.0, 3.0);
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    const double r = rng.uniform_in(0.5, 6.0);
    const double phi = rng.uniform_in(0, 2 * M_PI);
    const double k3 = rng.uniform_in(-4, 4);
    const Vec3d k1 = {r * std::cos(phi), r * std::sin(phi), k3};
    const double phi2 = 2.0 * phi_n - phi;
    const Vec3d k2 = {r * std::cos(phi2), r * std::sin(phi2), k3};
    CHECK(f_value(ref, k1) == doctest::Approx(f_value(ref, k2)).epsilon(1e-12));
  }
  CHECK_THROWS(f_value(ref, {0.0, 0.0, 0.0}));
}

TEST_CASE("volume_mc: delta=0 empty, giant delta fills the annulus, monotone") {
  SublevelProblem prob;
  prob.geom = kUnit;
  prob.n = {0, 0, 8};
  prob.sigma1 = 1;
  prob.sigma2 = 1;
  prob.delta = 0.0;
  CHECK(volume_mc(prob, 200000, 4).estimate == 0.0);

  prob.delta = 3.0;  // |F| <= 3 always: indicator is the annulus itself
  const McResult full = volume_mc(prob, 2000000, 4);
  const double annulus = (4.0 / 3.0) * M_PI * 512.0 * (1.0 - 0.125);
  CHECK(std::abs(full.estimate - annulus) < 4.0 * full.std_error + 1e-9);

  prob.delta = 0.05;
  const McResult lo = volume_mc(prob, 500000, 9);
  prob.delta = 0.1;
  const McResult hi = volume_mc(prob, 500000, 9);  // shared seed: coupled samples
  CHECK(lo.estimate <= hi.estimate);
  CHECK(lo.std_error > 0.0);
}

#ifdef _OPENMP
#include <omp.h>
TEST_CASE("volume_mc: estimate independent of thread count") {
  SublevelProblem prob;
  prob.geom = kUnit;
  prob.n = {0, 0, 8};
  prob.delta = 0.05;
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const McResult one = volume_mc(prob, 500000, 31);
  omp_set_num_threads(saved);
  const McResult many = volume_mc(prob, 500000, 31);
  CHECK(one.hits == many.hits);  // block seeding: identical for any thread count
  CHECK(one.estimate == many.estimate);
}
#endif

TEST_CASE("theorem_volume_bound: log clamp and small-delta shape") {
  SublevelProblem prob;
  prob.geom = kUnit;
  prob.n = {0, 0, 16};  // 2|n3|/|n| = 2 >= 1, so the log+ term vanishes
  prob.delta = 0.01;
  CHECK(theorem_volume_bound(prob) ==
        doctest::Approx(16.0 * 16.0 * 16.0 * 0.01).epsilon(1e-14));

  SublevelProblem hor;
  hor.geom = kUnit;
  hor.n = {16, 0, 0};  // n3 = 0: bound = |n|^3 (delta + delta log(1/delta))
  hor.delta = 1e-3;
  const double expect = 4096.0 * (1e-3 + 1e-3 * std::log(1.0 / 1e-3));
  CHECK(theorem_volume_bound(hor) == doctest::Approx(expect).epsilon(1e-13));
  hor.delta = 0.0;
  CHECK(theorem_volume_bound(hor) == 0.0);
}

TEST_CASE("volume_mc vs theorem bound across a small grid") {
  // light version of the acceptance sweep
  Rng dummy(0);
  const Vec3i ns[] = {{16, 0, 0}, {14, 0, 8}, {0, 0, 16}};
  for (const Vec3i& n : ns)
    for (double delta : {1e-2, 1e-1}) {
      SublevelProblem prob;
      prob.geom = kUnit;
      prob.n = n;
      prob.delta = delta;
      const McResult mc = volume_mc(prob, 400000, 17);
      const double bound = theorem_volume_bound(prob);
      CHECK(mc.estimate - 3.0 * mc.std_error <= 10.0 * bound);
    }
}

TEST_CASE("q_quartic: c_m = 0 closed form and the factored representation") {
  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    const double lam = rng.uniform_in(0.1, 2.0);
    const double tk = rng.uniform_in(0.05, M_PI - 0.05);
    const double tn = rng.uniform_in(0.05, M_PI - 0.05);
    const double cn = std::cos(tn), ck = std::cos(tk);
    CHECK(q_quartic(lam, tk, 0.0, cn, tn) ==
          doctest::Approx(-std::pow(lam * ck + cn, 4.0)).epsilon(1e-12));

    const double cm = rng.uniform_in(-1.0, 1.0);
    const double quad1 = (cm * cm - ck * ck) * lam * lam +
                         2.0 * (std::cos(tk + tn) * cm * cm - cn * ck) * lam + cm * cm - cn * cn;
    const double quad2 = (cm * cm - ck * ck) * lam * lam +
                         2.0 * (std::cos(tk - tn) * cm * cm - cn * ck) * lam + cm * cm - cn * cn;
    const double q = q_quartic(lam, tk, cm, cn, tn);
    CHECK(quad1 * quad2 == doctest::Approx(-q).epsilon(1e-11));
  }
}

TEST_CASE("q_quartic: vanishes on the azimuth manifold") {
  Rng rng(7);
  for (int t = 0; t < 200; ++t) {
    const double lam = rng.uniform_in(0.2, 1.8);
    const double tk = rng.uniform_in(0.1, M_PI - 0.1);
    const double tn = rng.uniform_in(0.1, M_PI - 0.1);
    const double phik = rng.uniform_in(0, 2 * M_PI);
    const double phin = rng.uniform_in(0, 2 * M_PI);
    double cm;
    try {
      cm = azimuth_to_cm(lam, tk, phik, tn, phin);
    } catch (const std::domain_error&) {
      continue;
    }
    const double q = q_quartic(lam, tk, cm, std::cos(tn), tn);
    const double jac = 2.0 * lam * std::sin(tk) * std::sin(tn) * std::sin(phik - phin) * cm * cm;
    CHECK(std::abs(q - jac * jac) < 1e-12 * (1.0 + q * q + jac * jac));
  }
}

TEST_CASE("pi_products: hand value, identity, K4 invariance, modulus range") {
  const PiProducts p = pi_products(4, 3, 2, 1);
  CHECK(p.il == 4.0);
  CHECK(p.ec == 3.0);
  CHECK(p.sp == 1.0);

  Rng rng(11);
  for (int t = 0; t < 500; ++t) {
    double a = rng.uniform_in(-5, 5), b = rng.uniform_in(-5, 5);
    double c = rng.uniform_in(-5, 5), d = rng.uniform_in(-5, 5);
    const PiProducts q = pi_products(a, b, c, d);
    const double scale = std::abs(q.il) + std::abs(q.ec) + std::abs(q.sp) + 1e-30;
    CHECK(std::abs(q.il - q.ec - q.sp) < 1e-13 * scale);
    // double transpositions leave all three products bitwise unchanged
    const PiProducts il = pi_products(c, d, a, b);
    const PiProducts ec = pi_products(d, c, b, a);
    const PiProducts sp = pi_products(b, a, d, c);
    for (const PiProducts& g : {il, ec, sp}) {
      CHECK(g.il == q.il);
      CHECK(g.ec == q.ec);
      CHECK(g.sp == q.sp);
    }
    // ordered quartet: 0 < k^2 = sp/il < 1
    double v[4] = {a, b, c, d};
    std::sort(v, v + 4, std::greater<double>());
    if (v[0] - v[1] > 1e-6 && v[1] - v[2] > 1e-6 && v[2] - v[3] > 1e-6) {
      const PiProducts s = pi_products(v[0], v[1], v[2], v[3]);
      CHECK(s.sp / s.il > 0.0);
      CHECK(s.sp / s.il < 1.0);
    }
  }
}

TEST_CASE("lambda_roots: zeros of q, cosine/sine agreement, pair signs") {
  Rng rng(13);
  for (int t = 0; t < 300; ++t) {
    const auto [cn, ck, cm] = random_cosines(rng);
    const double tn = std::acos(cn), tk = std::acos(ck), tm = std::acos(cm);
    const auto roots = lambda_roots(cn, ck, cm, tn, tk, tm);
    int idx = 0;
    for (int sk = 1; sk >= -1; sk -= 2)
      for (int sn = 1; sn >= -1; sn -= 2) {
        const double lam = roots[idx++];
        // root residual, normalised by the two squared brackets
        const double t1 = 2.0 * lam * std::sin(tk) * std::sin(tn) * cm * cm;
        const double t2 = (lam * lam + 1.0 + 2.0 * lam * cn * ck) * cm * cm -
                          (lam * ck + cn) * (lam * ck + cn);
        CHECK(std::abs(t1 * t1 - t2 * t2) < 1e-10 * (t1 * t1 + t2 * t2 + 1.0));
        // sine form
        const double sine_form = -std::sin(tm + sn * tn) / std::sin(tm - sk * tk);
        CHECK(lam == doctest::Approx(sine_form).epsilon(1e-11));
      }
    // Lambda^{+,s} Lambda^{-,s} (cm^2 - ck^2) < 0 for both s
    CHECK(roots[0] * roots[2] * (cm * cm - ck * ck) < 0.0);  // sn = +
    CHECK(roots[1] * roots[3] * (cm * cm - ck * ck) < 0.0);  // sn = -
  }
  CHECK_THROWS_AS(lambda_roots(0.5, 0.5, 0.2, std::acos(0.5), std::acos(0.5), std::acos(0.2)),
                  std::domain_error);
}

TEST_CASE("correspondence_check: degenerate angles and random identities") {
  const auto deg = correspondence_check(M_PI / 2, M_PI / 2, M_PI / 2);
  CHECK(deg.res_first < 1e-14);
  CHECK(deg.res_second < 1e-14);

  Rng rng(17);
  for (int t = 0; t < 1000; ++t) {
    const double tn = rng.uniform_in(0.02, M_PI - 0.02);
    const double tk = rng.uniform_in(0.02, M_PI - 0.02);
    const double tm = rng.uniform_in(0.02, M_PI - 0.02);
    const auto res = correspondence_check(tn, tk, tm);
    CHECK(res.res_first < 1e-12);
    CHECK(res.res_second < 1e-12);
    CHECK(res.coset_ok);
  }
}

TEST_CASE("elliptic_f: endpoints, AGM oracle, frozen reference") {
  CHECK(elliptic_f(0.7, 0.0) == doctest::Approx(0.7).epsilon(1e-14));
  CHECK(elliptic_f(0.0, 0.5) == 0.0);
  CHECK_THROWS(elliptic_f(0.3, 1.0));
  for (double k : {0.1, 0.3, 0.5, 0.7, 0.9, 0.99}) {
    CHECK(elliptic_f(M_PI / 2, k) == doctest::Approx(agm_complete_k(k)).epsilon(1e-12));
  }
  // frozen independent value
  CHECK(elliptic_f(M_PI / 2, 0.5) == doctest::Approx(1.6857503548125961).epsilon(1e-13));
  CHECK(elliptic_f(1.0, 0.7) == doctest::Approx(1.0811694656275113).epsilon(1e-12));
}

TEST_CASE("edge substitution identity against the elliptic form") {
  Rng rng(19);
  for (int t = 0; t < 100; ++t) {
    double v[4];
    for (double& x : v) x = rng.uniform_in(-4, 4);
    std::sort(v, v + 4, std::greater<double>());
    if (v[0] - v[1] < 0.05 || v[1] - v[2] < 0.05 || v[2] - v[3] < 0.05) {
      --t;
      continue;
    }
    const double y = rng.uniform_in(v[1] + 0.02 * (v[0] - v[1]), v[1] + 0.95 * (v[0] - v[1]));
    const double lhs = quartic_edge_integral(v[0], v[1], v[2], v[3], y);
    const PiProducts pp = pi_products(v[0], v[1], v[2], v[3]);
    const double g = 2.0 / std::sqrt(pp.il);
    const double y0 =
        std::sqrt((v[0] - v[2]) * (y - v[1]) / ((v[0] - v[1]) * (y - v[2])));
    const double rhs = g * elliptic_f(std::asin(y0), std::sqrt(pp.sp / pp.il));
    CHECK(std::abs(lhs - rhs) < 1e-8 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("q_integral: bounds with fitted constants, near-degenerate, symmetry") {
  // grid away from the degeneracies
  std::vector<std::array<double, 3>> grid;
  for (double cn : {-0.85, -0.45, 0.2, 0.6})
    for (double ck : {-0.7, -0.3, 0.35, 0.75})
      for (double cm : {-0.9, -0.5, 0.15, 0.55, 0.95}) grid.push_back({cn, ck, cm});
  const QBoundReport rep = q_integral_bound_check(grid);
  CHECK(rep.points.size() + rep.skipped == grid.size());
  CHECK(rep.points.size() > 40);
  CHECK(rep.k_general < 20.0);  // uniform constant, no blow-up across the grid
  CHECK(rep.k_sharp < 10.0);
  for (const QBoundPoint& p : rep.points) {
    CHECK(p.q_value >= 0.0);
    CHECK(p.q_value <= rep.k_general * p.general_unit * (1.0 + 1e-12));
    if (p.sharp_applies) CHECK(p.q_value <= rep.k_sharp * p.sharp_unit * (1.0 + 1e-12));
  }

  // near-degenerate c_m^2 -> c_k^2: the general bound absorbs the log growth
  std::vector<std::array<double, 3>> near;
  for (double gap : {3e-2, 1e-2, 3e-3})
    near.push_back({0.2, 0.6, 0.6 + gap});
  const QBoundReport nrep = q_integral_bound_check(near);
  for (const QBoundPoint& p : nrep.points)
    CHECK(p.q_value <= 1.5 * rep.k_general * p.general_unit);

  // cross-check the root-split quadrature against a brute-force midpoint
  // evaluation of |c_m| int 1/sqrt(q) away from the singular endpoints
  Rng rng(23);
  int nontrivial = 0;
  for (int t = 0; t < 200 && nontrivial < 6; ++t) {
    const auto [cn, ck, cm] = random_cosines(rng);
    const double q1 = q_integral(cn, ck, cm);
    if (q1 < 1e-9) continue;
    ++nontrivial;
    const double tn = std::acos(cn), tk = std::acos(ck);
    const int N = 2'000'000;
    double mid = 0.0;
    const double h = 0.5 / N;
    for (int i = 0; i < N; ++i) {
      const double lam = 0.5 + (i + 0.5) * h;
      const double q = q_quartic(lam, tk, cm, cn, tn);
      if (q > 0.0) mid += h / std::sqrt(q);
    }
    mid *= std::abs(cm);
    CHECK(q1 == doctest::Approx(mid).epsilon(2e-3));  // midpoint sqrt-edge error
  }
  CHECK(nontrivial == 6);
}
