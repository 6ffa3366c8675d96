#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "nearres/lattice.hpp"

namespace nearres {

// Sublevel-set problem for F_{n,s1,s2}(k) = s1*n3/|n| + s2*k3/|k| + m3/|m|,
// m = -n-k, over the closed annulus |n|/2 <= |k| <= |n| (adjusted norms,
// continuous k).  delta is normally in [0, 1/2); tests may override.
struct SublevelProblem {
  TorusGeometry geom;
  Vec3i n{0, 0, 0};
  int sigma1 = 1;
  int sigma2 = 1;
  double delta = 0.0;
};

// F at a continuous point (k given in integer-lattice coordinates; the
// adjusted map is applied inside).  Throws near the singular points {0,-n}.
double f_value(const SublevelProblem& prob, const Vec3d& k);

struct McResult {
  double estimate = 0.0;
  double std_error = 0.0;
  long long hits = 0;
  long long samples = 0;
};

// Monte-Carlo volume of the sublevel set in k-space: uniform samples in the
// bounding box of the adjusted annulus, indicator |F| <= delta, scaled by
// box volume and the l1*l2 Jacobian.  Block-seeded, so the estimate is
// identical for any thread count.
McResult volume_mc(const SublevelProblem& prob, long long samples, std::uint64_t seed);

// l1*l2*|n|^3 * (delta + delta*log+(1/(delta + 2|n3|/|n|))), unit constant
double theorem_volume_bound(const SublevelProblem& prob);

// quartic in lambda_k whose positive part is the squared azimuthal Jacobian
double q_quartic(double lambda_k, double theta_k, double c_m, double c_n, double theta_n);

// c_m as a function of the azimuth: -(lambda_k c_k + c_n)/lambda_m
double azimuth_to_cm(double lambda_k, double theta_k, double phi_k, double theta_n,
                     double phi_n);

struct PiProducts {
  double il = 0.0;  // (a-c)(b-d)
  double ec = 0.0;  // (a-d)(b-c)
  double sp = 0.0;  // (a-b)(c-d)
};
PiProducts pi_products(double a, double b, double c, double d);

// All four lambda_k zeros of the quartic, cosine form
// (c_n c_k - C^{sk,sn} c_m)/(c_m^2 - c_k^2) with C^{sk,sn} =
// cos(theta_m + sk*theta_k + sn*theta_n), ordered (++, +-, -+, --).
// Throws std::domain_error on degenerate configurations.
std::array<double, 4> lambda_roots(double c_n, double c_k, double c_m, double theta_n,
                                   double theta_k, double theta_m);

struct CorrespondenceResidual {
  double res_first = 0.0;   // max over permutations and product types
  double res_second = 0.0;  // after independent descending sorts
  bool coset_ok = false;    // sign-table classification of the sorting coset
};
CorrespondenceResidual correspondence_check(double theta_n, double theta_k, double theta_m);

// incomplete elliptic integral of the first kind, adaptive Gauss-Kronrod
double elliptic_f(double psi, double k);

// int over (b, y] of dl / sqrt(-(l-a)(l-b)(l-c)(l-d)) for a > y > b > c > d,
// endpoint singularity removed by the sqrt substitution
double quartic_edge_integral(double a, double b, double c, double d, double y);

// Q(theta_k, c_m) = |c_m| int_{1/2}^{1} dl / sqrt(q) with the lambda range
// split at the quartic roots and arcsine-type substitutions at the singular
// endpoints
double q_integral(double c_n, double c_k, double c_m);

struct QBoundPoint {
  double c_n = 0.0, c_k = 0.0, c_m = 0.0;
  double q_value = 0.0;
  double general_unit = 0.0;  // (1 + log sqrt(PI_IL/PI_EC)) / sqrt(PI_IL), sorted quartet
  double sharp_unit = 0.0;    // 1 / sqrt(PI_IL)
  bool sharp_applies = false; // |c_n| < min{|c_k|, |c_m|}
};

struct QBoundReport {
  std::vector<QBoundPoint> points;
  double k_general = 0.0;  // fitted: max Q / general_unit
  double k_sharp = 0.0;    // fitted over sharp_applies points
  int skipped = 0;         // degenerate grid points
};

QBoundReport q_integral_bound_check(const std::vector<std::array<double, 3>>& cn_ck_cm_grid);

}  // namespace nearres
