#include "nearres/helical.hpp"

#include <cmath>
#include <stdexcept>

namespace nearres {

namespace {
void require_nonzero(const WaveVector& n, const char* who) {
  if (is_zero(n.n)) throw std::invalid_argument(std::string(who) + ": zero wavevector");
}
}  // namespace

Vec3c leray_project(const WaveVector& n, const Vec3c& v) {
  require_nonzero(n, "leray_project");
  const double inv = 1.0 / dot(n.adjusted, n.adjusted);
  const Complex s = dot(v, n.adjusted) * inv;
  return {v[0] - s * n.adjusted[0], v[1] - s * n.adjusted[1], v[2] - s * n.adjusted[2]};
}

Vec3c coriolis_apply(const WaveVector& n, const Vec3c& v, double div_tol) {
  require_nonzero(n, "coriolis_apply");
  const double nn = dot(n.adjusted, n.adjusted);
  const Complex div = dot(v, n.adjusted);
  const double vmag = std::sqrt(abs2(v));
  if (std::abs(div) > div_tol * n.norm * vmag && vmag > 0.0)
    throw std::invalid_argument("coriolis_apply: input not divergence-free");
  const double c = n.adjusted[2] / nn;
  const Vec3c w = cross(n.adjusted, v);
  return {c * w[0], c * w[1], c * w[2]};
}

double dispersion(const WaveVector& n, HelicalSign sigma) {
  require_nonzero(n, "dispersion");
  return sign_value(sigma) * n.adjusted[2] / n.norm;
}

HelicalBasis helical_basis(const WaveVector& n) {
  require_nonzero(n, "helical_basis");
  const Vec3d a = {n.adjusted[0] / n.norm, n.adjusted[1] / n.norm, n.adjusted[2] / n.norm};
  Vec3d rt;
  const double hmag = std::hypot(a[0], a[1]);
  if (hmag > 0.0) {
    // (a x e3)/|a x e3| = (a2, -a1, 0)/hmag
    rt = {a[1] / hmag, -a[0] / hmag, 0.0};
  } else {
    rt = {1.0, 0.0, 0.0};
  }
  const Vec3d rtt = cross(a, rt);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  HelicalBasis b;
  for (int j = 0; j < 3; ++j) {
    b.r_minus[j] = Complex(rt[j], rtt[j]) * inv_sqrt2;
    b.r_plus[j] = Complex(rt[j], -rtt[j]) * inv_sqrt2;
  }
  return b;
}

Vec3c helical_project(const WaveVector& n, HelicalSign sigma, const Vec3c& v) {
  const HelicalBasis b = helical_basis(n);
  const Vec3c& r = (sigma == HelicalSign::plus) ? b.r_plus : b.r_minus;
  const Complex amp = herm(v, r);
  return {amp * r[0], amp * r[1], amp * r[2]};
}

Vec3c wave_exponential(const WaveVector& n, double tau, const Vec3c& v) {
  require_nonzero(n, "wave_exponential");
  const Vec3d a = {n.adjusted[0] / n.norm, n.adjusted[1] / n.norm, n.adjusted[2] / n.norm};
  const double phi = (n.adjusted[2] / n.norm) * tau;
  const double c = std::cos(phi), s = std::sin(phi);
  const Vec3c axv = cross(a, v);
  const Complex adv = dot(v, a);
  Vec3c out;
  for (int j = 0; j < 3; ++j) out[j] = c * v[j] + s * axv[j] + (1.0 - c) * adv * a[j];
  return out;
}

}  // namespace nearres
