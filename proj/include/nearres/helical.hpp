#pragma once

#include "nearres/lattice.hpp"
#include "nearres/types.hpp"

namespace nearres {

enum class HelicalSign { plus, minus };

inline int sign_value(HelicalSign s) { return s == HelicalSign::plus ? 1 : -1; }

inline constexpr double kDivergenceTol = 1e-10;

// v - n_adj (n_adj . v)/|n_adj|^2; idempotent, output orthogonal to n_adj.
Vec3c leray_project(const WaveVector& n, const Vec3c& v);

// Fourier symbol of the Coriolis operator on div-free input:
// (n3_adj/|n_adj|^2) (n_adj x v).  Rejects divergence violations beyond tol.
Vec3c coriolis_apply(const WaveVector& n, const Vec3c& v, double div_tol = kDivergenceTol);

// dispersion relation sigma * n3_adj / |n_adj|
double dispersion(const WaveVector& n, HelicalSign sigma);

// Deterministic helical basis: rt = (n_adj x e3)/| . | if n_adj not parallel
// to e3, else e1; rtt = (n_adj/|n_adj|) x rt; r∓ = (rt ± i rtt)/sqrt(2).
struct HelicalBasis {
  Vec3c r_plus;
  Vec3c r_minus;
};
HelicalBasis helical_basis(const WaveVector& n);

// P_n^sigma v = (v . conj(r^sigma)) r^sigma
Vec3c helical_project(const WaveVector& n, HelicalSign sigma, const Vec3c& v);

// e^{tau L} v as the rotation of v about axis n_adj/|n_adj| by angle
// (n3_adj/|n_adj|) tau (Rodrigues form); basis-free and norm-preserving.
Vec3c wave_exponential(const WaveVector& n, double tau, const Vec3c& v);

}  // namespace nearres
