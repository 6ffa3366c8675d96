#pragma once

#include <memory>
#include <string>
#include <vector>

#include "nearres/helical.hpp"
#include "nearres/lattice.hpp"

namespace nearres {

// Immutable truncation lattice shared by every field of one run: modes with
// 0 < |n_adj| < R in lexicographic order, with cached adjusted vectors and a
// dense box lookup.
class ModeSet {
 public:
  static std::shared_ptr<const ModeSet> create(const TorusGeometry& geom, const BallRadius& r,
                                               long long cap = kDefaultModeCap);

  const TorusGeometry& geom() const { return geom_; }
  double radius() const { return radius_; }
  int size() const { return static_cast<int>(modes_.size()); }
  const WaveVector& mode(int i) const { return modes_[i]; }
  const std::vector<WaveVector>& modes() const { return modes_; }
  int index_of(const Vec3i& n) const;  // -1 if absent
  int neg_index(int i) const { return neg_index_[i]; }

 private:
  TorusGeometry geom_;
  double radius_ = 0.0;
  std::vector<WaveVector> modes_;
  std::vector<int> neg_index_;
  long long b1_ = 0, b2_ = 0, b3_ = 0;  // lookup box half-extents
  std::vector<int> lookup_;             // dense (2b1+1)(2b2+1)(2b3+1) -> index
};

// Truncated spectral velocity field: one complex 3-vector per mode of a
// shared ModeSet.  Fields are values; transformations return new fields.
struct SpectralField {
  std::shared_ptr<const ModeSet> basis;
  std::vector<Vec3c> coeff;

  static SpectralField zero(std::shared_ptr<const ModeSet> basis);
  const Vec3c& at(const Vec3i& n) const;  // throws if outside the ball
  void set(const Vec3i& n, const Vec3c& v);
};

// (|T^3| sum |n_adj|^{2s} |u_n|^2)^{1/2}, lexicographic summation order
double hs_norm(const SpectralField& f, double s);
double hs_norm_sq(const SpectralField& f, double s);

// max_n |conj(u_n) - u_{-n}|
double reality_residual(const SpectralField& f);
// max_n |n_adj . u_n| / (|n_adj| |u_n|)
double divergence_residual(const SpectralField& f);

// Reality- and divergence-enforced random field with |u_n| ~ |n_adj|^{-s-2},
// rescaled so hs_norm(f, s) == amplitude; deterministic in seed.
SpectralField random_field(std::shared_ptr<const ModeSet> basis, double s, double amplitude,
                           std::uint64_t seed);

// u = e^{-Omega t L} U per mode (and inverse)
SpectralField to_transformed(const SpectralField& U, double omega, double t);
SpectralField from_transformed(const SpectralField& u, double omega, double t);

// text snapshot format: "n1 n2 n3 reU1 imU1 reU2 imU2 reU3 imU3" per mode,
// lexicographic order, 17 significant digits
void save_field(const SpectralField& f, const std::string& path);
SpectralField load_field(std::shared_ptr<const ModeSet> basis, const std::string& path);

}  // namespace nearres
