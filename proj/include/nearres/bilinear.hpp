#pragma once

#include <memory>
#include <vector>

#include "nearres/field.hpp"
#include "nearres/resonance.hpp"

namespace nearres {

// Precomputed triad indicator for one (ModeSet, BandwidthSpec): for each
// output mode p, the ordered list of admissible (k, m = p - k) index pairs
// with 1_N(-p, k, m) = 1.  Inner order is lexicographic in k, so the
// parallel evaluation is bitwise identical for any thread count.
class TriadTable {
 public:
  static std::shared_ptr<const TriadTable> build(std::shared_ptr<const ModeSet> basis,
                                                 const BandwidthSpec& spec);

  const ModeSet& basis() const { return *basis_; }
  std::shared_ptr<const ModeSet> basis_ptr() const { return basis_; }
  const BandwidthSpec& spec() const { return spec_; }

  struct Pair {
    int k;
    int m;
  };
  const Pair* pairs_begin(int p) const { return pairs_.data() + offsets_[p]; }
  const Pair* pairs_end(int p) const { return pairs_.data() + offsets_[p + 1]; }
  std::size_t pair_count() const { return pairs_.size(); }

 private:
  std::shared_ptr<const ModeSet> basis_;
  BandwidthSpec spec_;
  std::vector<std::size_t> offsets_;
  std::vector<Pair> pairs_;
};

// NR-restricted Galerkin bilinear form: coefficient at p is
// leray_project(p, sum_{k+m=p} i (U_k . m_adj) V_m 1_N(-p,k,m)), all three
// modes inside the truncation ball.  OpenMP-parallel over output modes.
SpectralField bilinear(const SpectralField& U, const SpectralField& V, const TriadTable& table);

// Serial reference: same Galerkin sum evaluated without the triad table or
// threading, recomputing the indicator per pair.  Kept for testing and the
// kernel benchmark; outputs are bitwise identical to bilinear().
SpectralField bilinear_serial(const SpectralField& U, const SpectralField& V,
                              const BandwidthSpec& spec);

// e^{-tau L} B(e^{tau L} u, e^{tau L} v) with the restricted B
SpectralField bilinear_transformed(double tau, const SpectralField& u, const SpectralField& v,
                                   const TriadTable& table);

// <D^s B(u,v), D^s w> for div-free w, evaluated as the direct triad sum
double trilinear(const SpectralField& u, const SpectralField& v, const SpectralField& w,
                 double s, const TriadTable& table);

// |<D^s B(u,v), D^s w>| divided by the right side of the 2D-like trilinear
// estimate with unit constant.
double estimate_ratio_2d(const SpectralField& u, const SpectralField& v, const SpectralField& w,
                         double s, const TriadTable& table);

}  // namespace nearres
