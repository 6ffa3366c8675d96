#pragma once

#include <optional>
#include <span>
#include <vector>

#include "nearres/helical.hpp"
#include "nearres/lattice.hpp"

namespace nearres {

struct SignTriple {
  int s1 = 1, s2 = 1, s3 = 1;  // each +1 or -1
};

enum class BandwidthMode { theorem, constant, zero, all_pass };

// Bandwidth rule for the near-resonance indicator.  Theorem mode solves
// delta*log(1/delta) = c_hat / max{|n|,|k|,|m|} on the increasing branch
// (0, 1/e); zero mode is the exact-resonance set; all_pass makes the
// indicator identically 1 on convolution triads.
struct BandwidthSpec {
  BandwidthMode mode = BandwidthMode::theorem;
  double c_hat = 1.0;
  double cap = 0.49;
  double const_delta = 0.0;
};

// sigma1*n3/|n| + sigma2*k3/|k| + sigma3*m3/|m| on adjusted vectors.
// Defined for any nonzero n,k,m; the convolution condition is not required.
double triplet_value(const WaveVector& n, const WaveVector& k, const WaveVector& m,
                     const SignTriple& s);

// min over the 8 sign triples of |triplet_value|; computed over the 4
// patterns with sigma3 = + (negation symmetry).
double min_triplet(const WaveVector& n, const WaveVector& k, const WaveVector& m);

// Solves d*log(1/d) = c on the increasing branch (0, 1/e) by bisection;
// returns cap when c >= 1/e.  Total on c >= 0 with the 0*log(0)=0 convention.
double solve_bandwidth_branch(double c, double cap);

// delta(n,k,m) under `spec`; +infinity in all_pass mode.
double bandwidth(const WaveVector& n, const WaveVector& k, const WaveVector& m,
                 const BandwidthSpec& spec);

// true iff min_triplet <= delta.  Requires n+k+m = 0 and all nonzero.
bool is_near_resonant(const WaveVector& n, const WaveVector& k, const WaveVector& m,
                      const BandwidthSpec& spec);

enum class TriadOrdering { none, N0 };

// All k with (n, k, -n-k) in the NR set.  With ordering N0 additionally
// |n| >= |k| >= |k+n| on adjusted norms (ties kept; exact comparisons when
// the geometry permits) and the search box is implied by |k| <= |n|.  With
// ordering none a search radius is required.
std::vector<Vec3i> enumerate_triads_for(const Vec3i& n, const TorusGeometry& geom,
                                        const BandwidthSpec& spec, TriadOrdering ordering,
                                        std::optional<double> radius = std::nullopt);

long long count_triads_n0(const Vec3i& n, const TorusGeometry& geom, const BandwidthSpec& spec);

struct CountRow {
  Vec3i n;
  double norm = 0.0;
  long long count = 0;
  double bound = 0.0;  // C * |n| with C fitted on the smallest |n| in the list
  double ratio = 0.0;  // count / bound
};

// N0-ordered counts for each n, with the linear-growth reference bound
// C*|n|, C fitted on the entry of smallest norm.
std::vector<CountRow> count_report(std::span<const Vec3i> n_list, const TorusGeometry& geom,
                                   const BandwidthSpec& spec);

}  // namespace nearres
