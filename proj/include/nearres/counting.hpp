#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nearres/sublevel.hpp"

namespace nearres {

struct CountInterval {
  long long strict_count = 0;   // |F| <= delta - margin
  long long relaxed_count = 0;  // |F| <= delta + margin
};

// Exact #{k in Z^3 : k in V_{n,s1,s2}} by box scan; annulus membership uses
// exact rational norms where available, threshold ties (within 1e-12) are
// reported as an interval.  Guard: |n_adj| <= 256.
CountInterval count_sublevel_integers(const SublevelProblem& prob);

struct LowerBoundResult {
  long long exact_count = 0;
  long long formula_count = 0;   // slow_fast: per-slab closed form (exact match)
  double scaling_expr = 0.0;     // the reported asymptotic order
  bool all_members = true;       // every point passed the NR-condition checks
  long long checked = 0;
};

// Slow-fast family n = (-2N, 0, 0), unit aspect ratios: enumerates the
// explicit near-resonant set with k1 in [N, N + (N/3) min{delta N/|k3|, 1}],
// max(|k2|,|k3|) <= N, k3 != 0, verifying localisation and the triplet bound
// pointwise.  exact_count equals formula_count by construction of the slab
// count (2N+1)(1 + floor(.)).
LowerBoundResult lower_bound_slow_fast(long long N, double delta);

// Fast-fast family n = (-2N, 0, -1); requires delta >= 1/(2N)^2.
LowerBoundResult lower_bound_fast_fast(long long N, double delta);

// Axis-aligned ellipse with coordinates that are exact multiples of
// 1/kCurveDen, so lattice membership is integer arithmetic.
inline constexpr long long kCurveDen = 64;
struct Ellipse {
  long long cx = 0, cy = 0, a = 0, b = 0;  // units of 1/kCurveDen; a,b > 0
  double center_x() const { return static_cast<double>(cx) / kCurveDen; }
  double center_y() const { return static_cast<double>(cy) / kCurveDen; }
  double semi_a() const { return static_cast<double>(a) / kCurveDen; }
  double semi_b() const { return static_cast<double>(b) / kCurveDen; }
  double area() const;
  double perimeter() const;
  // -1 strictly inside, 0 on the curve, +1 strictly outside (exact)
  int side(long long x, long long y) const;
};

// Disjoint Jordan curves organised as a containment forest with alternating
// membership: the region between a curve at odd depth and its children
// belongs to S.  Bounded, open, with boundary exactly the curve union.
struct CurveFamily {
  std::vector<Ellipse> curves;
  std::vector<int> parent;  // -1 for roots; must be consistent with geometry
  double area() const;      // analytic Area(S)
  double length() const;    // analytic Len(dS) = sum of perimeters
};

struct JordanReport {
  long long count = 0;  // #{Z^2 in cl(S)}
  double area = 0.0;
  double length = 0.0;
  long long exceptional = 0;  // |E|
  bool holds = false;         // count <= area + length + |E|
};

// Exact lattice count against the area + length + |E| bound.  Throws if the
// family cannot be certified disjoint by conservative bounding-circle
// arithmetic.
JordanReport jordan_count_check(const CurveFamily& fam);

// Seeded random disjoint-ellipse families; adversarial ones wrap tiny curves
// around lattice points to force the exceptional set.
CurveFamily random_curve_family(std::uint64_t seed);
CurveFamily adversarial_curve_family(std::uint64_t seed);

struct PlanarSliceReport {
  double k3 = 0.0;
  long long count = 0;        // #{Z^2 in S(k3)}, exact scan
  double area = 0.0;          // 2D Monte-Carlo area of S(k3) in k-space
  double area_se = 0.0;
  double bound_term = 0.0;    // sqrt(|n_adj|^2 - k3^2)
};

// Planar slice S(k3) of the sublevel set; requires the non-degeneracy
// hypothesis k3 (k3 + n3)(2 k3 + n3) != 0.
PlanarSliceReport planar_slice_check(const SublevelProblem& prob, double k3,
                                     long long area_samples, std::uint64_t seed);

}  // namespace nearres
