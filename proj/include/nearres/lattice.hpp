#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nearres/types.hpp"

namespace nearres {

// Exact nonnegative rational p/q, used for tie-free lattice comparisons when
// aspect ratios and radii are given as decimal strings.
struct Rational {
  long long p = 1;
  long long q = 1;
};

// Parses a plain decimal string ("2", "1.5", "0.25").  Exponent forms fall
// back to the double-only path.
std::optional<Rational> parse_decimal(const std::string& s);

// Flat torus with periods (2*pi*l1, 2*pi*l2, 2*pi).  The accent-check map is
// n -> (n1/l1, n2/l2, n3).
struct TorusGeometry {
  double l1 = 1.0;
  double l2 = 1.0;
  // exact decimal form when available; comparisons then avoid floating fuzz
  bool exact = true;
  long long p1 = 1, q1 = 1, p2 = 1, q2 = 1;  // l1 = p1/q1, l2 = p2/q2

  static TorusGeometry unit() { return TorusGeometry{}; }
  static TorusGeometry from_doubles(double l1, double l2);
  static TorusGeometry from_strings(const std::string& l1, const std::string& l2);

  double volume() const;  // |T^3| = (2*pi)^3 * l1 * l2

  Vec3d adjust_vec(const Vec3i& n) const {
    return {static_cast<double>(n[0]) / l1, static_cast<double>(n[1]) / l2,
            static_cast<double>(n[2])};
  }
  double norm2(const Vec3i& n) const {
    const Vec3d a = adjust_vec(n);
    return dot(a, a);
  }

  // |n_adj|^2 as an exact integer over the implicit denominator (p1*p2)^2,
  // or nullopt when the exact path is unavailable.
  std::optional<__int128> norm2_num(const Vec3i& n) const;

  // sign of |a_adj|^2 - |b_adj|^2, exact when possible
  int cmp_norm2(const Vec3i& a, const Vec3i& b) const;
  // sign of |n_adj|^2 - r^2
  int cmp_norm2_vs_r2(const Vec3i& n, double r, const std::optional<Rational>& r_exact) const;
};

struct WaveVector {
  Vec3i n{0, 0, 0};
  Vec3d adjusted{0, 0, 0};
  double norm = 0.0;
};

WaveVector adjust(const Vec3i& n, const TorusGeometry& geom);

struct BallRadius {
  double value = 0.0;
  std::optional<Rational> exact;
  static BallRadius from_double(double r) { return {r, std::nullopt}; }
  static BallRadius from_string(const std::string& s);
};

inline constexpr long long kDefaultModeCap = 4'000'000;

// All n in Z^3 \ {0} with |n_adj| < R (strict), in lexicographic order on
// (n1,n2,n3).  Throws if the count would exceed `cap`.
std::vector<Vec3i> modes_in_ball(const BallRadius& r, const TorusGeometry& geom,
                                 long long cap = kDefaultModeCap);

// Dyadic shell index i >= 1 with 2^(i-1) <= |k_adj| < 2^i; 0 for |k_adj| in
// (0,1).  Throws on the zero vector.
int annulus_index(const WaveVector& k);

}  // namespace nearres
