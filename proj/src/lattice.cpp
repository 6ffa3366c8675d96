#include "nearres/lattice.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

namespace nearres {

namespace {

// exact-path magnitude guards (see norm2_num); conservative so every
// intermediate fits __int128
constexpr long long kMaxExactComponent = 100'000;
constexpr long long kMaxExactP = 100'000;
constexpr long long kMaxExactQ = 10'000;
constexpr long long kMaxExactRp = 10'000'000;
constexpr long long kMaxExactRq = 10'000;

}  // namespace

std::optional<Rational> parse_decimal(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::size_t i = 0;
  if (s[i] == '+') ++i;
  std::string digits;
  long long frac_digits = 0;
  bool seen_dot = false, seen_digit = false;
  for (; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '.') {
      if (seen_dot) return std::nullopt;
      seen_dot = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      seen_digit = true;
      digits.push_back(c);
      if (seen_dot) ++frac_digits;
    } else {
      return std::nullopt;  // exponents, signs mid-string, etc.
    }
  }
  if (!seen_digit || digits.size() > 17 || frac_digits > 9) return std::nullopt;
  long long p = 0;
  for (char c : digits) p = p * 10 + (c - '0');
  long long q = 1;
  for (long long d = 0; d < frac_digits; ++d) q *= 10;
  if (p <= 0) return std::nullopt;
  const long long g = std::gcd(p, q);
  return Rational{p / g, q / g};
}

TorusGeometry TorusGeometry::from_doubles(double l1, double l2) {
  if (!(l1 > 0.0) || !(l2 > 0.0) || !std::isfinite(l1) || !std::isfinite(l2))
    throw std::invalid_argument("aspect ratios must be positive finite");
  TorusGeometry g;
  g.l1 = l1;
  g.l2 = l2;
  g.exact = false;
  return g;
}

TorusGeometry TorusGeometry::from_strings(const std::string& l1, const std::string& l2) {
  TorusGeometry g;
  const auto r1 = parse_decimal(l1);
  const auto r2 = parse_decimal(l2);
  g.l1 = std::strtod(l1.c_str(), nullptr);
  g.l2 = std::strtod(l2.c_str(), nullptr);
  if (!(g.l1 > 0.0) || !(g.l2 > 0.0) || !std::isfinite(g.l1) || !std::isfinite(g.l2))
    throw std::invalid_argument("aspect ratios must be positive finite");
  if (r1 && r2 && r1->p <= kMaxExactP && r1->q <= kMaxExactQ && r2->p <= kMaxExactP &&
      r2->q <= kMaxExactQ) {
    g.exact = true;
    g.p1 = r1->p;
    g.q1 = r1->q;
    g.p2 = r2->p;
    g.q2 = r2->q;
  } else {
    g.exact = false;
  }
  return g;
}

double TorusGeometry::volume() const {
  const double two_pi = 2.0 * M_PI;
  return two_pi * two_pi * two_pi * l1 * l2;
}

std::optional<__int128> TorusGeometry::norm2_num(const Vec3i& n) const {
  if (!exact) return std::nullopt;
  for (int i = 0; i < 3; ++i)
    if (std::llabs(n[i]) > kMaxExactComponent) return std::nullopt;
  // |n_adj|^2 = (n1^2 q1^2 p2^2 + n2^2 q2^2 p1^2 + n3^2 p1^2 p2^2) / (p1 p2)^2
  const __int128 n1 = n[0], n2 = n[1], n3 = n[2];
  const __int128 t1 = n1 * n1 * (__int128)(q1 * q1) * (__int128)(p2 * p2);
  const __int128 t2 = n2 * n2 * (__int128)(q2 * q2) * (__int128)(p1 * p1);
  const __int128 t3 = n3 * n3 * (__int128)(p1 * p1) * (__int128)(p2 * p2);
  return t1 + t2 + t3;
}

int TorusGeometry::cmp_norm2(const Vec3i& a, const Vec3i& b) const {
  const auto na = norm2_num(a);
  const auto nb = norm2_num(b);
  if (na && nb) {
    if (*na < *nb) return -1;
    if (*na > *nb) return 1;
    return 0;
  }
  const double da = norm2(a), db = norm2(b);
  if (da < db) return -1;
  if (da > db) return 1;
  return 0;
}

int TorusGeometry::cmp_norm2_vs_r2(const Vec3i& n, double r,
                                   const std::optional<Rational>& r_exact) const {
  const auto num = norm2_num(n);
  if (num && r_exact && r_exact->p <= kMaxExactRp && r_exact->q <= kMaxExactRq) {
    // |n_adj|^2 vs r^2  <=>  num * rq^2 vs rp^2 * (p1 p2)^2
    const __int128 lhs = *num * (__int128)(r_exact->q * r_exact->q);
    const __int128 pp = (__int128)p1 * p2;
    const __int128 rhs = (__int128)(r_exact->p * r_exact->p) * pp * pp;
    if (lhs < rhs) return -1;
    if (lhs > rhs) return 1;
    return 0;
  }
  const double d = norm2(n), r2 = r * r;
  if (d < r2) return -1;
  if (d > r2) return 1;
  return 0;
}

WaveVector adjust(const Vec3i& n, const TorusGeometry& geom) {
  WaveVector w;
  w.n = n;
  w.adjusted = geom.adjust_vec(n);
  w.norm = std::sqrt(dot(w.adjusted, w.adjusted));
  return w;
}

BallRadius BallRadius::from_string(const std::string& s) {
  BallRadius r;
  r.value = std::strtod(s.c_str(), nullptr);
  r.exact = parse_decimal(s);
  return r;
}

std::vector<Vec3i> modes_in_ball(const BallRadius& r, const TorusGeometry& geom, long long cap) {
  if (!(r.value >= 1.0)) throw std::invalid_argument("modes_in_ball: radius must be >= 1");
  const long long b1 = static_cast<long long>(std::ceil(r.value * geom.l1));
  const long long b2 = static_cast<long long>(std::ceil(r.value * geom.l2));
  const long long b3 = static_cast<long long>(std::ceil(r.value));
  {
    const long long box = (2 * b1 + 1) * (2 * b2 + 1) * (2 * b3 + 1);
    if (box > 8 * cap)
      throw std::invalid_argument("modes_in_ball: radius exceeds configured mode cap");
  }
  std::vector<Vec3i> out;
  for (long long n1 = -b1; n1 <= b1; ++n1)
    for (long long n2 = -b2; n2 <= b2; ++n2)
      for (long long n3 = -b3; n3 <= b3; ++n3) {
        const Vec3i n{n1, n2, n3};
        if (is_zero(n)) continue;
        if (geom.cmp_norm2_vs_r2(n, r.value, r.exact) < 0) {
          out.push_back(n);
          if (static_cast<long long>(out.size()) > cap)
            throw std::invalid_argument("modes_in_ball: mode count exceeds configured cap");
        }
      }
  return out;  // loop order is lexicographic already
}

int annulus_index(const WaveVector& k) {
  if (is_zero(k.n)) throw std::invalid_argument("annulus_index: zero wavevector");
  const double x = dot(k.adjusted, k.adjusted);
  if (x < 1.0) return 0;
  // find i >= 1 with 4^(i-1) <= x < 4^i; powers of 4 are exact doubles here
  int i = 1;
  double hi = 4.0;
  while (x >= hi) {
    ++i;
    hi *= 4.0;
  }
  return i;
}

}  // namespace nearres
