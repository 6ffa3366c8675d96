#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

namespace nearres {

using Complex = std::complex<double>;
using Vec3i = std::array<long long, 3>;
using Vec3d = std::array<double, 3>;
using Vec3c = std::array<Complex, 3>;

inline double dot(const Vec3d& a, const Vec3d& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline Vec3d cross(const Vec3d& a, const Vec3d& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline double norm(const Vec3d& a) { return std::sqrt(dot(a, a)); }

// dot of a complex triple with a real triple (no conjugation anywhere)
inline Complex dot(const Vec3c& a, const Vec3d& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

// Hermitian pairing a . conj(b)
inline Complex herm(const Vec3c& a, const Vec3c& b) {
  return a[0] * std::conj(b[0]) + a[1] * std::conj(b[1]) + a[2] * std::conj(b[2]);
}

inline Vec3c cross(const Vec3d& a, const Vec3c& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline double abs2(const Vec3c& a) {
  return std::norm(a[0]) + std::norm(a[1]) + std::norm(a[2]);
}

inline Vec3c operator+(const Vec3c& a, const Vec3c& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline Vec3c operator-(const Vec3c& a, const Vec3c& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
inline Vec3c operator*(Complex s, const Vec3c& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline Vec3c operator*(double s, const Vec3c& a) { return {s * a[0], s * a[1], s * a[2]}; }

inline Vec3i operator+(const Vec3i& a, const Vec3i& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline Vec3i operator-(const Vec3i& a, const Vec3i& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
inline Vec3i operator-(const Vec3i& a) { return {-a[0], -a[1], -a[2]}; }
inline bool is_zero(const Vec3i& a) { return a[0] == 0 && a[1] == 0 && a[2] == 0; }

}  // namespace nearres
