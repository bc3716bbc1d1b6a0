#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace rsphoton {

using cplx = std::complex<double>;
using Vec3 = std::array<double, 3>;
using CVec3 = std::array<cplx, 3>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

inline double norm(const Vec3& a) { return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]); }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

template <class A, class B>
inline auto cross(const std::array<A, 3>& a, const std::array<B, 3>& b) {
  using R = decltype(a[0] * b[0]);
  return std::array<R, 3>{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
                          a[0] * b[1] - a[1] * b[0]};
}

/// Bilinear a.b (no conjugation).
template <class A, class B>
inline auto dot(const std::array<A, 3>& a, const std::array<B, 3>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

/// Hermitian product a.conj(b).
inline cplx hdot(const CVec3& a, const CVec3& b) {
  return a[0] * std::conj(b[0]) + a[1] * std::conj(b[1]) + a[2] * std::conj(b[2]);
}

inline double norm2(const CVec3& a) {
  return std::norm(a[0]) + std::norm(a[1]) + std::norm(a[2]);
}

inline CVec3 conj(const CVec3& a) { return {std::conj(a[0]), std::conj(a[1]), std::conj(a[2])}; }

inline CVec3 operator+(const CVec3& a, const CVec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline CVec3 operator-(const CVec3& a, const CVec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline CVec3& operator+=(CVec3& a, const CVec3& b) {
  a[0] += b[0];
  a[1] += b[1];
  a[2] += b[2];
  return a;
}
inline CVec3 operator*(cplx s, const CVec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline CVec3 to_complex(const Vec3& a) { return {a[0], a[1], a[2]}; }

}  // namespace rsphoton
