#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "rsphoton/errors.hpp"
#include "rsphoton/fft.hpp"
#include "rsphoton/vec3.hpp"

namespace rsphoton {

enum class FieldKind {
  potential,
  displacement,
  magnetic,
  psi_plus,
  psi_minus,
  psi,
  phi_plus,
  phi_minus,
  phi,
};

inline std::string_view to_string(FieldKind k) {
  switch (k) {
    case FieldKind::potential: return "potential";
    case FieldKind::displacement: return "displacement";
    case FieldKind::magnetic: return "magnetic";
    case FieldKind::psi_plus: return "psi_plus";
    case FieldKind::psi_minus: return "psi_minus";
    case FieldKind::psi: return "psi";
    case FieldKind::phi_plus: return "phi_plus";
    case FieldKind::phi_minus: return "phi_minus";
    case FieldKind::phi: return "phi";
  }
  return "unknown";
}

/// Complex 3-vector field sampled at r_j = j * L / n on the periodic box,
/// row-major with x slowest.
struct FieldSnapshot {
  int n = 0;
  double box_length = 0.0;
  double time = 0.0;
  FieldKind kind = FieldKind::psi;
  std::vector<CVec3> values;

  std::size_t size() const { return values.size(); }
  double cell_volume() const {
    const double h = box_length / n;
    return h * h * h;
  }
  Vec3 position(std::size_t idx) const {
    const double h = box_length / n;
    const std::size_t nn = static_cast<std::size_t>(n);
    return {h * static_cast<double>(idx / (nn * nn)), h * static_cast<double>((idx / nn) % nn),
            h * static_cast<double>(idx % nn)};
  }
};

inline FieldSnapshot zero_snapshot(int n, double box_length, double time, FieldKind kind) {
  FieldSnapshot s{n, box_length, time, kind, {}};
  s.values.assign(static_cast<std::size_t>(n) * n * n, CVec3{});
  return s;
}

inline void require_same_grid(const FieldSnapshot& a, const FieldSnapshot& b) {
  if (a.n != b.n || a.box_length != b.box_length || a.values.size() != b.values.size())
    throw InvalidArgument("snapshots live on different grids");
}

/// Wavevector of FFT bin `idx` for an n^3 grid of side L (Nyquist bin carries -n/2).
inline Vec3 fft_wavevector(std::size_t idx, int n, double box_length) {
  const double dk = 2.0 * kPi / box_length;
  const std::size_t nn = static_cast<std::size_t>(n);
  auto s = [n](std::size_t i) {
    const int ii = static_cast<int>(i);
    return ii <= (n - 1) / 2 ? ii : ii - n;
  };
  return {dk * s(idx / (nn * nn)), dk * s((idx / nn) % nn), dk * s(idx % nn)};
}

/// Fourier coefficients F_m with f(r_j) = sum_m F_m exp(i k_m . r_j).
inline std::vector<CVec3> to_spectrum(const FieldSnapshot& f) {
  std::vector<CVec3> spec = f.values;
  fft::transform3(spec, f.n, fft::Direction::to_spectrum);
  const double inv = 1.0 / static_cast<double>(spec.size());
  for (auto& v : spec) v = cplx(inv) * v;
  return spec;
}

inline FieldSnapshot from_spectrum(std::vector<CVec3> spec, int n, double box_length, double time, FieldKind kind) {
  fft::transform3(spec, n, fft::Direction::to_space);
  return FieldSnapshot{n, box_length, time, kind, std::move(spec)};
}

/// Applies op(k, F_k) -> F'_k to every Fourier coefficient.
template <class Op>
inline FieldSnapshot map_spectrum(const FieldSnapshot& f, Op&& op) {
  auto spec = to_spectrum(f);
  for (std::size_t idx = 0; idx < spec.size(); ++idx) spec[idx] = op(fft_wavevector(idx, f.n, f.box_length), spec[idx]);
  return from_spectrum(std::move(spec), f.n, f.box_length, f.time, f.kind);
}

/// Spectral curl, i k x F_k.
inline FieldSnapshot curl(const FieldSnapshot& f) {
  return map_spectrum(f, [](const Vec3& k, const CVec3& v) { return kI * cross(to_complex(k), v); });
}

/// Largest |k . F_k| over all Fourier coefficients.
inline double divergence_residual(const FieldSnapshot& f) {
  const auto spec = to_spectrum(f);
  double worst = 0.0;
  for (std::size_t idx = 0; idx < spec.size(); ++idx)
    worst = std::max(worst, std::abs(dot(to_complex(fft_wavevector(idx, f.n, f.box_length)), spec[idx])));
  return worst;
}

inline double max_abs_diff(const FieldSnapshot& a, const FieldSnapshot& b) {
  require_same_grid(a, b);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (int c = 0; c < 3; ++c) worst = std::max(worst, std::abs(a.values[i][c] - b.values[i][c]));
  return worst;
}

inline double max_abs(const FieldSnapshot& a) {
  double worst = 0.0;
  for (const auto& v : a.values)
    for (int c = 0; c < 3; ++c) worst = std::max(worst, std::abs(v[c]));
  return worst;
}

inline double max_imag(const FieldSnapshot& a) {
  double worst = 0.0;
  for (const auto& v : a.values)
    for (int c = 0; c < 3; ++c) worst = std::max(worst, std::abs(v[c].imag()));
  return worst;
}

/// dV * sum_r |F(r)|^2.
inline double integrated_norm2(const FieldSnapshot& a) {
  double acc = 0.0;
  for (const auto& v : a.values) acc += norm2(v);
  return acc * a.cell_volume();
}

/// sqrt(sum_r |F(r)|^2), the discrete L2 norm without the volume element.
inline double l2(const FieldSnapshot& a) {
  double acc = 0.0;
  for (const auto& v : a.values) acc += norm2(v);
  return std::sqrt(acc);
}

inline double l2_diff(const FieldSnapshot& a, const FieldSnapshot& b) {
  require_same_grid(a, b);
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += norm2(a.values[i] - b.values[i]);
  return std::sqrt(acc);
}

}  // namespace rsphoton
