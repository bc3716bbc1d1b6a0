#pragma once

// Test-only oracles: brute-force direct sums and independent quadratures.
// Nothing here calls the FFT path or the product-integration weights.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "rsphoton/field.hpp"
#include "rsphoton/kspace.hpp"
#include "rsphoton/synthesis.hpp"

namespace rsphoton::oracle {

/// Unsymmetrized random amplitudes on every retained mode.
inline ModeSet random_modes(const KGrid& grid, std::uint64_t seed, Units units = Units::natural()) {
  ModeSet m = make_modes(grid, units);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    if (!grid.retained(idx)) continue;
    for (auto& a : m.amp[idx]) {
      const double re = g(rng);
      a = {re, g(rng)};
    }
  }
  return m;
}

inline ModeSet random_physical(const KGrid& grid, std::uint64_t seed, Units units = Units::natural()) {
  return symmetrize(random_modes(grid, seed, units));
}

/// Direct (non-FFT) evaluation of the positive-frequency sum
///   prefactor * sum_k w g(k) sum_s A_s(k) e^{i(k.r - w t)} u_s(k)
/// at every sample, optionally restricted to one helicity.
inline FieldSnapshot direct_positive(const ModeSet& m, double t, Weighting wt, cplx prefactor,
                                     int helicity_filter = 0) {
  const KGrid& g = *m.grid;
  FieldSnapshot out = zero_snapshot(g.n(), g.box_length(), t, FieldKind::psi_plus);
  const double w = g.synthesis_weight();
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (!g.retained(idx)) continue;
    const Vec3 k = g.k(idx);
    const double kn = norm(k);
    const double omega = m.units.c * kn;
    double radial = 1.0;
    if (wt == Weighting::energy) radial = std::sqrt(m.units.hbar * omega);
    if (wt == Weighting::potential) radial = std::sqrt(m.units.hbar * m.units.Z0 / (2.0 * kn));
    CVec3 amp{};
    for (Helicity h : {Helicity::plus, Helicity::minus}) {
      if (helicity_filter != 0 && helicity_filter != sign(h)) continue;
      const CVec3& u = m.basis->u(h, idx);
      for (int c = 0; c < 3; ++c) amp[c] += m.at(h, idx) * u[c];
    }
    for (std::size_t j = 0; j < out.size(); ++j) {
      const Vec3 r = out.position(j);
      const cplx e = prefactor * w * radial * std::exp(cplx(0.0, dot(k, r) - omega * t));
      for (int c = 0; c < 3; ++c) out.values[j][c] += e * amp[c];
    }
  }
  return out;
}

inline FieldSnapshot conj_field(FieldSnapshot f) {
  for (auto& v : f.values) v = conj(v);
  return f;
}

inline FieldSnapshot sum_fields(FieldSnapshot a, const FieldSnapshot& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a.values[i] += b.values[i];
  return a;
}

/// Random field with content only on |m_w| <= band, every component.
inline FieldSnapshot random_band_limited(int n, double box_length, int band, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  FieldSnapshot f = zero_snapshot(n, box_length, 0.0, FieldKind::psi);
  const double dk = 2.0 * kPi / box_length;
  for (int mx = -band; mx <= band; ++mx)
    for (int my = -band; my <= band; ++my)
      for (int mz = -band; mz <= band; ++mz) {
        CVec3 c{};
        for (auto& v : c) {
          const double re = g(rng);
          v = {re, g(rng)};
        }
        for (std::size_t j = 0; j < f.size(); ++j) {
          const Vec3 r = f.position(j);
          const cplx e = std::exp(cplx(0.0, dk * (mx * r[0] + my * r[1] + mz * r[2])));
          for (int k = 0; k < 3; ++k) f.values[j][k] += e * c[k];
        }
      }
  return f;
}

/// int_0^inf e^{i w tau} tau^{-1/2} dtau via tau = u^2: 2 int_0^U e^{i w u^2} du by
/// composite Simpson plus the two-term asymptotic tail of the Fresnel integral.
/// Without the tail it is the integral truncated at tau = U^2.
inline cplx fresnel_half_order(double omega, double upper = 30.0, int panels = 200000, bool tail_term = true) {
  const double h = upper / panels;
  auto f = [omega](double u) { return std::exp(cplx(0.0, omega * u * u)); };
  cplx acc = f(0.0) + f(upper);
  for (int i = 1; i < panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(i * h);
  acc *= h / 3.0;
  // int_U^inf e^{i w u^2} du = e^{i w U^2} [ i/(2 w U) + 1/(4 w^2 U^3) + ... ]
  if (!tail_term) return 2.0 * acc;
  const cplx e = f(upper);
  const cplx tail = e * (cplx(0.0, 1.0) / (2.0 * omega * upper) + 1.0 / (4.0 * omega * omega * upper * upper * upper));
  return 2.0 * (acc + tail);
}

}  // namespace rsphoton::oracle
