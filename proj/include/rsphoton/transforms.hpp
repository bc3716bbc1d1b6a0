#pragma once

// Energy <-> photon transforms: the causal, anti-causal and quadrature
// half-order integrals and their inverses, as exact spectral multipliers and
// as sampled time-domain quadratures.
//
// Time-domain kernels carry an extra 1/sqrt(2 pi): a tone e^{-i w t} is
// multiplied by (hbar w)^{-1/2} e^{i phi} (forward) or (hbar w)^{1/2} e^{-i phi}
// (inverse).

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rsphoton/errors.hpp"
#include "rsphoton/field.hpp"
#include "rsphoton/kspace.hpp"
#include "rsphoton/units.hpp"

namespace rsphoton {

enum class TransformKind { T_plus, T_minus, T_x, T_y, inv_T_plus, inv_T_minus, inv_T_x, inv_T_y };

enum class TransformDirection { energy_to_photon, photon_to_energy };

struct TransformSpec {
  TransformKind kind = TransformKind::T_plus;

  TransformDirection direction() const {
    switch (kind) {
      case TransformKind::T_plus:
      case TransformKind::T_minus:
      case TransformKind::T_x:
      case TransformKind::T_y: return TransformDirection::energy_to_photon;
      default: return TransformDirection::photon_to_energy;
    }
  }
  bool forward() const { return direction() == TransformDirection::energy_to_photon; }

  /// Phase added to the positive-frequency part.
  double phase() const {
    switch (kind) {
      case TransformKind::T_plus: return kPi / 4.0;
      case TransformKind::T_minus: return -kPi / 4.0;
      case TransformKind::T_x: return 0.0;
      case TransformKind::T_y: return kPi / 2.0;
      case TransformKind::inv_T_plus: return -kPi / 4.0;
      case TransformKind::inv_T_minus: return kPi / 4.0;
      case TransformKind::inv_T_x: return 0.0;
      case TransformKind::inv_T_y: return -kPi / 2.0;
    }
    return 0.0;
  }

  /// The transform undoing this one.
  TransformSpec inverse() const {
    constexpr std::array<TransformKind, 8> inv{TransformKind::inv_T_plus, TransformKind::inv_T_minus,
                                               TransformKind::inv_T_x,    TransformKind::inv_T_y,
                                               TransformKind::T_plus,     TransformKind::T_minus,
                                               TransformKind::T_x,        TransformKind::T_y};
    return {inv[static_cast<std::size_t>(kind)]};
  }
};

inline constexpr std::array<std::string_view, 8> kTransformNames{"T+",     "T-",     "Tx",     "Ty",
                                                                 "inv T+", "inv T-", "inv Tx", "inv Ty"};

inline std::string_view to_string(TransformKind k) { return kTransformNames[static_cast<std::size_t>(k)]; }

inline std::optional<TransformKind> parse_transform_kind(std::string_view name) {
  for (std::size_t i = 0; i < kTransformNames.size(); ++i)
    if (kTransformNames[i] == name) return static_cast<TransformKind>(i);
  return std::nullopt;
}

enum class FrequencyPart { positive, negative };

/// Exact multiplier on an e^{-i w t} (positive) or e^{+i w t} (negative) component.
inline cplx spectral_multiplier(TransformSpec spec, double omega, FrequencyPart part, const Units& units = Units::natural()) {
  if (!(omega > 0.0)) throw InvalidArgument("spectral multiplier needs omega > 0");
  const double energy = units.hbar * omega;
  const double mag = spec.forward() ? 1.0 / std::sqrt(energy) : std::sqrt(energy);
  const cplx m = std::polar(mag, spec.phase());
  return part == FrequencyPart::positive ? m : std::conj(m);
}

/// Applies the multiplier to the positive-frequency amplitudes; the negative
/// part follows by conjugation.
inline ModeSet apply_spectral(TransformSpec spec, const ModeSet& modes) {
  ModeSet out = modes;
  const KGrid& g = *modes.grid;
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (!g.retained(idx)) continue;
    const cplx m = spectral_multiplier(spec, modes.omega(idx), FrequencyPart::positive, modes.units);
    out.amp[idx][0] *= m;
    out.amp[idx][1] *= m;
  }
  out.physical = false;
  return out;
}

namespace detail {

inline FieldKind transformed_kind(FieldKind k, bool forward) {
  auto bad = [] { throw InvalidArgument("transform needs a psi-family (forward) or phi-family (inverse) snapshot"); };
  if (forward) {
    switch (k) {
      case FieldKind::psi_plus: return FieldKind::phi_plus;
      case FieldKind::psi_minus: return FieldKind::phi_minus;
      case FieldKind::psi: return FieldKind::phi;
      default: bad();
    }
  } else {
    switch (k) {
      case FieldKind::phi_plus: return FieldKind::psi_plus;
      case FieldKind::phi_minus: return FieldKind::psi_minus;
      case FieldKind::phi: return FieldKind::psi;
      default: bad();
    }
  }
  return k;
}

}  // namespace detail

/// Snapshot route. Positive-part snapshots take the positive multiplier,
/// negative parts the conjugate; a full wavefunction is split per Fourier
/// coefficient into its u+ (positive frequency) and u- (negative frequency)
/// components.
inline FieldSnapshot apply_spectral(TransformSpec spec, const FieldSnapshot& field, const HelicityBasis& basis,
                                    const KGrid& grid, const Units& units = Units::natural()) {
  if (field.n != grid.n() || field.box_length != grid.box_length())
    throw InvalidArgument("snapshot does not match the lattice");
  const FieldKind out_kind = detail::transformed_kind(field.kind, spec.forward());
  auto coeffs = to_spectrum(field);
  double scale = 0.0;
  for (const auto& v : coeffs) scale = std::max(scale, std::sqrt(norm2(v)));
  const double floor = 1e-13 * scale;
  for (std::size_t idx = 0; idx < coeffs.size(); ++idx) {
    if (!grid.retained(idx)) {
      if (std::sqrt(norm2(coeffs[idx])) > floor)
        throw SingularModeError("snapshot has content on a mode without a defined frequency or helicity");
      coeffs[idx] = CVec3{};
      continue;
    }
    const double omega = units.c * norm(grid.k(idx));
    const cplx mp = spectral_multiplier(spec, omega, FrequencyPart::positive, units);
    const cplx mn = std::conj(mp);
    switch (field.kind) {
      case FieldKind::psi_plus:
      case FieldKind::phi_plus: coeffs[idx] = mp * coeffs[idx]; break;
      case FieldKind::psi_minus:
      case FieldKind::phi_minus: coeffs[idx] = mn * coeffs[idx]; break;
      default: {
        const CVec3& up = basis.u_plus[idx];
        const CVec3& um = basis.u_minus[idx];
        const cplx cp = hdot(coeffs[idx], up);
        const cplx cm = hdot(coeffs[idx], um);
        coeffs[idx] = (mp * cp) * up + (mn * cm) * um;
      }
    }
  }
  return from_spectrum(std::move(coeffs), field.n, field.box_length, field.time, out_kind);
}

// ---------------------------------------------------------------------------
// Time domain

/// Uniformly sampled scalar signal, sample j at t0 + j dt.
struct TimeSeries {
  double t0 = 0.0;
  double dt = 1.0;
  std::vector<cplx> samples;

  double time(std::size_t j) const { return t0 + dt * static_cast<double>(j); }
};

/// Kernel of a transform: c_past * K(tau) on tau > 0 plus c_future * K(-tau)
/// on tau < 0, with K(tau) = tau^{-1/2} (forward) or tau^{-3/2} (inverse, as a
/// Hadamard finite part), all times `scale`.
struct TimeKernel {
  double scale = 0.0;
  double c_past = 0.0;
  double c_future = 0.0;
  bool hypersingular = false;
};

inline TimeKernel time_kernel(TransformSpec spec, const Units& units = Units::natural()) {
  const double norm_2pi = 1.0 / std::sqrt(2.0 * kPi);
  const double r = 1.0 / std::sqrt(2.0);
  TimeKernel k;
  if (spec.forward()) {
    k.scale = std::sqrt(2.0 / units.hbar) * norm_2pi;
  } else {
    k.scale = -std::sqrt(units.hbar / 2.0) * norm_2pi;
    k.hypersingular = true;
  }
  switch (spec.kind) {
    case TransformKind::T_plus:
    case TransformKind::inv_T_plus: k.c_past = 1.0; break;
    case TransformKind::T_minus:
    case TransformKind::inv_T_minus: k.c_future = 1.0; break;
    case TransformKind::T_x:
    case TransformKind::inv_T_x:
      k.c_past = r;
      k.c_future = r;
      break;
    case TransformKind::T_y:
    case TransformKind::inv_T_y:
      k.c_past = r;
      k.c_future = -r;
      break;
  }
  return k;
}

namespace detail {

// Antiderivatives of tau^{-p} and tau^{1-p}. For p = 3/2 the first one is
// -2 tau^{-1/2} with the divergent constant at tau = 0 discarded (finite part).
inline double moment0(double a, double b, bool hyper) {
  if (!hyper) return 2.0 * (std::sqrt(b) - std::sqrt(a));
  const double fb = -2.0 / std::sqrt(b);
  const double fa = a > 0.0 ? -2.0 / std::sqrt(a) : 0.0;
  return fb - fa;
}

inline double moment1(double a, double b, bool hyper) {
  if (!hyper) return (2.0 / 3.0) * (b * std::sqrt(b) - a * std::sqrt(a));
  return 2.0 * (std::sqrt(b) - std::sqrt(a));
}

}  // namespace detail

/// Product-integration weights q_m, m = 0..M, so that
///   int_0^{M dt} g(tau) K(tau) dtau ~ sum_m q_m g(m dt)
/// for g linear on every cell [m dt, (m+1) dt]. The first cell is integrated
/// exactly against the singular kernel.
inline std::vector<double> product_weights(std::size_t cells, double dt, bool hypersingular) {
  std::vector<double> q(cells + 1, 0.0);
  for (std::size_t m = 0; m < cells; ++m) {
    const double a = dt * static_cast<double>(m);
    const double b = a + dt;
    const double m0 = detail::moment0(a, b, hypersingular);
    const double m1 = detail::moment1(a, b, hypersingular);
    // g(tau) = g_m (b - tau)/dt + g_{m+1} (tau - a)/dt
    q[m] += (b * m0 - m1) / dt;
    q[m + 1] += (m1 - a * m0) / dt;
  }
  return q;
}

/// Output samples [first, last) of the transform of `series`, using `window`
/// of history (and/or future) per output sample. Every requested output needs
/// the full window inside the series.
inline TimeSeries apply_timedomain(TransformSpec spec, const TimeSeries& series, double window, std::size_t first,
                                   std::size_t last, const Units& units = Units::natural()) {
  if (!(series.dt > 0.0)) throw InvalidArgument("time series needs dt > 0");
  if (!(window > 0.0)) throw InvalidArgument("transform window must be > 0");
  const TimeKernel kern = time_kernel(spec, units);
  const std::size_t cells = static_cast<std::size_t>(std::llround(window / series.dt));
  if (cells == 0) throw InvalidArgument("transform window shorter than one sample");
  const std::size_t n = series.samples.size();
  if (last > n) last = n;
  if (first >= last) return TimeSeries{series.time(first), series.dt, {}};
  if (kern.c_past != 0.0 && first < cells)
    throw InvalidArgument("requested output range lacks the history the window needs");
  if (kern.c_future != 0.0 && last + cells > n)
    throw InvalidArgument("requested output range lacks the future samples the window needs");

  const auto q = product_weights(cells, series.dt, kern.hypersingular);
  TimeSeries out{series.time(first), series.dt, std::vector<cplx>(last - first)};
  const cplx* f = series.samples.data();
  for (std::size_t j = first; j < last; ++j) {
    cplx past{}, future{};
    if (kern.c_past != 0.0)
      for (std::size_t m = 0; m <= cells; ++m) past += q[m] * f[j - m];
    if (kern.c_future != 0.0)
      for (std::size_t m = 0; m <= cells; ++m) future += q[m] * f[j + m];
    out.samples[j - first] = kern.scale * (kern.c_past * past + kern.c_future * future);
  }
  return out;
}

/// Samples of the tone amplitude * e^{-i omega t} (omega < 0 gives a negative-frequency tone).
inline TimeSeries sample_tone(double omega, double t0, double dt, std::size_t count, cplx amplitude = 1.0) {
  TimeSeries s{t0, dt, std::vector<cplx>(count)};
  for (std::size_t j = 0; j < count; ++j) s.samples[j] = amplitude * std::polar(1.0, -omega * s.time(j));
  return s;
}

}  // namespace rsphoton
