#pragma once

// Real-space snapshots of the potential, D, B, the Riemann-Silberstein vector
// Psi and the photon-density wavefunction Phi, built from a ModeSet.
//
// Positive-frequency parts carry both helicities:
//   Psi+(r,t) = i   sum_k w sqrt(hbar w_k) sum_s A_s(k) e^{i(k.r - w_k t)} u_s(k)
//   Phi+(r,t) = i e^{i pi/4} sum_k w         sum_s A_s(k) e^{i(k.r - w_k t)} u_s(k)
//   A+(r,t)   =     sum_k w sqrt(hbar Z0 / 2|k|) ...
// and X- = conj(X+). The full wavefunction (Part::both) is
//   X = X+[s=+] + conj(X+[s=-]),
// the combination that equals D/sqrt(2 eps0) + i B/sqrt(2 mu0) and obeys
// i dX/dt = c curl X.

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "rsphoton/field.hpp"
#include "rsphoton/kspace.hpp"

namespace rsphoton {

enum class Part { positive, negative, both };

/// Per-mode radial weight of the expansion.
enum class Weighting { energy, photon, potential };

namespace detail {

inline double radial_weight(Weighting wt, const ModeSet& m, std::size_t idx) {
  const Units& u = m.units;
  switch (wt) {
    case Weighting::energy: return std::sqrt(u.hbar * m.omega(idx));
    case Weighting::photon: return 1.0;
    case Weighting::potential: return std::sqrt(u.hbar * u.Z0 / (2.0 * norm(m.grid->k(idx))));
  }
  return 0.0;
}

}  // namespace detail

/// Fourier coefficients of a positive-frequency part, restricted to one
/// helicity when `only` is set.
inline std::vector<CVec3> positive_spectrum(const ModeSet& modes, double t, Weighting wt, cplx prefactor,
                                            std::optional<Helicity> only = std::nullopt) {
  const KGrid& g = *modes.grid;
  const HelicityBasis& b = *modes.basis;
  std::vector<CVec3> spec(g.size(), CVec3{});
  const double w = g.synthesis_weight();
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (!g.retained(idx)) continue;
    const double omega = modes.omega(idx);
    const cplx factor = prefactor * w * detail::radial_weight(wt, modes, idx) * std::polar(1.0, -omega * t);
    CVec3 acc{};
    for (Helicity h : {Helicity::plus, Helicity::minus}) {
      if (only && *only != h) continue;
      const cplx a = modes.at(h, idx);
      if (a == cplx{}) continue;
      acc += (factor * a) * b.u(h, idx);
    }
    spec[idx] = acc;
  }
  return spec;
}

/// Coefficients of the complex-conjugate field: G(k) = conj(F(-k)).
inline std::vector<CVec3> conj_reflect(const std::vector<CVec3>& spec, const KGrid& g) {
  std::vector<CVec3> out(spec.size(), CVec3{});
  for (std::size_t idx = 0; idx < spec.size(); ++idx)
    if (g.retained(idx)) out[idx] = conj(spec[g.negated(idx)]);
  return out;
}

inline std::vector<CVec3> add(std::vector<CVec3> a, const std::vector<CVec3>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

/// Spectrum of a wavefunction-type field (Psi or Phi family) for one part.
inline std::vector<CVec3> wavefunction_spectrum(const ModeSet& modes, double t, Part part, Weighting wt,
                                                cplx prefactor) {
  const KGrid& g = *modes.grid;
  switch (part) {
    case Part::positive: return positive_spectrum(modes, t, wt, prefactor);
    case Part::negative: return conj_reflect(positive_spectrum(modes, t, wt, prefactor), g);
    case Part::both:
      return add(positive_spectrum(modes, t, wt, prefactor, Helicity::plus),
                 conj_reflect(positive_spectrum(modes, t, wt, prefactor, Helicity::minus), g));
  }
  return {};
}

/// General energy- or photon-weighted synthesis with an extra phase on the
/// positive-frequency part (Psi: energy, 0; Phi: photon, pi/4).
inline FieldSnapshot synthesize_wavefunction(const ModeSet& modes, double t, Part part, Weighting wt, double phase,
                                             FieldKind kind) {
  const KGrid& g = *modes.grid;
  const cplx prefactor = kI * std::polar(1.0, phase);
  return from_spectrum(wavefunction_spectrum(modes, t, part, wt, prefactor), g.n(), g.box_length(), t, kind);
}

inline FieldSnapshot synthesize_psi(const ModeSet& modes, double t, Part part = Part::positive) {
  const FieldKind kind = part == Part::positive ? FieldKind::psi_plus
                         : part == Part::negative ? FieldKind::psi_minus
                                                  : FieldKind::psi;
  return synthesize_wavefunction(modes, t, part, Weighting::energy, 0.0, kind);
}

inline FieldSnapshot synthesize_phi(const ModeSet& modes, double t, Part part = Part::positive) {
  const FieldKind kind = part == Part::positive ? FieldKind::phi_plus
                         : part == Part::negative ? FieldKind::phi_minus
                                                  : FieldKind::phi;
  return synthesize_wavefunction(modes, t, part, Weighting::photon, kPi / 4.0, kind);
}

/// Coulomb-gauge potential A+ + A-; real for every ModeSet.
inline FieldSnapshot synthesize_potential(const ModeSet& modes, double t) {
  const KGrid& g = *modes.grid;
  const auto pos = positive_spectrum(modes, t, Weighting::potential, 1.0);
  return from_spectrum(add(pos, conj_reflect(pos, g)), g.n(), g.box_length(), t, FieldKind::potential);
}

/// D = -eps0 dA/dt and B = curl A, both spectral: d/dt -> -i w on the
/// positive-frequency part (its conjugate on the negative part), curl -> i k x.
inline std::pair<FieldSnapshot, FieldSnapshot> fields_from_potential(const ModeSet& modes, double t) {
  const KGrid& g = *modes.grid;
  const auto pot = positive_spectrum(modes, t, Weighting::potential, 1.0);
  std::vector<CVec3> dplus(g.size(), CVec3{});
  std::vector<CVec3> bplus(g.size(), CVec3{});
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (!g.retained(idx)) continue;
    const double omega = modes.omega(idx);
    dplus[idx] = cplx(0.0, modes.units.eps0 * omega) * pot[idx];
    bplus[idx] = kI * cross(to_complex(g.k(idx)), pot[idx]);
  }
  auto d = from_spectrum(add(dplus, conj_reflect(dplus, g)), g.n(), g.box_length(), t, FieldKind::displacement);
  auto b = from_spectrum(add(bplus, conj_reflect(bplus, g)), g.n(), g.box_length(), t, FieldKind::magnetic);
  return {std::move(d), std::move(b)};
}

/// Psi = D / sqrt(2 eps0) + i B / sqrt(2 mu0), pointwise.
inline FieldSnapshot rs_from_DB(const FieldSnapshot& d, const FieldSnapshot& b, const Units& units = Units::natural()) {
  require_same_grid(d, b);
  if (d.time != b.time) throw InvalidArgument("D and B snapshots are taken at different times");
  FieldSnapshot out = zero_snapshot(d.n, d.box_length, d.time, FieldKind::psi);
  const double sd = 1.0 / std::sqrt(2.0 * units.eps0);
  const double sb = 1.0 / std::sqrt(2.0 * units.mu0);
  for (std::size_t i = 0; i < d.size(); ++i)
    for (int c = 0; c < 3; ++c) out.values[i][c] = sd * d.values[i][c] + kI * sb * b.values[i][c];
  return out;
}

}  // namespace rsphoton
