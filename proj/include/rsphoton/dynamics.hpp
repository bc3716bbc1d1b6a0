#pragma once

// Propagation: exact spectral phases for the Schroedinger form
// i hbar d|Psi>/dt = c L.p |Psi>, and a staggered leapfrog for the Maxwell
// curl pair with spectral curls.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "rsphoton/errors.hpp"
#include "rsphoton/field.hpp"
#include "rsphoton/kspace.hpp"
#include "rsphoton/synthesis.hpp"

namespace rsphoton {

using Mat3c = std::array<std::array<cplx, 3>, 3>;

/// Hermitian spin-1 generators (L_w)_{ab} = -i eps_{wab}.
struct Spin1Generators {
  std::array<Mat3c, 3> L;

  const Mat3c& x() const { return L[0]; }
  const Mat3c& y() const { return L[1]; }
  const Mat3c& z() const { return L[2]; }
};

inline Spin1Generators spin1_generators() {
  const cplx i = kI;
  Spin1Generators g;
  g.L[0] = Mat3c{{{0.0, 0.0, 0.0}, {0.0, 0.0, -i}, {0.0, i, 0.0}}};
  g.L[1] = Mat3c{{{0.0, 0.0, i}, {0.0, 0.0, 0.0}, {-i, 0.0, 0.0}}};
  g.L[2] = Mat3c{{{0.0, -i, 0.0}, {i, 0.0, 0.0}, {0.0, 0.0, 0.0}}};
  return g;
}

inline CVec3 apply(const Mat3c& m, const CVec3& v) {
  CVec3 out{};
  for (int a = 0; a < 3; ++a) out[a] = m[a][0] * v[0] + m[a][1] * v[1] + m[a][2] * v[2];
  return out;
}

/// Max-norm of curl F - (-i L.grad) F, both evaluated spectrally.
inline double curl_vs_L_check(const FieldSnapshot& field) {
  const auto gen = spin1_generators();
  const FieldSnapshot via_curl = curl(field);
  // -i L_w (i k_w) = k_w L_w
  const FieldSnapshot via_l = map_spectrum(field, [&](const Vec3& k, const CVec3& v) {
    CVec3 acc{};
    for (int w = 0; w < 3; ++w) acc += cplx(k[w]) * apply(gen.L[w], v);
    return acc;
  });
  return max_abs_diff(via_curl, via_l);
}

/// Positive-frequency amplitudes acquire e^{-i |k| c t}; the negative part
/// follows by conjugation, so the helicity components of the full
/// wavefunction rotate as e^{-i s |k| c t}.
inline ModeSet evolve_spectral(const ModeSet& modes, double t) {
  ModeSet out = modes;
  const KGrid& g = *modes.grid;
  if (t == 0.0) return out;
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (!g.retained(idx)) continue;
    const cplx phase = std::polar(1.0, -modes.omega(idx) * t);
    out.amp[idx][0] *= phase;
    out.amp[idx][1] *= phase;
  }
  return out;
}

enum class Scheme { spectral, leapfrog };

/// Full wavefunction states (Psi or Phi family) at increasing times.
struct Trajectory {
  Scheme scheme = Scheme::spectral;
  std::vector<double> times;
  std::vector<FieldSnapshot> states;
};

/// Exact trajectory of the full wavefunction, one state per step.
inline Trajectory spectral_trajectory(const ModeSet& modes, double t0, double dt, int steps, bool photon = false) {
  Trajectory traj;
  traj.scheme = Scheme::spectral;
  for (int s = 0; s <= steps; ++s) {
    const double t = t0 + dt * s;
    traj.times.push_back(t);
    traj.states.push_back(photon ? synthesize_phi(modes, t, Part::both) : synthesize_psi(modes, t, Part::both));
  }
  return traj;
}

/// Largest dt the leapfrog accepts on an n^3 box of side L: 0.9 * 2 / (c |k|max).
inline double leapfrog_dt_limit(int n, double box_length, const Units& units) {
  const double kmax = std::sqrt(3.0) * (2.0 * kPi / box_length) * (n / 2);
  return 0.9 * 2.0 / (units.c * kmax);
}

/// Staggered leapfrog for curl D = -eps0 dB/dt, curl B = mu0 dD/dt:
///   B^{1/2}   = B^0 - (dt / 2 eps0) curl D^0
///   D^{n+1}   = D^n + (dt / mu0) curl B^{n+1/2}
///   B^{n+3/2} = B^{n+1/2} - (dt / eps0) curl D^{n+1}
/// States are Psi = D/sqrt(2 eps0) + i B/sqrt(2 mu0) with B averaged to
/// integer times; every `save_every`-th step is kept (the last one always).
inline Trajectory evolve_leapfrog(const FieldSnapshot& d0, const FieldSnapshot& b0, double dt, int steps,
                                  const Units& units = Units::natural(), int save_every = 1) {
  require_same_grid(d0, b0);
  if (!(dt > 0.0)) throw InvalidArgument("leapfrog needs dt > 0");
  if (steps < 0) throw InvalidArgument("leapfrog needs steps >= 0");
  if (save_every < 1) throw InvalidArgument("save_every must be >= 1");
  const double limit = leapfrog_dt_limit(d0.n, d0.box_length, units);
  if (dt > limit) throw StabilityError("leapfrog dt exceeds the stability bound");

  auto axpy = [](FieldSnapshot& y, double a, const FieldSnapshot& x) {
    for (std::size_t i = 0; i < y.size(); ++i)
      for (int c = 0; c < 3; ++c) y.values[i][c] += a * x.values[i][c];
  };
  auto average = [](const FieldSnapshot& a, const FieldSnapshot& b) {
    FieldSnapshot out = a;
    for (std::size_t i = 0; i < out.size(); ++i)
      for (int c = 0; c < 3; ++c) out.values[i][c] = 0.5 * (a.values[i][c] + b.values[i][c]);
    return out;
  };

  Trajectory traj;
  traj.scheme = Scheme::leapfrog;
  FieldSnapshot d = d0;
  FieldSnapshot b_half = b0;
  axpy(b_half, -0.5 * dt / units.eps0, curl(d0));
  FieldSnapshot b0_copy = b0;
  b0_copy.time = d0.time;
  traj.times.push_back(d0.time);
  traj.states.push_back(rs_from_DB(d, b0_copy, units));

  for (int s = 1; s <= steps; ++s) {
    axpy(d, dt / units.mu0, curl(b_half));
    FieldSnapshot b_next = b_half;
    axpy(b_next, -dt / units.eps0, curl(d));
    const double t = d0.time + dt * s;
    if (s % save_every == 0 || s == steps) {
      d.time = t;
      FieldSnapshot b_sync = average(b_half, b_next);
      b_sync.time = t;
      traj.times.push_back(t);
      traj.states.push_back(rs_from_DB(d, b_sync, units));
    }
    b_half = std::move(b_next);
  }
  return traj;
}

/// Max over interior states of
///   || i (X_{n+1} - X_{n-1}) / (2 dt) - c curl X_n || / || c curl X_n ||
/// (hbar cancels). Zero-curl states contribute their absolute residual.
inline double schrodinger_residual(const Trajectory& traj, const Units& units = Units::natural()) {
  if (traj.states.size() < 3) throw InvalidArgument("schrodinger residual needs at least 3 states");
  double worst = 0.0;
  for (std::size_t n = 1; n + 1 < traj.states.size(); ++n) {
    const double dt2 = traj.times[n + 1] - traj.times[n - 1];
    const FieldSnapshot rhs = curl(traj.states[n]);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < rhs.size(); ++i) {
      CVec3 r{};
      for (int c = 0; c < 3; ++c) {
        const cplx lhs = kI * (traj.states[n + 1].values[i][c] - traj.states[n - 1].values[i][c]) / dt2;
        r[c] = lhs - units.c * rhs.values[i][c];
      }
      num += norm2(r);
      den += units.c * units.c * norm2(rhs.values[i]);
    }
    const double res = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
    worst = std::max(worst, res);
  }
  return worst;
}

/// dV * sum (D^2 / 2 eps0 + B^2 / 2 mu0), read off a full Psi state.
inline double field_energy(const FieldSnapshot& psi) { return integrated_norm2(psi); }

}  // namespace rsphoton
