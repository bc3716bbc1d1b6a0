#pragma once

// Energy and photon-number totals, local contents of detection volumes and
// their rates, and the sinc-overlap localization diagnostic.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "rsphoton/errors.hpp"
#include "rsphoton/kspace.hpp"
#include "rsphoton/synthesis.hpp"

namespace rsphoton {

/// H = sum_k measure * hbar |k| c * sum_s |A_s(k)|^2.
inline double energy_total(const ModeSet& modes) {
  const double hbar = modes.units.hbar;
  return quadratic_form(modes, [hbar](double omega) { return hbar * omega; });
}

/// N = sum_k measure * sum_s |A_s(k)|^2.
inline double number_total(const ModeSet& modes) {
  return quadratic_form(modes, [](double) { return 1.0; });
}

struct NarrowbandRatio {
  double ratio = 0.0;       // H / (hbar omega_0 N)
  double omega_bar = 0.0;   // H / (hbar N)
  double omega_peak = 0.0;  // c |k| of the most populated mode
};

inline NarrowbandRatio narrowband_ratio(const ModeSet& modes) {
  const double n = number_total(modes);
  if (!(n > 0.0)) throw UndefinedRatioError("narrowband ratio needs a nonzero photon number");
  const double h = energy_total(modes);
  const KGrid& g = *modes.grid;
  std::size_t peak = 0;
  double best = -1.0;
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (!g.retained(idx)) continue;
    const double a2 = std::norm(modes.amp[idx][0]) + std::norm(modes.amp[idx][1]);
    if (a2 > best) {
      best = a2;
      peak = idx;
    }
  }
  NarrowbandRatio r;
  r.omega_peak = modes.omega(peak);
  r.omega_bar = h / (modes.units.hbar * n);
  r.ratio = h / (modes.units.hbar * r.omega_peak * n);
  return r;
}

/// Axis-aligned box [lower, upper) inside the periodic box.
struct VolumeBox {
  Vec3 lower{};
  Vec3 upper{};

  Vec3 extent() const { return {upper[0] - lower[0], upper[1] - lower[1], upper[2] - lower[2]}; }
  double volume() const {
    const Vec3 e = extent();
    return e[0] * e[1] * e[2];
  }
  bool contains(const Vec3& r) const {
    for (int w = 0; w < 3; ++w)
      if (r[w] < lower[w] || r[w] >= upper[w]) return false;
    return true;
  }
};

inline bool overlaps(const VolumeBox& a, const VolumeBox& b) {
  for (int w = 0; w < 3; ++w)
    if (a.upper[w] <= b.lower[w] || b.upper[w] <= a.lower[w]) return false;
  return true;
}

struct LocalObservables {
  VolumeBox volume;
  double H_local = 0.0;
  double N_local = 0.0;
  double Edot = 0.0;
  double Ndot = 0.0;
};

struct ObservableReport {
  double H_total = 0.0;
  double N_total = 0.0;
  std::vector<LocalObservables> per_volume;
  double kappa = 0.0;
  double time = 0.0;
  std::vector<std::string> warnings;
};

namespace detail {

inline std::vector<double> box_sums(const FieldSnapshot& f, const std::vector<VolumeBox>& volumes) {
  std::vector<double> sums(volumes.size(), 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Vec3 r = f.position(i);
    const double v = norm2(f.values[i]);
    for (std::size_t b = 0; b < volumes.size(); ++b)
      if (volumes[b].contains(r)) sums[b] += v;
  }
  for (auto& s : sums) s *= f.cell_volume();
  return sums;
}

}  // namespace detail

/// Rate step used for the central differences: 0.01 / (c |k|max).
inline double rate_step(const ModeSet& modes) {
  return 0.01 / (modes.units.c * modes.grid->max_retained_k());
}

/// In-volume energy and photon number (samples whose position falls in the
/// box) and their central-difference time derivatives.
inline ObservableReport local_observables(const ModeSet& modes, const std::vector<VolumeBox>& volumes, double t) {
  const KGrid& g = *modes.grid;
  ObservableReport rep;
  rep.kappa = g.kappa();
  rep.time = t;
  for (std::size_t a = 0; a < volumes.size(); ++a) {
    const VolumeBox& v = volumes[a];
    for (int w = 0; w < 3; ++w) {
      if (!(v.lower[w] < v.upper[w])) throw InvalidArgument("volume needs lower < upper on every axis");
      if (v.lower[w] < 0.0 || v.upper[w] > g.box_length()) throw InvalidArgument("volume extends outside the box");
    }
    for (std::size_t b = a + 1; b < volumes.size(); ++b)
      if (overlaps(v, volumes[b])) throw InvalidArgument("detection volumes overlap");
    const Vec3 e = v.extent();
    const double min_dim = std::min({e[0], e[1], e[2]});
    if (g.kappa() <= 0.0 || min_dim <= 2.0 * kPi / g.kappa())
      rep.warnings.push_back("volume " + std::to_string(a) + " has a dimension not larger than 2 pi / kappa");
  }
  rep.H_total = energy_total(modes);
  rep.N_total = number_total(modes);

  const double dt = rate_step(modes);
  auto energy_at = [&](double tt) { return detail::box_sums(synthesize_psi(modes, tt, Part::positive), volumes); };
  auto number_at = [&](double tt) { return detail::box_sums(synthesize_phi(modes, tt, Part::positive), volumes); };
  const auto h0 = energy_at(t), hp = energy_at(t + dt), hm = energy_at(t - dt);
  const auto n0 = number_at(t), np = number_at(t + dt), nm = number_at(t - dt);
  for (std::size_t a = 0; a < volumes.size(); ++a) {
    rep.per_volume.push_back(
        {volumes[a], h0[a], n0[a], (hp[a] - hm[a]) / (2.0 * dt), (np[a] - nm[a]) / (2.0 * dt)});
  }
  return rep;
}

inline double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

/// int_V exp(i (k' - k) . r) d^3r
///   = V prod_w sinc(q_w L_w / 2) exp(i q_w c_w),  q = k' - k, c = box center.
inline cplx sinc_overlap(const VolumeBox& volume, const Vec3& k, const Vec3& kp) {
  cplx acc = volume.volume();
  for (int w = 0; w < 3; ++w) {
    const double q = kp[w] - k[w];
    const double len = volume.upper[w] - volume.lower[w];
    const double center = 0.5 * (volume.upper[w] + volume.lower[w]);
    acc *= sinc(0.5 * q * len) * std::polar(1.0, q * center);
  }
  return acc;
}

struct LocalizationTable {
  std::vector<std::vector<double>> overlap;  // |sinc_overlap| / V
  double max_off_diagonal = 0.0;
};

inline LocalizationTable localization_study(const VolumeBox& volume, const std::vector<Vec3>& band) {
  if (band.empty()) throw InvalidArgument("localization study needs a non-empty band");
  LocalizationTable t;
  const double v = volume.volume();
  t.overlap.assign(band.size(), std::vector<double>(band.size(), 0.0));
  for (std::size_t a = 0; a < band.size(); ++a)
    for (std::size_t b = 0; b < band.size(); ++b) {
      t.overlap[a][b] = std::abs(sinc_overlap(volume, band[a], band[b])) / v;
      if (a != b) t.max_off_diagonal = std::max(t.max_off_diagonal, t.overlap[a][b]);
    }
  return t;
}

}  // namespace rsphoton
