#pragma once

// Discretized k-space: the periodic-box lattice, the helicity triad at every
// lattice wavevector, and helicity-mode amplitudes of the positive-frequency
// field.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "rsphoton/errors.hpp"
#include "rsphoton/units.hpp"
#include "rsphoton/vec3.hpp"

namespace rsphoton {

enum class Helicity : int { plus = +1, minus = -1 };

inline int sign(Helicity h) { return static_cast<int>(h); }
inline int slot(Helicity h) { return h == Helicity::plus ? 0 : 1; }
inline Helicity flip(Helicity h) { return h == Helicity::plus ? Helicity::minus : Helicity::plus; }

/// Lattice k = 2 pi m / L, m in FFT order (0..n/2-1, -n/2..-1), flattened
/// row-major with x slowest.
class KGrid {
 public:
  KGrid(int n, double box_length, double kappa) : n_(n), length_(box_length), kappa_(kappa) {
    dk_ = 2.0 * kPi / box_length;
    const std::size_t total = size();
    retained_.assign(total, 0);
    const double cutoff = std::max(kappa, 0.5 * dk_);
    for (std::size_t idx = 0; idx < total; ++idx) {
      const auto m = integer_index(idx);
      const bool nyquist = (n % 2 == 0) && (m[0] == -n / 2 || m[1] == -n / 2 || m[2] == -n / 2);
      retained_[idx] = (!nyquist && norm(k(idx)) >= cutoff) ? 1 : 0;
      if (retained_[idx]) ++retained_count_;
    }
  }

  int n() const { return n_; }
  double box_length() const { return length_; }
  double kappa() const { return kappa_; }
  double dk() const { return dk_; }
  std::size_t size() const { return static_cast<std::size_t>(n_) * n_ * n_; }
  std::size_t retained_count() const { return retained_count_; }

  /// Real-space sample spacing and cell volume.
  double dx() const { return length_ / n_; }
  double cell_volume() const { return dx() * dx() * dx(); }

  /// Synthesis weight (dk)^3 / (2 pi)^{3/2}.
  double synthesis_weight() const { return dk_ * dk_ * dk_ / std::pow(2.0 * kPi, 1.5); }
  /// Measure of the k-space quadratic forms, (dk)^3.
  double mode_measure() const { return dk_ * dk_ * dk_; }

  int signed_index(int i) const { return i <= (n_ - 1) / 2 ? i : i - n_; }

  std::array<int, 3> integer_index(std::size_t idx) const {
    const int nn = n_;
    const int i = static_cast<int>(idx / (static_cast<std::size_t>(nn) * nn));
    const int j = static_cast<int>((idx / nn) % nn);
    const int l = static_cast<int>(idx % nn);
    return {signed_index(i), signed_index(j), signed_index(l)};
  }

  std::size_t flat(int mx, int my, int mz) const {
    auto wrap = [this](int m) { return static_cast<std::size_t>(((m % n_) + n_) % n_); };
    return (wrap(mx) * n_ + wrap(my)) * n_ + wrap(mz);
  }

  Vec3 k(std::size_t idx) const {
    const auto m = integer_index(idx);
    return {dk_ * m[0], dk_ * m[1], dk_ * m[2]};
  }

  /// Flat index of -k.
  std::size_t negated(std::size_t idx) const {
    const auto m = integer_index(idx);
    return flat(-m[0], -m[1], -m[2]);
  }

  bool retained(std::size_t idx) const { return retained_[idx] != 0; }

  /// Largest |k| on the lattice, including unretained modes.
  double max_k() const { return std::sqrt(3.0) * dk_ * (n_ / 2); }

  /// Largest |k| among retained modes.
  double max_retained_k() const {
    double best = 0.0;
    for (std::size_t idx = 0; idx < size(); ++idx)
      if (retained(idx)) best = std::max(best, norm(k(idx)));
    return best;
  }

 private:
  int n_;
  double length_;
  double kappa_;
  double dk_ = 0.0;
  std::vector<unsigned char> retained_;
  std::size_t retained_count_ = 0;
};

inline KGrid build_grid(int n_per_axis, double box_length, double kappa) {
  if (n_per_axis < 2) throw InvalidArgument("grid.n_per_axis must be >= 2");
  if (!(box_length > 0.0)) throw InvalidArgument("grid.box_length must be > 0");
  if (!(kappa >= 0.0)) throw InvalidArgument("grid.kappa must be >= 0");
  KGrid grid(n_per_axis, box_length, kappa);
  if (kappa >= grid.max_k()) throw EmptyGridError("kappa excludes every lattice mode");
  return grid;
}

/// Helicity triad per lattice index; entries for unretained modes are zero.
struct HelicityBasis {
  std::vector<Vec3> khat;
  std::vector<CVec3> u_plus;
  std::vector<CVec3> u_minus;

  const CVec3& u(Helicity h, std::size_t idx) const { return h == Helicity::plus ? u_plus[idx] : u_minus[idx]; }
};

namespace detail {

// First nonzero integer component positive.
inline bool in_positive_half(const std::array<int, 3>& m) {
  if (m[0] != 0) return m[0] > 0;
  if (m[1] != 0) return m[1] > 0;
  return m[2] > 0;
}

inline void raw_triad(const Vec3& khat, CVec3& up, CVec3& um) {
  const Vec3 zhat{0.0, 0.0, 1.0};
  Vec3 u1 = cross(zhat, khat);
  const double len = norm(u1);
  if (len > 1e-9) {
    u1 = {u1[0] / len, u1[1] / len, u1[2] / len};
  } else {
    u1 = {1.0, 0.0, 0.0};
  }
  const Vec3 u2 = cross(khat, u1);
  const double s = 1.0 / std::sqrt(2.0);
  for (int c = 0; c < 3; ++c) {
    up[c] = s * cplx(u1[c], u2[c]);
    um[c] = std::conj(up[c]);
  }
}

}  // namespace detail

/// Triad (khat, u+, u-) with k x u_s = -i s |k| u_s. The raw construction is
/// applied on the positive half-space; its mirror is assigned
/// u_s(-k) = u_{-s}(k) so the parity relation holds exactly.
inline HelicityBasis helicity_basis(const KGrid& grid) {
  if (grid.retained_count() == 0) throw EmptyGridError("helicity basis requested on a grid with no retained modes");
  HelicityBasis b;
  const std::size_t total = grid.size();
  b.khat.assign(total, Vec3{0.0, 0.0, 0.0});
  b.u_plus.assign(total, CVec3{});
  b.u_minus.assign(total, CVec3{});
  for (std::size_t idx = 0; idx < total; ++idx) {
    if (!grid.retained(idx)) continue;
    const auto m = grid.integer_index(idx);
    if (!detail::in_positive_half(m)) continue;
    const Vec3 kv = grid.k(idx);
    const double kn = norm(kv);
    const Vec3 kh{kv[0] / kn, kv[1] / kn, kv[2] / kn};
    b.khat[idx] = kh;
    detail::raw_triad(kh, b.u_plus[idx], b.u_minus[idx]);
    const std::size_t neg = grid.negated(idx);
    b.khat[neg] = {-kh[0], -kh[1], -kh[2]};
    b.u_plus[neg] = b.u_minus[idx];
    b.u_minus[neg] = b.u_plus[idx];
  }
  return b;
}

/// Positive-frequency helicity amplitudes A(+)_s(k). The negative-frequency
/// field is the complex conjugate of the positive-frequency one, so A(-) is
/// never stored.
struct ModeSet {
  std::shared_ptr<const KGrid> grid;
  std::shared_ptr<const HelicityBasis> basis;
  Units units;
  std::vector<std::array<cplx, 2>> amp;  // [idx][slot(helicity)]
  bool physical = false;

  cplx& at(Helicity h, std::size_t idx) { return amp[idx][slot(h)]; }
  cplx at(Helicity h, std::size_t idx) const { return amp[idx][slot(h)]; }

  /// Angular frequency c|k| of a lattice mode.
  double omega(std::size_t idx) const { return units.c * norm(grid->k(idx)); }
};

/// Zero-amplitude mode set on a fresh lattice.
inline ModeSet make_modes(const KGrid& grid, Units units = Units::natural()) {
  ModeSet m;
  m.grid = std::make_shared<const KGrid>(grid);
  m.basis = std::make_shared<const HelicityBasis>(helicity_basis(grid));
  m.units = units;
  m.amp.assign(grid.size(), {cplx{}, cplx{}});
  return m;
}

/// Zero-amplitude mode set sharing the lattice of `like`.
inline ModeSet zeros_like(const ModeSet& like) {
  ModeSet m;
  m.grid = like.grid;
  m.basis = like.basis;
  m.units = like.units;
  m.amp.assign(like.amp.size(), {cplx{}, cplx{}});
  return m;
}

/// Projection onto A_s(-k) = conj(A_{-s}(k)):
///   A'_s(k) = [A_s(k) + conj(A_{-s}(-k))] / 2.
inline ModeSet symmetrize(const ModeSet& modes) {
  ModeSet out = zeros_like(modes);
  const KGrid& g = *modes.grid;
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (!g.retained(idx)) continue;
    const std::size_t neg = g.negated(idx);
    for (Helicity h : {Helicity::plus, Helicity::minus})
      out.at(h, idx) = 0.5 * (modes.at(h, idx) + std::conj(modes.at(flip(h), neg)));
  }
  out.physical = true;
  return out;
}

/// Largest violation of the reality symmetry; 0 for symmetrized sets.
inline double symmetry_defect(const ModeSet& modes) {
  const KGrid& g = *modes.grid;
  double worst = 0.0;
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (!g.retained(idx)) continue;
    const std::size_t neg = g.negated(idx);
    for (Helicity h : {Helicity::plus, Helicity::minus})
      worst = std::max(worst, std::abs(modes.at(h, neg) - std::conj(modes.at(flip(h), idx))));
  }
  return worst;
}

/// Sum over retained modes of measure * sum_s |A_s|^2 * f(omega).
template <class F>
inline double quadratic_form(const ModeSet& modes, F&& per_omega) {
  const KGrid& g = *modes.grid;
  double acc = 0.0;
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (!g.retained(idx)) continue;
    const double a2 = std::norm(modes.amp[idx][0]) + std::norm(modes.amp[idx][1]);
    if (a2 == 0.0) continue;
    acc += a2 * per_omega(modes.omega(idx));
  }
  return acc * g.mode_measure();
}

/// Gaussian packet A_s(k) = a exp(-|k-k0|^2 / (4 sigma_k^2)) in one helicity,
/// symmetrized, then scaled so that sum measure * sum_s |A_s|^2 = |a|^2.
inline ModeSet gaussian_wavepacket(const KGrid& grid, const Vec3& k0, double sigma_k, Helicity helicity,
                                   cplx amplitude, Units units = Units::natural()) {
  if (!(sigma_k > 0.0)) throw InvalidArgument("wavepacket.sigma_k must be > 0");
  const double k0n = norm(k0);
  if (!(k0n > grid.kappa())) throw InvalidArgument("wavepacket.k0 must lie outside the kappa ball");
  const double band = grid.dk() * ((grid.n() - 1) / 2);
  for (double c : k0)
    if (std::abs(c) > band) throw InvalidArgument("wavepacket.k0 lies outside the grid band");

  ModeSet raw = make_modes(grid, units);
  if (amplitude == cplx{}) {
    raw.physical = true;
    return raw;
  }
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    if (!grid.retained(idx)) continue;
    const Vec3 kv = grid.k(idx);
    const Vec3 d{kv[0] - k0[0], kv[1] - k0[1], kv[2] - k0[2]};
    raw.at(helicity, idx) = amplitude * std::exp(-(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]) / (4.0 * sigma_k * sigma_k));
  }
  ModeSet out = symmetrize(raw);
  const double total = quadratic_form(out, [](double) { return 1.0; });
  if (!(total > 0.0)) throw InvalidArgument("wavepacket has no support on retained modes");
  const double scale = std::abs(amplitude) / std::sqrt(total);
  for (auto& a : out.amp) {
    a[0] *= scale;
    a[1] *= scale;
  }
  return out;
}

}  // namespace rsphoton
