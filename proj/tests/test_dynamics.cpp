#include <gtest/gtest.h>

#include "rsphoton/dynamics.hpp"
#include "rsphoton/observables.hpp"
#include "test_support.hpp"

using namespace rsphoton;

namespace {

Mat3c mul(const Mat3c& a, const Mat3c& b) {
  Mat3c out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) out[i][j] += a[i][k] * b[k][j];
  return out;
}

double l2_error_at(const ModeSet& m, double t_final, int steps) {
  const auto [d0, b0] = fields_from_potential(m, 0.0);
  const Trajectory lf = evolve_leapfrog(d0, b0, t_final / steps, steps, m.units, steps);
  const FieldSnapshot exact = synthesize_psi(m, t_final, Part::both);
  return l2_diff(lf.states.back(), exact) / l2(exact);
}

}  // namespace

TEST(Spin1, HermitianAndAlgebra) {
  const auto g = spin1_generators();
  for (int w = 0; w < 3; ++w)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) EXPECT_EQ(g.L[w][a][b], std::conj(g.L[w][b][a]));
  for (int w = 0; w < 3; ++w) {
    const int u = (w + 1) % 3, v = (w + 2) % 3;
    const Mat3c ab = mul(g.L[w], g.L[u]), ba = mul(g.L[u], g.L[w]);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) EXPECT_EQ(ab[a][b] - ba[a][b], kI * g.L[v][a][b]);
  }
}

TEST(Spin1, HelicityEigenvectorAndCross) {
  const auto g = spin1_generators();
  const double s = 1.0 / std::sqrt(2.0);
  const CVec3 e{cplx(s, 0.0), cplx(0.0, s), cplx(0.0, 0.0)};
  const CVec3 lz = apply(g.z(), e);
  for (int c = 0; c < 3; ++c) EXPECT_NEAR(std::abs(lz[c] - e[c]), 0.0, 1e-16);
  const Vec3 k{0.3, -1.2, 2.0};
  const CVec3 v{cplx(1.0, 2.0), cplx(-0.5, 0.1), cplx(0.0, -3.0)};
  CVec3 sum{};
  for (int w = 0; w < 3; ++w) sum += cplx(k[w]) * apply(g.L[w], v);
  const CVec3 ikx = kI * cross(to_complex(k), v);
  for (int c = 0; c < 3; ++c) EXPECT_NEAR(std::abs(sum[c] - ikx[c]), 0.0, 1e-15);
}

TEST(CurlVsL, ConstantAndPlaneWave) {
  FieldSnapshot f = zero_snapshot(8, 2.0 * kPi, 0.0, FieldKind::psi);
  for (auto& v : f.values) v = {cplx(1.0), cplx(2.0), cplx(-1.0)};
  EXPECT_LT(curl_vs_L_check(f), 1e-12);
  EXPECT_LT(max_abs(curl(f)), 1e-12);
  const double k = 2.0;
  for (std::size_t j = 0; j < f.size(); ++j) f.values[j] = {cplx{}, cplx{}, std::polar(1.0, k * f.position(j)[0])};
  const auto c = curl(f);
  for (std::size_t j = 0; j < f.size(); ++j) {
    const cplx expect = cplx(0.0, -k) * std::polar(1.0, k * f.position(j)[0]);
    EXPECT_NEAR(std::abs(c.values[j][1] - expect), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(c.values[j][0]) + std::abs(c.values[j][2]), 0.0, 1e-12);
  }
  EXPECT_LT(curl_vs_L_check(f), 1e-12);
}

TEST(CurlVsL, RandomBandLimited) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed)
    EXPECT_LT(curl_vs_L_check(oracle::random_band_limited(8, 3.0, 3, seed)), 1e-12);
}

TEST(EvolveSpectral, PhasesAndUnitarity) {
  const KGrid g = build_grid(8, 2.0 * kPi, 0.0);
  ModeSet m = make_modes(g);
  const std::size_t idx = g.flat(0, 3, 0);
  m.at(Helicity::plus, idx) = cplx(0.2, 0.7);
  const double omega = 3.0;
  const ModeSet half = evolve_spectral(m, kPi / omega);
  EXPECT_NEAR(std::abs(half.at(Helicity::plus, idx) + cplx(0.2, 0.7)), 0.0, 1e-15);
  const ModeSet same = evolve_spectral(m, 0.0);
  EXPECT_EQ(same.amp, m.amp);

  const ModeSet r = oracle::random_physical(g, 31);
  const ModeSet e = evolve_spectral(r, 12.345);
  EXPECT_NEAR(number_total(e) / number_total(r), 1.0, 1e-14);
  EXPECT_NEAR(energy_total(e) / energy_total(r), 1.0, 1e-14);
  const auto [d, b_field] = fields_from_potential(e, 0.0);
  EXPECT_LT(max_imag(d), 1e-10);
  EXPECT_LT(max_imag(b_field), 1e-10);
  const auto a = synthesize_psi(e, 0.0, Part::both), b = synthesize_psi(r, 12.345, Part::both);
  EXPECT_LT(max_abs_diff(a, b) / max_abs(b), 1e-12);
}

TEST(EvolveSpectral, NegativeHelicityRotatesOppositely) {
  // The u- component of the full wavefunction carries e^{+i w t}.
  const KGrid g = build_grid(8, 2.0 * kPi, 0.0);
  ModeSet m = make_modes(g);
  const std::size_t idx = g.flat(2, 0, 0);
  m.at(Helicity::minus, idx) = 1.0;
  const double t = 0.4;
  const auto w0 = to_spectrum(synthesize_psi(m, 0.0, Part::both));
  const auto wt = to_spectrum(synthesize_psi(m, t, Part::both));
  const std::size_t neg = g.negated(idx);
  const cplx c0 = hdot(w0[neg], m.basis->u_minus[neg]);
  const cplx ct = hdot(wt[neg], m.basis->u_minus[neg]);
  EXPECT_GT(std::abs(c0), 1e-6);
  EXPECT_NEAR(std::abs(ct / c0 - std::polar(1.0, 2.0 * t)), 0.0, 1e-13);
}

TEST(Leapfrog, ZeroFieldsStayZero) {
  const FieldSnapshot z = zero_snapshot(8, 1.0, 0.0, FieldKind::displacement);
  const Trajectory t = evolve_leapfrog(z, z, 0.01, 5);
  ASSERT_EQ(t.states.size(), 6u);
  for (const auto& s : t.states) EXPECT_EQ(max_abs(s), 0.0);
  EXPECT_EQ(schrodinger_residual(t), 0.0);
}

TEST(Leapfrog, StabilityAndArgumentErrors) {
  const FieldSnapshot z = zero_snapshot(8, 2.0 * kPi, 0.0, FieldKind::displacement);
  const double limit = leapfrog_dt_limit(8, 2.0 * kPi, Units::natural());
  EXPECT_NEAR(limit, 0.9 * 2.0 / (std::sqrt(3.0) * 4.0), 1e-15);
  EXPECT_THROW(evolve_leapfrog(z, z, 1.01 * limit, 3), StabilityError);
  EXPECT_NO_THROW(evolve_leapfrog(z, z, limit, 3));
  EXPECT_THROW(evolve_leapfrog(z, z, 0.0, 3), InvalidArgument);
  EXPECT_THROW(evolve_leapfrog(z, z, 0.01, -1), InvalidArgument);
  EXPECT_THROW(evolve_leapfrog(z, zero_snapshot(4, 2.0 * kPi, 0.0, FieldKind::magnetic), 0.01, 3), InvalidArgument);
}

TEST(Leapfrog, InitialStateIsFullWavefunction) {
  const KGrid g = build_grid(8, 2.0, 0.0);
  const ModeSet m = oracle::random_physical(g, 32);
  const auto [d, b] = fields_from_potential(m, 0.0);
  const Trajectory t = evolve_leapfrog(d, b, 0.001, 0);
  const auto w = synthesize_psi(m, 0.0, Part::both);
  EXPECT_LT(max_abs_diff(t.states[0], w) / max_abs(w), 1e-12);
}

TEST(Leapfrog, SecondOrderAgainstSpectralPropagator) {
  const KGrid g = build_grid(16, 2.0 * kPi, 0.0);
  const ModeSet m = oracle::random_physical(g, 33);
  const double t_final = 0.5;
  const double e1 = l2_error_at(m, t_final, 20);
  const double e2 = l2_error_at(m, t_final, 40);
  const double e3 = l2_error_at(m, t_final, 80);
  EXPECT_GT(e1 / e2, 3.5);
  EXPECT_LT(e1 / e2, 4.5);
  EXPECT_GT(e2 / e3, 3.5);
  EXPECT_LT(e2 / e3, 4.5);
}

TEST(Leapfrog, SiUnitsMatchSpectral) {
  const Units si = Units::si();
  const KGrid g = build_grid(8, 1e-6, 0.0);
  const ModeSet m = oracle::random_physical(g, 34, si);
  const double limit = leapfrog_dt_limit(8, 1e-6, si);
  const double e1 = l2_error_at(m, 50 * limit / 4, 50);
  const double e2 = l2_error_at(m, 50 * limit / 4, 100);
  EXPECT_NEAR(e1 / e2, 4.0, 0.5);
}

TEST(Leapfrog, EnergyDriftOverThousandSteps) {
  const KGrid g = build_grid(16, 2.0 * kPi, 0.0);
  const ModeSet m = gaussian_wavepacket(g, {2.0, 1.0, 0.0}, 0.5, Helicity::plus, 1.0);
  const auto [d, b] = fields_from_potential(m, 0.0);
  const Trajectory t = evolve_leapfrog(d, b, 2e-4, 1000, m.units, 10);
  const double e0 = energy_total(m);
  EXPECT_NEAR(field_energy(t.states[0]) / e0, 1.0, 1e-12);
  double drift = 0.0;
  for (const auto& s : t.states) drift = std::max(drift, std::abs(field_energy(s) / e0 - 1.0));
  EXPECT_LT(drift, 1e-6);
}

TEST(SchrodingerResidual, SecondOrderOnSpectralTrajectory) {
  const KGrid g = build_grid(8, 2.0 * kPi, 0.0);
  ModeSet m = make_modes(g);
  m.at(Helicity::plus, g.flat(1, 2, 0)) = 1.0;
  m = symmetrize(m);
  const double r1 = schrodinger_residual(spectral_trajectory(m, 0.0, 0.02, 4));
  const double r2 = schrodinger_residual(spectral_trajectory(m, 0.0, 0.01, 4));
  EXPECT_NEAR(r1 / r2, 4.0, 0.1);
  // Phi also satisfies the same form, at the same order.
  const double p1 = schrodinger_residual(spectral_trajectory(m, 0.0, 0.02, 4, true));
  const double p2 = schrodinger_residual(spectral_trajectory(m, 0.0, 0.01, 4, true));
  EXPECT_NEAR(p1 / p2, 4.0, 0.1);
  EXPECT_NEAR(p1 / r1, 1.0, 1e-6);
}

TEST(SchrodingerResidual, LeapfrogTrajectoryIsConsistent) {
  const KGrid g = build_grid(8, 2.0 * kPi, 0.0);
  const ModeSet m = oracle::random_physical(g, 35);
  const auto [d, b] = fields_from_potential(m, 0.0);
  const double r1 = schrodinger_residual(evolve_leapfrog(d, b, 0.02, 6));
  const double r2 = schrodinger_residual(evolve_leapfrog(d, b, 0.01, 6));
  EXPECT_LT(r1, 0.05);
  EXPECT_GT(r1 / r2, 3.0);
}

TEST(SchrodingerResidual, NeedsThreeStates) {
  const KGrid g = build_grid(4, 1.0, 0.0);
  const ModeSet m = oracle::random_physical(g, 1);
  EXPECT_THROW(schrodinger_residual(spectral_trajectory(m, 0.0, 0.1, 1)), InvalidArgument);
}
