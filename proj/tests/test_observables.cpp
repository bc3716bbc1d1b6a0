#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss.hpp>
#include <random>

#include "rsphoton/dynamics.hpp"
#include "rsphoton/observables.hpp"
#include "test_support.hpp"

using namespace rsphoton;

namespace {

// Tensor Gauss-Legendre integral of exp(i q.r) over the box.
cplx numeric_overlap(const VolumeBox& v, const Vec3& q) {
  using boost::math::quadrature::gauss;
  return gauss<double, 40>::integrate(
      [&](double x) {
        return gauss<double, 40>::integrate(
            [&](double y) {
              return gauss<double, 40>::integrate(
                  [&](double z) { return std::polar(1.0, q[0] * x + q[1] * y + q[2] * z); }, v.lower[2],
                  v.upper[2]);
            },
            v.lower[1], v.upper[1]);
      },
      v.lower[0], v.upper[0]);
}

}  // namespace

TEST(Totals, SingleModeEnergyAndNumber) {
  const Units u = Units::from(2.0, 1.0, 0.25);
  const KGrid g = build_grid(8, 3.0, 0.0);
  ModeSet m = make_modes(g, u);
  const std::size_t idx = g.flat(1, -1, 2);
  m.at(Helicity::plus, idx) = cplx(0.3, 0.4);
  const double measure = std::pow(2.0 * kPi / 3.0, 3);
  EXPECT_NEAR(number_total(m), 0.25 * measure, 1e-14);
  EXPECT_NEAR(energy_total(m), u.hbar * u.c * norm(g.k(idx)) * 0.25 * measure, 1e-12);
  EXPECT_EQ(energy_total(make_modes(g)), 0.0);
}

TEST(Narrowband, SingleAndTwoModes) {
  const KGrid g = build_grid(8, 2.0 * kPi, 0.0);
  ModeSet m = make_modes(g);
  EXPECT_THROW(narrowband_ratio(m), UndefinedRatioError);
  m.at(Helicity::plus, g.flat(2, 0, 0)) = 1.0;
  EXPECT_NEAR(narrowband_ratio(m).ratio, 1.0, 1e-15);
  m.at(Helicity::minus, g.flat(0, 3, 0)) = 0.5;
  const NarrowbandRatio r = narrowband_ratio(m);
  EXPECT_DOUBLE_EQ(r.omega_peak, 2.0);
  EXPECT_NEAR(r.omega_bar, (2.0 * 1.0 + 3.0 * 0.25) / 1.25, 1e-14);
  EXPECT_NEAR(r.ratio, r.omega_bar / 2.0, 1e-15);
}

TEST(Narrowband, WideBandDeviates) {
  const KGrid g = build_grid(24, 16.0 * kPi, 0.0);  // dk = 1/8
  const ModeSet m = gaussian_wavepacket(g, {1.0, 0.0, 0.0}, 0.3, Helicity::plus, 1.0);
  EXPECT_GT(std::abs(narrowband_ratio(m).ratio - 1.0), 0.01);
}

TEST(LocalObservables, PartitionAdditivity) {
  const KGrid g = build_grid(16, 4.0, 0.0);
  const ModeSet m = oracle::random_physical(g, 41);
  std::vector<VolumeBox> parts;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) parts.push_back({{2.0 * a, 2.0 * b, 2.0 * c}, {2.0 * a + 2, 2.0 * b + 2, 2.0 * c + 2}});
  const ObservableReport rep = local_observables(m, parts, 0.3);
  double h = 0.0, n = 0.0, hdot = 0.0, ndot = 0.0, scale = 0.0;
  for (const auto& p : rep.per_volume) {
    EXPECT_GE(p.H_local, -1e-10);
    EXPECT_GE(p.N_local, -1e-10);
    h += p.H_local;
    n += p.N_local;
    hdot += p.Edot;
    ndot += p.Ndot;
    scale = std::max(scale, std::abs(p.Ndot));
  }
  EXPECT_NEAR(h / rep.H_total, 1.0, 1e-10);
  EXPECT_NEAR(n / rep.N_total, 1.0, 1e-10);
  EXPECT_LT(std::abs(ndot), 1e-8 * scale);
  EXPECT_LT(std::abs(hdot), 1e-8 * rep.H_total * g.max_retained_k());
}

TEST(LocalObservables, RatesMatchLocalDifferences) {
  const KGrid g = build_grid(12, 3.0, 0.0);
  const ModeSet m = oracle::random_physical(g, 42);
  const std::vector<VolumeBox> vol{{{0.0, 0.0, 0.0}, {1.5, 3.0, 3.0}}};
  const double t = 0.2, h = 1e-3;
  const double np = local_observables(m, vol, t + h).per_volume[0].N_local;
  const double nm = local_observables(m, vol, t - h).per_volume[0].N_local;
  const auto rep = local_observables(m, vol, t);
  EXPECT_NEAR(rep.per_volume[0].Ndot, (np - nm) / (2.0 * h), 1e-4 * std::abs(rep.per_volume[0].Ndot) + 1e-8);
}

TEST(LocalObservables, TransitIsPositiveThenNegative) {
  const KGrid g = build_grid(32, 32.0, 0.0);
  const ModeSet m = gaussian_wavepacket(g, {2.0, 0.0, 0.0}, 0.4, Helicity::plus, 1.0);
  const std::vector<VolumeBox> vol{{{6.0, 0.0, 0.0}, {10.0, 32.0, 32.0}}};
  double peak_in = 0.0, peak_out = 0.0, t_in = -1.0, t_out = -1.0;
  for (double t = 0.0; t <= 16.0; t += 0.5) {
    const double ndot = local_observables(m, vol, t).per_volume[0].Ndot;
    if (ndot > peak_in) {
      peak_in = ndot;
      t_in = t;
    }
    if (ndot < peak_out) {
      peak_out = ndot;
      t_out = t;
    }
  }
  EXPECT_GT(peak_in, 0.05);
  EXPECT_LT(peak_out, -0.05);
  EXPECT_LT(t_in, t_out);
}

TEST(LocalObservables, ValidationAndWarnings) {
  const KGrid g = build_grid(8, 4.0, 0.0);
  const ModeSet m = oracle::random_physical(g, 43);
  EXPECT_THROW(local_observables(m, {{{0, 0, 0}, {2, 2, 2}}, {{1, 1, 1}, {3, 3, 3}}}, 0.0), InvalidArgument);
  EXPECT_THROW(local_observables(m, {{{0, 0, 0}, {5, 2, 2}}}, 0.0), InvalidArgument);
  EXPECT_THROW(local_observables(m, {{{1, 0, 0}, {1, 2, 2}}}, 0.0), InvalidArgument);
  const auto rep = local_observables(m, {{{0, 0, 0}, {2, 2, 2}}, {{2, 0, 0}, {4, 2, 2}}}, 0.0);
  EXPECT_EQ(rep.warnings.size(), 2u);

  const KGrid wide = build_grid(16, 40.0, 1.0);
  const ModeSet w = oracle::random_physical(wide, 44);
  EXPECT_TRUE(local_observables(w, {{{0, 0, 0}, {10, 10, 10}}}, 0.0).warnings.empty());
  EXPECT_EQ(local_observables(w, {{{0, 0, 0}, {5, 10, 10}}}, 0.0).warnings.size(), 1u);
}

TEST(SincOverlap, MatchesNumericIntegration) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pos(0.0, 2.0), len(0.2, 2.0), kk(-4.0, 4.0);
  for (int c = 0; c < 10; ++c) {
    VolumeBox v;
    Vec3 k, kp;
    for (int w = 0; w < 3; ++w) {
      v.lower[w] = pos(rng);
      v.upper[w] = v.lower[w] + len(rng);
      k[w] = kk(rng);
      kp[w] = kk(rng);
    }
    const Vec3 q{kp[0] - k[0], kp[1] - k[1], kp[2] - k[2]};
    EXPECT_NEAR(std::abs(sinc_overlap(v, k, kp) - numeric_overlap(v, q)), 0.0, 1e-8);
  }
}

TEST(SincOverlap, DiagonalAndBound) {
  const VolumeBox v{{0.5, 0.0, 1.0}, {2.5, 1.0, 4.0}};
  EXPECT_NEAR(std::abs(sinc_overlap(v, {1, 2, 3}, {1, 2, 3}) - v.volume()), 0.0, 1e-14);
  for (double x = 0.01; x < 200.0; x *= 1.37) {
    EXPECT_LE(std::abs(sinc(x)), 1.0 / x);
    EXPECT_LE(std::abs(sinc(-x)), 1.0 / x);
  }
  EXPECT_EQ(sinc(0.0), 1.0);
}

TEST(Localization, CommensurateBandIsDiagonal) {
  const VolumeBox v{{0.0, 0.0, 0.0}, {2.0, 3.0, 4.0}};
  std::vector<Vec3> band;
  for (int a = -1; a <= 1; ++a)
    for (int b = 0; b <= 1; ++b) band.push_back({kPi * a, 2.0 * kPi / 3.0 * b + 1.0, 0.5});
  const auto t = localization_study(v, band);
  for (std::size_t i = 0; i < band.size(); ++i) EXPECT_NEAR(t.overlap[i][i], 1.0, 1e-15);
  EXPECT_LT(t.max_off_diagonal, 1e-15);

  std::vector<Vec3> off{{0.0, 0.0, 0.0}, {0.3, 0.0, 0.0}};
  EXPECT_GT(localization_study(v, off).max_off_diagonal, 0.5);
  EXPECT_THROW(localization_study(v, {}), InvalidArgument);
}
