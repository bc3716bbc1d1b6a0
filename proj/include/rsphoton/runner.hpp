#pragma once

// Executes a Scenario: one CSV per stage, summary.txt with headline scalars,
// timing.txt with wall times, and a FAILED marker naming the failing stage.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "rsphoton/dynamics.hpp"
#include "rsphoton/observables.hpp"
#include "rsphoton/scenario.hpp"
#include "rsphoton/synthesis.hpp"
#include "rsphoton/transforms.hpp"

namespace rsphoton::scenario {

enum class ExitCode : int { success = 0, stage_error = 1, invalid_scenario = 2, usage = 3 };

struct StageResult {
  std::string name;
  bool ok = true;
  std::string error;
  double wall_seconds = 0.0;
  std::map<std::string, double> scalars;
};

struct RunSummary {
  std::vector<StageResult> stages;
  std::map<std::string, double> headline;
  bool ok() const {
    for (const auto& s : stages)
      if (!s.ok) return false;
    return true;
  }
};

namespace detail {

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::string& header) : out_(path) {
    if (!out_) throw std::runtime_error("cannot open " + path.string());
    out_ << header << '\n';
  }
  CsvWriter& operator<<(double v) {
    sep();
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out_ << buf;
    return *this;
  }
  CsvWriter& operator<<(long long v) {
    sep();
    out_ << v;
    return *this;
  }
  CsvWriter& operator<<(cplx v) { return *this << v.real() << v.imag(); }
  void end_row() {
    out_ << '\n';
    first_ = true;
  }

 private:
  void sep() {
    if (!first_) out_ << ',';
    first_ = false;
  }
  std::ofstream out_;
  bool first_ = true;
};

inline void write_snapshot(const std::filesystem::path& path, const FieldSnapshot& f) {
  CsvWriter w(path, "ix,iy,iz,x,y,z,re_x,im_x,re_y,im_y,re_z,im_z");
  const std::size_t n = static_cast<std::size_t>(f.n);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Vec3 r = f.position(i);
    w << static_cast<long long>(i / (n * n)) << static_cast<long long>((i / n) % n) << static_cast<long long>(i % n)
      << r[0] << r[1] << r[2] << f.values[i][0] << f.values[i][1] << f.values[i][2];
    w.end_row();
  }
}

inline ModeSet initial_state(const Scenario& sc, const Units& units) {
  const KGrid grid = build_grid(sc.n_per_axis, sc.box_length, sc.kappa);
  switch (sc.state) {
    case StateType::wavepacket: return gaussian_wavepacket(grid, sc.k0, sc.sigma_k, sc.helicity, sc.amplitude, units);
    case StateType::modes: {
      ModeSet m = make_modes(grid, units);
      for (const auto& em : sc.modes) {
        const std::size_t idx = grid.flat(em.m[0], em.m[1], em.m[2]);
        if (!grid.retained(idx)) throw InvalidArgument("explicit mode is not retained on this grid");
        m.at(em.helicity, idx) += em.amplitude;
      }
      return sc.symmetrize_state ? symmetrize(m) : m;
    }
    case StateType::random: {
      ModeSet m = make_modes(grid, units);
      std::mt19937_64 rng(sc.seed);
      std::normal_distribution<double> gauss(0.0, 1.0);
      for (std::size_t idx = 0; idx < grid.size(); ++idx) {
        if (!grid.retained(idx)) continue;
        for (auto& a : m.amp[idx]) {
          const double re = gauss(rng);
          a = {re, gauss(rng)};
        }
      }
      return sc.symmetrize_state ? symmetrize(m) : m;
    }
  }
  throw InvalidArgument("unknown state type");
}

}  // namespace detail

/// Runs every stage in order; the first failing stage stops the pipeline and
/// leaves a FAILED marker. Output files are deterministic for a fixed scenario.
inline RunSummary run(const Scenario& sc) {
  namespace fs = std::filesystem;
  using detail::CsvWriter;
  const fs::path dir = sc.output_dir;
  fs::create_directories(dir);
  fs::remove(dir / "FAILED");
  const Units units = sc.si_units ? Units::si() : Units::natural();

  RunSummary summary;
  // Amplitudes stay at t = 0; every stage synthesizes at the running time.
  ModeSet initial;
  try {
    initial = detail::initial_state(sc, units);
  } catch (const std::exception& e) {
    summary.stages.push_back({"initial_state", false, e.what(), 0.0, {}});
    std::ofstream(dir / "FAILED") << "initial_state\n";
    return summary;
  }
  const ModeSet& modes = initial;
  double now = 0.0;
  std::optional<FieldSnapshot> last_psi, last_phi;

  for (std::size_t i = 0; i < sc.stages.size(); ++i) {
    const Stage& st = sc.stages[i];
    StageResult res;
    res.name = std::string(to_string(st.type));
    const std::string stem = "stage_" + std::to_string(i) + "_" + res.name;
    const auto t_start = std::chrono::steady_clock::now();
    try {
      switch (st.type) {
        case Stage::Type::synthesize: {
          FieldSnapshot f;
          switch (st.field) {
            case FieldChoice::psi: f = synthesize_psi(modes, now, st.part); last_psi = f; break;
            case FieldChoice::phi: f = synthesize_phi(modes, now, st.part); last_phi = f; break;
            case FieldChoice::potential: f = synthesize_potential(modes, now); break;
            case FieldChoice::displacement: f = fields_from_potential(modes, now).first; break;
            case FieldChoice::magnetic: f = fields_from_potential(modes, now).second; break;
          }
          detail::write_snapshot(dir / (stem + ".csv"), f);
          res.scalars["integrated_norm2"] = integrated_norm2(f);
          res.scalars["max_abs"] = max_abs(f);
          res.scalars["max_imag"] = max_imag(f);
          break;
        }
        case Stage::Type::transform: {
          const TransformSpec spec{st.kind};
          const FieldSnapshot& src = spec.forward() ? *last_psi : *last_phi;
          const FieldSnapshot out = apply_spectral(spec, src, *modes.basis, *modes.grid, units);
          detail::write_snapshot(dir / (stem + ".csv"), out);
          // direct synthesis of the same target
          const bool from_positive = src.kind == FieldKind::psi_plus || src.kind == FieldKind::phi_plus;
          const bool from_negative = src.kind == FieldKind::psi_minus || src.kind == FieldKind::phi_minus;
          const Part part = from_positive ? Part::positive : from_negative ? Part::negative : Part::both;
          const double src_phase = spec.forward() ? 0.0 : kPi / 4.0;
          const Weighting wt = spec.forward() ? Weighting::photon : Weighting::energy;
          const FieldSnapshot direct =
              synthesize_wavefunction(modes, src.time, part, wt, src_phase + spec.phase(), out.kind);
          res.scalars["max_route_deviation"] = max_abs_diff(out, direct);
          res.scalars["integrated_norm2"] = integrated_norm2(out);
          if (spec.forward()) last_phi = out;
          else last_psi = out;
          break;
        }
        case Stage::Type::evolve: {
          const double dt = st.dt_default ? default_dt(st.scheme, leapfrog_dt_limit(sc.n_per_axis, sc.box_length, units))
                                          : st.dt;
          const double h0 = energy_total(modes), n0 = number_total(modes);
          if (st.scheme == Scheme::spectral) {
            CsvWriter w(dir / (stem + ".csv"), "step,t,H_total,N_total");
            double max_dh = 0.0, max_dn = 0.0;
            for (int s = 0; s <= st.steps; ++s) {
              const ModeSet m = evolve_spectral(modes, dt * s);
              const double h = energy_total(m), n = number_total(m);
              max_dh = std::max(max_dh, std::abs(h - h0));
              max_dn = std::max(max_dn, std::abs(n - n0));
              if (s % st.save_every == 0 || s == st.steps) {
                w << static_cast<long long>(s) << now + dt * s << h << n;
                w.end_row();
              }
            }
            res.scalars["max_energy_change"] = max_dh;
            res.scalars["max_number_change"] = max_dn;
          } else {
            if (dt > leapfrog_dt_limit(sc.n_per_axis, sc.box_length, units))
              throw StabilityError("leapfrog dt exceeds the stability bound");
            const auto [d0, b0] = fields_from_potential(modes, now);
            const Trajectory traj = evolve_leapfrog(d0, b0, dt, st.steps, units, st.save_every);
            CsvWriter w(dir / (stem + ".csv"), "t,field_energy");
            double drift = 0.0;
            const double e0 = field_energy(traj.states.front());
            for (std::size_t s = 0; s < traj.states.size(); ++s) {
              const double e = field_energy(traj.states[s]);
              drift = std::max(drift, e0 > 0.0 ? std::abs(e - e0) / e0 : std::abs(e - e0));
              w << traj.times[s] << e;
              w.end_row();
            }
            const FieldSnapshot ref = synthesize_psi(modes, now + dt * st.steps, Part::both);
            const double scale = l2(ref);
            const double err = l2_diff(traj.states.back(), ref);
            res.scalars["l2_error_vs_spectral"] = scale > 0.0 ? err / scale : err;
            res.scalars["max_relative_energy_drift"] = drift;
            if (traj.states.size() >= 3 && st.save_every == 1)
              res.scalars["schrodinger_residual"] = schrodinger_residual(traj, units);
          }
          now += dt * st.steps;
          res.scalars["t_final"] = now;
          break;
        }
        case Stage::Type::observables: {
          const ObservableReport rep = local_observables(modes, st.volumes, now);
          CsvWriter w(dir / (stem + ".csv"), "volume,x0,y0,z0,x1,y1,z1,H_local,N_local,Edot,Ndot");
          double hsum = 0.0, nsum = 0.0;
          for (std::size_t v = 0; v < rep.per_volume.size(); ++v) {
            const auto& lo = rep.per_volume[v];
            w << static_cast<long long>(v) << lo.volume.lower[0] << lo.volume.lower[1] << lo.volume.lower[2]
              << lo.volume.upper[0] << lo.volume.upper[1] << lo.volume.upper[2] << lo.H_local << lo.N_local << lo.Edot
              << lo.Ndot;
            w.end_row();
            hsum += lo.H_local;
            nsum += lo.N_local;
          }
          res.scalars["H_total"] = rep.H_total;
          res.scalars["N_total"] = rep.N_total;
          res.scalars["H_local_sum"] = hsum;
          res.scalars["N_local_sum"] = nsum;
          res.scalars["kappa_warnings"] = static_cast<double>(rep.warnings.size());
          summary.headline["H_total"] = rep.H_total;
          summary.headline["N_total"] = rep.N_total;
          break;
        }
        case Stage::Type::localization_study: {
          const LocalizationTable t = localization_study(st.volumes.front(), st.band);
          CsvWriter w(dir / (stem + ".csv"), "a,b,overlap");
          for (std::size_t a = 0; a < t.overlap.size(); ++a)
            for (std::size_t b = 0; b < t.overlap.size(); ++b) {
              w << static_cast<long long>(a) << static_cast<long long>(b) << t.overlap[a][b];
              w.end_row();
            }
          res.scalars["max_off_diagonal"] = t.max_off_diagonal;
          break;
        }
        case Stage::Type::timedomain_demo: {
          const TransformSpec spec{st.kind};
          const std::size_t cells = static_cast<std::size_t>(std::llround(st.window / st.sample_dt));
          const std::size_t outputs = 64;
          const TimeSeries tone = sample_tone(st.omega, 0.0, st.sample_dt, 2 * cells + outputs + 1);
          const TimeSeries out = apply_timedomain(spec, tone, st.window, cells, cells + outputs, units);
          CsvWriter w(dir / (stem + ".csv"), "j,t,re_in,im_in,re_out,im_out");
          cplx mean{};
          for (std::size_t j = 0; j < out.samples.size(); ++j) {
            const cplx in = tone.samples[cells + j];
            w << static_cast<long long>(cells + j) << out.time(j) << in << out.samples[j];
            w.end_row();
            mean += out.samples[j] / in;
          }
          mean /= static_cast<double>(out.samples.size());
          const cplx expect = spectral_multiplier(spec, st.omega, FrequencyPart::positive, units);
          res.scalars["measured_re"] = mean.real();
          res.scalars["measured_im"] = mean.imag();
          res.scalars["expected_re"] = expect.real();
          res.scalars["expected_im"] = expect.imag();
          res.scalars["relative_error"] = std::abs(mean - expect) / std::abs(expect);
          break;
        }
      }
    } catch (const std::exception& e) {
      res.ok = false;
      res.error = e.what();
    }
    res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    summary.stages.push_back(res);
    if (!res.ok) {
      std::ofstream(dir / "FAILED") << "stage." << i << " " << res.name << "\n";
      break;
    }
  }
  summary.headline["H_total"] = energy_total(modes);
  summary.headline["N_total"] = number_total(modes);
  summary.headline["t_final"] = now;
  return summary;
}

/// summary.txt: effective settings, per-stage status and scalars, headline
/// scalars, and the exit code table. Wall times go to timing.txt so the
/// summary is reproducible byte for byte.
inline void write_summary(const Scenario& sc, const RunSummary& s) {
  namespace fs = std::filesystem;
  const fs::path dir = sc.output_dir;
  std::ofstream out(dir / "summary.txt");
  for (const auto& [k, v] : sc.echo) out << "config." << k << " = " << v << '\n';
  for (std::size_t i = 0; i < s.stages.size(); ++i) {
    const auto& st = s.stages[i];
    const std::string base = "stage." + std::to_string(i);
    out << base << ".name = " << st.name << '\n';
    out << base << ".status = " << (st.ok ? "ok" : "error") << '\n';
    if (!st.ok) out << base << ".error = " << st.error << '\n';
    for (const auto& [k, v] : st.scalars) out << base << "." << k << " = " << detail::fmt(v) << '\n';
  }
  for (const auto& [k, v] : s.headline) out << k << " = " << detail::fmt(v) << '\n';
  out << "status = " << (s.ok() ? "success" : "error") << '\n';
  out << "exit_code.0 = success\n";
  out << "exit_code.1 = stage error (see FAILED)\n";
  out << "exit_code.2 = invalid scenario\n";
  out << "exit_code.3 = usage error\n";

  std::ofstream timing(dir / "timing.txt");
  for (std::size_t i = 0; i < s.stages.size(); ++i)
    timing << "stage." << i << ".wall_seconds = " << detail::fmt(s.stages[i].wall_seconds) << '\n';
}

}  // namespace rsphoton::scenario
