#pragma once

// Scenario documents: flat key = value lines with dotted keys.
//
//   grid.n_per_axis = 16
//   grid.box_length = 6.283185307179586
//   grid.kappa = 0
//   state.type = wavepacket            # wavepacket | modes | random
//   wavepacket.k0 = 3 0 0
//   wavepacket.sigma_k = 0.5
//   wavepacket.helicity = +
//   wavepacket.amplitude = 1 0
//   modes.0 = 3 0 0 + 1 0              # mx my mz helicity re im (lattice indices)
//   stage.0 = synthesize
//   stage.0.field = psi
//   output.dir = out
//
// '#' starts a comment. Unknown keys are rejected.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rsphoton/dynamics.hpp"
#include "rsphoton/kspace.hpp"
#include "rsphoton/observables.hpp"
#include "rsphoton/synthesis.hpp"
#include "rsphoton/transforms.hpp"

namespace rsphoton::scenario {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string key, const std::string& msg)
      : std::runtime_error(key + ": " + msg), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

enum class StateType { wavepacket, modes, random };
enum class FieldChoice { psi, phi, potential, displacement, magnetic };

struct ExplicitMode {
  std::array<int, 3> m{};
  Helicity helicity = Helicity::plus;
  cplx amplitude{};
};

struct Stage {
  enum class Type { synthesize, transform, evolve, observables, localization_study, timedomain_demo };
  Type type = Type::synthesize;
  // synthesize
  FieldChoice field = FieldChoice::psi;
  Part part = Part::positive;
  // transform / timedomain_demo
  TransformKind kind = TransformKind::T_plus;
  // evolve
  Scheme scheme = Scheme::spectral;
  double dt = 0.0;
  bool dt_default = false;
  int steps = 10;
  int save_every = 1;
  // observables / localization_study
  std::vector<VolumeBox> volumes;
  std::vector<Vec3> band;
  // timedomain_demo
  double omega = 1.0;
  double window = 200.0;
  double sample_dt = 0.01;
};

inline std::string_view to_string(Stage::Type t) {
  switch (t) {
    case Stage::Type::synthesize: return "synthesize";
    case Stage::Type::transform: return "transform";
    case Stage::Type::evolve: return "evolve";
    case Stage::Type::observables: return "observables";
    case Stage::Type::localization_study: return "localization_study";
    case Stage::Type::timedomain_demo: return "timedomain_demo";
  }
  return "unknown";
}

struct Scenario {
  int n_per_axis = 0;
  double box_length = 0.0;
  double kappa = 0.0;
  StateType state = StateType::wavepacket;
  bool symmetrize_state = false;
  Vec3 k0{};
  double sigma_k = 0.0;
  Helicity helicity = Helicity::plus;
  cplx amplitude{1.0, 0.0};
  std::vector<ExplicitMode> modes;
  std::uint64_t seed = 1;
  bool si_units = false;
  std::string output_dir = "out";
  std::vector<Stage> stages;
  /// Every effective setting, defaults included, in key order.
  std::map<std::string, std::string> echo;
};

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

inline std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

inline double to_double(const std::string& key, const std::string& tok) {
  double v = 0.0;
  const char* end = tok.data() + tok.size();
  auto [p, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || p != end || !std::isfinite(v)) throw ValidationError(key, "expected a finite number, got '" + tok + "'");
  return v;
}

inline long long to_int(const std::string& key, const std::string& tok) {
  long long v = 0;
  const char* end = tok.data() + tok.size();
  auto [p, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || p != end) throw ValidationError(key, "expected an integer, got '" + tok + "'");
  return v;
}

inline std::vector<double> numbers(const std::string& key, const std::string& value, std::size_t count) {
  const auto toks = split_ws(value);
  if (toks.size() != count) throw ValidationError(key, "expected " + std::to_string(count) + " numbers");
  std::vector<double> out;
  for (const auto& t : toks) out.push_back(to_double(key, t));
  return out;
}

inline Helicity to_helicity(const std::string& key, const std::string& tok) {
  if (tok == "+" || tok == "plus" || tok == "+1") return Helicity::plus;
  if (tok == "-" || tok == "minus" || tok == "-1") return Helicity::minus;
  throw ValidationError(key, "helicity must be + or -");
}

inline VolumeBox to_volume(const std::string& key, const std::string& value) {
  const auto v = numbers(key, value, 6);
  VolumeBox b{{v[0], v[1], v[2]}, {v[3], v[4], v[5]}};
  for (int w = 0; w < 3; ++w)
    if (!(b.lower[w] < b.upper[w])) throw ValidationError(key, "volume needs lower < upper on every axis");
  return b;
}

inline std::string valid_kinds() {
  std::string s;
  for (auto k : kTransformNames) {
    if (!s.empty()) s += ", ";
    s += k;
  }
  return s;
}

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// "stage.3.volume.1" -> index 3, rest "volume.1"
inline bool split_indexed(const std::string& key, const std::string& prefix, long long& index, std::string& rest) {
  if (key.rfind(prefix, 0) != 0) return false;
  const std::string tail = key.substr(prefix.size());
  const auto dot = tail.find('.');
  const std::string num = tail.substr(0, dot);
  if (num.empty() || !std::all_of(num.begin(), num.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    return false;
  index = std::stoll(num);
  rest = dot == std::string::npos ? "" : tail.substr(dot + 1);
  return true;
}

}  // namespace detail

/// Reads raw key/value pairs; syntax errors carry the line number.
inline std::map<std::string, std::string> read_pairs(std::string_view text) {
  std::map<std::string, std::string> kv;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const std::string body = detail::trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected 'key = value'");
    const std::string key = detail::trim(std::string_view(body).substr(0, eq));
    const std::string value = detail::trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) throw ParseError(line_no, "empty key");
    if (key.find_first_of(" \t") != std::string::npos) throw ParseError(line_no, "key contains whitespace");
    if (value.empty()) throw ParseError(line_no, "empty value for '" + key + "'");
    if (!kv.emplace(key, value).second) throw ParseError(line_no, "duplicate key '" + key + "'");
  }
  return kv;
}

/// Default evolve step: half the leapfrog bound (leapfrog) or a tenth of it (spectral).
inline double default_dt(Scheme scheme, double leapfrog_limit) {
  return scheme == Scheme::leapfrog ? 0.5 * leapfrog_limit : 0.1 * leapfrog_limit;
}

namespace detail {

inline Stage parse_stage(long long index, const std::string& name, const std::map<std::string, std::string>& params) {
  const std::string base = "stage." + std::to_string(index);
  Stage st;
  std::set<std::string> allowed;
  auto get = [&](const std::string& p) -> std::optional<std::string> {
    auto it = params.find(p);
    if (it == params.end()) return std::nullopt;
    return it->second;
  };
  auto key = [&](const std::string& p) { return base + "." + p; };

  if (name == "synthesize") {
    st.type = Stage::Type::synthesize;
    allowed = {"field", "part"};
    const std::string f = get("field").value_or("psi");
    if (f == "psi") st.field = FieldChoice::psi;
    else if (f == "phi") st.field = FieldChoice::phi;
    else if (f == "potential") st.field = FieldChoice::potential;
    else if (f == "displacement") st.field = FieldChoice::displacement;
    else if (f == "magnetic") st.field = FieldChoice::magnetic;
    else throw ValidationError(key("field"), "must be one of psi, phi, potential, displacement, magnetic");
    const std::string p = get("part").value_or("positive");
    if (p == "positive") st.part = Part::positive;
    else if (p == "negative") st.part = Part::negative;
    else if (p == "both") st.part = Part::both;
    else throw ValidationError(key("part"), "must be one of positive, negative, both");
  } else if (name == "transform" || name == "timedomain_demo") {
    st.type = name == "transform" ? Stage::Type::transform : Stage::Type::timedomain_demo;
    allowed = {"kind"};
    const auto k = get("kind");
    if (!k) throw ValidationError(key("kind"), "missing; valid kinds: " + valid_kinds());
    const auto parsed = parse_transform_kind(*k);
    if (!parsed) throw ValidationError(key("kind"), "unknown transform '" + *k + "'; valid kinds: " + valid_kinds());
    st.kind = *parsed;
    if (st.type == Stage::Type::timedomain_demo) {
      allowed.insert({"omega", "window", "dt"});
      if (auto v = get("omega")) st.omega = to_double(key("omega"), *v);
      if (auto v = get("window")) st.window = to_double(key("window"), *v);
      if (auto v = get("dt")) st.sample_dt = to_double(key("dt"), *v);
      if (!(st.omega > 0.0)) throw ValidationError(key("omega"), "must be > 0");
      if (!(st.sample_dt > 0.0)) throw ValidationError(key("dt"), "must be > 0");
      if (!(st.window >= st.sample_dt)) throw ValidationError(key("window"), "must be >= dt");
      if (st.window / st.sample_dt > 2e6) throw ValidationError(key("window"), "window / dt exceeds 2e6 samples");
    }
  } else if (name == "evolve") {
    st.type = Stage::Type::evolve;
    allowed = {"scheme", "dt", "steps", "save_every"};
    const std::string s = get("scheme").value_or("spectral");
    if (s == "spectral") st.scheme = Scheme::spectral;
    else if (s == "leapfrog") st.scheme = Scheme::leapfrog;
    else throw ValidationError(key("scheme"), "must be spectral or leapfrog");
    if (auto v = get("dt")) {
      st.dt = to_double(key("dt"), *v);
      if (!(st.dt > 0.0)) throw ValidationError(key("dt"), "must be > 0");
    }
    if (auto v = get("steps")) st.steps = static_cast<int>(to_int(key("steps"), *v));
    if (st.steps < 1 || st.steps > 1000000) throw ValidationError(key("steps"), "must be in [1, 1000000]");
    if (auto v = get("save_every")) st.save_every = static_cast<int>(to_int(key("save_every"), *v));
    if (st.save_every < 1) throw ValidationError(key("save_every"), "must be >= 1");
  } else if (name == "observables") {
    st.type = Stage::Type::observables;
    for (const auto& [p, v] : params) {
      long long vi = 0;
      std::string rest;
      if (split_indexed(p, "volume.", vi, rest) && rest.empty()) {
        allowed.insert(p);
        st.volumes.push_back(to_volume(key(p), v));
      }
    }
  } else if (name == "localization_study") {
    st.type = Stage::Type::localization_study;
    allowed = {"volume"};
    const auto v = get("volume");
    if (!v) throw ValidationError(key("volume"), "missing");
    st.volumes.push_back(to_volume(key("volume"), *v));
    for (const auto& [p, val] : params) {
      long long bi = 0;
      std::string rest;
      if (split_indexed(p, "band.", bi, rest) && rest.empty()) {
        allowed.insert(p);
        const auto nums = numbers(key(p), val, 3);
        st.band.push_back({nums[0], nums[1], nums[2]});
      }
    }
    if (st.band.empty()) throw ValidationError(key("band.0"), "localization study needs at least one band wavevector");
  } else {
    throw ValidationError(base,
                          "unknown stage '" + name +
                              "'; valid stages: synthesize, transform, evolve, observables, localization_study, "
                              "timedomain_demo");
  }
  for (const auto& [p, v] : params)
    if (!allowed.count(p)) throw ValidationError(key(p), "unknown key for stage '" + name + "'");
  return st;
}

}  // namespace detail

/// Parses and validates a scenario document.
inline Scenario parse_scenario(std::string_view text) {
  using detail::to_double;
  using detail::to_int;
  const auto kv = read_pairs(text);
  Scenario sc;
  std::set<std::string> used;
  auto take = [&](const std::string& k) -> std::optional<std::string> {
    auto it = kv.find(k);
    if (it == kv.end()) return std::nullopt;
    used.insert(k);
    return it->second;
  };
  auto require = [&](const std::string& k) {
    auto v = take(k);
    if (!v) throw ValidationError(k, "required key missing");
    return *v;
  };

  sc.n_per_axis = static_cast<int>(to_int("grid.n_per_axis", require("grid.n_per_axis")));
  if (sc.n_per_axis < 2) throw ValidationError("grid.n_per_axis", "must be >= 2");
  if (sc.n_per_axis > 256) throw ValidationError("grid.n_per_axis", "must be <= 256");
  sc.box_length = to_double("grid.box_length", require("grid.box_length"));
  if (!(sc.box_length > 0.0)) throw ValidationError("grid.box_length", "must be > 0");
  if (auto v = take("grid.kappa")) sc.kappa = to_double("grid.kappa", *v);
  if (!(sc.kappa >= 0.0)) throw ValidationError("grid.kappa", "must be >= 0");
  {
    const double kmax = std::sqrt(3.0) * (2.0 * kPi / sc.box_length) * (sc.n_per_axis / 2);
    if (sc.kappa >= kmax) throw ValidationError("grid.kappa", "excludes every lattice mode");
  }

  const std::string type = take("state.type").value_or("wavepacket");
  if (type == "wavepacket") sc.state = StateType::wavepacket;
  else if (type == "modes") sc.state = StateType::modes;
  else if (type == "random") sc.state = StateType::random;
  else throw ValidationError("state.type", "must be wavepacket, modes or random");
  sc.symmetrize_state = sc.state != StateType::modes;
  if (auto v = take("state.symmetrize")) {
    if (*v == "true") sc.symmetrize_state = true;
    else if (*v == "false") sc.symmetrize_state = false;
    else throw ValidationError("state.symmetrize", "must be true or false");
    if (sc.state == StateType::wavepacket && !sc.symmetrize_state)
      throw ValidationError("state.symmetrize", "wavepackets are always symmetrized");
  }
  if (auto v = take("seed")) sc.seed = static_cast<std::uint64_t>(to_int("seed", *v));

  const double dk = 2.0 * kPi / sc.box_length;
  const int band = (sc.n_per_axis - 1) / 2;
  if (sc.state == StateType::wavepacket) {
    const auto k0 = detail::numbers("wavepacket.k0", require("wavepacket.k0"), 3);
    sc.k0 = {k0[0], k0[1], k0[2]};
    if (!(norm(sc.k0) > sc.kappa)) throw ValidationError("wavepacket.k0", "must lie outside the kappa ball");
    for (double c : sc.k0)
      if (std::abs(c) > dk * band) throw ValidationError("wavepacket.k0", "outside the grid band");
    sc.sigma_k = to_double("wavepacket.sigma_k", require("wavepacket.sigma_k"));
    if (!(sc.sigma_k > 0.0)) throw ValidationError("wavepacket.sigma_k", "must be > 0");
    if (auto v = take("wavepacket.helicity")) sc.helicity = detail::to_helicity("wavepacket.helicity", *v);
    if (auto v = take("wavepacket.amplitude")) {
      const auto a = detail::numbers("wavepacket.amplitude", *v, 2);
      sc.amplitude = {a[0], a[1]};
    }
  }

  if (auto v = take("units")) {
    if (*v == "natural") sc.si_units = false;
    else if (*v == "si") sc.si_units = true;
    else throw ValidationError("units", "must be natural or si");
  }

  std::map<long long, std::string> stage_names;
  std::map<long long, std::map<std::string, std::string>> stage_params;
  for (const auto& [k, v] : kv) {
    long long idx = 0;
    std::string rest;
    if (detail::split_indexed(k, "modes.", idx, rest) && rest.empty()) {
      if (sc.state != StateType::modes) throw ValidationError(k, "mode lists need state.type = modes");
      used.insert(k);
      const auto toks = detail::split_ws(v);
      if (toks.size() != 6) throw ValidationError(k, "expected 'mx my mz helicity re im'");
      ExplicitMode m;
      for (int w = 0; w < 3; ++w) {
        const long long mi = to_int(k, toks[w]);
        if (std::llabs(mi) > band) throw ValidationError(k, "lattice index outside the grid band");
        m.m[w] = static_cast<int>(mi);
      }
      if (m.m == std::array<int, 3>{0, 0, 0}) throw ValidationError(k, "the k = 0 mode is always masked");
      const double kn = dk * std::sqrt(double(m.m[0]) * m.m[0] + double(m.m[1]) * m.m[1] + double(m.m[2]) * m.m[2]);
      if (kn < sc.kappa) throw ValidationError(k, "mode lies inside the kappa ball");
      m.helicity = detail::to_helicity(k, toks[3]);
      m.amplitude = {to_double(k, toks[4]), to_double(k, toks[5])};
      sc.modes.push_back(m);
    } else if (detail::split_indexed(k, "stage.", idx, rest)) {
      used.insert(k);
      if (rest.empty()) stage_names[idx] = v;
      else stage_params[idx][rest] = v;
    }
  }
  if (sc.state == StateType::modes && sc.modes.empty()) throw ValidationError("modes.0", "state.type = modes needs at least one mode");

  for (const auto& [idx, params] : stage_params)
    if (!stage_names.count(idx)) throw ValidationError("stage." + std::to_string(idx), "parameters given for an undefined stage");
  long long expected = 0;
  bool have_psi = false, have_phi = false;
  for (const auto& [idx, name] : stage_names) {
    if (idx != expected) throw ValidationError("stage." + std::to_string(expected), "stage indices must be contiguous from 0");
    ++expected;
    static const std::map<std::string, std::string> none;
    auto it = stage_params.find(idx);
    Stage st = detail::parse_stage(idx, name, it == stage_params.end() ? none : it->second);
    const std::string base = "stage." + std::to_string(idx);
    if (st.type == Stage::Type::synthesize) {
      if (st.field == FieldChoice::psi) have_psi = true;
      if (st.field == FieldChoice::phi) have_phi = true;
    }
    if (st.type == Stage::Type::transform) {
      const bool fwd = TransformSpec{st.kind}.forward();
      if (fwd && !have_psi) throw ValidationError(base + ".kind", "forward transforms need an earlier psi synthesize stage");
      if (!fwd && !have_phi) throw ValidationError(base + ".kind", "inverse transforms need an earlier phi synthesize stage");
    }
    if (st.type == Stage::Type::evolve) {
      const Units u = sc.si_units ? Units::si() : Units::natural();
      const double limit = leapfrog_dt_limit(sc.n_per_axis, sc.box_length, u);
      if (st.dt == 0.0) {
        st.dt_default = true;
        st.dt = default_dt(st.scheme, limit);
      }
      if (st.scheme == Scheme::leapfrog && st.dt > limit)
        throw ValidationError(base + ".dt", "above the leapfrog stability bound " + detail::fmt(limit));
    }
    if (st.type == Stage::Type::observables) {
      if (st.volumes.empty()) st.volumes.push_back({{0.0, 0.0, 0.0}, {sc.box_length, sc.box_length, sc.box_length}});
      for (std::size_t a = 0; a < st.volumes.size(); ++a) {
        for (int w = 0; w < 3; ++w)
          if (st.volumes[a].lower[w] < 0.0 || st.volumes[a].upper[w] > sc.box_length)
            throw ValidationError(base + ".volume." + std::to_string(a), "extends outside the box");
        for (std::size_t b = a + 1; b < st.volumes.size(); ++b)
          if (overlaps(st.volumes[a], st.volumes[b]))
            throw ValidationError(base + ".volume." + std::to_string(b), "overlaps an earlier volume");
      }
    }
    sc.stages.push_back(std::move(st));
  }

  if (auto v = take("output.dir")) sc.output_dir = *v;

  for (const auto& [k, v] : kv)
    if (!used.count(k)) throw ValidationError(k, "unknown key");

  // Effective settings, defaults included.
  auto& e = sc.echo;
  e["grid.n_per_axis"] = std::to_string(sc.n_per_axis);
  e["grid.box_length"] = detail::fmt(sc.box_length);
  e["grid.kappa"] = detail::fmt(sc.kappa);
  e["state.type"] = type;
  e["state.symmetrize"] = sc.symmetrize_state ? "true" : "false";
  e["seed"] = std::to_string(sc.seed);
  e["units"] = sc.si_units ? "si" : "natural";
  if (sc.state == StateType::wavepacket) {
    e["wavepacket.k0"] = detail::fmt(sc.k0[0]) + " " + detail::fmt(sc.k0[1]) + " " + detail::fmt(sc.k0[2]);
    e["wavepacket.sigma_k"] = detail::fmt(sc.sigma_k);
    e["wavepacket.helicity"] = sc.helicity == Helicity::plus ? "+" : "-";
    e["wavepacket.amplitude"] = detail::fmt(sc.amplitude.real()) + " " + detail::fmt(sc.amplitude.imag());
  }
  for (std::size_t i = 0; i < sc.stages.size(); ++i) {
    const Stage& st = sc.stages[i];
    const std::string base = "stage." + std::to_string(i);
    e[base] = std::string(to_string(st.type));
    if (st.type == Stage::Type::synthesize) {
      static constexpr const char* fields[] = {"psi", "phi", "potential", "displacement", "magnetic"};
      static constexpr const char* parts[] = {"positive", "negative", "both"};
      e[base + ".field"] = fields[static_cast<int>(st.field)];
      e[base + ".part"] = parts[static_cast<int>(st.part)];
    }
    if (st.type == Stage::Type::evolve) {
      e[base + ".scheme"] = st.scheme == Scheme::spectral ? "spectral" : "leapfrog";
      e[base + ".dt"] = detail::fmt(st.dt);
      e[base + ".steps"] = std::to_string(st.steps);
      e[base + ".save_every"] = std::to_string(st.save_every);
    }
    if (st.type == Stage::Type::transform || st.type == Stage::Type::timedomain_demo)
      e[base + ".kind"] = std::string(rsphoton::to_string(st.kind));
    if (st.type == Stage::Type::timedomain_demo) {
      e[base + ".omega"] = detail::fmt(st.omega);
      e[base + ".window"] = detail::fmt(st.window);
      e[base + ".dt"] = detail::fmt(st.sample_dt);
    }
  }
  return sc;
}

/// Overrides applied from the command line after parsing.
inline void apply_overrides(Scenario& sc, std::optional<std::string> out_dir, std::optional<std::uint64_t> seed,
                            std::optional<bool> si_units) {
  if (out_dir) sc.output_dir = *out_dir;
  if (seed) sc.seed = *seed, sc.echo["seed"] = std::to_string(*seed);
  if (si_units) sc.si_units = *si_units, sc.echo["units"] = *si_units ? "si" : "natural";
}

}  // namespace rsphoton::scenario
