#pragma once

#include <bit>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "besovlab/simulate.hpp"
#include "besovlab/version.hpp"

namespace besovlab {

using nlohmann::json;

// All numeric text output goes through one formatter so CSV and JSON dumps
// are reproducible bit-for-bit across runs.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// ---------------------------------------------------------------------------
// Config <-> JSON
// ---------------------------------------------------------------------------

namespace detail {

inline void reject_unknown_keys(const json& j, const std::set<std::string>& known,
                                const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) throw ConfigError(where + ": unknown key \"" + it.key() + "\"");
}

template <typename T>
void read_into(const json& j, const char* key, T& slot) {
  if (j.contains(key)) slot = j.at(key).get<T>();
}

}  // namespace detail

inline json config_to_json(const SimConfig& c) {
  json j;
  j["dim"] = c.dim;
  j["points"] = c.points;
  j["period"] = c.period;
  j["params"] = {{"A", c.params.A}, {"gamma", c.params.gamma}, {"a", c.params.a}, {"n_bar", c.params.n_bar}};
  j["cfl"] = c.cfl;
  j["t_end"] = c.t_end;
  j["ic"] = {{"kind", c.ic.kind},
             {"amplitude", c.ic.amplitude},
             {"band_lo", c.ic.band_lo},
             {"band_hi", c.ic.band_hi},
             {"seed", c.ic.seed},
             {"mode", c.ic.mode},
             {"m_amp", c.ic.m_amp},
             {"u_par_amp", c.ic.u_par_amp},
             {"u_perp_amp", c.ic.u_perp_amp},
             {"perp_dir", c.ic.perp_dir},
             {"perturb_amplitude", c.ic.perturb_amplitude},
             {"perturb_seed", c.ic.perturb_seed}};
  j["dealias"] = c.dealias;
  j["linearize"] = c.linearize;
  j["terms"] = {{"advect_m", c.terms.advect_m},
                {"dilation", c.terms.dilation},
                {"advect_u", c.terms.advect_u},
                {"pressure", c.terms.pressure}};
  j["record_every"] = c.record_every;
  if (c.blowup_threshold) j["blowup_threshold"] = *c.blowup_threshold;
  if (c.fixed_dt) j["fixed_dt"] = *c.fixed_dt;
  j["eps"] = c.eps;
  j["eps_prime"] = c.eps_prime;
  j["keep_states"] = c.keep_states;
  j["partition_tol"] = c.partition_tol;
  return j;
}

// Parses a config object; every key is optional and falls back to the
// defaults, unknown keys are an error rather than silently ignored.
inline SimConfig config_from_json(const json& j) {
  detail::reject_unknown_keys(
      j,
      {"dim", "points", "period", "params", "cfl", "t_end", "ic", "dealias", "linearize", "terms",
       "record_every", "blowup_threshold", "fixed_dt", "eps", "eps_prime", "keep_states",
       "partition_tol"},
      "config");

  SimConfig c;
  detail::read_into(j, "dim", c.dim);
  detail::read_into(j, "points", c.points);
  detail::read_into(j, "period", c.period);
  if (j.contains("params")) {
    const json& p = j.at("params");
    detail::reject_unknown_keys(p, {"A", "gamma", "a", "n_bar"}, "config.params");
    double A = c.params.A, gamma = c.params.gamma, a = c.params.a, n_bar = c.params.n_bar;
    detail::read_into(p, "A", A);
    detail::read_into(p, "gamma", gamma);
    detail::read_into(p, "a", a);
    detail::read_into(p, "n_bar", n_bar);
    c.params = make_params(A, gamma, a, n_bar);
  }
  detail::read_into(j, "cfl", c.cfl);
  detail::read_into(j, "t_end", c.t_end);
  if (j.contains("ic")) {
    const json& ic = j.at("ic");
    detail::reject_unknown_keys(ic,
                                {"kind", "amplitude", "band_lo", "band_hi", "seed", "mode", "m_amp",
                                 "u_par_amp", "u_perp_amp", "perp_dir", "perturb_amplitude",
                                 "perturb_seed"},
                                "config.ic");
    detail::read_into(ic, "kind", c.ic.kind);
    detail::read_into(ic, "amplitude", c.ic.amplitude);
    detail::read_into(ic, "band_lo", c.ic.band_lo);
    detail::read_into(ic, "band_hi", c.ic.band_hi);
    detail::read_into(ic, "seed", c.ic.seed);
    detail::read_into(ic, "mode", c.ic.mode);
    detail::read_into(ic, "m_amp", c.ic.m_amp);
    detail::read_into(ic, "u_par_amp", c.ic.u_par_amp);
    detail::read_into(ic, "u_perp_amp", c.ic.u_perp_amp);
    detail::read_into(ic, "perp_dir", c.ic.perp_dir);
    detail::read_into(ic, "perturb_amplitude", c.ic.perturb_amplitude);
    detail::read_into(ic, "perturb_seed", c.ic.perturb_seed);
  }
  detail::read_into(j, "dealias", c.dealias);
  detail::read_into(j, "linearize", c.linearize);
  if (j.contains("terms")) {
    const json& t = j.at("terms");
    detail::reject_unknown_keys(t, {"advect_m", "dilation", "advect_u", "pressure"}, "config.terms");
    detail::read_into(t, "advect_m", c.terms.advect_m);
    detail::read_into(t, "dilation", c.terms.dilation);
    detail::read_into(t, "advect_u", c.terms.advect_u);
    detail::read_into(t, "pressure", c.terms.pressure);
  }
  detail::read_into(j, "record_every", c.record_every);
  if (j.contains("blowup_threshold")) c.blowup_threshold = j.at("blowup_threshold").get<double>();
  if (j.contains("fixed_dt")) c.fixed_dt = j.at("fixed_dt").get<double>();
  detail::read_into(j, "eps", c.eps);
  detail::read_into(j, "eps_prime", c.eps_prime);
  detail::read_into(j, "keep_states", c.keep_states);
  detail::read_into(j, "partition_tol", c.partition_tol);
  return c;
}

inline SimConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  return config_from_json(j);
}

// ---------------------------------------------------------------------------
// Trajectory CSV
// ---------------------------------------------------------------------------

inline void write_records_csv(std::ostream& out, const Trajectory& traj) {
  std::size_t blocks = 0;
  for (const auto& r : traj.records) blocks = std::max(blocks, r.block_energies.size());
  out << "t,energy,dissipation,vorticity_norm,grad_m_norm,besov_U,besov_Ut,min_density,sup_m,sup_u";
  for (std::size_t b = 0; b < blocks; ++b) out << ",blk_q" << (static_cast<int>(b) - 1);
  out << "\n";
  for (const auto& r : traj.records) {
    out << format_double(r.t) << ',' << format_double(r.energy) << ','
        << format_double(r.dissipation) << ',' << format_double(r.vorticity_norm) << ','
        << format_double(r.grad_m_norm) << ',' << format_double(r.besov_U) << ','
        << format_double(r.besov_Ut) << ',' << format_double(r.min_density) << ','
        << format_double(r.sup_m) << ',' << format_double(r.sup_u);
    for (std::size_t b = 0; b < blocks; ++b)
      out << ',' << format_double(b < r.block_energies.size() ? r.block_energies[b] : 0.0);
    out << "\n";
  }
}

// ---------------------------------------------------------------------------
// Field snapshots: one JSON header line, then little-endian float64 samples,
// components back to back.
// ---------------------------------------------------------------------------

static_assert(std::endian::native == std::endian::little,
              "field dumps assume a little-endian host");

inline void write_field_dump(std::ostream& out, const Grid& g, std::span<const Field* const> comps) {
  json hdr;
  hdr["dim"] = g.dim;
  hdr["points_per_axis"] = g.points_per_axis;
  hdr["period"] = g.period;
  hdr["components"] = comps.size();
  out << hdr.dump() << "\n";
  for (const Field* f : comps) {
    auto s = f->samples();
    out.write(reinterpret_cast<const char*>(s.data()),
              static_cast<std::streamsize>(s.size() * sizeof(double)));
  }
}

inline void write_state_dump(std::ostream& out, const State& s) {
  std::vector<const Field*> comps{&s.m};
  for (int j = 0; j < s.u.size(); ++j) comps.push_back(&s.u[j]);
  write_field_dump(out, s.m.grid(), comps);
}

struct FieldDump {
  Grid grid;
  std::vector<Field> components;
};

inline FieldDump read_field_dump(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("field dump: missing header line");
  json hdr;
  try {
    hdr = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("field dump: bad header: ") + e.what());
  }
  detail::reject_unknown_keys(hdr, {"dim", "points_per_axis", "period", "components"}, "field dump");
  FieldDump dump{make_grid(hdr.at("dim").get<int>(), hdr.at("points_per_axis").get<int>(),
                           hdr.at("period").get<double>()),
                 {}};
  const auto n_comp = hdr.at("components").get<std::size_t>();
  for (std::size_t c = 0; c < n_comp; ++c) {
    Field f(dump.grid);
    auto s = f.overwrite_samples();
    in.read(reinterpret_cast<char*>(s.data()), static_cast<std::streamsize>(s.size() * sizeof(double)));
    if (!in) throw ConfigError("field dump: truncated sample block");
    dump.components.push_back(std::move(f));
  }
  return dump;
}

// ---------------------------------------------------------------------------
// Run manifest
// ---------------------------------------------------------------------------

inline json run_manifest(const Trajectory& traj, double wall_seconds,
                         const std::vector<std::string>& outputs = {}) {
  json j;
  j["tool_version"] = kVersion;
  j["status"] = to_string(traj.status);
  j["seed"] = traj.config.ic.seed;
  j["grid"] = {{"dim", traj.config.dim},
               {"points_per_axis", traj.config.points},
               {"period", traj.config.period}};
  j["dt"] = traj.dt;
  j["records"] = traj.records.size();
  j["t_final"] = traj.records.empty() ? 0.0 : traj.records.back().t;
  j["wall_seconds"] = wall_seconds;
  j["outputs"] = outputs;
  j["config"] = config_to_json(traj.config);
  return j;
}

}  // namespace besovlab
