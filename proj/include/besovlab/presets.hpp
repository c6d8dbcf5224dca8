#pragma once

#include <span>
#include <string>

#include "besovlab/io.hpp"

namespace besovlab {

// Canned configurations for the CLI. Each one parses through the same
// validation path as user-supplied config files.

struct Preset {
  const char* name;
  const char* summary;
  const char* config_json;
};

inline std::span<const Preset> all_presets() {
  static const Preset table[] = {
      {"equilibrium",
       "constant state, nothing should move",
       R"({"dim": 3, "points": 16, "t_end": 0.5,
           "ic": {"kind": "equilibrium"},
           "params": {"A": 1.0, "gamma": 1.4, "a": 1.0, "n_bar": 1.0}})"},
      {"small3d",
       "small random 3-d data, friction-dominated decay",
       R"({"dim": 3, "points": 32, "t_end": 10.0, "record_every": 5,
           "ic": {"kind": "random_band", "amplitude": 1e-4, "band_lo": 1, "band_hi": 4, "seed": 1},
           "params": {"A": 1.0, "gamma": 1.4, "a": 1.0, "n_bar": 1.0}})"},
      {"linear-mode",
       "one acoustic plane wave under the linearized dynamics",
       R"({"dim": 3, "points": 16, "t_end": 2.0, "linearize": true,
           "ic": {"kind": "single_mode", "mode": [1, 0, 0], "m_amp": 1e-3,
                  "u_par_amp": 5e-4, "u_perp_amp": 5e-4, "perp_dir": [0, 1, 0]},
           "params": {"A": 1.0, "gamma": 1.4, "a": 1.0, "n_bar": 1.0}})"},
      {"vortex3d",
       "divergence-free shear data, vorticity decays at the friction rate",
       R"({"dim": 3, "points": 32, "t_end": 5.0, "record_every": 5,
           "ic": {"kind": "vortex", "amplitude": 1e-3, "band_lo": 1, "band_hi": 3, "seed": 7},
           "params": {"A": 1.0, "gamma": 1.4, "a": 1.0, "n_bar": 1.0}})"},
      {"moderate1d",
       "moderate 1-d data with snapshots kept for growth and stability fits",
       R"({"dim": 1, "points": 128, "t_end": 3.0, "keep_states": true, "record_every": 10,
           "ic": {"kind": "random_band", "amplitude": 0.25, "band_lo": 1, "band_hi": 6, "seed": 3},
           "params": {"A": 0.5, "gamma": 2.0, "a": 0.2, "n_bar": 1.0}})"},
  };
  return table;
}

inline SimConfig preset_config(const std::string& name) {
  for (const Preset& p : all_presets())
    if (name == p.name) return config_from_json(json::parse(p.config_json));
  std::string known;
  for (const Preset& p : all_presets()) {
    if (!known.empty()) known += ", ";
    known += p.name;
  }
  throw ConfigError("unknown preset \"" + name + "\" (known: " + known + ")");
}

}  // namespace besovlab
