// Command-line front end: partition checks, norm evaluation, simulation
// runs, decay fits, commutator scans, and parameter sweeps.

#include <atomic>
#include <numbers>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "besovlab/besovlab.hpp"

namespace fs = std::filesystem;
using namespace besovlab;

namespace {

// Shared override flags applied on top of a preset or config file.
struct Overrides {
  std::optional<int> dim, points;
  std::optional<double> amplitude, gamma, A, a, nbar, tend, cfl, eps, eps_prime;
  std::optional<std::uint64_t> seed;

  void attach(CLI::App* cmd) {
    cmd->add_option("--dim", dim, "spatial dimension (1-3)");
    cmd->add_option("--points", points, "grid points per axis (power of two)");
    cmd->add_option("--amplitude", amplitude, "initial-data amplitude");
    cmd->add_option("--gamma", gamma, "adiabatic exponent (1 = isothermal)");
    cmd->add_option("--A", A, "pressure constant");
    cmd->add_option("--a", a, "friction coefficient");
    cmd->add_option("--nbar", nbar, "background density");
    cmd->add_option("--tend", tend, "final time");
    cmd->add_option("--cfl", cfl, "CFL number in (0, 1]");
    cmd->add_option("--eps", eps, "regularity margin epsilon");
    cmd->add_option("--eps-prime", eps_prime, "decay-functional margin epsilon'");
    cmd->add_option("--seed", seed, "random-field seed");
  }

  void apply(SimConfig& c) const {
    if (dim) c.dim = *dim;
    if (points) c.points = *points;
    if (amplitude) c.ic.amplitude = *amplitude;
    if (seed) c.ic.seed = *seed;
    if (tend) c.t_end = *tend;
    if (cfl) c.cfl = *cfl;
    if (eps) c.eps = *eps;
    if (eps_prime) c.eps_prime = *eps_prime;
    if (gamma || A || a || nbar)
      c.params = make_params(A.value_or(c.params.A), gamma.value_or(c.params.gamma),
                             a.value_or(c.params.a), nbar.value_or(c.params.n_bar));
  }
};

SimConfig resolve_config(const std::string& config_path, const std::string& preset,
                         const Overrides& ov) {
  if (!config_path.empty() && !preset.empty())
    throw ConfigError("give either --config or --preset, not both");
  SimConfig c;
  if (!config_path.empty())
    c = load_config_file(config_path);
  else if (!preset.empty())
    c = preset_config(preset);
  ov.apply(c);
  validate_config(c);
  return c;
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

int status_exit_code(RunStatus s) { return s == RunStatus::completed ? 0 : 4; }

// Writes records.csv, final_state.bin, and manifest.json into dir.
RunStatus run_and_emit(const SimConfig& cfg, const fs::path& dir) {
  const auto t0 = std::chrono::steady_clock::now();
  Trajectory traj = simulate(cfg);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  fs::create_directories(dir);
  {
    std::ostringstream csv;
    write_records_csv(csv, traj);
    write_text_file(dir / "records.csv", csv.str());
  }
  {
    std::ofstream out(dir / "final_state.bin", std::ios::binary);
    write_state_dump(out, *traj.final_state);
  }
  const json manifest = run_manifest(traj, wall, {"records.csv", "final_state.bin"});
  write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
  return traj.status;
}

// --------------------------------------------------------------------------
// decay-fit CSV ingestion
// --------------------------------------------------------------------------

struct Series {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
};

Series read_csv_series(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open series file: " + path);
  Series s;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty series file: " + path);
  std::stringstream hdr(line);
  std::string cell;
  while (std::getline(hdr, cell, ',')) s.header.push_back(cell);
  s.columns.resize(s.header.size());
  std::size_t row = 1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::size_t col = 0;
    while (std::getline(ss, cell, ',')) {
      if (col >= s.columns.size())
        throw ConfigError(path + ": row " + std::to_string(row) + " has too many cells");
      s.columns[col++].push_back(std::strtod(cell.c_str(), nullptr));
    }
    if (col != s.columns.size())
      throw ConfigError(path + ": row " + std::to_string(row) + " has too few cells");
    ++row;
  }
  if (s.columns.empty() || s.columns[0].empty()) throw ConfigError(path + ": no data rows");
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"besovlab: dyadic spectral analysis and damped compressible flow"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  // partition-check
  auto* pc = app.add_subcommand("partition-check", "build the dyadic partition and verify it sums to one");
  int pc_dim = 3, pc_points = 64;
  double pc_period = 2.0 * std::numbers::pi, pc_tol = 1e-12;
  std::string pc_out;
  pc->add_option("--dim", pc_dim);
  pc->add_option("--points", pc_points);
  pc->add_option("--period", pc_period);
  pc->add_option("--tol", pc_tol, "max allowed partition residual");
  pc->add_option("--out", pc_out, "write the JSON report here instead of stdout");

  // besov
  auto* bz = app.add_subcommand("besov", "norm of a dumped field (all components jointly)");
  std::string bz_file, bz_r = "2";
  double bz_s = 0.0, bz_p = 2.0;
  bz->add_option("file", bz_file, "field dump file")->required();
  bz->add_option("--s", bz_s, "regularity index")->required();
  bz->add_option("--p", bz_p, "Lebesgue exponent");
  bz->add_option("--r", bz_r, "summability exponent, number or 'inf'");

  // simulate
  auto* sim = app.add_subcommand("simulate", "integrate the damped system and emit CSV + manifest");
  std::string sim_config, sim_preset, sim_out = "out";
  Overrides sim_ov;
  sim->add_option("--config", sim_config, "config JSON file");
  sim->add_option("--preset", sim_preset, "named preset");
  sim->add_option("--out", sim_out, "output directory");
  sim_ov.attach(sim);

  // decay-fit
  auto* fit = app.add_subcommand("decay-fit", "least-squares exponential rate from a CSV series");
  std::string fit_file, fit_column = "vorticity_norm", fit_window;
  fit->add_option("file", fit_file, "records.csv from a simulate run")->required();
  fit->add_option("--column", fit_column, "series column to fit");
  fit->add_option("--window", fit_window, "time window 'lo:hi' (default: whole series)");

  // commutator-scan
  auto* scan = app.add_subcommand("commutator-scan", "empirical commutator coefficients at t = 0");
  std::string scan_config, scan_preset, scan_variant = "all", scan_out;
  std::optional<double> scan_sigma;
  Overrides scan_ov;
  scan->add_option("--config", scan_config);
  scan->add_option("--preset", scan_preset);
  scan->add_option("--variant", scan_variant, "variant id or 'all'");
  scan->add_option("--sigma", scan_sigma, "base regularity (default 1 + dim/2)");
  scan->add_option("--out", scan_out, "write the JSON report here instead of stdout");
  scan_ov.attach(scan);

  // sweep
  auto* sw = app.add_subcommand("sweep", "cartesian parameter sweep with concurrent runs");
  std::string sw_file, sw_out = "sweep-out";
  sw->add_option("file", sw_file, "sweep JSON file")->required();
  sw->add_option("--out", sw_out, "output directory (must not exist)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (pc->parsed()) {
      json rep;
      rep["dim"] = pc_dim;
      rep["points_per_axis"] = pc_points;
      rep["period"] = pc_period;
      int exit_code = 0;
      try {
        const Grid g = make_grid(pc_dim, pc_points, pc_period);
        const DyadicPartition part = build_partition(g, pc_tol);
        rep["q_max"] = part.q_max;
        rep["max_residual"] = part.residual;
        rep["tol"] = part.tol;
        rep["pass"] = true;
      } catch (const CheckError& e) {
        rep["pass"] = false;
        rep["error"] = e.what();
        exit_code = 3;
      }
      const std::string text = rep.dump(2) + "\n";
      if (pc_out.empty())
        std::cout << text;
      else
        write_text_file(pc_out, text);
      return exit_code;
    }

    if (bz->parsed()) {
      std::ifstream in(bz_file, std::ios::binary);
      if (!in) throw ConfigError("cannot open field file: " + bz_file);
      FieldDump dump = read_field_dump(in);
      double r = kInf;
      if (bz_r != "inf" && bz_r != "Inf" && bz_r != "INF") r = std::stod(bz_r);
      const DyadicPartition part = build_partition(dump.grid);
      std::vector<const Field*> comps;
      for (const Field& f : dump.components) comps.push_back(&f);
      const double norm =
          besov_norm(part, std::span<const Field* const>(comps), BesovSpec{bz_s, bz_p, r});
      std::cout << format_double(norm) << "\n";
      return 0;
    }

    if (sim->parsed()) {
      const SimConfig cfg = resolve_config(sim_config, sim_preset, sim_ov);
      const RunStatus status = run_and_emit(cfg, sim_out);
      std::cout << "status: " << to_string(status) << "\n";
      return status_exit_code(status);
    }

    if (fit->parsed()) {
      const Series s = read_csv_series(fit_file);
      std::size_t t_col = s.header.size(), v_col = s.header.size();
      for (std::size_t i = 0; i < s.header.size(); ++i) {
        if (s.header[i] == "t") t_col = i;
        if (s.header[i] == fit_column) v_col = i;
      }
      if (t_col == s.header.size()) throw ConfigError("series file has no 't' column");
      if (v_col == s.header.size()) throw ConfigError("series file has no column \"" + fit_column + "\"");
      const auto& t = s.columns[t_col];
      double lo = t.front(), hi = t.back();
      if (!fit_window.empty()) {
        const auto colon = fit_window.find(':');
        if (colon == std::string::npos) throw ConfigError("--window expects 'lo:hi'");
        lo = std::stod(fit_window.substr(0, colon));
        hi = std::stod(fit_window.substr(colon + 1));
      }
      const DecayFit f = fit_decay_rate(t, s.columns[v_col], lo, hi);
      json rep{{"column", fit_column}, {"window", {lo, hi}},      {"rate", f.rate},
               {"r_squared", f.r_squared}, {"points", f.points}};
      std::cout << rep.dump(2) << "\n";
      return 0;
    }

    if (scan->parsed()) {
      const SimConfig cfg = resolve_config(scan_config, scan_preset, scan_ov);
      const Grid g = make_grid(cfg.dim, cfg.points, cfg.period);
      const DyadicPartition part = build_partition(g, cfg.partition_tol);
      const State s = build_initial_state(cfg, g);
      const double sigma = scan_sigma.value_or(cfg.sigma());

      std::vector<CommutatorVariant> variants;
      if (scan_variant == "all") {
        for (CommutatorVariant v : all_commutator_variants())
          if (!(variant_is_low_frequency(v) && cfg.dim <= 2)) variants.push_back(v);
      } else {
        const auto v = variant_from_id(scan_variant);
        if (!v) throw ConfigError("unknown commutator variant \"" + scan_variant + "\"");
        variants.push_back(*v);
      }

      json rows = json::array();
      for (CommutatorVariant v : variants) {
        const CommutatorScanReport rep =
            commutator_scan(part, s, cfg.params, v, sigma, cfg.eps, cfg.rhs_options());
        rows.push_back({{"id", rep.id},
                        {"stat", rep.stat},
                        {"stat_exponent", rep.stat_exponent},
                        {"norm_product", rep.norm_product},
                        {"q_lo", rep.q_lo},
                        {"c_q", rep.c_q}});
      }
      json rep{{"sigma", sigma}, {"eps", cfg.eps}, {"variants", rows}};
      const std::string text = rep.dump(2) + "\n";
      if (scan_out.empty())
        std::cout << text;
      else
        write_text_file(scan_out, text);
      return 0;
    }

    if (sw->parsed()) {
      std::ifstream in(sw_file);
      if (!in) throw ConfigError("cannot open sweep file: " + sw_file);
      json spec;
      try {
        in >> spec;
      } catch (const json::parse_error& e) {
        throw ConfigError(std::string("sweep parse error: ") + e.what());
      }
      detail::reject_unknown_keys(spec, {"base", "amplitude", "seed", "a", "points", "gamma"},
                                  "sweep");
      const SimConfig base =
          spec.contains("base") ? config_from_json(spec.at("base")) : SimConfig{};
      auto axis = [&](const char* key) {
        std::vector<double> v;
        if (spec.contains(key)) v = spec.at(key).get<std::vector<double>>();
        return v;
      };
      const auto amps = axis("amplitude");
      const auto seeds = axis("seed");
      const auto fricts = axis("a");
      const auto pts = axis("points");
      const auto gammas = axis("gamma");

      std::vector<SimConfig> runs;
      auto expand = [](const std::vector<double>& v) {
        return v.empty() ? std::vector<std::optional<double>>{std::nullopt}
                         : [&] {
                             std::vector<std::optional<double>> o;
                             for (double x : v) o.emplace_back(x);
                             return o;
                           }();
      };
      for (auto am : expand(amps))
        for (auto se : expand(seeds))
          for (auto fr : expand(fricts))
            for (auto pt : expand(pts))
              for (auto ga : expand(gammas)) {
                SimConfig c = base;
                if (am) c.ic.amplitude = *am;
                if (se) c.ic.seed = static_cast<std::uint64_t>(*se);
                if (pt) c.points = static_cast<int>(*pt);
                if (fr || ga)
                  c.params = make_params(c.params.A, ga.value_or(c.params.gamma),
                                         fr.value_or(c.params.a), c.params.n_bar);
                runs.push_back(c);
              }

      const fs::path out_dir(sw_out);
      if (fs::exists(out_dir)) throw ConfigError("sweep output directory already exists: " + sw_out);
      fs::create_directories(out_dir);

      unsigned threads = std::thread::hardware_concurrency();
      if (const char* env = std::getenv("BESOVLAB_THREADS"))
        threads = static_cast<unsigned>(std::max(1, std::atoi(env)));
      threads = std::min<unsigned>(std::max(1u, threads), static_cast<unsigned>(runs.size()));

      std::vector<std::string> statuses(runs.size());
      std::atomic<std::size_t> next{0};
      auto worker = [&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= runs.size()) return;
          char name[32];
          std::snprintf(name, sizeof name, "run_%04zu", i);
          try {
            validate_config(runs[i]);
            const RunStatus st = run_and_emit(runs[i], out_dir / name);
            statuses[i] = to_string(st);
          } catch (const std::exception& e) {
            statuses[i] = std::string("error: ") + e.what();
          }
        }
      };
      std::vector<std::thread> pool;
      for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
      for (auto& th : pool) th.join();

      json summary;
      summary["tool_version"] = kVersion;
      summary["runs"] = json::array();
      for (std::size_t i = 0; i < runs.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "run_%04zu", i);
        summary["runs"].push_back({{"dir", name}, {"status", statuses[i]}});
      }
      write_text_file(out_dir / "sweep.json", summary.dump(2) + "\n");
      std::cout << "runs: " << runs.size() << "\n";
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const PositivityError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 4;
  } catch (const CheckError& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
