#include "spe/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <thread>

#include "spe/emit.hpp"

namespace spe {

namespace fs = std::filesystem;

namespace {

template <typename Writer>
fs::path write_file(const fs::path& dir, const std::string& name, Writer&& writer) {
  fs::create_directories(dir);
  const fs::path path = dir / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  writer(out);
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path.string());
  return path;
}

std::vector<std::pair<std::string, double>> resolved_values(const ExperimentConfig& cfg) {
  const CoherenceScales scales = coherence_scales(cfg.spectrum);
  return {{"eps", cfg.eps()},
          {"eta", cfg.eta.value_or(1.0)},
          {"omega0", cfg.spectrum.omega0()},
          {"sigma_omega", cfg.spectrum.sigma_omega()},
          {"tau_c", scales.tau_c},
          {"l_c", scales.l_c}};
}

fs::path write_manifest(const ExperimentConfig& cfg, const fs::path& dir, const std::string& command,
                        unsigned workers, const std::vector<fs::path>& files) {
  RunManifest m;
  m.command = command;
  m.seed = cfg.seed;
  m.workers = workers;
  m.repeats = cfg.sweep.repeats;
  m.config_echo = cfg.echo;
  m.resolved = resolved_values(cfg);
  for (const auto& f : files) m.files.push_back(f.filename().string());
  return write_file(dir, cfg.output_prefix + "_" + command + "_manifest.json",
                    [&](std::ostream& out) { out << manifest_json(m); });
}

std::vector<double> theta_grid(const SweepConfig& s) {
  std::vector<double> g = s.grid();
  if (s.parameter == SweepParameter::Alpha)
    for (double& x : g) x /= 2.0;
  return g;
}

}  // namespace

unsigned workers_from_env() {
  const char* v = std::getenv(kWorkersEnv);
  if (v == nullptr || *v == '\0') return std::max(1u, std::thread::hardware_concurrency());
  unsigned n = 0;
  const std::string_view text(v);
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
  if (ec != std::errc() || end != text.data() + text.size() || n == 0)
    throw Error(ErrorCode::ConfigError, std::string(kWorkersEnv) + " must be a positive integer");
  return n;
}

std::vector<fs::path> cmd_theory(const ExperimentConfig& cfg, const fs::path& out_dir) {
  const double eps = cfg.eps();
  const double eta = cfg.eta.value_or(1.0);
  std::vector<fs::path> files{write_file(out_dir, cfg.output_prefix + "_theory.csv", [&](std::ostream& out) {
    write_theory_csv(out, theta_grid(cfg.sweep), eps, eta);
  })};
  files.push_back(write_manifest(cfg, out_dir, "theory", 1, files));
  return files;
}

std::vector<fs::path> cmd_simulate(const ExperimentConfig& cfg, const fs::path& out_dir, unsigned workers) {
  if (!cfg.seed) throw Error(ErrorCode::ConfigError, "simulate needs a seed (config.seed or --seed)");
  const SweepResult r = run_chsh_sweep(cfg.sweep_options(workers), cfg.source, cfg.detector, RngStream(*cfg.seed));
  std::vector<fs::path> files;
  files.push_back(write_file(out_dir, cfg.output_prefix + "_sweep.csv",
                             [&](std::ostream& out) { write_sweep_csv(out, r); }));
  files.push_back(write_file(out_dir, cfg.output_prefix + "_sweep.json",
                             [&](std::ostream& out) { out << sweep_json(r); }));
  files.push_back(write_manifest(cfg, out_dir, "simulate", workers, files));
  return files;
}

std::vector<fs::path> cmd_autocorr(const ExperimentConfig& cfg, const fs::path& out_dir) {
  const AutocorrConfig& a = cfg.autocorr;
  std::vector<double> grid(static_cast<std::size_t>(a.points));
  for (int i = 0; i < a.points; ++i) grid[i] = a.range * i / (a.points - 1);
  std::vector<fs::path> files;
  files.push_back(write_file(out_dir, cfg.output_prefix + "_autocorr_filtered.csv", [&](std::ostream& out) {
    write_autocorr_csv(out, autocorrelation_curve(cfg.spectrum, grid));
  }));
  files.push_back(write_file(out_dir, cfg.output_prefix + "_autocorr_unfiltered.csv", [&](std::ostream& out) {
    write_autocorr_csv(out, autocorrelation_curve(a.unfiltered, grid));
  }));
  files.push_back(write_manifest(cfg, out_dir, "autocorr", 1, files));
  return files;
}

int run_command(const CommandOptions& opts, std::ostream& log, std::ostream& err) {
  ExperimentConfig cfg;
  unsigned workers = 1;
  try {
    if (opts.config && opts.preset) throw Error(ErrorCode::ConfigError, "use --config or --preset, not both");
    if (opts.config)
      cfg = load_config(*opts.config);
    else if (opts.preset)
      cfg = preset_config(*opts.preset);
    else
      throw Error(ErrorCode::ConfigError, "no configuration given (--config or --preset)");
    if (opts.seed) cfg.seed = opts.seed;
    if (opts.out) cfg.output_dir = *opts.out;
    workers = opts.workers ? *opts.workers : workers_from_env();
    if (opts.command == "simulate" && !cfg.seed)
      throw Error(ErrorCode::ConfigError, "simulate needs a seed (config.seed or --seed)");
  } catch (const Error& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    std::vector<fs::path> files;
    if (opts.command == "theory")
      files = cmd_theory(cfg, cfg.output_dir);
    else if (opts.command == "simulate")
      files = cmd_simulate(cfg, cfg.output_dir, workers);
    else if (opts.command == "autocorr")
      files = cmd_autocorr(cfg, cfg.output_dir);
    else
      throw Error(ErrorCode::ConfigError, "unknown command " + opts.command);
    for (const auto& f : files) log << f.string() << '\n';
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::ConfigError ? kExitConfig : kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace spe
