// spe: theory curves, Monte Carlo CHSH sweeps, autocorrelation traces and the
// self-check suite.

#include <iostream>

#include <CLI11.hpp>

#include "spe/commands.hpp"
#include "spe/emit.hpp"
#include "spe/validation.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Single-photon momentum/polarization entanglement simulator"};
  app.set_version_flag("--version", std::string(spe::kToolVersion));
  app.require_subcommand(1);

  spe::CommandOptions opts;
  std::string config, preset, out;
  std::uint64_t seed = 0;

  auto add_common = [&](CLI::App* sub) {
    auto* c = sub->add_option("--config", config, "JSON experiment config");
    auto* p = sub->add_option("--preset", preset, "laser | led | halogen | incoherent");
    c->excludes(p);
    sub->add_option("--seed", seed, "master seed (overrides config.seed)");
    sub->add_option("--out", out, "output directory (overrides output.dir)");
  };
  CLI::App* theory = app.add_subcommand("theory", "closed-form S curves over the sweep grid");
  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo CHSH sweep");
  CLI::App* autocorr = app.add_subcommand("autocorr", "filtered and unfiltered autocorrelation traces");
  for (auto* sub : {theory, simulate, autocorr}) add_common(sub);

  CLI::App* validate = app.add_subcommand("validate", "run the invariant and oracle checks");
  std::vector<std::string> corrupt;
  std::string golden;
  validate->add_option("--corrupt", corrupt, "force the named check to fail (test mode)");
  validate->add_option("--golden-dir", golden, "directory with golden CSV headers");
  // Accepted for a uniform command line; the suite is self-contained.
  validate->add_option("--config", config, "ignored");
  validate->add_option("--seed", seed, "ignored");
  validate->add_option("--out", out, "ignored");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : spe::kExitConfig;
  }

  if (validate->parsed()) {
    spe::ValidationOptions v;
    v.corrupt = corrupt;
    v.golden_dir = golden.empty() ? spe::default_golden_dir() : std::filesystem::path(golden);
    return spe::cmd_validate(v, std::cout, std::cerr);
  }

  CLI::App* sub = app.get_subcommands().front();
  opts.command = sub->get_name();
  if (sub->count("--config")) opts.config = config;
  if (sub->count("--preset")) opts.preset = preset;
  if (sub->count("--seed")) opts.seed = seed;
  if (sub->count("--out")) opts.out = out;
  return spe::run_command(opts, std::cout, std::cerr);
}
