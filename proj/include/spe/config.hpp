#pragma once
// Experiment configuration: a JSON document, optionally layered on a named
// preset, resolved into the typed inputs of the simulation modules.
//
// Schema (all keys optional unless noted; SI units, angles in radians):
//
//   preset            "laser" | "led" | "halogen" | "incoherent"; the rest of
//                     the document is merge-patched onto it
//   seed              unsigned 64-bit; required by `simulate`
//   source.kind       free label ("laser", "led", "halogen", ...)
//   source.statistics {"law": "poissonian", "mu": x}
//                     {"law": "thermal", "mean_occupancy": x}
//                     {"law": "thermal", "temperature": K}   occupancy at omega0
//                     {"law": "fock", "n": k}
//   source.rate       mean photon rate, 1/s
//   source.spectrum   {"omega0": rad/s, "sigma_omega": rad/s}
//                     or {"center_wavelength": m, "bandwidth": m}
//   geometry          {"delta_l": m} or {"delay": s}, plus "residual_xi"
//   model.eta         visibility weight in [0, 1]; omitted means no depolarizing
//   model.eps         overrides the decoherence weight derived from geometry
//   detector          {"ideal": bool, "efficiency": x | [4], "equalize": bool,
//                      "dark_rate": Hz, "dead_time": s, "coincidence_window": s}
//   sweep             {"parameter": "theta" | "alpha", "start", "stop", "points",
//                      "photons_per_setting", "repeats",
//                      "estimator": "four_channel" | "two_channel",
//                      "error_model": "multinomial" | "repeats"}
//   autocorr          {"range": m, "points": k, "unfiltered": spectrum}
//   output            {"dir": path, "prefix": name}

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spe/bell.hpp"
#include "spe/coherence.hpp"
#include "spe/detector.hpp"
#include "spe/photostats.hpp"

namespace spe {

enum class SweepParameter { Theta, Alpha };

struct SweepConfig {
  SweepParameter parameter = SweepParameter::Theta;
  double start = 0.0;
  double stop = 1.5707963267948966;  // pi / 2
  int points = 41;
  std::uint64_t photons_per_setting = 100000;
  int repeats = 10;
  Estimator estimator = Estimator::FourChannel;
  ErrorModel error_model = ErrorModel::Multinomial;

  /// Evenly spaced grid including both ends, in the chosen parameter.
  std::vector<double> grid() const;
  /// The same grid expressed as CHSH alpha (alpha = 2 theta).
  std::vector<double> alpha_grid() const;
};

struct AutocorrConfig {
  double range = 20e-6;
  int points = 4001;
  SpectralProfile unfiltered{3611.4e12, 134e12};
};

struct ExperimentConfig {
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::string source_kind = "laser";
  SourceConfig source;
  SpectralProfile spectrum{3547.24e12, 6.5e12};
  std::optional<double> delta_l;
  std::optional<double> delay;
  double residual_xi = 0.0;
  std::optional<double> eta;
  std::optional<double> eps_override;
  DetectorConfig detector;
  SweepConfig sweep;
  AutocorrConfig autocorr;
  std::filesystem::path output_dir = "out";
  std::string output_prefix = "run";
  std::string echo;  // the fully merged JSON document, pretty-printed

  /// Decoherence weight: model.eps if given, else from delay (time form) or
  /// delta_l (length form), else 0.
  double eps() const;
  SweepOptions sweep_options(unsigned workers) const;
};

/// Parses and validates a JSON document. Every failure is ConfigError.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Config built from a preset alone.
ExperimentConfig preset_config(std::string_view name);

/// JSON text of a preset.
std::string preset_json(std::string_view name);
const std::vector<std::string>& preset_names();

}  // namespace spe
