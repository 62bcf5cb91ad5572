#pragma once
// Result serialization. CSV bodies depend only on the data (numbers as %.17g)
// so identical runs give identical bytes; wall-clock time goes into the
// manifest alone. Headers are versioned and pinned by golden files.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "spe/bell.hpp"
#include "spe/coherence.hpp"

namespace spe {

inline constexpr std::string_view kToolVersion = "0.1.0";

struct CsvSchema {
  std::string name;  // golden file is <name>_v<version>.header
  int version;
  std::string header;
};

const CsvSchema& sweep_csv_schema();
const CsvSchema& theory_csv_schema();
const CsvSchema& autocorr_csv_schema();
const std::vector<CsvSchema>& csv_schemas();

/// %.17g: enough digits to round-trip any double.
std::string format_double(double x);

/// alpha_rad, theta_rad, S, S_err, E1..E4, then N_0V_k, N_0H_k, N_1V_k, N_1H_k for k = 1..4.
void write_sweep_csv(std::ostream& out, const SweepResult& r);
std::string sweep_json(const SweepResult& r);

/// S(theta) for the ideal state, S_eff(theta; eps, eta) and S_mixed(theta), alpha = 2 theta.
void write_theory_csv(std::ostream& out, const std::vector<double>& theta_grid, double eps, double eta);

void write_autocorr_csv(std::ostream& out, const std::vector<AutocorrelationPoint>& curve);

struct RunManifest {
  std::string command;
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
  int repeats = 1;
  std::string config_echo;  // JSON text
  std::vector<std::pair<std::string, double>> resolved;
  std::vector<std::string> files;
};

/// Manifest JSON, stamped with the current UTC time.
std::string manifest_json(const RunManifest& m);

}  // namespace spe
