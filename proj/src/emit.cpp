#include "spe/emit.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>

#include <json.hpp>

namespace spe {

using nlohmann::json;

namespace {

constexpr const char* kChannelNames[4] = {"0V", "0H", "1V", "1H"};

std::string build_sweep_header() {
  std::string h = "alpha_rad,theta_rad,S,S_err,E1,E2,E3,E4";
  for (int k = 1; k <= 4; ++k)
    for (const char* ch : kChannelNames) h += ",N_" + std::string(ch) + "_" + std::to_string(k);
  return h;
}

}  // namespace

const CsvSchema& sweep_csv_schema() {
  static const CsvSchema s{"sweep", 1, build_sweep_header()};
  return s;
}

const CsvSchema& theory_csv_schema() {
  static const CsvSchema s{"theory", 1, "theta_rad,alpha_rad,S_ideal,S_eff,S_mixed"};
  return s;
}

const CsvSchema& autocorr_csv_schema() {
  static const CsvSchema s{"autocorr", 1, "delta_L_m,probability"};
  return s;
}

const std::vector<CsvSchema>& csv_schemas() {
  static const std::vector<CsvSchema> all{sweep_csv_schema(), theory_csv_schema(), autocorr_csv_schema()};
  return all;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_sweep_csv(std::ostream& out, const SweepResult& r) {
  out << sweep_csv_schema().header << '\n';
  for (const auto& p : r.points) {
    out << format_double(p.alpha) << ',' << format_double(p.theta) << ',' << format_double(p.s) << ','
        << format_double(p.s_err);
    for (double e : p.e) out << ',' << format_double(e);
    for (const auto& c : p.counts)
      for (auto n : c.n) out << ',' << n;
    out << '\n';
  }
}

std::string sweep_json(const SweepResult& r) {
  json points = json::array();
  for (const auto& p : r.points) {
    json settings = json::array();
    for (int k = 0; k < 4; ++k) {
      const ChannelCounts& c = p.counts[k];
      json counts;
      for (int ch = 0; ch < 4; ++ch) counts[std::string("N_") + kChannelNames[ch]] = c.n[ch];
      settings.push_back({{"E", p.e[k]},
                          {"counts", counts},
                          {"dark_tally", c.dark_tally},
                          {"dropped_dead_time", c.dropped_dead_time},
                          {"coincidence_windows", c.coincidence_windows}});
    }
    points.push_back({{"alpha_rad", p.alpha},
                      {"theta_rad", p.theta},
                      {"S", p.s},
                      {"S_err", p.s_err},
                      {"settings", settings}});
  }
  return json{{"schema", "sweep"}, {"version", sweep_csv_schema().version}, {"points", points}}.dump(2) +
         "\n";
}

void write_theory_csv(std::ostream& out, const std::vector<double>& theta_grid, double eps, double eta) {
  out << theory_csv_schema().header << '\n';
  for (double theta : theta_grid) {
    const double alpha = 2.0 * theta;
    out << format_double(theta) << ',' << format_double(alpha) << ',' << format_double(theory_s(alpha, 0.0, 1.0))
        << ',' << format_double(theory_s(alpha, eps, eta)) << ',' << format_double(theory_s(alpha, 1.0, 1.0))
        << '\n';
  }
}

void write_autocorr_csv(std::ostream& out, const std::vector<AutocorrelationPoint>& curve) {
  out << autocorr_csv_schema().header << '\n';
  for (const auto& p : curve) out << format_double(p.delta_l) << ',' << format_double(p.probability) << '\n';
}

std::string manifest_json(const RunManifest& m) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);

  json resolved = json::object();
  for (const auto& [k, v] : m.resolved) resolved[k] = v;
  json schemas = json::object();
  for (const auto& s : csv_schemas()) schemas[s.name] = s.version;

  json doc{{"tool", "spe"},
           {"version", std::string(kToolVersion)},
           {"command", m.command},
           {"created_utc", stamp},
           {"workers", m.workers},
           {"repeats", m.repeats},
           {"resolved", resolved},
           {"csv_schemas", schemas},
           {"files", m.files},
           {"config", json::parse(m.config_echo)}};
  doc["seed"] = m.seed ? json(*m.seed) : json(nullptr);
  return doc.dump(2) + "\n";
}

}  // namespace spe
