#include "spe/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace spe {

using nlohmann::json;

namespace {

// Instrument defaults shared by every preset: four SPADs at 52 %, a few Hz of
// dark counts, 22 ns dead time, 100 kHz at the generation stage, 10 repeats.
constexpr const char* kBase = R"({
  "source": {"rate": 1e5},
  "geometry": {"residual_xi": 0.0},
  "detector": {"ideal": false, "efficiency": 0.52, "equalize": true, "dark_rate": 5.0,
               "dead_time": 22e-9, "coincidence_window": 1e-9},
  "sweep": {"parameter": "theta", "start": 0.0, "stop": 1.5707963267948966, "points": 41,
            "photons_per_setting": 100000, "repeats": 10,
            "estimator": "four_channel", "error_model": "multinomial"},
  "autocorr": {"range": 20e-6, "points": 4001,
               "unfiltered": {"omega0": 3611.4e12, "sigma_omega": 134e12}},
  "output": {"dir": "out"}
})";

// HeNe line at 541 nm; the sigma is a stand-in for a single-mode linewidth
// of about 1 GHz, which makes every delay in the setup coherent.
const std::map<std::string, std::string, std::less<>> kPresets = {
    {"laser", R"({
  "source": {"kind": "laser", "statistics": {"law": "poissonian", "mu": 0.01},
             "spectrum": {"center_wavelength": 541e-9, "bandwidth": 1e-15}},
  "model": {"eta": 0.95},
  "sweep": {"estimator": "four_channel"},
  "output": {"prefix": "laser"}
})"},
    {"led", R"({
  "source": {"kind": "led", "statistics": {"law": "thermal", "mean_occupancy": 1e-3},
             "spectrum": {"omega0": 3547.24e12, "sigma_omega": 6.5e12}},
  "model": {"eta": 0.87},
  "sweep": {"estimator": "two_channel"},
  "output": {"prefix": "led"}
})"},
    {"halogen", R"({
  "source": {"kind": "halogen", "statistics": {"law": "thermal", "temperature": 3000.0},
             "spectrum": {"omega0": 3547.24e12, "sigma_omega": 6.5e12}},
  "model": {"eta": 0.91},
  "sweep": {"estimator": "two_channel"},
  "output": {"prefix": "halogen"}
})"},
    {"incoherent", R"({
  "source": {"kind": "led", "statistics": {"law": "thermal", "mean_occupancy": 1e-3},
             "spectrum": {"omega0": 3547.24e12, "sigma_omega": 6.5e12}},
  "geometry": {"delta_l": 1e-3},
  "model": {"eta": 0.89},
  "sweep": {"parameter": "alpha", "start": 0.0, "stop": 6.283185307179586, "points": 100,
            "estimator": "two_channel"},
  "output": {"prefix": "incoherent"}
})"},
};

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::ConfigError, what); }

// Typed field access with path-qualified error messages.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_ + " must be an object");
  }

  bool has(const char* key) const { return j_.contains(key) && !j_.at(key).is_null(); }

  Reader object(const char* key) const { return Reader(j_.at(key), at(key)); }

  double number(const char* key) const {
    const json& v = j_.at(key);
    if (!v.is_number()) fail(at(key) + " must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(at(key) + " must be finite");
    return x;
  }

  double positive(const char* key) const {
    const double x = number(key);
    if (!(x > 0.0)) fail(at(key) + " must be positive");
    return x;
  }

  double non_negative(const char* key) const {
    const double x = number(key);
    if (x < 0.0) fail(at(key) + " must be >= 0");
    return x;
  }

  double unit(const char* key) const {
    const double x = number(key);
    if (x < 0.0 || x > 1.0) fail(at(key) + " must lie in [0, 1]");
    return x;
  }

  std::int64_t integer(const char* key, std::int64_t min) const {
    const json& v = j_.at(key);
    if (!v.is_number_integer()) fail(at(key) + " must be an integer");
    const auto x = v.get<std::int64_t>();
    if (x < min) fail(at(key) + " must be >= " + std::to_string(min));
    return x;
  }

  std::uint64_t unsigned_integer(const char* key) const {
    const json& v = j_.at(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) fail(at(key) + " must be >= 0");
    // Large counts are often written as 1e6.
    if (v.is_number_float()) {
      const double x = v.get<double>();
      if (x >= 0.0 && x < 1.8e19 && std::floor(x) == x) return static_cast<std::uint64_t>(x);
    }
    fail(at(key) + " must be a non-negative integer");
  }

  std::string string(const char* key) const {
    const json& v = j_.at(key);
    if (!v.is_string()) fail(at(key) + " must be a string");
    return v.get<std::string>();
  }

  bool boolean(const char* key) const {
    const json& v = j_.at(key);
    if (!v.is_boolean()) fail(at(key) + " must be a boolean");
    return v.get<bool>();
  }

  const json& raw(const char* key) const { return j_.at(key); }
  std::string at(const char* key) const { return path_ + "." + key; }

  void only(std::initializer_list<const char*> keys) const {
    for (const auto& [k, _] : j_.items()) {
      bool known = false;
      for (const char* allowed : keys) known = known || k == allowed;
      if (!known) fail("unknown key " + path_ + "." + k);
    }
  }

 private:
  const json& j_;
  std::string path_;
};

SpectralProfile read_spectrum(const Reader& r) {
  r.only({"omega0", "sigma_omega", "center_wavelength", "bandwidth"});
  try {
    if (r.has("omega0") || r.has("sigma_omega")) {
      if (r.has("center_wavelength") || r.has("bandwidth"))
        fail("spectrum takes either omega0/sigma_omega or center_wavelength/bandwidth");
      return SpectralProfile(r.positive("omega0"), r.positive("sigma_omega"));
    }
    return profile_from_filter(r.positive("center_wavelength"), r.positive("bandwidth"));
  } catch (const nlohmann::json::out_of_range&) {
    fail("spectrum is incomplete");
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) throw;
    fail(std::string("invalid spectrum: ") + e.what());
  }
}

PhotonNumberLaw read_law(const Reader& r, const SpectralProfile& spectrum) {
  const std::string law = r.string("law");
  if (law == "poissonian") {
    r.only({"law", "mu"});
    return Poissonian{r.positive("mu")};
  }
  if (law == "thermal") {
    r.only({"law", "mean_occupancy", "temperature"});
    if (r.has("mean_occupancy")) return Thermal{r.positive("mean_occupancy")};
    const double nbar = thermal_occupancy(spectrum.omega0(), r.positive("temperature"));
    if (!(nbar > 0.0)) fail(r.at("temperature") + " gives zero occupancy");
    return Thermal{nbar};
  }
  if (law == "fock") {
    r.only({"law", "n"});
    return FixedFock{static_cast<int>(r.integer("n", 0))};
  }
  fail(r.at("law") + " must be poissonian, thermal or fock");
}

void read_source(const Reader& r, ExperimentConfig& c) {
  r.only({"kind", "statistics", "rate", "spectrum"});
  if (r.has("kind")) c.source_kind = r.string("kind");
  if (r.has("spectrum")) c.spectrum = read_spectrum(r.object("spectrum"));
  if (r.has("rate")) c.source.mean_rate = r.positive("rate");
  if (!r.has("statistics")) fail("source.statistics is required");
  c.source.law = read_law(r.object("statistics"), c.spectrum);
}

void read_geometry(const Reader& r, ExperimentConfig& c) {
  r.only({"delta_l", "delay", "residual_xi"});
  if (r.has("delta_l") && r.has("delay")) fail("geometry takes delta_l or delay, not both");
  if (r.has("delta_l")) c.delta_l = r.number("delta_l");
  if (r.has("delay")) c.delay = r.number("delay");
  if (r.has("residual_xi")) c.residual_xi = r.number("residual_xi");
}

void read_model(const Reader& r, ExperimentConfig& c) {
  r.only({"eta", "eps"});
  if (r.has("eta")) c.eta = r.unit("eta");
  if (r.has("eps")) c.eps_override = r.unit("eps");
}

void read_detector(const Reader& r, ExperimentConfig& c) {
  r.only({"ideal", "efficiency", "equalize", "dark_rate", "dead_time", "coincidence_window"});
  DetectorConfig& d = c.detector;
  if (r.has("efficiency")) {
    const json& e = r.raw("efficiency");
    if (e.is_number()) {
      d.efficiency.fill(r.unit("efficiency"));
    } else if (e.is_array() && e.size() == 4) {
      for (std::size_t i = 0; i < 4; ++i) {
        if (!e[i].is_number()) fail("detector.efficiency entries must be numbers");
        d.efficiency[i] = e[i].get<double>();
        if (!(d.efficiency[i] >= 0.0 && d.efficiency[i] <= 1.0))
          fail("detector.efficiency entries must lie in [0, 1]");
      }
    } else {
      fail("detector.efficiency must be a number or an array of 4");
    }
  }
  if (r.has("dark_rate")) d.dark_rate = r.non_negative("dark_rate");
  if (r.has("dead_time")) d.dead_time = r.non_negative("dead_time");
  if (r.has("coincidence_window")) d.coincidence_window = r.non_negative("coincidence_window");
  if (r.has("equalize") && r.boolean("equalize")) d = equalize_efficiencies(d);
  if (r.has("ideal") && r.boolean("ideal")) {
    const double window = d.coincidence_window;
    d = DetectorConfig::ideal(d.duration);
    d.coincidence_window = window;
  }
}

void read_sweep(const Reader& r, SweepConfig& s) {
  r.only({"parameter", "start", "stop", "points", "photons_per_setting", "repeats", "estimator",
          "error_model"});
  if (r.has("parameter")) {
    const std::string p = r.string("parameter");
    if (p == "theta")
      s.parameter = SweepParameter::Theta;
    else if (p == "alpha")
      s.parameter = SweepParameter::Alpha;
    else
      fail("sweep.parameter must be theta or alpha");
  }
  if (r.has("start")) s.start = r.number("start");
  if (r.has("stop")) s.stop = r.number("stop");
  if (r.has("points")) s.points = static_cast<int>(r.integer("points", 1));
  if (r.has("photons_per_setting")) s.photons_per_setting = r.unsigned_integer("photons_per_setting");
  if (s.photons_per_setting == 0) fail("sweep.photons_per_setting must be positive");
  if (r.has("repeats")) s.repeats = static_cast<int>(r.integer("repeats", 1));
  if (r.has("estimator")) {
    const std::string e = r.string("estimator");
    if (e == "four_channel")
      s.estimator = Estimator::FourChannel;
    else if (e == "two_channel")
      s.estimator = Estimator::TwoChannel;
    else
      fail("sweep.estimator must be four_channel or two_channel");
  }
  if (r.has("error_model")) {
    const std::string e = r.string("error_model");
    if (e == "multinomial")
      s.error_model = ErrorModel::Multinomial;
    else if (e == "repeats")
      s.error_model = ErrorModel::Repeats;
    else
      fail("sweep.error_model must be multinomial or repeats");
  }
  if (s.error_model == ErrorModel::Repeats && s.repeats < 2)
    fail("sweep.error_model repeats needs sweep.repeats >= 2");
}

void read_autocorr(const Reader& r, AutocorrConfig& a) {
  r.only({"range", "points", "unfiltered"});
  if (r.has("range")) a.range = r.positive("range");
  if (r.has("points")) a.points = static_cast<int>(r.integer("points", 2));
  if (r.has("unfiltered")) a.unfiltered = read_spectrum(r.object("unfiltered"));
}

void read_output(const Reader& r, ExperimentConfig& c) {
  r.only({"dir", "prefix"});
  if (r.has("dir")) c.output_dir = r.string("dir");
  if (r.has("prefix")) {
    c.output_prefix = r.string("prefix");
    if (c.output_prefix.empty() || c.output_prefix.find('/') != std::string::npos)
      fail("output.prefix must be a plain, non-empty file name");
  }
}

json parse_json(std::string_view text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(origin + ": " + e.what());
  }
}

ExperimentConfig read_document(json doc) {
  json merged = json::parse(kBase);
  std::string preset;
  if (doc.is_object() && doc.contains("preset")) {
    if (!doc["preset"].is_string()) fail("preset must be a string");
    preset = doc["preset"].get<std::string>();
    const auto it = kPresets.find(preset);
    if (it == kPresets.end()) fail("unknown preset " + preset);
    merged.merge_patch(json::parse(it->second));
  }
  merged.merge_patch(doc);

  ExperimentConfig c;
  c.preset = preset;
  const Reader root(merged, "config");
  root.only({"preset", "seed", "source", "geometry", "model", "detector", "sweep", "autocorr", "output"});
  if (root.has("seed")) c.seed = root.unsigned_integer("seed");
  if (!root.has("source")) fail("config.source is required");
  read_source(root.object("source"), c);
  if (root.has("geometry")) read_geometry(root.object("geometry"), c);
  if (root.has("model")) read_model(root.object("model"), c);
  if (root.has("detector")) read_detector(root.object("detector"), c);
  if (root.has("sweep")) read_sweep(root.object("sweep"), c.sweep);
  if (root.has("autocorr")) read_autocorr(root.object("autocorr"), c.autocorr);
  if (root.has("output")) read_output(root.object("output"), c);
  try {
    c.source.validate();
    c.detector.validate();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) throw;
    fail(e.what());
  }
  c.echo = merged.dump(2);
  return c;
}

ExperimentConfig from_document(json doc) {
  try {
    return read_document(std::move(doc));
  } catch (const json::exception& e) {
    // Missing required fields surface as out_of_range from at().
    fail(e.what());
  }
}

}  // namespace

std::vector<double> SweepConfig::grid() const {
  std::vector<double> out(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i)
    out[i] = points == 1 ? start : start + (stop - start) * i / (points - 1);
  return out;
}

std::vector<double> SweepConfig::alpha_grid() const {
  std::vector<double> out = grid();
  if (parameter == SweepParameter::Theta)
    for (double& x : out) x *= 2.0;
  return out;
}

double ExperimentConfig::eps() const {
  if (eps_override) return *eps_override;
  if (delay) return epsilon_of_delay(*delay, spectrum);
  if (delta_l) return epsilon_of_path_difference(*delta_l, spectrum);
  return 0.0;
}

SweepOptions ExperimentConfig::sweep_options(unsigned workers) const {
  SweepOptions o;
  o.alpha_grid = sweep.alpha_grid();
  o.eps = eps();
  o.eta = eta;
  o.residual_xi = residual_xi;
  o.photons_per_setting = sweep.photons_per_setting;
  o.repeats = sweep.repeats;
  o.estimator = sweep.estimator;
  o.error_model = sweep.error_model;
  o.workers = workers;
  return o;
}

ExperimentConfig parse_config(std::string_view json_text) {
  return from_document(parse_json(json_text, "config"));
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return from_document(parse_json(buf.str(), path.string()));
}

ExperimentConfig preset_config(std::string_view name) {
  return from_document(json{{"preset", std::string(name)}});
}

std::string preset_json(std::string_view name) {
  const auto it = kPresets.find(name);
  if (it == kPresets.end()) fail("unknown preset " + std::string(name));
  return it->second;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [k, _] : kPresets) n.push_back(k);
    return n;
  }();
  return names;
}

}  // namespace spe
