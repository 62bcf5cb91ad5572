#include "spe/detector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

namespace spe {

DetectorConfig DetectorConfig::ideal(double duration) {
  DetectorConfig d;
  d.efficiency = {1.0, 1.0, 1.0, 1.0};
  d.dark_rate = 0.0;
  d.dead_time = 0.0;
  d.duration = duration;
  return d;
}

void DetectorConfig::validate() const {
  for (double e : efficiency)
    if (!(e >= 0.0 && e <= 1.0)) throw Error(ErrorCode::ConfigError, "efficiency must lie in [0,1]");
  if (!(dark_rate >= 0.0)) throw Error(ErrorCode::ConfigError, "dark_rate must be >= 0");
  if (!(dead_time >= 0.0)) throw Error(ErrorCode::ConfigError, "dead_time must be >= 0");
  if (!(coincidence_window >= 0.0))
    throw Error(ErrorCode::ConfigError, "coincidence_window must be >= 0");
  if (!(duration >= 0.0) || !std::isfinite(duration))
    throw Error(ErrorCode::ConfigError, "duration must be finite and >= 0");
}

ChannelCounts& ChannelCounts::operator+=(const ChannelCounts& o) {
  for (int c = 0; c < 4; ++c) n[c] += o.n[c];
  dark_tally += o.dark_tally;
  dropped_dead_time += o.dropped_dead_time;
  coincidence_windows += o.coincidence_windows;
  return *this;
}

DetectorConfig equalize_efficiencies(DetectorConfig det) {
  const double lowest = *std::min_element(det.efficiency.begin(), det.efficiency.end());
  det.efficiency.fill(lowest);
  return det;
}

namespace {

struct DarkClick {
  double time;
  int channel;
};

// Registers clicks in time order.
class ClickRecorder {
 public:
  explicit ClickRecorder(const DetectorConfig& det) : det_(det) {
    last_accept_.fill(-std::numeric_limits<double>::infinity());
  }

  void click(double t, int channel, bool dark) {
    if (t - last_accept_[channel] < det_.dead_time) {
      ++counts_.dropped_dead_time;
      return;
    }
    last_accept_[channel] = t;
    ++counts_.n[channel];
    if (dark) ++counts_.dark_tally;

    if (t - cluster_last_ <= det_.coincidence_window) {
      cluster_mask_ |= 1u << channel;
      if (!cluster_counted_ && std::popcount(cluster_mask_) >= 2) {
        ++counts_.coincidence_windows;
        cluster_counted_ = true;
      }
    } else {
      cluster_mask_ = 1u << channel;
      cluster_counted_ = false;
    }
    cluster_last_ = t;
  }

  const ChannelCounts& counts() const { return counts_; }

 private:
  const DetectorConfig& det_;
  ChannelCounts counts_;
  std::array<double, 4> last_accept_{};
  double cluster_last_ = -std::numeric_limits<double>::infinity();
  unsigned cluster_mask_ = 0;
  bool cluster_counted_ = false;
};

std::vector<DarkClick> sample_dark_clicks(const DetectorConfig& det, RngStream rng) {
  std::vector<DarkClick> out;
  if (det.dark_rate <= 0.0 || det.duration <= 0.0) return out;
  for (int c = 0; c < 4; ++c) {
    const std::uint64_t k = rng.poisson(det.dark_rate * det.duration);
    for (std::uint64_t i = 0; i < k; ++i) out.push_back({rng.uniform() * det.duration, c});
  }
  std::sort(out.begin(), out.end(), [](const DarkClick& a, const DarkClick& b) {
    return a.time < b.time || (a.time == b.time && a.channel < b.channel);
  });
  return out;
}

}  // namespace

ChannelCounts simulate_counts(const ChannelProbabilities& probs, const SourceConfig& src,
                              const DetectorConfig& det, RngStream& rng) {
  src.validate();
  det.validate();

  const std::vector<DarkClick> dark = sample_dark_clicks(det, rng.named("dark"));
  RngStream photons = rng.named("photons");
  auto& engine = photons.engine();
  std::exponential_distribution<double> gap(src.mean_rate);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const double c0 = probs[0], c1 = c0 + probs[1], c2 = c1 + probs[2];
  const auto& eff = det.efficiency;
  const bool lossless = std::all_of(eff.begin(), eff.end(), [](double e) { return e >= 1.0; });

  ClickRecorder rec(det);
  std::size_t next_dark = 0;
  for (double t = gap(engine); t < det.duration; t += gap(engine)) {
    const double u = unit(engine);
    const int h = u < c0 ? 0 : u < c1 ? 1 : u < c2 ? 2 : 3;
    if (!lossless && !(unit(engine) < eff[h])) continue;
    while (next_dark < dark.size() && dark[next_dark].time <= t) {
      rec.click(dark[next_dark].time, dark[next_dark].channel, true);
      ++next_dark;
    }
    rec.click(t, h, false);
  }
  for (; next_dark < dark.size(); ++next_dark)
    rec.click(dark[next_dark].time, dark[next_dark].channel, true);
  return rec.counts();
}

}  // namespace spe
