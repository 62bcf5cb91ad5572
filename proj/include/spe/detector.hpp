#pragma once
// SPAD measurement channels: efficiency thinning, Poisson dark counts,
// non-paralyzable dead time and cross-channel coincidence tallies.
//
// Model assumptions: thinning is independent of the channel outcome (fair
// sampling); dark clicks are uniform in time and independent per channel;
// a click inside the blind window is dropped and does not extend it.

#include <array>
#include <cstdint>

#include "spe/photostats.hpp"
#include "spe/qstate.hpp"
#include "spe/rng.hpp"

namespace spe {

struct DetectorConfig {
  std::array<double, 4> efficiency{0.52, 0.52, 0.52, 0.52};
  double dark_rate = 5.0;             // Hz per channel ("few Hz")
  double dead_time = 22e-9;           // s
  double coincidence_window = 1e-9;   // s
  double duration = 1.0;              // s per setting

  /// Unit efficiency, no dark counts, no dead time.
  static DetectorConfig ideal(double duration);

  void validate() const;
};

struct ChannelCounts {
  std::array<std::uint64_t, 4> n{};  // canonical order 0V, 0H, 1V, 1H
  std::uint64_t dark_tally = 0;          // registered clicks that were dark counts
  std::uint64_t dropped_dead_time = 0;   // clicks lost inside a blind window
  std::uint64_t coincidence_windows = 0; // clusters with clicks on >= 2 channels

  std::uint64_t operator[](Channel c) const { return n[c]; }
  std::uint64_t total() const { return n[0] + n[1] + n[2] + n[3]; }

  ChannelCounts& operator+=(const ChannelCounts& o);
  bool operator==(const ChannelCounts&) const = default;
};

/// One setting's worth of counts: arrivals at src.mean_rate over det.duration,
/// channel drawn from `probs`, then efficiency, dead time and dark counts.
ChannelCounts simulate_counts(const ChannelProbabilities& probs, const SourceConfig& src,
                              const DetectorConfig& det, RngStream& rng);

/// Sets every channel efficiency to the smallest one.
DetectorConfig equalize_efficiencies(DetectorConfig det);

}  // namespace spe
