#pragma once
// Deterministic, splittable random streams. A stream is identified by a 64-bit
// key; children are derived from the key alone, never from consumed state, so
// a task's randomness depends only on its position in the task tree.

#include <cstdint>
#include <random>
#include <string_view>

namespace spe {

class RngStream {
 public:
  using Engine = std::mt19937_64;

  explicit RngStream(std::uint64_t master_seed);

  /// Child stream for an integer index (sweep point, setting, repeat, ...).
  RngStream substream(std::uint64_t index) const;

  /// Child stream for a named purpose ("arrivals", "dark", ...).
  RngStream named(std::string_view name) const;

  std::uint64_t key() const { return key_; }
  Engine& engine() { return engine_; }

  /// Uniform in [0, 1).
  double uniform();
  double exponential(double rate);
  std::uint64_t poisson(double mean);

 private:
  struct FromKey {};
  RngStream(FromKey, std::uint64_t key);

  std::uint64_t key_;
  Engine engine_;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

}  // namespace spe
