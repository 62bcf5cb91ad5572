#include "spe/rng.hpp"

namespace spe {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

RngStream::Engine seeded_engine(std::uint64_t key) {
  const std::uint64_t a = mix64(key);
  const std::uint64_t b = mix64(a);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return RngStream::Engine(seq);
}

std::uint64_t hash_name(std::string_view name) {
  // FNV-1a
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed) : RngStream(FromKey{}, mix64(master_seed)) {}

RngStream::RngStream(FromKey, std::uint64_t key) : key_(key), engine_(seeded_engine(key)) {}

RngStream RngStream::substream(std::uint64_t index) const {
  return RngStream(FromKey{}, mix64(key_ ^ mix64(index + 0x632be59bd9b4e019ULL)));
}

RngStream RngStream::named(std::string_view name) const {
  return RngStream(FromKey{}, mix64(key_ + 0x5851f42d4c957f2dULL * hash_name(name)));
}

double RngStream::uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

double RngStream::exponential(double rate) {
  return std::exponential_distribution<double>(rate)(engine_);
}

std::uint64_t RngStream::poisson(double mean) {
  if (mean <= 0.0) return 0;
  return std::poisson_distribution<std::uint64_t>(mean)(engine_);
}

}  // namespace spe
