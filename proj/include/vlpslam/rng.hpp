#pragma once

#include <cstdint>
#include <random>

namespace vlpslam {

// Deterministic random source. Every consumer owns its own stream derived
// from the scenario seed and a stream tag, so insertion or removal of one
// consumer never shifts another consumer's draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // splitmix64 of (seed, stream); used to derive independent sub-streams.
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream);

  static Rng derive(std::uint64_t seed, std::uint64_t stream) {
    return Rng(mix(seed, stream));
  }

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1), 53-bit resolution. Not implementation-defined, unlike
  // std::uniform_real_distribution, so logs replay across standard libraries.
  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  // Standard normal via Box-Muller. Exactly two uniform draws per call and no
  // cached second value, so the draw count per call is fixed.
  double gaussian();

  // sigma == 0 returns mean exactly (no draws consumed would break stream
  // alignment, so draws are still consumed).
  double gaussian(double mean, double sigma) { return mean + sigma * gaussian(); }

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace vlpslam
