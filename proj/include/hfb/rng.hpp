#pragma once

#include <cstdint>

namespace hfb {

// Counter-based generator: draw i is mix(key + (i + 1) * golden). The output
// depends only on (key, counter), so sequences are identical on every
// platform and compiler. Normal and uniform draws are computed here rather
// than through <random> distributions, whose algorithms are
// implementation-defined.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : key_(seed) {}

  std::uint64_t seed() const { return key_; }
  std::uint64_t counter() const { return counter_; }

  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform();

  // Uniform integer in [0, n). n must be positive.
  std::uint64_t uniform_index(std::uint64_t n);

  bool bernoulli(double p) { return uniform() < p; }

  // Standard normal via the Box-Muller transform (one draw per call, the
  // paired sine value is discarded so the stream stays stateless).
  double normal();

  // Independent child stream keyed by (this key, tag). Does not advance
  // this stream.
  RngStream derive(std::uint64_t tag) const;

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t z);

// Seed of the r-th independent run.
inline std::uint64_t run_seed(std::uint64_t base_seed, std::uint64_t run) {
  return base_seed ^ run;
}

}  // namespace hfb
