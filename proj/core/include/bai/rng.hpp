#pragma once

#include <cstdint>

namespace bai::rng {

// SplitMix64 finalizer. Bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t z);

// Child seed for stream `index` under `seed`; independent of call order.
std::uint64_t split(std::uint64_t seed, std::uint64_t index);

// Counter-based generator: the k-th output is mix64(seed + (k + 1) * golden).
// Fixed across platforms so recorded trajectories stay reproducible.
class Stream {
 public:
  explicit Stream(std::uint64_t seed = 0) : seed_(seed) {}

  std::uint64_t next_u64();
  // Uniform on the open interval (0, 1).
  double uniform();
  // Standard normal by inverse CDF.
  double normal();
  double normal(double mean, double variance);
  double uniform(double lo, double hi);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

// Standard normal quantile, Wichura's AS241 (about 1e-16 relative accuracy).
double normal_quantile(double p);

}  // namespace bai::rng
