#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace hetsel {

// Counter-based SplitMix64 stream.
//
// output(i) = mix64(key + i * GOLDEN), where mix64 is the SplitMix64
// finalizer and key is derived from (seed, stream) through the same
// finalizer. Identical (seed, stream) therefore reproduces the identical
// draw sequence on any platform and under any thread schedule, and
// substream(tag) derives an independent stream without touching the
// parent's counter. See README for the exact constants.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();

  // Uniform double in [0, 1), 53 random bits.
  double next_unit();

  // Standard normal via Box-Muller; the paired value is cached.
  double next_gaussian();

  // Circularly-symmetric complex standard normal (unit total variance).
  std::complex<double> next_complex_gaussian();

  // Uniform integer in [0, bound); rejection sampling, no modulo bias.
  int next_below(int bound);

  // m distinct elements drawn uniformly from pool, in draw order.
  std::vector<int> sample_without_replacement(const std::vector<int>& pool, int m);

  // Independent child stream; deterministic in (parent key, tag).
  RngStream substream(std::uint64_t tag) const;

 private:
  explicit RngStream(std::uint64_t key) : key_(key) {}

  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
  double cached_gaussian_ = 0.0;
  bool has_cached_gaussian_ = false;
};

}  // namespace hetsel
