#include "hetsel/rng.hpp"

#include <cmath>

#include "hetsel/error.hpp"

namespace hetsel {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : key_(mix64(mix64(seed + kGolden) ^ mix64(stream + 0x7F4A7C159E3779B9ull))) {}

std::uint64_t RngStream::next_u64() {
  counter_ += 1;
  return mix64(key_ + counter_ * kGolden);
}

double RngStream::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_gaussian() {
  if (has_cached_gaussian_) {
    has_cached_gaussian_ = false;
    return cached_gaussian_;
  }
  // u1 in (0, 1] keeps the log finite.
  const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = next_unit();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * M_PI * u2;
  cached_gaussian_ = radius * std::sin(angle);
  has_cached_gaussian_ = true;
  return radius * std::cos(angle);
}

std::complex<double> RngStream::next_complex_gaussian() {
  const double s = std::sqrt(0.5);
  const double re = next_gaussian();
  const double im = next_gaussian();
  return {s * re, s * im};
}

int RngStream::next_below(int bound) {
  if (bound <= 0) throw Error(ErrorKind::DomainViolation, "next_below needs bound > 0");
  const std::uint64_t b = static_cast<std::uint64_t>(bound);
  const std::uint64_t threshold = (-b) % b;  // 2^64 mod b
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x < threshold);
  return static_cast<int>(x % b);
}

std::vector<int> RngStream::sample_without_replacement(const std::vector<int>& pool, int m) {
  if (m < 0 || m > static_cast<int>(pool.size()))
    throw Error(ErrorKind::NotEnoughCandidates, "sample size exceeds pool");
  std::vector<int> scratch = pool;
  std::vector<int> out;
  out.reserve(m);
  for (int i = 0; i < m; ++i) {
    const int j = i + next_below(static_cast<int>(scratch.size()) - i);
    std::swap(scratch[i], scratch[j]);
    out.push_back(scratch[i]);
  }
  return out;
}

RngStream RngStream::substream(std::uint64_t tag) const {
  return RngStream(mix64(key_ ^ mix64(tag + 0xD1B54A32D192ED03ull)));
}

}  // namespace hetsel
