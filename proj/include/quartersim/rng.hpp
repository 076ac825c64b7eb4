#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

namespace quartersim {

/// Seeded pseudo-random stream. Only the raw 64-bit engine output is used and every
/// distribution is computed here, so sequences are identical across standard libraries.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  /// Independent sub-stream for `tag`; adding new tags never perturbs existing ones.
  static RngStream derive(std::uint64_t root_seed, std::string_view tag);

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Unbiased integer in [0, n); n > 0.
  std::uint64_t index(std::uint64_t n);
  /// Standard normal via Box-Muller.
  double normal();
  double normal(double mean, double sigma) { return mean + sigma * normal(); }

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view text);

/// k distinct indices out of [0, n), returned in ascending order (partial Fisher-Yates).
std::vector<std::size_t> sample_without_replacement(RngStream& rng, std::size_t n, std::size_t k);
/// Uniform random permutation of [0, n).
std::vector<std::size_t> permutation(RngStream& rng, std::size_t n);

}  // namespace quartersim
