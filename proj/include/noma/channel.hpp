#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace noma {

/// Mean squared channel gains of the three links. Construct via make().
struct ChannelVariances {
  double alpha_sd = 1.0;
  double alpha_sr = 10.0;
  double alpha_rd = 2.0;

  /// Throws std::invalid_argument unless all values are finite and positive
  /// and alpha_sd < alpha_sr (relay must see the stronger first hop to
  /// decode both symbols).
  static ChannelVariances make(double alpha_sd, double alpha_sr, double alpha_rd);
  void validate() const;

  friend bool operator==(const ChannelVariances&, const ChannelVariances&) = default;
};

/// One draw of the squared channel magnitudes.
struct ChannelRealization {
  double beta_sd = 0.0;
  double beta_sr = 0.0;
  double beta_rd = 0.0;

  friend bool operator==(const ChannelRealization&, const ChannelRealization&) = default;
};

/// Seedable stream over std::mt19937_64, whose output sequence is fixed by the
/// C++ standard. Uniforms use the top 53 bits; exponentials use the inverse CDF.
/// Distribution objects from <random> are avoided because their algorithms
/// differ between standard libraries.
class SeededGenerator {
 public:
  explicit SeededGenerator(std::uint64_t seed) : engine_(seed) {}

  /// Stream `index` of the family rooted at `seed`:
  /// engine seed = splitmix64(seed ^ splitmix64(index + 1)).
  static SeededGenerator for_stream(std::uint64_t seed, std::uint64_t index);

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Exponential with the given mean.
  double exponential(double mean) { return -mean * std::log1p(-uniform()); }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Independent exponential draws with means alpha_sd, alpha_sr, alpha_rd, in
/// that order.
ChannelRealization sample(const ChannelVariances& variances, SeededGenerator& gen);

}  // namespace noma
