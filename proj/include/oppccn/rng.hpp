#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace oppccn {

/// Deterministic random stream. All draws are implemented on top of the raw
/// mt19937_64 output so results are bit-identical across platforms and
/// standard libraries (std::*_distribution is implementation-defined).
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1).
  double next_double() { return (engine_() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  /// Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n);

  /// Exponential with the given mean (seconds).
  double exponential(double mean);

  /// Geometric waiting time on a 1-second lattice with the given mean,
  /// i.e. number of failures before the first success with p = 1/mean.
  std::int64_t geometric(double mean);

  bool coin(double p_true) { return next_double() < p_true; }

 private:
  std::mt19937_64 engine_;
};

/// Derives the seed of a named sub-stream so that toggling one stochastic
/// concern (mobility, workload, protocol coins) does not perturb the others.
std::uint64_t substream_seed(std::uint64_t base_seed, std::string_view stream_name,
                             std::uint64_t run_index);

}  // namespace oppccn
