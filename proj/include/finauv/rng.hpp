#pragma once

#include <cstdint>

namespace finauv {

/// splitmix64 generator with a Box-Muller gaussian. Bit-portable across
/// platforms; campaigns derive one independent stream per (seed, run, tag).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  static Rng substream(std::uint64_t master_seed, std::uint64_t run_index,
                       std::uint64_t tag);

  std::uint64_t next_u64();

  /// Uniform in [0, 1).
  double uniform();

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi);

  /// Standard normal.
  double gaussian();

 private:
  std::uint64_t state_;
  bool have_spare_{false};
  double spare_{0.0};
};

}  // namespace finauv
