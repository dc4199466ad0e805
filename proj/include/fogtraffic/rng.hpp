#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace fogtraffic {

/// A reproducible generator. Draws are computed from raw engine output so
/// the sequence does not depend on the standard library's distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  double exponential(double rate);
  /// Uniform integer in [0, n).
  std::uint64_t index(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

/// Root of all randomness in a run. Named sub-streams are derived from the
/// root seed and the name only, so adding a stream never shifts another.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }
  Rng substream(std::string_view name) const;

 private:
  std::uint64_t seed_;
};

}  // namespace fogtraffic
