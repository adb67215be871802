#pragma once

// Counter-based random numbers. Every draw is a pure function of
// (seed, counter), so streams can be partitioned across workers at arbitrary
// boundaries and still merge to the bitwise single-threaded result.

#include <cstdint>

namespace edr {

namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}
}  // namespace detail

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t bits(std::uint64_t counter) const {
    return detail::mix64(seed_ + (counter + 1) * 0x9E3779B97F4A7C15ull);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform(std::uint64_t counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  std::uint64_t seed() const { return seed_; }

  // Independent child seed for a named substream (per run, row, stage, ...).
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    return detail::mix64(seed ^ (0xD1B54A32D192ED03ull + stream * 0x8CB92BA72F3D8DD7ull));
  }

 private:
  std::uint64_t seed_;
};

}  // namespace edr
