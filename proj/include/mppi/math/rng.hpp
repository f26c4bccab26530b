#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <utility>

namespace mppi {

// Counter-based random number generation (Philox4x32-10).
//
// Every draw is addressed by an explicit 128-bit counter under a keyed
// stream, so the value produced for a given (iteration, sample, step,
// channel) tuple does not depend on how many draws happened before it or
// on which worker asks first. This is what makes sampled batches
// bit-reproducible under any rollout evaluation order.

namespace detail {

inline std::array<std::uint32_t, 4> philox_round(
    const std::array<std::uint32_t, 4>& ctr, std::uint32_t k0,
    std::uint32_t k1) {
  const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
  const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
  return {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ k0,
          static_cast<std::uint32_t>(p1),
          static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ k1,
          static_cast<std::uint32_t>(p0)};
}

inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::uint32_t k0,
                                               std::uint32_t k1) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k0 += 0x9E3779B9u;
      k1 += 0xBB67AE85u;
    }
    ctr = philox_round(ctr, k0, k1);
  }
  return ctr;
}

// 53-bit mantissa from two words, mapped into (0, 1] (safe for log()).
inline double to_unit_open(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = ((std::uint64_t{hi} << 32) | lo) >> 11;
  return static_cast<double>(bits + 1) * 0x1p-53;
}

}  // namespace detail

// Stream domains keep unrelated uses of the same seed from colliding.
enum class RngDomain : std::uint32_t {
  sampling = 1,      // planner input noise
  perturbation = 2,  // plant parameter randomization
  scenario = 3,      // initial conditions, per-run jitter
};

// A keyed Philox stream. Stateless: callers address draws by counter.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, RngDomain domain)
      : key0_(static_cast<std::uint32_t>(seed)),
        key1_(static_cast<std::uint32_t>(seed >> 32) ^
              static_cast<std::uint32_t>(domain)) {}

  std::array<std::uint32_t, 4> block(std::uint32_t c0, std::uint32_t c1,
                                     std::uint32_t c2, std::uint32_t c3) const {
    return detail::philox4x32({c0, c1, c2, c3}, key0_, key1_);
  }

  double uniform(std::uint32_t c0, std::uint32_t c1, std::uint32_t c2,
                 std::uint32_t c3) const {
    const auto w = block(c0, c1, c2, c3);
    return detail::to_unit_open(w[0], w[1]);
  }

  // Two independent standard normals per counter (Box-Muller on one block).
  std::pair<double, double> normal_pair(std::uint32_t c0, std::uint32_t c1,
                                        std::uint32_t c2,
                                        std::uint32_t c3) const {
    const auto w = block(c0, c1, c2, c3);
    const double u1 = detail::to_unit_open(w[0], w[1]);
    const double u2 = detail::to_unit_open(w[2], w[3]);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * M_PI * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
  }

  double normal(std::uint32_t c0, std::uint32_t c1, std::uint32_t c2,
                std::uint32_t c3) const {
    return normal_pair(c0, c1, c2, c3).first;
  }

 private:
  std::uint32_t key0_;
  std::uint32_t key1_;
};

// Folds (seed, run index) into a child seed, e.g. one planner stream per
// run. SplitMix64 finalizer.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace mppi
