#pragma once

// Counter-based random numbers. Every draw is a pure function of
// (key, counter), so replicate b, cell (i, j) or observation i can be
// generated in any order or thread and still give the same value.

#include <array>
#include <cstdint>

namespace angof {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

/// Philox4x32-10 block function (Salmon et al., SC'11).
Counter philox4x32(Counter ctr, Key key) noexcept;

inline Key key_from_seed(std::uint64_t seed) noexcept {
  return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

/// SplitMix64 finalizer; used to derive independent seeds from a base seed
/// and a tag.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) noexcept;

/// Uniform double in the open interval (0, 1) with 52 random bits; the
/// largest value is 1 - 2^-53.
inline double u01_open(std::uint32_t hi, std::uint32_t lo) noexcept {
  const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 20) ^ (lo >> 12);
  return (static_cast<double>(bits & ((1ULL << 52) - 1)) + 0.5) * 0x1.0p-52;
}

/// Two uniforms from one Philox block.
std::array<double, 2> uniform_pair(Counter ctr, Key key) noexcept;

/// Two independent standard normals from one Philox block (Box-Muller).
std::array<double, 2> normal_pair(Counter ctr, Key key) noexcept;

/// Sequential stream over consecutive counters, for callers that just need
/// "the next uniform". Stream id occupies the two high counter words.
class PhiloxStream {
 public:
  PhiloxStream(std::uint64_t seed, std::uint64_t stream) noexcept
      : key_(key_from_seed(seed)),
        hi_(static_cast<std::uint32_t>(stream)),
        top_(static_cast<std::uint32_t>(stream >> 32)) {}

  double uniform() noexcept;
  double normal() noexcept;

 private:
  void refill() noexcept;

  Key key_;
  std::uint32_t hi_;
  std::uint32_t top_;
  std::uint64_t block_ = 0;
  Counter buf_{};
  int used_ = 4;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

}  // namespace angof
