#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace shapestat {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123).
///
/// The key is the 64-bit master seed; the 128-bit counter is split into a
/// 64-bit stream id (high half) and a 64-bit block index (low half), so
/// every (seed, stream) pair is an independent sequence that can be
/// created in any order on any thread. Satisfies UniformRandomBitGenerator.
class Philox4x32 {
 public:
  using result_type = std::uint64_t;
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  explicit Philox4x32(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept;

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept;

  /// Fresh generator on another stream of the same seed.
  Philox4x32 split(std::uint64_t stream) const noexcept {
    return Philox4x32(seed_, stream);
  }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  /// The raw ten-round bijection.
  static Counter block(Counter counter, Key key) noexcept;

 private:
  void refill() noexcept;

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_index_ = 0;
  Counter buffer_{};
  int used_ = 4;
};

/// Standard normal deviate by the Box-Muller transform. Written out rather
/// than using std::normal_distribution so streams are identical across
/// standard libraries.
double standard_normal(Philox4x32& rng) noexcept;

}  // namespace shapestat
