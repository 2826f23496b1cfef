#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace mstrend {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123). A block is
/// a pure function of a 128-bit counter and a 64-bit key, so any draw can be
/// addressed directly without sequential state.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key) noexcept;

/// Purpose tags kept in the top byte of a stream id so that streams used for
/// different purposes never collide.
enum class StreamTag : std::uint8_t {
  GaussianReference = 1,
  Noise = 2,
  Critical = 3,
  Property = 4,
};

/// Injective in (tag, replicate) for replicate < 2^56.
constexpr std::uint64_t stream_id(StreamTag tag, std::uint64_t replicate) noexcept {
  return (static_cast<std::uint64_t>(tag) << 56) | (replicate & ((std::uint64_t{1} << 56) - 1));
}

/// Standard normal draws keyed by (seed, stream, index).
///
/// Block b of the Philox stream (counter = {b_lo, b_hi, stream_lo, stream_hi},
/// key = {seed_lo, seed_hi}) yields two 53-bit uniforms u1, u2 in (0,1] from its
/// two 64-bit halves; Box-Muller turns them into the draws with indices 2b
/// (r cos) and 2b + 1 (r sin), r = sqrt(-2 log u1), angle 2 pi u2.
class NormalStream {
 public:
  NormalStream(std::uint64_t seed, std::uint64_t stream) noexcept : seed_(seed), stream_(stream) {}

  double next() noexcept;
  void fill(std::span<double> out) noexcept;

  /// Draw at an absolute index, independent of the stream position.
  double at(std::uint64_t index) const noexcept;

  std::uint64_t position() const noexcept { return index_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t index_ = 0;
  std::uint64_t cached_block_ = ~std::uint64_t{0};
  std::array<double, 2> cache_{};
};

/// Uniform double in (0,1] from the top 53 bits of a 64-bit word. The midpoint
/// offset keeps it away from 0 so log(u) is finite; the largest word rounds to 1.
constexpr double to_unit_positive(std::uint64_t word) noexcept {
  return (static_cast<double>(word >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace mstrend
