#include "mstrend/rng.hpp"

#include <cmath>
#include <numbers>

namespace mstrend {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key) noexcept {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

double NormalStream::at(std::uint64_t index) const noexcept {
  const std::uint64_t block = index >> 1;
  const auto out = philox4x32_10(
      {static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
       static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)},
      {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
  const std::uint64_t w0 = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
  const std::uint64_t w1 = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
  const double r = std::sqrt(-2.0 * std::log(to_unit_positive(w0)));
  const double angle = 2.0 * std::numbers::pi * to_unit_positive(w1);
  return (index & 1) ? r * std::sin(angle) : r * std::cos(angle);
}

double NormalStream::next() noexcept {
  const std::uint64_t block = index_ >> 1;
  if (block != cached_block_) {
    cache_[0] = at(block << 1);
    cache_[1] = at((block << 1) | 1);
    cached_block_ = block;
  }
  return cache_[index_++ & 1];
}

void NormalStream::fill(std::span<double> out) noexcept {
  for (double& v : out) v = next();
}

}  // namespace mstrend
