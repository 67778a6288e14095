#include "polariton/random.hpp"

#include <cmath>

namespace polariton {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53;
constexpr std::uint32_t kMul1 = 0xCD9E8D57;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo,
                    std::uint32_t& hi) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  lo = static_cast<std::uint32_t>(p);
  hi = static_cast<std::uint32_t>(p >> 32);
}

}  // namespace

Philox4x32::Counter Philox4x32::block(Counter c, Key k) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t lo0, hi0, lo1, hi1;
    mulhilo(kMul0, c[0], lo0, hi0);
    mulhilo(kMul1, c[2], lo1, hi1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kWeyl0;
    k[1] += kWeyl1;
  }
  return c;
}

CounterStream::CounterStream(std::uint64_t seed, std::uint64_t stream_index)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      stream_(stream_index) {}

std::uint64_t CounterStream::next_u64() {
  // Each Philox block yields two 64-bit words; block b covers draws 2b, 2b+1.
  if (!has_second_half_) {
    const std::uint64_t b = draw_ / 2;
    buffer_ = Philox4x32::block(
        {static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
         static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)},
        key_);
  }
  const int half = has_second_half_ ? 2 : 0;
  has_second_half_ = !has_second_half_;
  ++draw_;
  return (static_cast<std::uint64_t>(buffer_[half + 1]) << 32) | buffer_[half];
}

double CounterStream::next_open01() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterStream::next_normal() {
  const double u1 = next_open01();
  const double u2 = next_open01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

}  // namespace polariton
