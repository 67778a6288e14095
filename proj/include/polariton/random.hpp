#pragma once

// Philox4x32-10 counter-based generator. A stream is addressed by
// (key, stream index); draws within a stream are addressed by a draw counter,
// so any sample can be regenerated without replaying earlier ones.

#include <array>
#include <cstdint>

namespace polariton {

class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter counter, Key key);
};

class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint64_t stream_index);

  // Uniform 64-bit word; draw i of the stream.
  std::uint64_t next_u64();
  // Uniform on the open interval (0, 1) with 53 random bits.
  double next_open01();
  // Standard normal via Box-Muller (two uniforms per draw, no caching).
  double next_normal();

  std::uint64_t draws() const { return draw_; }

 private:
  Philox4x32::Key key_;
  std::uint64_t stream_;
  std::uint64_t draw_ = 0;
  Philox4x32::Counter buffer_{};
  bool has_second_half_ = false;
};

}  // namespace polariton
