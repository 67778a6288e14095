#include <doctest.h>

#include <cmath>
#include <set>

#include "polariton/random.hpp"

using namespace polariton;

TEST_CASE("Philox4x32-10 known-answer vectors") {
  using C = Philox4x32::Counter;
  using K = Philox4x32::Key;
  CHECK(Philox4x32::block(C{0, 0, 0, 0}, K{0, 0}) ==
        C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::block(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                          K{0xffffffff, 0xffffffff}) ==
        C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32::block(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                          K{0xa4093822, 0x299f31d0}) ==
        C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and independent") {
  CounterStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    seen.insert(x);
    seen.insert(c.next_u64());
    seen.insert(d.next_u64());
  }
  CHECK(seen.size() == 300);
  CHECK(a.draws() == 100);
}

TEST_CASE("draws are addressable by counter") {
  // Draw 2b and 2b + 1 are the two halves of block b.
  CounterStream s(5, 3);
  for (int i = 0; i < 6; ++i) s.next_u64();
  const auto draw6 = s.next_u64();
  const auto blk = Philox4x32::block({3, 0, 3, 0}, {5, 0});
  CHECK(draw6 == ((static_cast<std::uint64_t>(blk[1]) << 32) | blk[0]));
}

TEST_CASE("uniform and normal moments") {
  CounterStream s(1, 0);
  const int n = 200000;
  double su = 0.0, su2 = 0.0, lo = 1.0, hi = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = s.next_open01();
    su += u;
    su2 += u * u;
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo > 0.0);
  CHECK(hi < 1.0);
  CHECK(su / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(su2 / n - (su / n) * (su / n) == doctest::Approx(1.0 / 12.0).epsilon(0.01));

  double sn = 0.0, sn2 = 0.0, sn4 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = s.next_normal();
    sn += x;
    sn2 += x * x;
    sn4 += x * x * x * x;
  }
  CHECK(std::abs(sn / n) < 0.01);
  CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.01));
  CHECK(sn4 / n == doctest::Approx(3.0).epsilon(0.03));
}
