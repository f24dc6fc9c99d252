#pragma once

// GF(2^8) arithmetic over the reduction polynomial x^8 + x^4 + x^3 + x^2 + 1
// (0x11D), with log/exp tables built at compile time. 0x02 generates the
// multiplicative group for this polynomial.

#include <array>
#include <cstdint>

#include "varflow/errors.hpp"

namespace varflow::gf256 {

inline constexpr unsigned kPolynomial = 0x11D;

namespace detail {

struct Tables {
  std::array<std::uint8_t, 512> exp{};
  std::array<std::uint8_t, 256> log{};
};

constexpr Tables make_tables() {
  Tables t;
  unsigned x = 1;
  for (unsigned i = 0; i < 255; ++i) {
    t.exp[i] = static_cast<std::uint8_t>(x);
    t.log[x] = static_cast<std::uint8_t>(i);
    x <<= 1;
    if (x & 0x100U) x ^= kPolynomial;
  }
  // Doubled so exp[log a + log b] needs no modulo.
  for (unsigned i = 255; i < 512; ++i) t.exp[i] = t.exp[i - 255];
  return t;
}

inline constexpr Tables kTables = make_tables();

}  // namespace detail

constexpr std::uint8_t add(std::uint8_t a, std::uint8_t b) { return a ^ b; }
constexpr std::uint8_t sub(std::uint8_t a, std::uint8_t b) { return a ^ b; }

constexpr std::uint8_t mul(std::uint8_t a, std::uint8_t b) {
  if (a == 0 || b == 0) return 0;
  return detail::kTables.exp[detail::kTables.log[a] + detail::kTables.log[b]];
}

inline std::uint8_t inv(std::uint8_t a) {
  if (a == 0) throw PreconditionError("zero has no inverse in GF(256)");
  return detail::kTables.exp[255 - detail::kTables.log[a]];
}

inline std::uint8_t div(std::uint8_t a, std::uint8_t b) { return mul(a, inv(b)); }

}  // namespace varflow::gf256
