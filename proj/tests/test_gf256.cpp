#include <gtest/gtest.h>

#include "support.hpp"
#include "varflow/gf256.hpp"

using namespace varflow;

TEST(Gf256, AddIsXor) {
  EXPECT_EQ(gf256::add(0x57, 0x57), 0x00);
  EXPECT_EQ(gf256::add(0x57, 0x83), 0xD4);
  EXPECT_EQ(gf256::sub(0x12, 0x34), gf256::add(0x12, 0x34));
}

TEST(Gf256, MulIdentityAndZero) {
  for (unsigned a = 0; a < 256; ++a) {
    EXPECT_EQ(gf256::mul(static_cast<std::uint8_t>(a), 1), a);
    EXPECT_EQ(gf256::mul(static_cast<std::uint8_t>(a), 0), 0);
  }
}

TEST(Gf256, OneReductionStep) { EXPECT_EQ(gf256::mul(0x02, 0x80), 0x1D); }

TEST(Gf256, MulMatchesShiftAndReduce) {
  for (unsigned a = 0; a < 256; ++a) {
    for (unsigned b = 0; b < 256; ++b) {
      ASSERT_EQ(gf256::mul(static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b)),
                vftest::slow_mul(static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b)))
          << a << " * " << b;
    }
  }
}

TEST(Gf256, InverseAndDivision) {
  for (unsigned a = 1; a < 256; ++a) {
    const auto x = static_cast<std::uint8_t>(a);
    EXPECT_EQ(gf256::mul(x, gf256::inv(x)), 1);
    EXPECT_EQ(gf256::div(x, x), 1);
    EXPECT_EQ(gf256::div(gf256::mul(x, 0x53), 0x53), x);
  }
  EXPECT_THROW(gf256::inv(0), PreconditionError);
  EXPECT_THROW(gf256::div(5, 0), PreconditionError);
}

TEST(Gf256, DistributesOverAdd) {
  for (unsigned a = 0; a < 256; a += 7) {
    for (unsigned b = 0; b < 256; b += 5) {
      for (unsigned c = 0; c < 256; c += 11) {
        const auto x = static_cast<std::uint8_t>(a), y = static_cast<std::uint8_t>(b),
                   z = static_cast<std::uint8_t>(c);
        ASSERT_EQ(gf256::mul(x, gf256::add(y, z)), gf256::add(gf256::mul(x, y), gf256::mul(x, z)));
      }
    }
  }
}

static_assert(gf256::mul(0x02, 0x80) == 0x1D);
