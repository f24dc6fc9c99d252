#include <gtest/gtest.h>

#include <random>

#include "support.hpp"
#include "varflow/rlnc.hpp"

using namespace varflow;

namespace {

std::vector<Payload> make_payloads(std::size_t count, std::size_t bytes, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Payload> out(count, Payload(bytes));
  for (auto& p : out) {
    for (auto& b : p) b = static_cast<std::uint8_t>(rng() >> 56);
  }
  return out;
}

}  // namespace

TEST(Split, PadsLastGeneration) {
  const auto data = make_payloads(10, 3, 1);
  const auto gens = split_generations(data, 4);
  ASSERT_EQ(gens.size(), 3u);
  EXPECT_EQ(gens[0].index, 1u);
  EXPECT_EQ(gens[2].index, 3u);
  EXPECT_EQ(gens[2].real_packets, 2u);
  EXPECT_EQ(gens[2].payloads.size(), 4u);
  EXPECT_EQ(gens[2].payloads[2], Payload(3, 0));
  EXPECT_EQ(gens[2].payloads[3], Payload(3, 0));
  EXPECT_EQ(gens[2].payloads[1], data[9]);
}

TEST(Split, DegenerateSizes) {
  const auto data = make_payloads(5, 2, 2);
  EXPECT_EQ(split_generations(data, 5).size(), 1u);
  const auto single = split_generations(data, 1);
  ASSERT_EQ(single.size(), 5u);
  for (const auto& g : single) EXPECT_EQ(g.real_packets, 1u);
  EXPECT_THROW(split_generations(data, 0), PreconditionError);
  EXPECT_THROW(split_generations(std::vector<Payload>{}, 2), PreconditionError);
  EXPECT_THROW(split_generations(std::vector<Payload>{Payload(1), Payload(2)}, 2), PreconditionError);
}

TEST(Encode, SinglePacketIsScaledCopy) {
  const auto gens = split_generations(make_payloads(1, 8, 3), 1);
  std::mt19937_64 rng(4);
  for (int k = 0; k < 50; ++k) {
    const auto pkt = encode(gens[0], rng);
    ASSERT_EQ(pkt.coefficients.size(), 1u);
    const std::uint8_t rho = pkt.coefficients[0];
    EXPECT_NE(rho, 0);
    for (std::size_t b = 0; b < 8; ++b) EXPECT_EQ(pkt.payload[b], gf256::mul(rho, gens[0].payloads[0][b]));
  }
}

TEST(Encode, SeedReproducesCoefficients) {
  const auto gens = split_generations(make_payloads(4, 4, 5), 4);
  std::mt19937_64 a(42), b(42);
  EXPECT_EQ(encode(gens[0], a).coefficients, encode(gens[0], b).coefficients);
}

TEST(Encode, ZeroPayloadsStayZero) {
  const auto gens = split_generations(std::vector<Payload>(4, Payload(6, 0)), 4);
  std::mt19937_64 rng(6);
  for (int k = 0; k < 20; ++k) EXPECT_EQ(encode(gens[0], rng).payload, Payload(6, 0));
}

TEST(Decode, RoundTripAllSizes) {
  std::mt19937_64 rng(7);
  for (std::size_t n = 1; n <= 32; ++n) {
    const auto data = make_payloads(n, 16, 100 + n);
    const auto gen = split_generations(data, n)[0];
    DecoderState dec(gen.index, n, 16);
    std::vector<std::vector<std::uint8_t>> seen;
    while (!dec.decoded()) {
      const auto pkt = encode(gen, rng);
      seen.push_back(pkt.coefficients);
      const std::size_t before = dec.rank();
      const bool innovative = decode_step(dec, pkt);
      EXPECT_EQ(dec.rank(), vftest::slow_rank(seen));
      EXPECT_EQ(innovative, dec.rank() == before + 1);
    }
    EXPECT_EQ(dec.recovered(), data);
  }
}

TEST(Decode, DuplicateIsNotInnovative) {
  const auto gen = split_generations(make_payloads(4, 8, 8), 4)[0];
  std::mt19937_64 rng(9);
  DecoderState dec(1, 4, 8);
  const auto pkt = encode(gen, rng);
  EXPECT_TRUE(dec.decode_step(pkt));
  EXPECT_FALSE(dec.decode_step(pkt));
  EXPECT_EQ(dec.rank(), 1u);
  EXPECT_THROW(dec.recovered(), PreconditionError);
}

TEST(Decode, SinglePacketDecodesImmediately) {
  const auto gen = split_generations(make_payloads(1, 5, 10), 1)[0];
  std::mt19937_64 rng(11);
  DecoderState dec(1, 1, 5);
  EXPECT_TRUE(dec.decode_step(encode(gen, rng)));
  EXPECT_TRUE(dec.decoded());
  EXPECT_EQ(dec.recovered()[0], gen.payloads[0]);
}

TEST(Decode, RejectsMismatchedPackets) {
  const auto gens = split_generations(make_payloads(8, 4, 12), 4);
  std::mt19937_64 rng(13);
  DecoderState dec(1, 4, 4);
  EXPECT_THROW(dec.decode_step(encode(gens[1], rng)), PreconditionError);
  auto pkt = encode(gens[0], rng);
  pkt.payload.push_back(0);
  EXPECT_THROW(dec.decode_step(pkt), PreconditionError);
  pkt = encode(gens[0], rng);
  pkt.coefficients.pop_back();
  EXPECT_THROW(dec.decode_step(pkt), PreconditionError);
}

TEST(Decode, KnownSystem) {
  // Identity rows in reverse order, then one dependent row.
  Generation gen;
  gen.index = 1;
  gen.n = 3;
  gen.real_packets = 3;
  gen.payloads = {{0x11}, {0x22}, {0x33}};
  DecoderState dec(1, 3, 1);
  EXPECT_TRUE(dec.decode_step({1, {0, 0, 1}, {0x33}, 0, 0}));
  EXPECT_FALSE(dec.decode_step({1, {0, 0, 7}, {gf256::mul(7, 0x33)}, 0, 0}));
  EXPECT_TRUE(dec.decode_step({1, {0, 1, 1}, {0x22 ^ 0x33}, 0, 0}));
  EXPECT_TRUE(dec.decode_step({1, {2, 0, 0}, {gf256::mul(2, 0x11)}, 0, 0}));
  EXPECT_EQ(dec.recovered(), gen.payloads);
}
