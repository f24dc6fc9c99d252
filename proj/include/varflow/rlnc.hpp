#pragma once

// Generation-based random linear network coding over GF(2^8).
//
// Source data is split into generations of n equally sized packets; each
// coded packet carries a fresh random coefficient vector and the matching
// linear combination of its generation's payloads. The decoder keeps the
// received span in reduced row-echelon form, so a full-rank generation
// reads its source packets straight off the rows.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "varflow/errors.hpp"
#include "varflow/gf256.hpp"

namespace varflow {

using Payload = std::vector<std::uint8_t>;

struct Generation {
  std::size_t index = 1;  // 1-based
  std::size_t n = 0;
  std::size_t real_packets = 0;  // the rest are zero padding
  std::vector<Payload> payloads;
};

struct CodedPacket {
  std::size_t generation_index = 0;
  std::vector<std::uint8_t> coefficients;
  Payload payload;
  long slot_sent = 0;
  int metadata_bits = 0;
};

/// Splits N packets into ceil(N / n) generations; the last one is padded
/// with all-zero packets. All packets must share one length.
inline std::vector<Generation> split_generations(std::span<const Payload> data, std::size_t n) {
  if (n == 0) throw PreconditionError("generation size must be >= 1");
  if (data.empty()) throw PreconditionError("no packets to split");
  const std::size_t bytes = data.front().size();
  for (const auto& p : data) {
    if (p.size() != bytes) throw PreconditionError("packets must share one length");
  }
  std::vector<Generation> out;
  for (std::size_t start = 0; start < data.size(); start += n) {
    Generation g;
    g.index = out.size() + 1;
    g.n = n;
    g.real_packets = std::min(n, data.size() - start);
    for (std::size_t j = 0; j < n; ++j) {
      g.payloads.push_back(start + j < data.size() ? data[start + j] : Payload(bytes, 0));
    }
    out.push_back(std::move(g));
  }
  return out;
}

/// One coefficient byte from the top bits of a 64-bit draw.
inline std::uint8_t draw_coefficient(std::mt19937_64& rng) {
  return static_cast<std::uint8_t>(rng() >> 56);
}

inline CodedPacket encode(const Generation& gen, std::mt19937_64& rng) {
  CodedPacket pkt;
  pkt.generation_index = gen.index;
  pkt.coefficients.resize(gen.n);
  do {
    for (auto& c : pkt.coefficients) c = draw_coefficient(rng);
  } while (std::all_of(pkt.coefficients.begin(), pkt.coefficients.end(),
                       [](std::uint8_t c) { return c == 0; }));
  const std::size_t bytes = gen.payloads.empty() ? 0 : gen.payloads.front().size();
  pkt.payload.assign(bytes, 0);
  for (std::size_t j = 0; j < gen.n; ++j) {
    const std::uint8_t c = pkt.coefficients[j];
    if (c == 0) continue;
    const Payload& src = gen.payloads[j];
    for (std::size_t b = 0; b < bytes; ++b) pkt.payload[b] ^= gf256::mul(c, src[b]);
  }
  return pkt;
}

class DecoderState {
 public:
  DecoderState(std::size_t generation_index, std::size_t n, std::size_t payload_bytes)
      : generation_index_(generation_index), n_(n), bytes_(payload_bytes), pivot_row_(n, kNone) {}

  std::size_t generation_index() const { return generation_index_; }
  std::size_t n() const { return n_; }
  std::size_t rank() const { return rows_.size(); }
  bool decoded() const { return rank() == n_; }

  /// Adds one coded packet. Returns true when it was innovative.
  bool decode_step(const CodedPacket& pkt) {
    if (pkt.generation_index != generation_index_)
      throw PreconditionError("coded packet belongs to another generation");
    if (pkt.coefficients.size() != n_ || pkt.payload.size() != bytes_)
      throw PreconditionError("coded packet shape does not match the generation");
    if (decoded()) return false;

    Row row{pkt.coefficients, pkt.payload};
    for (std::size_t col = 0; col < n_; ++col) {
      if (row.coef[col] != 0 && pivot_row_[col] != kNone) {
        eliminate(row, rows_[pivot_row_[col]], row.coef[col]);
      }
    }
    std::size_t pivot = 0;
    while (pivot < n_ && row.coef[pivot] == 0) ++pivot;
    if (pivot == n_) return false;

    scale(row, gf256::inv(row.coef[pivot]));
    for (auto& other : rows_) {
      if (other.coef[pivot] != 0) eliminate(other, row, other.coef[pivot]);
    }
    pivot_row_[pivot] = rows_.size();
    rows_.push_back(std::move(row));
    return true;
  }

  /// Source payloads in order; only valid once decoded().
  std::vector<Payload> recovered() const {
    if (!decoded()) throw PreconditionError("generation is not decoded yet");
    std::vector<Payload> out(n_);
    for (std::size_t col = 0; col < n_; ++col) out[col] = rows_[pivot_row_[col]].payload;
    return out;
  }

 private:
  struct Row {
    std::vector<std::uint8_t> coef;
    Payload payload;
  };

  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  // target -= factor * source
  static void eliminate(Row& target, const Row& source, std::uint8_t factor) {
    for (std::size_t k = 0; k < target.coef.size(); ++k)
      target.coef[k] ^= gf256::mul(factor, source.coef[k]);
    for (std::size_t k = 0; k < target.payload.size(); ++k)
      target.payload[k] ^= gf256::mul(factor, source.payload[k]);
  }

  static void scale(Row& row, std::uint8_t factor) {
    for (auto& c : row.coef) c = gf256::mul(c, factor);
    for (auto& b : row.payload) b = gf256::mul(b, factor);
  }

  std::size_t generation_index_;
  std::size_t n_;
  std::size_t bytes_;
  std::vector<Row> rows_;
  std::vector<std::size_t> pivot_row_;
};

inline bool decode_step(DecoderState& state, const CodedPacket& pkt) {
  return state.decode_step(pkt);
}

}  // namespace varflow
