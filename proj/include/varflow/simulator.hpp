#pragma once

// Slotted-time simulation of generation-based rateless RLNC over parallel
// erasure links between one sender and one receiver.
//
// Each slot the sender puts one fresh coded packet of the active generation
// on every link; each is erased independently with that link's p. When the
// receiver reaches full rank it sends an ACK back over the link that
// delivered the decoding packet, arriving rtt slots later. The ACK is the
// only feedback: until it arrives the sender keeps sending the same
// generation, counting a new round every n transmissions.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "varflow/errors.hpp"
#include "varflow/net_model.hpp"
#include "varflow/rlnc.hpp"

namespace varflow {

struct CodingParams {
  std::size_t N = 0;      // source packets
  int l_bits = 0;         // payload bits per packet
  int delta_bits = 0;     // per-packet metadata bits
  std::size_t n = 0;      // packets per generation
};

enum class EventKind { tx, erased, rx, decoded, ack_sent, ack_rx };

inline const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::tx: return "tx";
    case EventKind::erased: return "erased";
    case EventKind::rx: return "rx";
    case EventKind::decoded: return "decoded";
    case EventKind::ack_sent: return "ack_sent";
    case EventKind::ack_rx: return "ack_rx";
  }
  return "?";
}

struct SimEvent {
  long slot = 0;
  std::string link_id;
  std::size_t gen = 0;
  EventKind kind = EventKind::tx;
};

struct SimMetrics {
  // In-order information bits delivered per sender transmission.
  double throughput = 0.0;
  // Per source packet: slots from the first transmission of its generation
  // up to and including the slot its generation was decoded.
  std::vector<long> delay_samples;
  std::size_t transmissions = 0;
  std::size_t erasures = 0;
  std::size_t retransmission_rounds = 0;
  std::size_t delivered_packets = 0;
  std::size_t generations_decoded = 0;
  long slots_run = 0;

  double mean_delay() const {
    if (delay_samples.empty()) return 0.0;
    double sum = 0.0;
    for (long d : delay_samples) sum += static_cast<double>(d);
    return sum / static_cast<double>(delay_samples.size());
  }

  // Nearest-rank 95th percentile.
  double p95_delay() const {
    if (delay_samples.empty()) return 0.0;
    std::vector<long> sorted = delay_samples;
    std::sort(sorted.begin(), sorted.end());
    auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(sorted.size())));
    return static_cast<double>(sorted[std::max<std::size_t>(rank, 1) - 1]);
  }
};

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double draw_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Generation size whose per-RTT information budget matches eta_target:
/// n = max(1, round(eta_target * rtt_long / (l + delta))).
inline std::size_t select_generation_size(double eta_target, int l_bits, int delta_bits,
                                          int rtt_long) {
  if (!(eta_target > 0.0)) throw PreconditionError("target throughput must be positive");
  if (l_bits + delta_bits <= 0) throw PreconditionError("packet cost l + delta must be positive");
  if (rtt_long < 1) throw PreconditionError("rtt must be >= 1");
  const double n = std::round(eta_target * rtt_long / static_cast<double>(l_bits + delta_bits));
  return n < 1.0 ? 1 : static_cast<std::size_t>(n);
}

inline SimMetrics simulate(std::span<const LinkSpec> links, const CodingParams& coding,
                           long horizon, std::uint64_t seed,
                           std::vector<SimEvent>* events = nullptr) {
  if (coding.n == 0 || coding.l_bits <= 0 || coding.N == 0 || coding.delta_bits < 0)
    throw ConfigError("invalid coding parameters: need N >= 1, n >= 1, l >= 1, delta >= 0");
  if (links.empty()) throw PreconditionError("simulation needs at least one link");
  int max_rtt = 1;
  for (const auto& l : links) {
    if (!(l.p >= 0.0 && l.p <= 1.0) || l.rtt < 1)
      throw PreconditionError("link '" + l.id + "' has invalid p or rtt");
    max_rtt = std::max(max_rtt, l.rtt);
  }
  if (horizon < max_rtt) throw PreconditionError("horizon must be at least the longest rtt");

  std::mt19937_64 rng(seed);
  auto log = [&](long slot, const std::string& link, std::size_t gen, EventKind kind) {
    if (events) events->push_back({slot, link, gen, kind});
  };

  const std::size_t bytes = static_cast<std::size_t>((coding.l_bits + 7) / 8);
  const unsigned spare_bits = static_cast<unsigned>(bytes * 8 - coding.l_bits);
  std::vector<Payload> data(coding.N, Payload(bytes));
  for (auto& packet : data) {
    for (auto& b : packet) b = static_cast<std::uint8_t>(rng() >> 56);
    if (spare_bits) packet.back() &= static_cast<std::uint8_t>(0xFFU >> spare_bits);
  }
  const auto generations = split_generations(data, coding.n);

  SimMetrics m;
  std::size_t active = 0;
  std::optional<DecoderState> decoder(std::in_place, generations[0].index, coding.n, bytes);
  long ack_arrival = -1;  // slot the pending ACK lands, -1 when none
  std::string ack_link;
  long first_tx = -1;
  std::size_t sent_in_generation = 0;
  double delivered_bits = 0.0;

  long slot = 0;
  for (; slot < horizon && active < generations.size(); ++slot) {
    if (ack_arrival == slot) {
      log(slot, ack_link, generations[active].index, EventKind::ack_rx);
      ack_arrival = -1;
      ++active;
      if (active == generations.size()) break;
      decoder.emplace(generations[active].index, coding.n, bytes);
      first_tx = -1;
      sent_in_generation = 0;
    }
    const Generation& gen = generations[active];
    for (const auto& link : links) {
      CodedPacket pkt = encode(gen, rng);
      pkt.slot_sent = slot;
      pkt.metadata_bits = coding.delta_bits;
      if (first_tx < 0) first_tx = slot;
      if (sent_in_generation > 0 && sent_in_generation % coding.n == 0) ++m.retransmission_rounds;
      ++sent_in_generation;
      ++m.transmissions;
      log(slot, link.id, gen.index, EventKind::tx);

      if (draw_unit(rng) < link.p) {
        ++m.erasures;
        log(slot, link.id, gen.index, EventKind::erased);
        continue;
      }
      log(slot, link.id, gen.index, EventKind::rx);
      if (decoder->decoded()) continue;
      decoder->decode_step(pkt);
      if (!decoder->decoded()) continue;

      if (decoder->recovered() != gen.payloads)
        throw InvariantError("decoded generation differs from its source packets");
      log(slot, link.id, gen.index, EventKind::decoded);
      log(slot, link.id, gen.index, EventKind::ack_sent);
      ack_arrival = slot + link.rtt;
      ack_link = link.id;
      ++m.generations_decoded;
      m.delivered_packets += gen.real_packets;
      delivered_bits += static_cast<double>(gen.real_packets) * coding.l_bits;
      for (std::size_t k = 0; k < gen.real_packets; ++k)
        m.delay_samples.push_back(slot - first_tx + 1);
    }
  }
  m.slots_run = slot;
  m.throughput = m.transmissions ? delivered_bits / static_cast<double>(m.transmissions) : 0.0;
  return m;
}

inline void write_event_log(std::ostream& os, std::span<const SimEvent> events) {
  os << "slot,link_id,gen,event\n";
  for (const auto& e : events)
    os << e.slot << ',' << e.link_id << ',' << e.gen << ',' << to_string(e.kind) << '\n';
}

}  // namespace varflow
