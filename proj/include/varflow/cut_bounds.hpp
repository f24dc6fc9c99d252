#pragma once

// Cuts, cut-aggregate weight bounds and network throughput bounds.
//
// A cut is identified by its source side S (s in S, d not in S); its edges
// are exactly the links with one endpoint in S. The aggregate bounds of a
// cut C are
//
//   w_mean(C) = sum r_mean_i
//   w_max(C)  = w_mean(C) + sqrt(sum sigma_i^2 var_i) / sum rtt_i
//   w_min(C)  = w_mean(C) - sqrt(sum sigma_i^2 var_i) / sum rtt_i
//
// and the network bounds are the minimum of each over all cuts, each with
// its own minimizing cut.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "varflow/errors.hpp"
#include "varflow/net_model.hpp"

namespace varflow {

inline constexpr std::size_t kDefaultVertexCap = 20;

struct Cut {
  std::vector<std::string> source_side;  // sorted
  std::vector<std::string> edges;        // sorted link ids

  friend bool operator==(const Cut&, const Cut&) = default;
};

struct CutWeights {
  double w_min = 0.0;
  double w_mean = 0.0;
  double w_max = 0.0;
  Cut cut;
};

struct ThroughputBounds {
  double eta_min = 0.0;
  double eta_mean = 0.0;
  double eta_max = 0.0;
  Cut argmin_cut_min;
  Cut argmin_cut_mean;
  Cut argmin_cut_max;
};

/// One concrete rate per link, indexed like net.links().
struct Realization {
  std::vector<double> rates;

  static Realization from_map(const Network& net, const std::map<std::string, double>& by_id) {
    Realization r;
    r.rates.resize(net.link_count());
    for (std::size_t i = 0; i < net.link_count(); ++i) {
      auto it = by_id.find(net.links()[i].id);
      if (it == by_id.end())
        throw PreconditionError("realization is missing link '" + net.links()[i].id + "'");
      r.rates[i] = it->second;
    }
    return r;
  }
};

struct MinCutCount {
  std::size_t count = 0;
  std::vector<std::vector<std::string>> sets;  // first-seen order
};

struct MaxFlowResult {
  double value = 0.0;
  Cut cut;  // canonical source-side cut (residual reachability from s)
};

namespace detail {

inline std::vector<std::size_t> crossing_links(const Network& net, const std::vector<bool>& side) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < net.link_count(); ++i) {
    if (side[net.endpoint_u(i)] != side[net.endpoint_v(i)]) out.push_back(i);
  }
  return out;
}

inline Cut make_cut(const Network& net, const std::vector<bool>& side,
                    const std::vector<std::size_t>& edges) {
  Cut c;
  for (std::size_t v = 0; v < net.vertex_count(); ++v) {
    if (side[v]) c.source_side.push_back(net.vertices()[v]);
  }
  for (std::size_t i : edges) c.edges.push_back(net.links()[i].id);
  return c;  // both already sorted: vertices and links are stored by id
}

inline std::vector<bool> side_of(const Network& net, const Cut& cut) {
  std::vector<bool> side(net.vertex_count(), false);
  for (const auto& name : cut.source_side) side[net.vertex_index(name)] = true;
  return side;
}

// Weighted aggregate over link indices; the core of cut_weights.
inline void aggregate(const Network& net, std::span<const RateBounds> bounds,
                      const std::vector<std::size_t>& edges, double& w_min, double& w_mean,
                      double& w_max) {
  double mean = 0.0;
  double spread = 0.0;
  double rtt_sum = 0.0;
  for (std::size_t i : edges) {
    const RateBounds& b = bounds[i];
    mean += b.r_mean;
    spread += b.sigma_used * b.sigma_used * b.variance;
    rtt_sum += net.links()[i].rtt;
  }
  const double h = std::sqrt(spread) / rtt_sum;
  w_mean = mean;
  w_max = mean + h;
  w_min = mean - h;
}

// All cuts in deterministic order: bit k of the counter puts the k-th
// vertex (sorted by id, excluding s and d) on the source side.
class CutTable {
 public:
  CutTable(const Network& net, std::size_t vertex_cap) : net_(&net) {
    if (net.vertex_count() > vertex_cap) {
      throw LimitExceeded("cut enumeration limited to " + std::to_string(vertex_cap) +
                          " vertices, network has " + std::to_string(net.vertex_count()));
    }
    const std::size_t s = net.source_index();
    const std::size_t d = net.destination_index();
    for (std::size_t v = 0; v < net.vertex_count(); ++v) {
      if (v != s && v != d) inner_.push_back(v);
    }
    const std::uint64_t count = std::uint64_t{1} << inner_.size();
    edges_.reserve(count);
    std::vector<bool> side(net.vertex_count(), false);
    for (std::uint64_t mask = 0; mask < count; ++mask) {
      fill_side(mask, side);
      edges_.push_back(crossing_links(net, side));
    }
  }

  std::size_t size() const { return edges_.size(); }
  const std::vector<std::size_t>& edges(std::size_t k) const { return edges_[k]; }

  void fill_side(std::uint64_t mask, std::vector<bool>& side) const {
    std::fill(side.begin(), side.end(), false);
    side[net_->source_index()] = true;
    for (std::size_t b = 0; b < inner_.size(); ++b) {
      if ((mask >> b) & 1U) side[inner_[b]] = true;
    }
  }

  Cut cut(std::size_t k) const {
    std::vector<bool> side(net_->vertex_count());
    fill_side(k, side);
    return make_cut(*net_, side, edges_[k]);
  }

 private:
  const Network* net_;
  std::vector<std::size_t> inner_;
  std::vector<std::vector<std::size_t>> edges_;
};

}  // namespace detail

/// Builds the cut whose source side is `source_side`.
inline Cut cut_from_side(const Network& net, const std::vector<std::string>& source_side) {
  std::vector<bool> side(net.vertex_count(), false);
  for (const auto& name : source_side) side[net.vertex_index(name)] = true;
  if (!side[net.source_index()]) throw PreconditionError("source side must contain the source");
  if (side[net.destination_index()])
    throw PreconditionError("source side must not contain the destination");
  return detail::make_cut(net, side, detail::crossing_links(net, side));
}

/// True when `cut` is a well-formed s-d cut of `net` whose edge list matches
/// its source side.
inline bool is_valid_cut(const Network& net, const Cut& cut) {
  std::vector<bool> side(net.vertex_count(), false);
  for (const auto& name : cut.source_side) {
    auto it = std::find(net.vertices().begin(), net.vertices().end(), name);
    if (it == net.vertices().end()) return false;
    side[static_cast<std::size_t>(it - net.vertices().begin())] = true;
  }
  if (!side[net.source_index()] || side[net.destination_index()]) return false;
  std::vector<std::string> expected;
  for (std::size_t i : detail::crossing_links(net, side)) expected.push_back(net.links()[i].id);
  std::vector<std::string> got = cut.edges;
  std::sort(got.begin(), got.end());
  return got == expected;
}

/// Calls f(side, edge_indices) for every vertex-partition cut, in the
/// deterministic enumeration order.
template <class F>
void for_each_cut(const Network& net, F&& f, std::size_t vertex_cap = kDefaultVertexCap) {
  detail::CutTable table(net, vertex_cap);
  std::vector<bool> side(net.vertex_count());
  for (std::size_t k = 0; k < table.size(); ++k) {
    table.fill_side(k, side);
    f(static_cast<const std::vector<bool>&>(side), table.edges(k));
  }
}

inline std::vector<Cut> enumerate_cuts(const Network& net,
                                       std::size_t vertex_cap = kDefaultVertexCap) {
  std::vector<Cut> out;
  for_each_cut(
      net,
      [&](const std::vector<bool>& side, const std::vector<std::size_t>& edges) {
        out.push_back(detail::make_cut(net, side, edges));
      },
      vertex_cap);
  return out;
}

/// Aggregate bounds of a cut. `bounds` is indexed like net.links().
inline CutWeights cut_weights(const Cut& cut, std::span<const RateBounds> bounds,
                              const Network& net) {
  if (cut.edges.empty()) throw PreconditionError("cut has no edges");
  std::vector<std::size_t> idx;
  idx.reserve(cut.edges.size());
  for (const auto& id : cut.edges) idx.push_back(net.link_index(id));
  CutWeights w;
  detail::aggregate(net, bounds, idx, w.w_min, w.w_mean, w.w_max);
  w.cut = cut;
  return w;
}

/// Id-keyed form, for callers that hold bounds and links without a Network.
inline CutWeights cut_weights(const Cut& cut, const std::map<std::string, RateBounds>& bounds,
                              const std::map<std::string, LinkSpec>& links) {
  if (cut.edges.empty()) throw PreconditionError("cut has no edges");
  double mean = 0.0;
  double spread = 0.0;
  double rtt_sum = 0.0;
  for (const auto& id : cut.edges) {
    auto b = bounds.find(id);
    auto l = links.find(id);
    if (b == bounds.end() || l == links.end())
      throw PreconditionError("cut references unknown link '" + id + "'");
    mean += b->second.r_mean;
    spread += b->second.sigma_used * b->second.sigma_used * b->second.variance;
    rtt_sum += l->second.rtt;
  }
  const double h = std::sqrt(spread) / rtt_sum;
  return CutWeights{mean - h, mean, mean + h, cut};
}

/// Minimum of each cut bound over every cut. Ties keep the first minimizer
/// in enumeration order.
inline ThroughputBounds throughput_bounds(const Network& net,
                                          std::size_t vertex_cap = kDefaultVertexCap) {
  const auto bounds = network_rate_bounds(net);
  detail::CutTable table(net, vertex_cap);
  constexpr double inf = std::numeric_limits<double>::infinity();
  double best_min = inf, best_mean = inf, best_max = inf;
  std::size_t k_min = 0, k_mean = 0, k_max = 0;
  for (std::size_t k = 0; k < table.size(); ++k) {
    double lo, mid, hi;
    detail::aggregate(net, bounds, table.edges(k), lo, mid, hi);
    if (lo < best_min) best_min = lo, k_min = k;
    if (mid < best_mean) best_mean = mid, k_mean = k;
    if (hi < best_max) best_max = hi, k_max = k;
  }
  ThroughputBounds tb;
  tb.eta_min = best_min;
  tb.eta_mean = best_mean;
  tb.eta_max = best_max;
  tb.argmin_cut_min = table.cut(k_min);
  tb.argmin_cut_mean = table.cut(k_mean);
  tb.argmin_cut_max = table.cut(k_max);
  return tb;
}

/// Edmonds-Karp max-flow with per-link capacities (indexed like net.links()).
/// Each undirected link is a pair of opposed arcs sharing one capacity.
inline MaxFlowResult max_flow(const Network& net, std::span<const double> capacity) {
  const std::size_t m = net.link_count();
  double scale = 1.0;
  for (double c : capacity) {
    if (!(c >= 0.0)) throw PreconditionError("max-flow capacities must be nonnegative");
    scale = std::max(scale, c);
  }
  const double eps = 1e-12 * scale;
  // flow[i] > 0 means flow from endpoint_u to endpoint_v.
  std::vector<double> flow(m, 0.0);
  auto residual = [&](std::size_t i, std::size_t from) {
    return from == net.endpoint_u(i) ? capacity[i] - flow[i] : capacity[i] + flow[i];
  };
  const std::size_t s = net.source_index();
  const std::size_t d = net.destination_index();
  const std::size_t none = std::numeric_limits<std::size_t>::max();

  auto reach = [&](std::vector<std::size_t>& via) {
    via.assign(net.vertex_count(), none);
    std::vector<bool> seen(net.vertex_count(), false);
    std::deque<std::size_t> queue{s};
    seen[s] = true;
    while (!queue.empty()) {
      std::size_t x = queue.front();
      queue.pop_front();
      for (std::size_t i : net.incident(x)) {
        std::size_t y = net.other_endpoint(i, x);
        if (!seen[y] && residual(i, x) > eps) {
          seen[y] = true;
          via[y] = i;
          queue.push_back(y);
        }
      }
    }
    return seen;
  };

  std::vector<std::size_t> via;
  for (;;) {
    auto seen = reach(via);
    if (!seen[d]) break;
    double push = std::numeric_limits<double>::infinity();
    for (std::size_t y = d; y != s;) {
      std::size_t i = via[y];
      std::size_t x = net.other_endpoint(i, y);
      push = std::min(push, residual(i, x));
      y = x;
    }
    for (std::size_t y = d; y != s;) {
      std::size_t i = via[y];
      std::size_t x = net.other_endpoint(i, y);
      flow[i] += (x == net.endpoint_u(i)) ? push : -push;
      y = x;
    }
  }

  MaxFlowResult out;
  for (std::size_t i : net.incident(s)) out.value += (net.endpoint_u(i) == s) ? flow[i] : -flow[i];
  auto side = reach(via);
  out.cut = detail::make_cut(net, side, detail::crossing_links(net, side));
  return out;
}

inline MaxFlowResult max_flow_mean(const Network& net) {
  const auto bounds = network_rate_bounds(net);
  std::vector<double> cap;
  cap.reserve(bounds.size());
  for (const auto& b : bounds) cap.push_back(b.r_mean);
  return max_flow(net, cap);
}

/// Canonical minimum cut on mean rates; no vertex cap.
inline Cut min_cut_mean(const Network& net) { return max_flow_mean(net).cut; }

/// Width of the uncertainty interval of a cut of identical links whose RTTs
/// sum to x: 2 sigma sqrt(p(1-p)) / sqrt(x).
inline double interval_width(int total_rtt, double p, double sigma = 1.0) {
  if (total_rtt < 1) throw PreconditionError("total rtt must be >= 1");
  return 2.0 * sigma * std::sqrt(p * (1.0 - p)) / std::sqrt(static_cast<double>(total_rtt));
}

/// Min-cut edge set of each realization by exhaustive enumeration, and the
/// distinct sets among them.
inline MinCutCount count_distinct_mincuts(const Network& net,
                                          std::span<const Realization> realizations,
                                          std::size_t vertex_cap = kDefaultVertexCap) {
  detail::CutTable table(net, vertex_cap);
  std::set<std::size_t> distinct;
  MinCutCount out;
  for (const auto& r : realizations) {
    if (r.rates.size() != net.link_count())
      throw PreconditionError("realization size does not match the network");
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t k = 0; k < table.size(); ++k) {
      double w = 0.0;
      for (std::size_t i : table.edges(k)) w += r.rates[i];
      if (w < best) best = w, arg = k;
    }
    // Distinct cuts can share an edge set (isolated vertices), so compare sets.
    if (distinct.insert(arg).second) {
      std::vector<std::string> ids;
      for (std::size_t i : table.edges(arg)) ids.push_back(net.links()[i].id);
      if (std::find(out.sets.begin(), out.sets.end(), ids) == out.sets.end())
        out.sets.push_back(std::move(ids));
    }
  }
  out.count = out.sets.size();
  return out;
}

namespace detail {
inline std::string padded(const char* prefix, std::size_t i, std::size_t width) {
  std::string digits = std::to_string(i);
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return prefix + digits;
}
}  // namespace detail

/// s - v_i - d for i = 1..n; links a<i> = (s, v_i) and b<i> = (v_i, d).
inline Network make_parallel_paths_net(int n, double p, int rtt, double sigma = 1.0) {
  if (n < 1) throw PreconditionError("parallel-paths network needs n >= 1");
  const std::size_t width = std::to_string(n).size();
  std::vector<std::string> vertices{"s", "d"};
  std::vector<LinkSpec> links;
  for (int i = 1; i <= n; ++i) {
    std::string v = detail::padded("v", static_cast<std::size_t>(i), width);
    vertices.push_back(v);
    links.push_back({detail::padded("a", static_cast<std::size_t>(i), width), "s", v, p, rtt, {}});
    links.push_back({detail::padded("b", static_cast<std::size_t>(i), width), v, "d", p, rtt, {}});
  }
  return Network(std::move(vertices), std::move(links), "s", "d", sigma);
}

/// k parallel links e<i> between s and d.
inline Network make_parallel_links_net(int k, double p, int rtt, double sigma = 1.0) {
  if (k < 1) throw PreconditionError("parallel-links network needs k >= 1");
  const std::size_t width = std::to_string(k).size();
  std::vector<LinkSpec> links;
  for (int i = 1; i <= k; ++i)
    links.push_back({detail::padded("e", static_cast<std::size_t>(i), width), "s", "d", p, rtt, {}});
  return Network({"s", "d"}, std::move(links), "s", "d", sigma);
}

/// The 2^n realizations of the parallel-paths construction: every source
/// link at the interval midpoint, sink link b<i> at r_max when bit i-1 of
/// the index is set and at r_min otherwise.
inline std::vector<Realization> parallel_paths_realizations(const Network& net, int n) {
  const auto bounds = network_rate_bounds(net);
  const std::size_t width = std::to_string(n).size();
  std::vector<Realization> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    Realization r;
    r.rates.resize(net.link_count());
    for (int i = 1; i <= n; ++i) {
      std::size_t a = net.link_index(detail::padded("a", static_cast<std::size_t>(i), width));
      std::size_t b = net.link_index(detail::padded("b", static_cast<std::size_t>(i), width));
      r.rates[a] = (bounds[a].r_min + bounds[a].r_max) / 2.0;
      r.rates[b] = ((mask >> (i - 1)) & 1U) ? bounds[b].r_max : bounds[b].r_min;
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace varflow
