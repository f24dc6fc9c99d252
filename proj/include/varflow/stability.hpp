#pragma once

// Min-cut stability: pairwise verification, stable throughput bounds and
// the sigma-tuning pass that forces a stable min cut without moving any
// link's mean rate.
//
// For a bottleneck e_i = (v_a, v_b) of the min cut (v_a on the source
// side), its path edges are the links lying on some simple s -> v_a path
// inside the source side or on some simple v_b -> d path inside the sink
// side. A path edge whose mean is below e_i's mean cannot take e_i's place
// in the cut on its own (the swap would undercut a minimum cut), so only
// path edges with mean >= e_i's mean are competitors. The cut is stable
// when r_i_max <= r_j_min for every bottleneck and each of its competitors.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "varflow/cut_bounds.hpp"
#include "varflow/errors.hpp"
#include "varflow/net_model.hpp"

namespace varflow {

// Slack for r_i_max <= r_j_min; forced boundaries meet exactly in exact
// arithmetic and only rounding separates them.
inline constexpr double kStabilityTolerance = 1e-9;

struct Violation {
  std::string bottleneck;
  std::string competitor;
  double bottleneck_max = 0.0;
  double competitor_min = 0.0;
};

struct StabilityReport {
  bool stable = true;
  std::vector<Violation> violations;
  Cut mincut;
  std::size_t comparisons = 0;
};

struct PathEdgeSet {
  std::string bottleneck;
  std::vector<std::string> upstream;    // sorted ids
  std::vector<std::string> downstream;  // sorted ids

  std::vector<std::string> all() const {
    std::vector<std::string> out = upstream;
    out.insert(out.end(), downstream.begin(), downstream.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
};

struct SigmaPlan {
  std::map<std::string, double> sigma_by_link;
  std::map<std::string, double> boundary_by_bottleneck;
  std::map<std::string, RateBounds> updated_bounds;
};

struct ForcedStability {
  SigmaPlan plan;
  Cut mincut;
};

struct StableBounds {
  double eta_max = 0.0;
  double eta_min = 0.0;
};

namespace detail {

// Links lying on at least one simple path between `from` and `to` in the
// subgraph induced by `allowed`. Those are exactly the links of the
// biconnected blocks on the block-cut tree path from `from` to `to`.
inline std::vector<std::size_t> simple_path_links(const Network& net,
                                                  const std::vector<bool>& allowed,
                                                  std::size_t from, std::size_t to) {
  if (from == to || !allowed[from] || !allowed[to]) return {};
  const std::size_t nv = net.vertex_count();
  const std::size_t unset = std::numeric_limits<std::size_t>::max();
  auto usable = [&](std::size_t i) {
    return allowed[net.endpoint_u(i)] && allowed[net.endpoint_v(i)];
  };

  std::vector<std::size_t> disc(nv, unset), low(nv, 0);
  std::vector<std::size_t> edge_stack;
  std::vector<std::vector<std::size_t>> blocks;
  std::size_t timer = 0;

  std::function<void(std::size_t, std::size_t)> dfs = [&](std::size_t x, std::size_t via) {
    disc[x] = low[x] = timer++;
    for (std::size_t i : net.incident(x)) {
      if (i == via || !usable(i)) continue;
      std::size_t y = net.other_endpoint(i, x);
      if (disc[y] == unset) {
        edge_stack.push_back(i);
        dfs(y, i);
        low[x] = std::min(low[x], low[y]);
        if (low[y] >= disc[x]) {
          std::vector<std::size_t> block;
          for (;;) {
            std::size_t e = edge_stack.back();
            edge_stack.pop_back();
            block.push_back(e);
            if (e == i) break;
          }
          blocks.push_back(std::move(block));
        }
      } else if (disc[y] < disc[x]) {
        edge_stack.push_back(i);
        low[x] = std::min(low[x], disc[y]);
      }
    }
  };
  dfs(from, unset);
  if (disc[to] == unset) return {};

  // Block-cut tree: vertex nodes [0, nv), block nodes [nv, nv + blocks).
  std::vector<std::vector<std::size_t>> tree(nv + blocks.size());
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    std::set<std::size_t> members;
    for (std::size_t e : blocks[b]) {
      members.insert(net.endpoint_u(e));
      members.insert(net.endpoint_v(e));
    }
    for (std::size_t v : members) {
      tree[v].push_back(nv + b);
      tree[nv + b].push_back(v);
    }
  }
  std::vector<std::size_t> parent(tree.size(), unset);
  std::deque<std::size_t> queue{from};
  parent[from] = from;
  while (!queue.empty()) {
    std::size_t x = queue.front();
    queue.pop_front();
    for (std::size_t y : tree[x]) {
      if (parent[y] == unset) {
        parent[y] = x;
        queue.push_back(y);
      }
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t x = to; x != from; x = parent[x]) {
    if (x >= nv) out.insert(out.end(), blocks[x - nv].begin(), blocks[x - nv].end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<std::string> ids_of(const Network& net, const std::vector<std::size_t>& idx) {
  std::vector<std::string> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(net.links()[i].id);
  return out;
}

inline void require_valid_cut(const Network& net, const Cut& cut) {
  if (!is_valid_cut(net, cut)) throw PreconditionError("invalid cut for this network");
}

// Path-edge link indices (upstream and downstream merged), ascending.
inline std::vector<std::size_t> path_link_indices(const Network& net, std::size_t bottleneck,
                                                  const std::vector<bool>& side) {
  const std::size_t u = net.endpoint_u(bottleneck);
  const std::size_t v = net.endpoint_v(bottleneck);
  const std::size_t va = side[u] ? u : v;
  const std::size_t vb = side[u] ? v : u;
  std::vector<bool> sink(side.size());
  for (std::size_t k = 0; k < side.size(); ++k) sink[k] = !side[k];
  auto up = simple_path_links(net, side, net.source_index(), va);
  auto down = simple_path_links(net, sink, vb, net.destination_index());
  up.insert(up.end(), down.begin(), down.end());
  std::sort(up.begin(), up.end());
  return up;
}

// Path edges of `bottleneck` that can compete with it: mean >= its mean.
inline std::vector<std::size_t> competitor_indices(const Network& net,
                                                   const std::vector<RateBounds>& bounds,
                                                   std::size_t bottleneck,
                                                   const std::vector<bool>& side) {
  std::vector<std::size_t> out;
  for (std::size_t j : path_link_indices(net, bottleneck, side)) {
    if (bounds[j].r_mean >= bounds[bottleneck].r_mean) out.push_back(j);
  }
  return out;
}

}  // namespace detail

/// Upstream and downstream path edges of a min-cut link. The bottleneck is
/// oriented by the cut: v_a is its endpoint on the source side.
inline PathEdgeSet path_edges(const Network& net, const std::string& bottleneck,
                              const Cut& mincut) {
  if (std::find(mincut.edges.begin(), mincut.edges.end(), bottleneck) == mincut.edges.end())
    throw PreconditionError("link '" + bottleneck + "' is not in the cut");
  const std::size_t i = net.link_index(bottleneck);
  const auto side = detail::side_of(net, mincut);
  const std::size_t u = net.endpoint_u(i);
  const std::size_t v = net.endpoint_v(i);
  const std::size_t va = side[u] ? u : v;
  const std::size_t vb = side[u] ? v : u;
  std::vector<bool> sink(side.size());
  for (std::size_t k = 0; k < side.size(); ++k) sink[k] = !side[k];

  PathEdgeSet out;
  out.bottleneck = bottleneck;
  out.upstream = detail::ids_of(net, detail::simple_path_links(net, side, net.source_index(), va));
  out.downstream =
      detail::ids_of(net, detail::simple_path_links(net, sink, vb, net.destination_index()));
  return out;
}

/// Pairwise check of every bottleneck against its competitors, using each
/// link's own sigma. Performs at most |MC| * |E| comparisons.
inline StabilityReport verify_stability(const Network& net, const Cut& mincut) {
  detail::require_valid_cut(net, mincut);
  const auto bounds = network_rate_bounds(net);
  const auto side = detail::side_of(net, mincut);
  StabilityReport report;
  report.mincut = mincut;
  for (const auto& id : mincut.edges) {
    const std::size_t i = net.link_index(id);
    for (std::size_t j : detail::path_link_indices(net, i, side)) {
      ++report.comparisons;
      if (bounds[j].r_mean < bounds[i].r_mean) continue;
      if (bounds[i].r_max > bounds[j].r_min + kStabilityTolerance) {
        report.violations.push_back({id, net.links()[j].id, bounds[i].r_max, bounds[j].r_min});
      }
    }
  }
  report.stable = report.violations.empty();
  return report;
}

/// Throughput bounds over the stable cut itself.
inline StableBounds stable_throughput_bounds(const Network& net, const Cut& mincut) {
  const auto report = verify_stability(net, mincut);
  if (!report.stable) {
    const auto& v = report.violations.front();
    throw NotStableError("min cut is not stable: " + v.bottleneck + " vs " + v.competitor);
  }
  const auto bounds = network_rate_bounds(net);
  const auto w = cut_weights(mincut, bounds, net);
  return {w.w_max, w.w_min};
}

/// Network with the plan's sigma values applied.
inline Network apply_plan(const Network& net, const SigmaPlan& plan) {
  return net.with_sigmas(plan.sigma_by_link);
}

/// Tunes per-link sigma so the canonical mean min cut becomes stable.
///
/// For each bottleneck, competitors whose r_min falls below the bottleneck's
/// r_max are pushed apart at B = (r_1_mean + m*) / 2, with m* the smallest
/// conflicting competitor mean: the bottleneck's r_max drops to B and each
/// conflicting competitor's r_min rises to B. Competitors sharing the
/// bottleneck's mean form a virtual bottleneck (upper edge from the smallest
/// variance) and are not mitigated against it. Sigma only ever shrinks; a
/// link capped by several bottlenecks keeps the smallest sigma, i.e. the
/// largest r_min.
inline ForcedStability force_stability(const Network& net) {
  const Cut mincut = min_cut_mean(net);
  const auto bounds = network_rate_bounds(net);
  const auto side = detail::side_of(net, mincut);

  std::vector<double> sigma(net.link_count());
  for (std::size_t i = 0; i < net.link_count(); ++i) sigma[i] = net.sigma_of(i);
  std::vector<double> capped = sigma;

  auto cap_sigma = [&](std::size_t k, double value) {
    capped[k] = std::min(capped[k], std::max(0.0, value));
  };

  ForcedStability out;
  out.mincut = mincut;

  for (const auto& id : mincut.edges) {
    const std::size_t i = net.link_index(id);
    const double mean = bounds[i].r_mean;
    const auto competitors = detail::competitor_indices(net, bounds, i, side);

    std::vector<std::size_t> group{i};
    std::vector<std::size_t> others;
    for (std::size_t j : competitors) {
      (bounds[j].r_mean == mean ? group : others).push_back(j);
    }

    std::size_t narrowest = group.front();
    for (std::size_t g : group) {
      if (bounds[g].variance < bounds[narrowest].variance) narrowest = g;
    }
    const double upper = mean + bounds[narrowest].half_width();

    double m_star = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> conflicting;
    for (std::size_t j : others) {
      if (upper > bounds[j].r_min + kStabilityTolerance) {
        conflicting.push_back(j);
        m_star = std::min(m_star, bounds[j].r_mean);
      }
    }
    if (conflicting.empty()) continue;

    const double boundary = (mean + m_star) / 2.0;
    out.plan.boundary_by_bottleneck[id] = boundary;

    for (std::size_t g : group) {
      if (bounds[g].variance > 0.0) {
        cap_sigma(g, (boundary - mean) * net.links()[g].rtt / std::sqrt(bounds[g].variance));
      }
    }
    for (std::size_t j : conflicting) {
      if (bounds[j].variance > 0.0) {
        cap_sigma(j, (bounds[j].r_mean - boundary) * net.links()[j].rtt /
                         std::sqrt(bounds[j].variance));
      } else if (bounds[j].r_mean < boundary) {
        throw InvariantError("zero-variance competitor '" + net.links()[j].id +
                             "' lies below the boundary");
      }
    }
  }

  for (std::size_t k = 0; k < net.link_count(); ++k)
    out.plan.sigma_by_link[net.links()[k].id] = capped[k];
  const auto updated = network_rate_bounds(apply_plan(net, out.plan));
  for (std::size_t k = 0; k < net.link_count(); ++k)
    out.plan.updated_bounds[net.links()[k].id] = updated[k];
  return out;
}

/// True when some path edge of a bottleneck has dropped below the
/// bottleneck's mean, so the cut has to be recomputed.
inline bool needs_recompute(const Network& net, const Cut& mincut) {
  detail::require_valid_cut(net, mincut);
  const auto bounds = network_rate_bounds(net);
  const auto side = detail::side_of(net, mincut);
  for (const auto& id : mincut.edges) {
    const std::size_t i = net.link_index(id);
    for (std::size_t j : detail::path_link_indices(net, i, side)) {
      if (bounds[j].r_mean < bounds[i].r_mean) return true;
    }
  }
  return false;
}

}  // namespace varflow
