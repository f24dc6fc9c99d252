#pragma once

// Seeded random networks and brute-force reference implementations used by
// the unit and acceptance tests. The references are written independently
// of the library code they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "varflow/cut_bounds.hpp"
#include "varflow/net_model.hpp"

namespace vftest {

struct RandomNetOptions {
  int min_vertices = 2;
  int max_vertices = 8;
  int max_links = 10;
  double p_lo = 0.05;
  double p_hi = 0.95;
  std::vector<int> rtts{1, 4, 8};
};

inline std::uint64_t below(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

inline double unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Connected multigraph: a random spanning tree plus extra random links
/// (parallel links allowed, no self-loops).
inline varflow::Network random_network(std::uint64_t seed, const RandomNetOptions& o = {}) {
  std::mt19937_64 rng(seed);
  const int nv = o.min_vertices +
                 static_cast<int>(below(rng, static_cast<std::uint64_t>(o.max_vertices - o.min_vertices + 1)));
  std::vector<std::string> names{"s", "d"};
  for (int k = 0; k + 2 < nv; ++k) names.push_back("v" + std::to_string(k));
  const int min_links = nv - 1;
  const int max_links = std::max(o.max_links, min_links);
  const int m = min_links + static_cast<int>(below(rng, static_cast<std::uint64_t>(max_links - min_links + 1)));

  std::vector<std::pair<int, int>> ends;
  std::vector<int> order(static_cast<std::size_t>(nv));
  for (int k = 0; k < nv; ++k) order[static_cast<std::size_t>(k)] = k;
  for (int k = nv - 1; k > 0; --k)
    std::swap(order[static_cast<std::size_t>(k)], order[below(rng, static_cast<std::uint64_t>(k + 1))]);
  for (int k = 1; k < nv; ++k) {
    const int parent = order[below(rng, static_cast<std::uint64_t>(k))];
    ends.emplace_back(parent, order[static_cast<std::size_t>(k)]);
  }
  while (static_cast<int>(ends.size()) < m) {
    const int a = static_cast<int>(below(rng, static_cast<std::uint64_t>(nv)));
    const int b = static_cast<int>(below(rng, static_cast<std::uint64_t>(nv)));
    if (a != b) ends.emplace_back(a, b);
  }

  std::vector<varflow::LinkSpec> links;
  const int width = static_cast<int>(std::to_string(ends.size()).size());
  for (std::size_t k = 0; k < ends.size(); ++k) {
    std::string id = std::to_string(k);
    id.insert(0, static_cast<std::size_t>(width) - id.size(), '0');
    varflow::LinkSpec l;
    l.id = "e" + id;
    l.u = names[static_cast<std::size_t>(ends[k].first)];
    l.v = names[static_cast<std::size_t>(ends[k].second)];
    l.p = o.p_lo + (o.p_hi - o.p_lo) * unit(rng);
    l.rtt = o.rtts[below(rng, o.rtts.size())];
    links.push_back(std::move(l));
  }
  return varflow::Network(names, links, "s", "d");
}

// ---- brute-force references ------------------------------------------------

struct BruteCut {
  std::vector<std::string> edges;
  double weight = 0.0;
};

/// Every s-d vertex partition, as crossing edge sets with summed weight.
/// `weight` is indexed like net.links().
inline std::vector<BruteCut> brute_cuts(const varflow::Network& net,
                                        const std::vector<double>& weight) {
  std::vector<std::string> inner;
  for (const auto& v : net.vertices()) {
    if (v != net.source() && v != net.destination()) inner.push_back(v);
  }
  std::vector<BruteCut> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << inner.size()); ++mask) {
    std::set<std::string> src{net.source()};
    for (std::size_t b = 0; b < inner.size(); ++b) {
      if ((mask >> b) & 1U) src.insert(inner[b]);
    }
    BruteCut c;
    for (std::size_t i = 0; i < net.link_count(); ++i) {
      const auto& l = net.links()[i];
      if (src.count(l.u) != src.count(l.v)) {
        c.edges.push_back(l.id);
        c.weight += weight[i];
      }
    }
    std::sort(c.edges.begin(), c.edges.end());
    out.push_back(std::move(c));
  }
  return out;
}

inline double brute_min_cut(const varflow::Network& net, const std::vector<double>& weight) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : brute_cuts(net, weight)) best = std::min(best, c.weight);
  return best;
}

/// Links on some simple path from `from` to `to` using only vertices in
/// `allowed`, by exhaustive DFS over paths.
inline std::set<std::string> brute_simple_path_links(const varflow::Network& net,
                                                     const std::set<std::string>& allowed,
                                                     const std::string& from,
                                                     const std::string& to) {
  std::set<std::string> out;
  if (from == to || !allowed.count(from) || !allowed.count(to)) return out;
  std::set<std::string> on_path{from};
  std::vector<std::string> used;
  std::function<void(const std::string&)> walk = [&](const std::string& x) {
    if (x == to) {
      out.insert(used.begin(), used.end());
      return;
    }
    for (const auto& l : net.links()) {
      std::string y;
      if (l.u == x) y = l.v;
      else if (l.v == x) y = l.u;
      else continue;
      if (!allowed.count(y) || on_path.count(y)) continue;
      on_path.insert(y);
      used.push_back(l.id);
      walk(y);
      used.pop_back();
      on_path.erase(y);
    }
  };
  walk(from);
  return out;
}

/// Shift-and-reduce product over x^8 + x^4 + x^3 + x^2 + 1.
inline std::uint8_t slow_mul(std::uint8_t a, std::uint8_t b) {
  unsigned x = a, y = b, r = 0;
  while (y) {
    if (y & 1U) r ^= x;
    y >>= 1;
    x <<= 1;
    if (x & 0x100U) x ^= 0x11DU;
  }
  return static_cast<std::uint8_t>(r);
}

inline std::uint8_t slow_inv(std::uint8_t a) {
  for (unsigned b = 1; b < 256; ++b) {
    if (slow_mul(a, static_cast<std::uint8_t>(b)) == 1) return static_cast<std::uint8_t>(b);
  }
  return 0;
}

/// Rank of a matrix over GF(256) by plain Gaussian elimination.
inline std::size_t slow_rank(std::vector<std::vector<std::uint8_t>> rows) {
  std::size_t rank = 0;
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][c] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    const std::uint8_t inv = slow_inv(rows[rank][c]);
    for (auto& x : rows[rank]) x = slow_mul(x, inv);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][c] == 0) continue;
      const std::uint8_t f = rows[r][c];
      for (std::size_t k = 0; k < cols; ++k) rows[r][k] ^= slow_mul(f, rows[rank][k]);
    }
    ++rank;
  }
  return rank;
}

/// s - v1 - ... - d path with the given erasure probabilities.
inline varflow::Network series_net(const std::vector<double>& p, int rtt = 4, double sigma = 1.0) {
  std::vector<std::string> names{"s"};
  for (std::size_t k = 1; k < p.size(); ++k) names.push_back("v" + std::to_string(k));
  names.push_back("d");
  std::vector<varflow::LinkSpec> links;
  for (std::size_t k = 0; k < p.size(); ++k)
    links.push_back({"e" + std::to_string(k + 1), names[k], names[k + 1], p[k], rtt, {}});
  return varflow::Network(names, links, "s", "d", sigma);
}

/// s -> a, s -> b, a -> d, b -> d.
inline varflow::Network diamond_net(double p = 0.5, int rtt = 4) {
  return varflow::Network({"s", "a", "b", "d"},
                          {{"sa", "s", "a", p, rtt, {}},
                           {"sb", "s", "b", p, rtt, {}},
                           {"ad", "a", "d", p, rtt, {}},
                           {"bd", "b", "d", p, rtt, {}}},
                          "s", "d");
}

}  // namespace vftest
