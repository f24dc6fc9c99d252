#pragma once

// Network data model and per-link finite-regime rate bounds.
//
// Every link is a binary erasure channel with erasure probability p and a
// round-trip time in slots. Its mean rate is the Bernoulli success rate
// 1 - p, normalized by alpha = rtt / rtt_longest, and its uncertainty
// half-width is sigma * sqrt(var) / rtt with var = rtt * p * (1 - p).
// Bounds are analytical quantities and are never clamped to [0, 1/alpha].

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "varflow/errors.hpp"

namespace varflow {

struct LinkSpec {
  std::string id;
  std::string u;
  std::string v;
  double p = 0.0;
  int rtt = 1;
  // Absent means the network's default_sigma applies.
  std::optional<double> sigma;
};

struct RateBounds {
  double r_mean = 0.0;
  double r_min = 0.0;
  double r_max = 0.0;
  double variance = 0.0;
  double alpha = 1.0;
  double sigma_used = 0.0;

  double half_width() const { return r_max - r_mean; }
};

/// Undirected s-d network. Vertices and links are kept sorted by id, which
/// fixes the deterministic order every algorithm in the library relies on.
class Network {
 public:
  Network(std::vector<std::string> vertices, std::vector<LinkSpec> links,
          std::string source, std::string destination,
          double default_sigma = 1.0)
      : vertices_(std::move(vertices)),
        links_(std::move(links)),
        source_(std::move(source)),
        destination_(std::move(destination)),
        default_sigma_(default_sigma) {
    std::sort(vertices_.begin(), vertices_.end());
    std::sort(links_.begin(), links_.end(),
              [](const LinkSpec& a, const LinkSpec& b) { return a.id < b.id; });
    validate();
    adjacency_.assign(vertices_.size(), {});
    for (std::size_t i = 0; i < links_.size(); ++i) {
      adjacency_[endpoint_u_[i]].push_back(i);
      adjacency_[endpoint_v_[i]].push_back(i);
    }
  }

  const std::vector<std::string>& vertices() const { return vertices_; }
  const std::vector<LinkSpec>& links() const { return links_; }
  const std::string& source() const { return source_; }
  const std::string& destination() const { return destination_; }
  double default_sigma() const { return default_sigma_; }

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t link_count() const { return links_.size(); }

  std::size_t vertex_index(const std::string& name) const {
    auto it = vertex_pos_.find(name);
    if (it == vertex_pos_.end()) throw PreconditionError("unknown vertex '" + name + "'");
    return it->second;
  }
  std::size_t link_index(const std::string& id) const {
    auto it = link_pos_.find(id);
    if (it == link_pos_.end()) throw PreconditionError("unknown link '" + id + "'");
    return it->second;
  }
  bool has_link(const std::string& id) const { return link_pos_.count(id) != 0; }

  const LinkSpec& link(const std::string& id) const { return links_[link_index(id)]; }

  std::size_t source_index() const { return vertex_index(source_); }
  std::size_t destination_index() const { return vertex_index(destination_); }

  // Endpoint vertex indices of link i.
  std::size_t endpoint_u(std::size_t i) const { return endpoint_u_[i]; }
  std::size_t endpoint_v(std::size_t i) const { return endpoint_v_[i]; }
  std::size_t other_endpoint(std::size_t i, std::size_t vertex) const {
    return endpoint_u_[i] == vertex ? endpoint_v_[i] : endpoint_u_[i];
  }

  // Link indices incident to a vertex, ascending by link id.
  const std::vector<std::size_t>& incident(std::size_t vertex) const {
    return adjacency_[vertex];
  }

  double sigma_of(std::size_t i) const { return links_[i].sigma.value_or(default_sigma_); }

  int longest_rtt() const {
    int longest = 1;
    for (const auto& l : links_) longest = std::max(longest, l.rtt);
    return longest;
  }

  /// Copy of this network with per-link sigma overridden for the given ids.
  Network with_sigmas(const std::map<std::string, double>& sigma_by_link) const {
    for (const auto& [id, s] : sigma_by_link) {
      if (!has_link(id)) throw PreconditionError("sigma given for unknown link '" + id + "'");
    }
    std::vector<LinkSpec> links = links_;
    for (auto& l : links) {
      if (auto it = sigma_by_link.find(l.id); it != sigma_by_link.end()) l.sigma = it->second;
    }
    return Network(vertices_, std::move(links), source_, destination_, default_sigma_);
  }

 private:
  void validate() {
    if (!(default_sigma_ >= 0.0)) throw ConfigError("default_sigma must be >= 0");
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      if (!vertex_pos_.emplace(vertices_[i], i).second)
        throw ConfigError("duplicate vertex '" + vertices_[i] + "'");
    }
    if (!vertex_pos_.count(source_)) throw ConfigError("source '" + source_ + "' is not a vertex");
    if (!vertex_pos_.count(destination_))
      throw ConfigError("destination '" + destination_ + "' is not a vertex");
    if (source_ == destination_) throw ConfigError("source and destination must differ");

    for (std::size_t i = 0; i < links_.size(); ++i) {
      const LinkSpec& l = links_[i];
      if (!link_pos_.emplace(l.id, i).second) throw ConfigError("duplicate link id '" + l.id + "'");
      if (!vertex_pos_.count(l.u) || !vertex_pos_.count(l.v))
        throw ConfigError("link '" + l.id + "' has an endpoint outside the vertex set");
      if (l.u == l.v) throw ConfigError("link '" + l.id + "' is a self-loop");
      if (!(l.p >= 0.0 && l.p <= 1.0))
        throw ConfigError("link '" + l.id + "' erasure probability outside [0,1]");
      if (l.rtt < 1) throw ConfigError("link '" + l.id + "' rtt must be >= 1");
      if (l.sigma && !(*l.sigma >= 0.0)) throw ConfigError("link '" + l.id + "' sigma must be >= 0");
      endpoint_u_.push_back(vertex_pos_[l.u]);
      endpoint_v_.push_back(vertex_pos_[l.v]);
    }

    // Connectivity s -> d.
    std::vector<std::vector<std::size_t>> nbr(vertices_.size());
    for (std::size_t i = 0; i < links_.size(); ++i) {
      nbr[endpoint_u_[i]].push_back(endpoint_v_[i]);
      nbr[endpoint_v_[i]].push_back(endpoint_u_[i]);
    }
    std::vector<bool> seen(vertices_.size(), false);
    std::vector<std::size_t> stack{vertex_pos_[source_]};
    seen[stack.back()] = true;
    while (!stack.empty()) {
      std::size_t x = stack.back();
      stack.pop_back();
      for (std::size_t y : nbr[x]) {
        if (!seen[y]) {
          seen[y] = true;
          stack.push_back(y);
        }
      }
    }
    if (!seen[vertex_pos_[destination_]]) throw ConfigError("no path from source to destination");
  }

  std::vector<std::string> vertices_;
  std::vector<LinkSpec> links_;
  std::string source_;
  std::string destination_;
  double default_sigma_;

  std::map<std::string, std::size_t> vertex_pos_;
  std::map<std::string, std::size_t> link_pos_;
  std::vector<std::size_t> endpoint_u_;
  std::vector<std::size_t> endpoint_v_;
  std::vector<std::vector<std::size_t>> adjacency_;
};

/// Binomial variance of rtt Bernoulli(1 - p) trials.
inline double link_variance(const LinkSpec& link) {
  return static_cast<double>(link.rtt) * link.p * (1.0 - link.p);
}

/// alpha_i = rtt_i / max_j rtt_j. Every link tied for the longest RTT gets 1.
inline std::map<std::string, double> alpha_factors(const Network& net) {
  const double longest = net.longest_rtt();
  std::map<std::string, double> alpha;
  for (const auto& l : net.links()) alpha[l.id] = static_cast<double>(l.rtt) / longest;
  return alpha;
}

inline RateBounds rate_bounds(const LinkSpec& link, double alpha, double sigma) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw PreconditionError("alpha must be in (0,1]");
  if (!(sigma >= 0.0)) throw PreconditionError("sigma must be >= 0");
  RateBounds b;
  b.variance = link_variance(link);
  b.alpha = alpha;
  b.sigma_used = sigma;
  b.r_mean = (1.0 - link.p) / alpha;
  const double h = sigma * std::sqrt(b.variance) / static_cast<double>(link.rtt);
  b.r_min = b.r_mean - h;
  b.r_max = b.r_mean + h;
  return b;
}

/// Bounds of every link under its own sigma, indexed like net.links().
inline std::vector<RateBounds> network_rate_bounds(const Network& net) {
  const auto alpha = alpha_factors(net);
  std::vector<RateBounds> out;
  out.reserve(net.link_count());
  for (std::size_t i = 0; i < net.link_count(); ++i) {
    const LinkSpec& l = net.links()[i];
    out.push_back(rate_bounds(l, alpha.at(l.id), net.sigma_of(i)));
  }
  return out;
}

}  // namespace varflow
