#pragma once

// JSON forms of networks, scenarios and sigma plans.
//
// Network:  {"vertices": [...], "links": [{"id","u","v","p","rtt","sigma"?}],
//            "source": "s", "destination": "d", "default_sigma": 1.0}
// Scenario: a bare network object, or {"network": <network | generator>,
//            "sigma", "coding": {"N","l","delta","n" | "eta_policy"},
//            "seed", "horizon"}; scenario keys may also sit beside a bare
//            network's keys.
// Generator: {"generator": "parallel_paths", "n", "p", "rtt"} or
//            {"generator": "parallel_links", "k", "p", "rtt"}.

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "varflow/cut_bounds.hpp"
#include "varflow/errors.hpp"
#include "varflow/net_model.hpp"
#include "varflow/stability.hpp"

namespace varflow {

using json = nlohmann::json;

enum class EtaPolicy { max, min, mean, stable_max, stable_min };

struct CodingSpec {
  std::size_t N = 0;
  int l = 0;
  int delta = 0;
  std::optional<std::size_t> n;
  std::optional<EtaPolicy> eta_policy;
};

struct ScenarioConfig {
  Network network;
  std::optional<double> sigma;
  std::optional<CodingSpec> coding;
  std::optional<std::uint64_t> seed;
  std::optional<long> horizon;
};

namespace detail {

template <class T>
T get_field(const json& j, const char* key, const char* where) {
  if (!j.contains(key)) throw ConfigError(std::string(where) + ": missing key '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string(where) + ": bad value for '" + key + "': " + e.what());
  }
}

inline EtaPolicy parse_policy(const std::string& name) {
  if (name == "max") return EtaPolicy::max;
  if (name == "min") return EtaPolicy::min;
  if (name == "mean") return EtaPolicy::mean;
  if (name == "stable_max") return EtaPolicy::stable_max;
  if (name == "stable_min") return EtaPolicy::stable_min;
  throw ConfigError("unknown eta_policy '" + name + "'");
}

inline Network network_from_generator(const json& j, double sigma) {
  const auto kind = get_field<std::string>(j, "generator", "generator");
  const auto p = get_field<double>(j, "p", "generator");
  const auto rtt = get_field<int>(j, "rtt", "generator");
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("generator: p must be in [0,1]");
  if (rtt < 1) throw ConfigError("generator: rtt must be >= 1");
  if (kind == "parallel_paths") {
    const auto n = get_field<int>(j, "n", "generator");
    if (n < 1) throw ConfigError("generator: n must be >= 1");
    return make_parallel_paths_net(n, p, rtt, sigma);
  }
  if (kind == "parallel_links") {
    const auto k = get_field<int>(j, "k", "generator");
    if (k < 1) throw ConfigError("generator: k must be >= 1");
    return make_parallel_links_net(k, p, rtt, sigma);
  }
  throw ConfigError("unknown generator '" + kind + "'");
}

}  // namespace detail

inline Network network_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("network config must be a JSON object");
  const char* where = "network";
  auto vertices = detail::get_field<std::vector<std::string>>(j, "vertices", where);
  const json& links_json = j.contains("links") ? j.at("links") : json();
  if (!links_json.is_array()) throw ConfigError("network: 'links' must be an array");
  const double default_sigma = j.contains("default_sigma")
                                   ? detail::get_field<double>(j, "default_sigma", where)
                                   : 1.0;
  std::vector<LinkSpec> links;
  for (const auto& lj : links_json) {
    LinkSpec l;
    l.id = detail::get_field<std::string>(lj, "id", "link");
    l.u = detail::get_field<std::string>(lj, "u", "link");
    l.v = detail::get_field<std::string>(lj, "v", "link");
    l.p = detail::get_field<double>(lj, "p", "link");
    l.rtt = detail::get_field<int>(lj, "rtt", "link");
    if (lj.contains("sigma")) l.sigma = detail::get_field<double>(lj, "sigma", "link");
    links.push_back(std::move(l));
  }
  return Network(std::move(vertices), std::move(links),
                 detail::get_field<std::string>(j, "source", where),
                 detail::get_field<std::string>(j, "destination", where), default_sigma);
}

inline json network_to_json(const Network& net) {
  json links = json::array();
  for (const auto& l : net.links()) {
    json lj = {{"id", l.id}, {"u", l.u}, {"v", l.v}, {"p", l.p}, {"rtt", l.rtt}};
    if (l.sigma) lj["sigma"] = *l.sigma;
    links.push_back(std::move(lj));
  }
  return {{"vertices", net.vertices()},
          {"links", std::move(links)},
          {"source", net.source()},
          {"destination", net.destination()},
          {"default_sigma", net.default_sigma()}};
}

inline ScenarioConfig scenario_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  std::optional<double> sigma;
  if (j.contains("sigma")) {
    sigma = detail::get_field<double>(j, "sigma", "config");
    if (!(*sigma >= 0.0)) throw ConfigError("config: sigma must be >= 0");
  }

  std::optional<Network> net;
  const bool bare = j.contains("vertices");
  if (bare == j.contains("network"))
    throw ConfigError("config needs exactly one of a network or a 'network' entry");
  if (bare) {
    json copy = j;
    if (sigma) copy["default_sigma"] = *sigma;
    net = network_from_json(copy);
  } else {
    const json& nj = j.at("network");
    if (!nj.is_object()) throw ConfigError("config: 'network' must be an object");
    if (nj.contains("generator") == nj.contains("vertices"))
      throw ConfigError("config: 'network' needs exactly one of an explicit network or a generator");
    if (nj.contains("generator")) {
      net = detail::network_from_generator(nj, sigma.value_or(1.0));
    } else {
      json copy = nj;
      if (sigma) copy["default_sigma"] = *sigma;
      net = network_from_json(copy);
    }
  }

  ScenarioConfig cfg{std::move(*net), sigma, std::nullopt, std::nullopt, std::nullopt};
  if (j.contains("coding")) {
    const json& cj = j.at("coding");
    CodingSpec c;
    const auto N = detail::get_field<long long>(cj, "N", "coding");
    c.l = detail::get_field<int>(cj, "l", "coding");
    c.delta = cj.contains("delta") ? detail::get_field<int>(cj, "delta", "coding") : 0;
    if (N < 1 || c.l < 1 || c.delta < 0)
      throw ConfigError("coding: need N >= 1, l >= 1, delta >= 0");
    c.N = static_cast<std::size_t>(N);
    if (cj.contains("n") == cj.contains("eta_policy"))
      throw ConfigError("coding: give exactly one of 'n' or 'eta_policy'");
    if (cj.contains("n")) {
      const auto n = detail::get_field<long long>(cj, "n", "coding");
      if (n < 1) throw ConfigError("coding: n must be >= 1");
      c.n = static_cast<std::size_t>(n);
    } else {
      c.eta_policy = detail::parse_policy(detail::get_field<std::string>(cj, "eta_policy", "coding"));
    }
    cfg.coding = c;
  }
  if (j.contains("seed")) cfg.seed = detail::get_field<std::uint64_t>(j, "seed", "config");
  if (j.contains("horizon")) {
    cfg.horizon = detail::get_field<long>(j, "horizon", "config");
    if (*cfg.horizon < 1) throw ConfigError("config: horizon must be >= 1");
  }
  return cfg;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse '" + path + "': " + e.what());
  }
}

inline ScenarioConfig load_scenario(const std::string& path) {
  return scenario_from_json(read_json_file(path));
}

inline json sigma_plan_to_json(const SigmaPlan& plan) {
  json sigma = json::object();
  for (const auto& [id, s] : plan.sigma_by_link) sigma[id] = s;
  json boundaries = json::object();
  for (const auto& [id, b] : plan.boundary_by_bottleneck) boundaries[id] = b;
  return {{"sigma", std::move(sigma)}, {"boundaries", std::move(boundaries)}};
}

/// Reads the sigma and boundary maps back; updated bounds are recomputed
/// against `net`.
inline SigmaPlan sigma_plan_from_json(const json& j, const Network& net) {
  SigmaPlan plan;
  try {
    plan.sigma_by_link = j.at("sigma").get<std::map<std::string, double>>();
    plan.boundary_by_bottleneck = j.at("boundaries").get<std::map<std::string, double>>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad sigma plan: ") + e.what());
  }
  const auto updated = network_rate_bounds(apply_plan(net, plan));
  for (std::size_t k = 0; k < net.link_count(); ++k)
    plan.updated_bounds[net.links()[k].id] = updated[k];
  return plan;
}

}  // namespace varflow
