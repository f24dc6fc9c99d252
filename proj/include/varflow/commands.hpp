#pragma once

// Command implementations behind the varflow CLI. Each writes CSV (with a
// header row) to the given stream and reports failures by throwing; the
// CLI maps exception types to exit codes.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "varflow/config.hpp"
#include "varflow/cut_bounds.hpp"
#include "varflow/errors.hpp"
#include "varflow/net_model.hpp"
#include "varflow/simulator.hpp"
#include "varflow/stability.hpp"

namespace varflow {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitPrecondition = 3,
  kExitInternal = 4,
};

inline int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return kExitConfig;
  if (dynamic_cast<const nlohmann::json::exception*>(&e)) return kExitConfig;
  if (dynamic_cast<const PreconditionError*>(&e)) return kExitPrecondition;
  return kExitInternal;
}

/// Six significant digits.
inline std::string fmt_num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

inline std::string join_ids(const std::vector<std::string>& ids) {
  std::string out;
  for (const auto& id : ids) {
    if (!out.empty()) out += ';';
    out += id;
  }
  return out;
}

// ---- bounds ---------------------------------------------------------------

inline void write_bounds_csv(std::ostream& os, const ThroughputBounds& tb) {
  os << "eta_min,eta_mean,eta_max,argmin_cut_min,argmin_cut_mean,argmin_cut_max\n"
     << fmt_num(tb.eta_min) << ',' << fmt_num(tb.eta_mean) << ',' << fmt_num(tb.eta_max) << ','
     << join_ids(tb.argmin_cut_min.edges) << ',' << join_ids(tb.argmin_cut_mean.edges) << ','
     << join_ids(tb.argmin_cut_max.edges) << '\n';
}

inline void cmd_bounds(const ScenarioConfig& cfg, std::ostream& os) {
  write_bounds_csv(os, throughput_bounds(cfg.network));
}

// ---- stability ------------------------------------------------------------

inline void cmd_stability(const ScenarioConfig& cfg, bool force, const std::string& plan_path,
                          std::ostream& os) {
  const Network& net = cfg.network;
  if (!force) {
    const auto report = verify_stability(net, min_cut_mean(net));
    os << "stable," << (report.stable ? 1 : 0) << '\n';
    os << "ei,ej,ri_max,rj_min\n";
    for (const auto& v : report.violations) {
      os << v.bottleneck << ',' << v.competitor << ',' << fmt_num(v.bottleneck_max) << ','
         << fmt_num(v.competitor_min) << '\n';
    }
    return;
  }
  const auto forced = force_stability(net);
  if (!plan_path.empty()) {
    std::ofstream out(plan_path);
    if (!out) throw ConfigError("cannot write sigma plan to '" + plan_path + "'");
    out << sigma_plan_to_json(forced.plan).dump(2) << '\n';
  }
  const auto stable = stable_throughput_bounds(apply_plan(net, forced.plan), forced.mincut);
  os << "eta_min_stable,eta_max_stable\n"
     << fmt_num(stable.eta_min) << ',' << fmt_num(stable.eta_max) << '\n';
}

// ---- sweep-links ----------------------------------------------------------

struct SweepRow {
  int k = 0;
  int rtt = 0;
  double p = 0.0;
  double eta_min = 0.0;
  double eta_mean = 0.0;
  double eta_max = 0.0;
};

/// Throughput bounds of k identical parallel links sharing target_rate
/// (per-link erasure p = 1 - target_rate / k), for every k and rtt.
/// Rows come out rtt-major, both ascending.
inline std::vector<SweepRow> sweep_links(int k_first, int k_last, std::vector<int> rtts,
                                         double target_rate, bool skip_infeasible = false,
                                         double sigma = 1.0) {
  if (k_first < 1 || k_last < k_first) throw PreconditionError("k range must satisfy 1 <= lo <= hi");
  if (rtts.empty()) throw PreconditionError("need at least one rtt");
  if (!(target_rate > 0.0)) throw PreconditionError("target rate must be positive");
  std::sort(rtts.begin(), rtts.end());
  rtts.erase(std::unique(rtts.begin(), rtts.end()), rtts.end());
  std::vector<SweepRow> rows;
  for (int rtt : rtts) {
    if (rtt < 1) throw PreconditionError("rtt must be >= 1");
    for (int k = k_first; k <= k_last; ++k) {
      const double success = target_rate / k;
      if (success > 1.0) {
        if (skip_infeasible) continue;
        throw PreconditionError("k = " + std::to_string(k) + " needs per-link success rate " +
                                fmt_num(success) + " > 1");
      }
      const double p = 1.0 - success;
      const auto tb = throughput_bounds(make_parallel_links_net(k, p, rtt, sigma));
      rows.push_back({k, rtt, p, tb.eta_min, tb.eta_mean, tb.eta_max});
    }
  }
  return rows;
}

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "k,rtt,eta_min,eta_mean,eta_max\n";
  for (const auto& r : rows) {
    os << r.k << ',' << r.rtt << ',' << fmt_num(r.eta_min) << ',' << fmt_num(r.eta_mean) << ','
       << fmt_num(r.eta_max) << '\n';
  }
}

// ---- mincut-count ---------------------------------------------------------

/// Distinct min-cut edge sets of the n-path construction over its 2^n
/// extreme realizations.
inline std::size_t mincut_count(int n, double p = 0.2, int rtt = 4) {
  const Network net = make_parallel_paths_net(n, p, rtt);
  const auto realizations = parallel_paths_realizations(net, n);
  return count_distinct_mincuts(net, realizations).count;
}

inline void cmd_mincut_count(int n, std::ostream& os, double p = 0.2, int rtt = 4) {
  const auto count = mincut_count(n, p, rtt);
  os << "n,count\n" << n << ',' << count << '\n';
}

// ---- appendix (two fixed parallel-link cases) -----------------------------

struct AppendixCase {
  std::string name;
  int k = 0;
  double p = 0.0;
  int rtt = 0;
  ThroughputBounds bounds;

  double width() const { return bounds.eta_max - bounds.eta_min; }
};

/// Target rate 2.4 over rtt-4 links: 3 links at p = 0.2 and 48 at p = 0.95.
inline std::vector<AppendixCase> appendix_cases() {
  std::vector<AppendixCase> out;
  out.push_back({"A", 3, 0.2, 4, throughput_bounds(make_parallel_links_net(3, 0.2, 4))});
  out.push_back({"B", 48, 0.95, 4, throughput_bounds(make_parallel_links_net(48, 0.95, 4))});
  return out;
}

inline void cmd_appendix(std::ostream& os) {
  os << "case,k,p,rtt,eta_min,eta_mean,eta_max,width\n";
  for (const auto& c : appendix_cases()) {
    os << c.name << ',' << c.k << ',' << fmt_num(c.p) << ',' << c.rtt << ','
       << fmt_num(c.bounds.eta_min) << ',' << fmt_num(c.bounds.eta_mean) << ','
       << fmt_num(c.bounds.eta_max) << ',' << fmt_num(c.width()) << '\n';
  }
}

// ---- simulate -------------------------------------------------------------

struct SimulationSetup {
  std::vector<LinkSpec> links;  // the cut whose links carry the traffic
  CodingParams coding;
  std::optional<double> eta;    // resolved target, when a policy was given
  long horizon = 0;
  std::uint64_t seed = 0;
};

inline constexpr long kDefaultHorizon = 10000;

/// Resolves the eta policy to a bound, derives n and picks the cut whose
/// links are simulated.
inline SimulationSetup resolve_simulation(const ScenarioConfig& cfg) {
  if (!cfg.coding) throw ConfigError("simulate needs a 'coding' section");
  if (!cfg.seed) throw ConfigError("simulate needs a 'seed'");
  const Network& net = cfg.network;
  const CodingSpec& c = *cfg.coding;

  Cut cut;
  SimulationSetup setup;
  if (c.eta_policy) {
    switch (*c.eta_policy) {
      case EtaPolicy::max:
      case EtaPolicy::min:
      case EtaPolicy::mean: {
        const auto tb = throughput_bounds(net);
        if (*c.eta_policy == EtaPolicy::max) setup.eta = tb.eta_max, cut = tb.argmin_cut_max;
        if (*c.eta_policy == EtaPolicy::min) setup.eta = tb.eta_min, cut = tb.argmin_cut_min;
        if (*c.eta_policy == EtaPolicy::mean) setup.eta = tb.eta_mean, cut = tb.argmin_cut_mean;
        break;
      }
      case EtaPolicy::stable_max:
      case EtaPolicy::stable_min: {
        cut = min_cut_mean(net);
        const auto report = verify_stability(net, cut);
        if (!report.stable) {
          throw NotStableError(
              "stable_* policy needs a stable min cut; this network has " +
              std::to_string(report.violations.size()) +
              " violation(s), apply a plan from 'stability --force' first");
        }
        const auto sb = stable_throughput_bounds(net, cut);
        setup.eta = *c.eta_policy == EtaPolicy::stable_max ? sb.eta_max : sb.eta_min;
        break;
      }
    }
    setup.coding.n = select_generation_size(*setup.eta, c.l, c.delta, net.longest_rtt());
  } else {
    cut = min_cut_mean(net);
    setup.coding.n = *c.n;
  }
  for (const auto& id : cut.edges) setup.links.push_back(net.link(id));
  setup.coding.N = c.N;
  setup.coding.l_bits = c.l;
  setup.coding.delta_bits = c.delta;
  setup.horizon = cfg.horizon.value_or(kDefaultHorizon);
  setup.seed = *cfg.seed;
  return setup;
}

inline void write_metrics_csv(std::ostream& os, const SimMetrics& m) {
  os << "throughput,mean_delay,p95_delay,transmissions,erasures,rounds\n"
     << fmt_num(m.throughput) << ',' << fmt_num(m.mean_delay()) << ',' << fmt_num(m.p95_delay())
     << ',' << m.transmissions << ',' << m.erasures << ',' << m.retransmission_rounds << '\n';
}

inline void cmd_simulate(const ScenarioConfig& cfg, const std::string& events_path,
                         std::ostream& os) {
  const auto setup = resolve_simulation(cfg);
  std::vector<SimEvent> events;
  const auto metrics = simulate(setup.links, setup.coding, setup.horizon, setup.seed,
                                events_path.empty() ? nullptr : &events);
  if (!events_path.empty()) {
    std::ofstream out(events_path);
    if (!out) throw ConfigError("cannot write event log to '" + events_path + "'");
    write_event_log(out, events);
  }
  write_metrics_csv(os, metrics);
}

}  // namespace varflow
