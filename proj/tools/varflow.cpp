#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "varflow/commands.hpp"

namespace {

// "a..b" or a single integer.
std::pair<int, int> parse_k_range(const std::string& text) {
  const auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      const int k = std::stoi(text);
      return {k, k};
    }
    return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
  } catch (const std::exception&) {
    throw varflow::ConfigError("bad --k range '" + text + "', expected a..b");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"varflow: throughput bounds, min-cut stability and RLNC simulation"};
  app.require_subcommand(1);

  std::string config_path;

  auto* bounds = app.add_subcommand("bounds", "eta bounds and their argmin cuts");
  bounds->add_option("config", config_path, "scenario JSON")->required();

  bool force = false;
  std::string plan_path = "sigma_plan.json";
  auto* stability = app.add_subcommand("stability", "check or force min-cut stability");
  stability->add_option("config", config_path, "scenario JSON")->required();
  stability->add_flag("--force", force, "shrink sigmas until the mean min cut is stable");
  stability->add_option("--plan", plan_path, "where --force writes the sigma plan");

  std::string k_text;
  std::vector<int> rtts;
  double rate = 0.0;
  bool skip_infeasible = false;
  std::string p_policy = "uniform";
  auto* sweep = app.add_subcommand("sweep-links", "bounds of k parallel links vs k");
  sweep->add_option("--k", k_text, "range a..b")->required();
  sweep->add_option("--rtt", rtts, "comma-separated rtts")->required()->delimiter(',');
  sweep->add_option("--rate", rate, "target aggregate success rate")->required();
  sweep->add_option("--p-policy", p_policy, "per-link erasure policy")
      ->check(CLI::IsMember({"uniform"}));
  sweep->add_flag("--skip-infeasible", skip_infeasible, "drop k with success rate > 1");

  int n_paths = 0;
  auto* mincut = app.add_subcommand("mincut-count", "distinct min cuts of the n-path net");
  mincut->add_option("--n", n_paths, "number of paths")->required()->check(CLI::Range(1, 16));

  std::string events_path;
  auto* simulate = app.add_subcommand("simulate", "run the RLNC simulator on the mean min cut");
  simulate->add_option("config", config_path, "scenario JSON")->required();
  simulate->add_option("--events", events_path, "write the per-slot event log here");

  auto* appendix = app.add_subcommand("appendix", "the two 2.4-rate parallel-link cases");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : varflow::kExitConfig;
  }

  try {
    if (bounds->parsed()) {
      varflow::cmd_bounds(varflow::load_scenario(config_path), std::cout);
    } else if (stability->parsed()) {
      varflow::cmd_stability(varflow::load_scenario(config_path), force, plan_path, std::cout);
    } else if (sweep->parsed()) {
      const auto [lo, hi] = parse_k_range(k_text);
      varflow::write_sweep_csv(std::cout,
                               varflow::sweep_links(lo, hi, rtts, rate, skip_infeasible));
    } else if (mincut->parsed()) {
      varflow::cmd_mincut_count(n_paths, std::cout);
    } else if (simulate->parsed()) {
      varflow::cmd_simulate(varflow::load_scenario(config_path), events_path, std::cout);
    } else if (appendix->parsed()) {
      varflow::cmd_appendix(std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "varflow: " << e.what() << '\n';
    return varflow::exit_code_for(e);
  }
  return varflow::kExitOk;
}
