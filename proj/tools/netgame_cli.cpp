// netgame: command-line front end for scenario generation, solving,
// convergence traces, and method sweeps.
//
// Exit codes: 0 success, 64 usage error, 65 data error, 2 I/O error.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "netgame/errors.hpp"
#include "netgame/experiments.hpp"
#include "netgame/rng.hpp"
#include "netgame/secrecy.hpp"
#include "netgame/solvers.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 64;
constexpr int kExitData = 65;
constexpr int kExitIo = 2;

std::vector<std::string> split_csv_list(const std::string& text) {
  std::vector<std::string> out;
  std::string::size_type start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(text.substr(start));
      break;
    }
    out.push_back(text.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

void add_spec_flags(CLI::App* cmd, netgame::ScenarioSpec& spec) {
  cmd->add_option("--p-total", spec.p_total_w, "Total jamming power budget [W]")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--p-s", spec.p_s_w, "Source transmit power [W]")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--sigma2", spec.sigma2_w, "Noise power [W]")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--gain-scale", spec.gain_scale,
                  "Scale applied to unit-uniform channel gains")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_flag("--nonneg-baseline", spec.nonneg_baseline,
                "Swap gains so every channel has a nonnegative secrecy rate");
}

void add_solver_flags(CLI::App* cmd, netgame::SolveConfig& config,
                      netgame::MethodParams& params) {
  cmd->add_option("--budget-tol-rel", config.budget_tol_rel,
                  "Relative budget tolerance for the outer price search")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--br-tol-rel", config.br_tol_rel,
                  "Relative tolerance for inner best-response rounds")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--grid-resolution", params.grid_resolution,
                  "Grid oracle cells per axis")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--pga-step-rel", params.pga_step_rel,
                  "Projected-gradient step as a fraction of the budget")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--pga-iters", params.pga_iters,
                  "Projected-gradient iteration count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

int run_scenario_gen(const netgame::ScenarioSpec& spec,
                     const std::string& out_path) {
  const netgame::SecrecyScenario scenario = netgame::gen_scenario(spec);
  netgame::write_text_file_atomic(
      out_path, netgame::scenario_to_json(scenario, &spec));
  return kExitOk;
}

int run_solve(const std::string& scenario_path, const std::string& method,
              const netgame::SolveConfig& config,
              const netgame::MethodParams& params) {
  const netgame::SecrecyScenario scenario =
      netgame::load_scenario_file(scenario_path);
  const netgame::SolveResult result =
      netgame::solve_by_method(scenario, method, config, params);
  nlohmann::ordered_json j;
  j["method"] = result.method;
  j["n_channels"] = scenario.n_channels();
  j["allocation_w"] = result.alloc;
  j["sum_secrecy_rate_clipped_bps_hz"] = result.sum_rate_clipped;
  j["sum_secrecy_rate_surrogate_bps_hz"] = result.sum_rate_surrogate;
  j["converged"] = result.converged;
  j["rounds"] = result.rounds_used;
  if (result.final_price.has_value()) {
    j["final_price"] = *result.final_price;
  } else {
    j["final_price"] = nullptr;
  }
  j["degenerate"] = result.degenerate;
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int run_converge(const std::string& scenario_path, const std::string& out_path,
                 const netgame::SolveConfig& config) {
  const netgame::SecrecyScenario scenario =
      netgame::load_scenario_file(scenario_path);
  const auto series = netgame::run_convergence(scenario, config);
  netgame::write_text_file_atomic(out_path,
                                  netgame::convergence_to_csv(series));
  return kExitOk;
}

int run_sweep(std::size_t n_min, std::size_t n_max, int seeds_per_n,
              const std::string& methods_joined,
              const netgame::ScenarioSpec& base, bool serial,
              const std::string& out_path, const netgame::SolveConfig& config,
              const netgame::MethodParams& params) {
  if (n_min < 1 || n_max < n_min) {
    std::cerr << "netgame sweep: need 1 <= --n-min <= --n-max\n";
    return kExitUsage;
  }
  const std::vector<std::string> methods = split_csv_list(methods_joined);
  for (const std::string& m : methods) {
    if (!netgame::method_known(m)) {
      std::cerr << "netgame sweep: unknown method: " << m
                << " (expected epr|expert|game|grid|pga)\n";
      return kExitUsage;
    }
  }
  std::vector<std::size_t> n_list;
  for (std::size_t n = n_min; n <= n_max; ++n) {
    n_list.push_back(n);
  }
  const netgame::SweepTable table = netgame::run_sweep(
      n_list, seeds_per_n, base, methods, !serial, config, params);
  for (const std::string& note : table.annotations) {
    std::cerr << note << "\n";
  }
  netgame::write_text_file_atomic(out_path, netgame::sweep_to_csv(table));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "netgame: jamming-power allocation for secure multi-channel "
      "communication (equal-power, water-filling, pricing-game, grid, and "
      "gradient solvers)"};
  app.set_version_flag("--version,-V",
                       std::string("netgame ") + NETGAME_VERSION +
                           " (prng: " + std::string(netgame::kPrngContractId) +
                           ")");
  app.require_subcommand(1);

  // scenario gen
  CLI::App* scenario_cmd =
      app.add_subcommand("scenario", "Scenario file utilities");
  scenario_cmd->require_subcommand(1);
  CLI::App* gen_cmd = scenario_cmd->add_subcommand(
      "gen", "Generate a scenario JSON file from a seed");
  netgame::ScenarioSpec gen_spec;
  std::string gen_out;
  gen_cmd->add_option("--n", gen_spec.n_channels, "Number of channels")
      ->required()
      ->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", gen_spec.seed, "Generator seed")->required();
  gen_cmd->add_option("--out", gen_out, "Output JSON path")->required();
  add_spec_flags(gen_cmd, gen_spec);

  // solve
  CLI::App* solve_cmd =
      app.add_subcommand("solve", "Solve one scenario and print JSON");
  std::string solve_scenario;
  std::string solve_method;
  netgame::SolveConfig solve_config;
  netgame::MethodParams solve_params;
  solve_cmd->add_option("--scenario", solve_scenario, "Scenario JSON path")
      ->required();
  solve_cmd
      ->add_option("--method", solve_method,
                   "Solver: epr, expert, game, grid, or pga")
      ->required()
      ->check(CLI::IsMember({"epr", "expert", "game", "grid", "pga"}));
  add_solver_flags(solve_cmd, solve_config, solve_params);

  // converge
  CLI::App* converge_cmd = app.add_subcommand(
      "converge", "Write the game solver's per-iteration sum-rate CSV");
  std::string converge_scenario;
  std::string converge_out;
  netgame::SolveConfig converge_config;
  netgame::MethodParams converge_params;
  converge_cmd
      ->add_option("--scenario", converge_scenario, "Scenario JSON path")
      ->required();
  converge_cmd->add_option("--out", converge_out, "Output CSV path")
      ->required();
  add_solver_flags(converge_cmd, converge_config, converge_params);

  // sweep
  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "Run methods across channel counts and seeds, write CSV");
  std::size_t sweep_n_min = 0;
  std::size_t sweep_n_max = 0;
  int sweep_seeds = 0;
  std::string sweep_methods;
  std::string sweep_out;
  bool sweep_serial = false;
  netgame::ScenarioSpec sweep_base;
  netgame::SolveConfig sweep_config;
  netgame::MethodParams sweep_params;
  sweep_cmd->add_option("--n-min", sweep_n_min, "Smallest channel count")
      ->required()
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--n-max", sweep_n_max, "Largest channel count")
      ->required()
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--seeds", sweep_seeds, "Replicates per channel count")
      ->required()
      ->check(CLI::PositiveNumber);
  sweep_cmd
      ->add_option("--methods", sweep_methods,
                   "Comma-separated list from epr,expert,game,grid,pga")
      ->required();
  sweep_cmd->add_option("--out", sweep_out, "Output CSV path")->required();
  sweep_cmd->add_option("--base-seed", sweep_base.seed,
                        "Base seed mixed per (n, replicate) cell");
  sweep_cmd->add_flag("--serial", sweep_serial,
                      "Disable internal parallelism (results are identical)");
  add_spec_flags(sweep_cmd, sweep_base);
  add_solver_flags(sweep_cmd, sweep_config, sweep_params);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen_cmd->parsed()) {
      return run_scenario_gen(gen_spec, gen_out);
    }
    if (solve_cmd->parsed()) {
      return run_solve(solve_scenario, solve_method, solve_config,
                       solve_params);
    }
    if (converge_cmd->parsed()) {
      return run_converge(converge_scenario, converge_out, converge_config);
    }
    if (sweep_cmd->parsed()) {
      return run_sweep(sweep_n_min, sweep_n_max, sweep_seeds, sweep_methods,
                       sweep_base, sweep_serial, sweep_out, sweep_config,
                       sweep_params);
    }
  } catch (const netgame::resource_limit_error& e) {
    std::cerr << "netgame: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "netgame: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "netgame: " << e.what() << "\n";
    return kExitIo;
  }
  std::cerr << "netgame: no subcommand selected\n";
  return kExitUsage;
}
