#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "netgame/secrecy.hpp"
#include "netgame/solvers.hpp"

namespace netgame {

// Recipe for a deterministically generated scenario.  Gains are drawn from
// the splitmix64 stream seeded with `seed` (per channel: g_s, g_e, g_j),
// each uniform in [0, 1) times gain_scale.  With nonneg_baseline, g_s and
// g_e are swapped whenever g_e > g_s, which keeps every channel's secrecy
// rate nonnegative at all allocations (clipped == surrogate).
struct ScenarioSpec {
  std::size_t n_channels = 1;
  std::uint64_t seed = 0;
  double p_total_w = 0.05;
  double p_s_w = 0.01;
  double sigma2_w = 1.0;
  double gain_scale = 1e4;
  bool nonneg_baseline = false;
};

SecrecyScenario gen_scenario(const ScenarioSpec& spec);

struct SweepRow {
  std::string method;
  std::size_t n = 0;
  std::uint64_t seed = 0;  // the mixed per-cell scenario seed
  double sum_rate_clipped = 0.0;
  int rounds = 0;
  bool converged = false;
};

struct SweepTable {
  std::vector<SweepRow> rows;          // sorted by (method, n, seed)
  std::vector<std::string> annotations;  // e.g. cells skipped by a guard
};

// Parameters for the oracle methods when run through dispatch interfaces.
struct MethodParams {
  int grid_resolution = 2000;
  double pga_step_rel = 1e-3;  // step = pga_step_rel * P_total
  int pga_iters = 10000;
};

// Valid method labels: "epr", "expert", "game", "grid", "pga".
bool method_known(const std::string& method);
SolveResult solve_by_method(const SecrecyScenario& scenario,
                            const std::string& method,
                            const SolveConfig& config = {},
                            const MethodParams& params = {});

// Runs solve_game and reports the clipped sum rate after each outer
// iteration, 1-based.
std::vector<std::pair<int, double>> run_convergence(
    const SecrecyScenario& scenario, const SolveConfig& config = {});

// For each channel count n, replicate s in {0..seeds_per_n-1}, and method:
// generate the scenario with seed mix_seed(base.seed, n, s) and solve.  The
// "grid" method is skipped for n > 3 (guard), recorded as an annotation.
// Cells are independent; with parallel = true they run under OpenMP and the
// table is assembled in canonical (method, n, seed) order either way.
SweepTable run_sweep(const std::vector<std::size_t>& n_list, int seeds_per_n,
                     const ScenarioSpec& base,
                     const std::vector<std::string>& methods,
                     bool parallel = true,
                     const SolveConfig& config = {},
                     const MethodParams& params = {});

// --- file formats -----------------------------------------------------------
//
// Scenario JSON: object with n_channels, p_total_w, p_s_w, sigma2_w,
// channels (array of {g_s, g_e, g_j}), and an optional provenance block
// recording the generating spec.  Explicit gains in the file are
// authoritative; provenance is informational only.
//
// Sweep CSV:        method,n,seed,sum_secrecy_rate_bps_hz,rounds,converged
// Convergence CSV:  iteration,sum_secrecy_rate_bps_hz
//
// Reals are printed with 17 significant digits (round-trip exact), lines end
// with LF, and converged is 1/0.

std::string scenario_to_json(const SecrecyScenario& scenario,
                             const ScenarioSpec* provenance = nullptr);
SecrecyScenario scenario_from_json(const std::string& text);

std::string sweep_to_csv(const SweepTable& table);
std::string convergence_to_csv(
    const std::vector<std::pair<int, double>>& series);

// Loads and validates a scenario file; std::invalid_argument on malformed
// content, std::runtime_error on I/O failure.
SecrecyScenario load_scenario_file(const std::string& path);

// Writes via a temporary file in the same directory plus an atomic rename,
// so no partial file survives a failure.  std::runtime_error on I/O failure.
void write_text_file_atomic(const std::string& path,
                            const std::string& content);

std::string format_real(double v);  // %.17g

}  // namespace netgame
