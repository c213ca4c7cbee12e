// Benchmarks the OpenMP-parallel kernels against their serial reference
// implementations and verifies that both produce identical results.
//
// Kernels:
//   1. enumerate_pure_nash on a seeded 5-player, 12-strategy game
//   2. solve_grid_oracle on a 3-channel scenario at high resolution
//   3. run_sweep across channel counts and seeds (game + expert methods)
//
// Exits nonzero if any parallel result differs from its serial reference.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "netgame/experiments.hpp"
#include "netgame/game.hpp"
#include "netgame/rng.hpp"
#include "netgame/solvers.hpp"

namespace {

template <class Fn>
double best_of_3_ms(Fn&& fn) {
  double best = 0.0;
  for (int rep = 0; rep < 3; ++rep) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    const double ms =
        std::chrono::duration<double, std::milli>(t1 - t0).count();
    if (rep == 0 || ms < best) {
      best = ms;
    }
  }
  return best;
}

void print_row(const char* name, double serial_ms, double parallel_ms,
               bool match) {
  std::printf("%-28s %12.2f %12.2f %9.2fx   %s\n", name, serial_ms,
              parallel_ms, serial_ms / parallel_ms, match ? "match" : "MISMATCH");
}

netgame::FiniteGame make_big_game() {
  const std::vector<std::size_t> counts(5, 12);
  std::size_t cells = 1;
  for (std::size_t c : counts) {
    cells *= c;
  }
  netgame::SplitMix64 rng(2024);
  std::vector<double> payoffs(cells * counts.size());
  for (double& v : payoffs) {
    v = rng.next_unit();
  }
  return netgame::FiniteGame(counts, payoffs);
}

bool rows_equal(const netgame::SweepTable& a, const netgame::SweepTable& b) {
  if (a.rows.size() != b.rows.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const netgame::SweepRow& x = a.rows[i];
    const netgame::SweepRow& y = b.rows[i];
    if (x.method != y.method || x.n != y.n || x.seed != y.seed ||
        x.sum_rate_clipped != y.sum_rate_clipped || x.rounds != y.rounds ||
        x.converged != y.converged) {
      return false;
    }
  }
  return true;
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads: %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP not available; parallel entry points run serially\n");
#endif
  std::printf("%-28s %12s %12s %10s\n", "kernel", "serial [ms]",
              "parallel [ms]", "speedup");

  bool all_match = true;

  {
    const netgame::FiniteGame game = make_big_game();
    std::vector<netgame::FiniteProfile> serial_out;
    std::vector<netgame::FiniteProfile> parallel_out;
    const double serial_ms = best_of_3_ms(
        [&] { serial_out = netgame::enumerate_pure_nash_serial(game); });
    const double parallel_ms =
        best_of_3_ms([&] { parallel_out = netgame::enumerate_pure_nash(game); });
    const bool match = serial_out == parallel_out;
    all_match = all_match && match;
    print_row("enumerate_pure_nash 12^5", serial_ms, parallel_ms, match);
  }

  {
    netgame::ScenarioSpec spec;
    spec.n_channels = 3;
    spec.seed = 7;
    spec.nonneg_baseline = true;
    const netgame::SecrecyScenario scenario = netgame::gen_scenario(spec);
    const int resolution = 1200;
    netgame::SolveResult serial_out;
    netgame::SolveResult parallel_out;
    const double serial_ms = best_of_3_ms([&] {
      serial_out = netgame::solve_grid_oracle_serial(scenario, resolution);
    });
    const double parallel_ms = best_of_3_ms(
        [&] { parallel_out = netgame::solve_grid_oracle(scenario, resolution); });
    const bool match = serial_out.alloc == parallel_out.alloc &&
                       serial_out.sum_rate_clipped == parallel_out.sum_rate_clipped;
    all_match = all_match && match;
    print_row("grid_oracle n=3 res=1200", serial_ms, parallel_ms, match);
  }

  {
    std::vector<std::size_t> n_list;
    for (std::size_t n = 2; n <= 10; ++n) {
      n_list.push_back(n);
    }
    netgame::ScenarioSpec base;
    base.nonneg_baseline = true;
    const std::vector<std::string> methods = {"game", "expert"};
    netgame::SweepTable serial_out;
    netgame::SweepTable parallel_out;
    const double serial_ms = best_of_3_ms([&] {
      serial_out = netgame::run_sweep(n_list, 30, base, methods, false);
    });
    const double parallel_ms = best_of_3_ms([&] {
      parallel_out = netgame::run_sweep(n_list, 30, base, methods, true);
    });
    const bool match = rows_equal(serial_out, parallel_out);
    all_match = all_match && match;
    print_row("sweep n=2..10 x30 x2", serial_ms, parallel_ms, match);
  }

  if (!all_match) {
    std::printf("FAIL: parallel results differ from serial reference\n");
    return 1;
  }
  std::printf("all parallel results match the serial reference\n");
  return 0;
}
