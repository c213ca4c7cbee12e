#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "netgame/game.hpp"
#include "netgame/secrecy.hpp"

namespace netgame {

// The budgeted allocation problem decomposed as a game: each channel is a
// player choosing its own jamming power in [0, P_total] to maximise
//   u_i(p_i) = phi_i(p_i) - price * p_i,
// where price is the shadow price of the shared budget.  At the
// market-clearing price the unique Nash equilibrium coincides with the
// KKT/water-filling optimum of the budgeted problem.
struct PricingGame {
  SecrecyScenario scenario;
  double price = 0.0;

  double payoff(std::size_t channel, double p_i) const;
  // View as a game-core ContinuousGame (payoff oracle copies this game).
  ContinuousGame to_continuous_game() const;
};

struct SolveConfig {
  // Outer stop: |sum(p) - P_total| <= budget_tol_rel * P_total.
  double budget_tol_rel = 1e-12;
  // Inner stop: L-inf allocation change over a best-response round
  // <= br_tol_rel * P_total.
  double br_tol_rel = 1e-12;
  int max_outer = 200;
  int max_br_rounds = 100;
  // Price bracket; 0 means derive analytically from the scenario.
  double price_lo = 0.0;
  double price_hi = 0.0;
};

struct SolveResult {
  PowerAllocation alloc;
  double sum_rate_clipped = 0.0;
  double sum_rate_surrogate = 0.0;
  std::string method;
  bool converged = false;
  int rounds_used = 0;
  // (outer round, surrogate sum rate) after each outer iteration; for the
  // game method this is nondecreasing in the second component.
  std::vector<std::pair<int, double>> trajectory;
  // Same rounds, clipped metric (what convergence experiments report).
  std::vector<std::pair<int, double>> trajectory_clipped;
  std::optional<double> final_price;
  // True when no channel is jammable (every g_e*g_j == 0): any allocation is
  // optimal and the equal-power split is returned by convention.
  bool degenerate = false;
};

// Equal power ratio baseline: p_i = P_total / N.
SolveResult solve_epr(const SecrecyScenario& scenario);

// Closed-form best response of one channel-player to a positive price:
// argmax over p >= 0 of phi(p) - price*p.  With A = sigma2,
// B = sigma2 + P_s*g_e, c = g_j, the stationarity condition is
// (A + c*p)(B + c*p) = c*(B - A)/(price*ln 2); the positive root is clipped
// at zero.  Returns 0 for unjammable channels; throws on price <= 0.
double price_best_response(const ChannelGains& gains, double p_s_w,
                           double sigma2_w, double price);

// Water-filling optimum: bisects the shadow price until aggregate demand
// sum_i price_best_response(price) meets the budget, starting from the
// bracket [geometrically shrunk lo, max_i phi_i'(0)].  Globally optimal for
// the surrogate objective by concavity.
SolveResult solve_expert(const SecrecyScenario& scenario, double tol = 1e-13);

// Best-response dynamics on the PricingGame: inner round-robin best
// responses at fixed price until the allocation is stable (a Nash
// equilibrium of the fixed-price game), outer bisection on the price until
// the budget is met.  The trajectory records, per outer iteration, the sum
// rate of the best budget-feasible equilibrium found so far, which makes it
// nondecreasing.
SolveResult solve_game(const SecrecyScenario& scenario,
                       const SolveConfig& config = {});

// Exhaustive search over the simplex {p >= 0, sum p = P_total} discretised
// with step P_total/resolution, maximising the clipped sum rate; ties broken
// lexicographically.  Guarded to N <= 3 (resource_limit_error beyond).  The
// default entry point parallelises the scan with OpenMP; the _serial variant
// is the reference implementation and returns identical results.
SolveResult solve_grid_oracle(const SecrecyScenario& scenario, int resolution);
SolveResult solve_grid_oracle_serial(const SecrecyScenario& scenario,
                                     int resolution);

// Euclidean projection onto {p >= 0, sum p = budget} by sort-and-threshold:
// p_i = max(0, v_i - theta) with theta such that the budget is met exactly.
std::vector<double> project_simplex(const std::vector<double>& v,
                                    double budget);

// Fixed-step projected gradient ascent on the surrogate sum rate from the
// equal-power point; returns the best iterate seen.
SolveResult solve_projected_gradient(const SecrecyScenario& scenario,
                                     double step, int iters);

}  // namespace netgame
