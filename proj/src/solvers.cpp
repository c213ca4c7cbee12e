#include "netgame/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "netgame/errors.hpp"

namespace netgame {

namespace {

std::vector<std::size_t> effective_channels(const SecrecyScenario& scenario) {
  std::vector<std::size_t> eff;
  for (std::size_t i = 0; i < scenario.n_channels(); ++i) {
    if (channel_effective(scenario.channels[i])) {
      eff.push_back(i);
    }
  }
  return eff;
}

// Fills method label, final rates, and a single-point trajectory for
// non-iterative solvers.
void finish_result(const SecrecyScenario& scenario, SolveResult& result,
                   std::string method) {
  result.method = std::move(method);
  result.sum_rate_clipped = sum_secrecy_rate(scenario, result.alloc, true);
  result.sum_rate_surrogate = sum_secrecy_rate(scenario, result.alloc, false);
  if (result.trajectory.empty()) {
    result.trajectory.emplace_back(1, result.sum_rate_surrogate);
    result.trajectory_clipped.emplace_back(1, result.sum_rate_clipped);
  }
}

// Aggregate unboxed demand at a price: sum of per-channel best responses.
PowerAllocation price_demand(const SecrecyScenario& scenario, double price) {
  PowerAllocation p(scenario.n_channels(), 0.0);
  for (std::size_t i = 0; i < scenario.n_channels(); ++i) {
    p[i] = price_best_response(scenario.channels[i], scenario.p_s_w,
                               scenario.sigma2_w, price);
  }
  return p;
}

double total(const PowerAllocation& p) {
  return std::accumulate(p.begin(), p.end(), 0.0);
}

}  // namespace

double PricingGame::payoff(std::size_t channel, double p_i) const {
  return channel_secrecy_rate(scenario, channel, p_i, false) - price * p_i;
}

ContinuousGame PricingGame::to_continuous_game() const {
  const std::vector<Interval> intervals(scenario.n_channels(),
                                        Interval{0.0, scenario.p_total_w});
  const PricingGame copy = *this;
  return ContinuousGame(intervals, [copy](const RealProfile& profile) {
    std::vector<double> u(copy.scenario.n_channels());
    for (std::size_t i = 0; i < u.size(); ++i) {
      u[i] = copy.payoff(i, profile[i]);
    }
    return u;
  });
}

SolveResult solve_epr(const SecrecyScenario& scenario) {
  validate_scenario(scenario);
  SolveResult result;
  result.alloc.assign(scenario.n_channels(),
                      scenario.p_total_w /
                          static_cast<double>(scenario.n_channels()));
  result.converged = true;
  result.rounds_used = 0;
  finish_result(scenario, result, "epr");
  return result;
}

double price_best_response(const ChannelGains& gains, double p_s_w,
                           double sigma2_w, double price) {
  if (!(price > 0.0) || !std::isfinite(price)) {
    throw std::invalid_argument("price must be positive");
  }
  if (gains.g_j == 0.0 || gains.g_e == 0.0) {
    return 0.0;
  }
  // Stationarity of phi(p) - price*p: with A = sigma2, B = sigma2 + P_s*g_e,
  // c = g_j, the interior optimum solves (A + c p)(B + c p) = c(B-A)/(price ln2).
  const double a = sigma2_w;
  const double b = sigma2_w + p_s_w * gains.g_e;
  const double c = gains.g_j;
  const double k = c * (b - a) / (price * std::numbers::ln2);
  const double p =
      (-(a + b) + std::sqrt((a - b) * (a - b) + 4.0 * k)) / (2.0 * c);
  return std::max(0.0, p);
}

SolveResult solve_expert(const SecrecyScenario& scenario, double tol) {
  validate_scenario(scenario);
  if (!(tol > 0.0)) {
    throw std::invalid_argument("tolerance must be positive");
  }
  const std::vector<std::size_t> eff = effective_channels(scenario);
  if (eff.empty()) {
    SolveResult result = solve_epr(scenario);
    result.method = "expert";
    result.degenerate = true;
    return result;
  }
  const double p_total = scenario.p_total_w;
  double price_hi = 0.0;
  for (std::size_t i : eff) {
    price_hi = std::max(price_hi, channel_rate_derivative(scenario, i, 0.0));
  }

  SolveResult result;
  int rounds = 0;

  // Bracket: demand(price_hi) = 0 < P_total; shrink the low end
  // geometrically until demand covers the budget.
  double price_lo = price_hi;
  for (;;) {
    price_lo *= 0.5;
    ++rounds;
    if (total(price_demand(scenario, price_lo)) >= p_total) {
      break;
    }
    if (rounds > 1200) {
      throw std::runtime_error("price bracketing failed");
    }
  }

  PowerAllocation dear_alloc;
  double dear_price = price_hi;
  bool have_dear = false;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (price_lo + price_hi);
    PowerAllocation d = price_demand(scenario, mid);
    const double s = total(d);
    ++rounds;
    if (std::abs(s - p_total) <= tol * p_total) {
      result.alloc = std::move(d);
      result.converged = true;
      result.rounds_used = rounds;
      result.final_price = mid;
      finish_result(scenario, result, "expert");
      return result;
    }
    if (s > p_total) {
      price_lo = mid;
    } else {
      price_hi = mid;
      dear_alloc = std::move(d);
      dear_price = mid;
      have_dear = true;
    }
  }
  result.alloc = have_dear ? std::move(dear_alloc)
                           : price_demand(scenario, price_hi);
  result.converged = false;
  result.rounds_used = rounds;
  result.final_price = dear_price;
  finish_result(scenario, result, "expert");
  return result;
}

SolveResult solve_game(const SecrecyScenario& scenario,
                       const SolveConfig& config) {
  validate_scenario(scenario);
  if (!(config.budget_tol_rel > 0.0) || !(config.br_tol_rel > 0.0)) {
    throw std::invalid_argument("tolerances must be positive");
  }
  if (config.max_outer < 1 || config.max_br_rounds < 1) {
    throw std::invalid_argument("iteration limits must be positive");
  }
  const std::vector<std::size_t> eff = effective_channels(scenario);
  if (eff.empty()) {
    SolveResult result = solve_epr(scenario);
    result.method = "game";
    result.degenerate = true;
    return result;
  }
  const double p_total = scenario.p_total_w;
  const double budget_tol = config.budget_tol_rel * p_total;
  const double br_tol = config.br_tol_rel * p_total;

  // Inner loop: round-robin best responses of the fixed-price game, each
  // boxed to [0, P_total], until the round's L-inf change is below br_tol.
  // Payoffs are separable in own action, so this settles in two rounds.
  const auto equilibrium_at = [&](double price) {
    PowerAllocation p(scenario.n_channels(), 0.0);
    for (int round = 0; round < config.max_br_rounds; ++round) {
      double delta = 0.0;
      for (std::size_t i = 0; i < scenario.n_channels(); ++i) {
        const double nb =
            std::min(price_best_response(scenario.channels[i], scenario.p_s_w,
                                         scenario.sigma2_w, price),
                     p_total);
        delta = std::max(delta, std::abs(nb - p[i]));
        p[i] = nb;
      }
      if (delta < br_tol) {
        break;
      }
    }
    return p;
  };

  // Price bracket from the optimality conditions.  The clearing price lies
  // above phi_i'(P_total) for every effective i (active channels have
  // p_i* <= P_total and phi_i' decreasing; inactive ones have
  // price* >= phi_i'(0)), and below max_i phi_i'(P_total/n_eff), since some
  // active channel carries at least the average load.  The factor-2 margins
  // absorb rounding at the ends.
  double cheap_end = 0.0;
  double dear_end = 0.0;
  const double avg_load =
      p_total / static_cast<double>(eff.size());
  for (std::size_t i : eff) {
    cheap_end =
        std::max(cheap_end, channel_rate_derivative(scenario, i, p_total));
    dear_end =
        std::max(dear_end, channel_rate_derivative(scenario, i, avg_load));
  }
  double price_cheap =
      config.price_lo > 0.0 ? config.price_lo : 0.5 * cheap_end;
  double price_dear = config.price_hi > 0.0 ? config.price_hi : 2.0 * dear_end;
  if (!(price_cheap < price_dear)) {
    throw std::invalid_argument("price bracket must satisfy lo < hi");
  }

  SolveResult result;
  PowerAllocation dear_alloc(scenario.n_channels(), 0.0);
  std::vector<double> pending = {price_cheap, price_dear};
  int outer = 0;
  while (outer < config.max_outer) {
    ++outer;
    double probe;
    if (!pending.empty()) {
      probe = pending.front();
      pending.erase(pending.begin());
    } else {
      probe = 0.5 * (price_cheap + price_dear);
    }
    PowerAllocation p = equilibrium_at(probe);
    const double s = total(p);
    if (std::abs(s - p_total) <= budget_tol) {
      result.trajectory.emplace_back(
          outer, sum_secrecy_rate(scenario, p, false));
      result.trajectory_clipped.emplace_back(
          outer, sum_secrecy_rate(scenario, p, true));
      result.alloc = std::move(p);
      result.converged = true;
      result.rounds_used = outer;
      result.final_price = probe;
      finish_result(scenario, result, "game");
      return result;
    }
    if (s > p_total) {
      if (probe >= price_dear) {  // bracket end failed (fp guard): expand
        price_dear = 4.0 * probe;
        pending.assign(1, price_dear);
      }
      price_cheap = probe;
    } else {
      if (probe <= price_cheap) {  // bracket end failed (fp guard): shrink
        price_cheap = 0.25 * probe;
        pending.assign(1, price_cheap);
      }
      price_dear = probe;
      dear_alloc = std::move(p);
    }
    // The trajectory tracks the best budget-feasible equilibrium found so
    // far (the dear bracket end); it only improves as the bracket tightens.
    result.trajectory.emplace_back(
        outer, sum_secrecy_rate(scenario, dear_alloc, false));
    result.trajectory_clipped.emplace_back(
        outer, sum_secrecy_rate(scenario, dear_alloc, true));
  }
  result.alloc = dear_alloc;
  result.converged = false;
  result.rounds_used = outer;
  result.final_price = price_dear;
  finish_result(scenario, result, "game");
  return result;
}

namespace {

// Shared per-cell arithmetic for the grid oracle so the serial and parallel
// scans evaluate bit-identical candidates.
double grid_cell_value(const SecrecyScenario& scenario, const double* p,
                       std::size_t n) {
  double v = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    v += channel_secrecy_rate(scenario, i, p[i], true);
  }
  return v;
}

struct GridBest {
  double value = -std::numeric_limits<double>::infinity();
  std::size_t index = 0;
  bool valid = false;

  // Lexicographic tie-break: highest value, then lowest cell index.
  void offer(double v, std::size_t idx) {
    if (!valid || v > value || (v == value && idx < index)) {
      value = v;
      index = idx;
      valid = true;
    }
  }
  void merge(const GridBest& other) {
    if (other.valid) {
      offer(other.value, other.index);
    }
  }
};

void grid_cell_alloc_2(double p_total, double step, std::size_t k, double* p) {
  p[0] = static_cast<double>(k) * step;
  p[1] = std::max(0.0, p_total - p[0]);
}

void grid_cell_alloc_3(double p_total, double step, std::size_t k1,
                       std::size_t k2, double* p) {
  p[0] = static_cast<double>(k1) * step;
  p[1] = static_cast<double>(k2) * step;
  p[2] = std::max(0.0, p_total - p[0] - p[1]);
}

SolveResult grid_result(const SecrecyScenario& scenario,
                        PowerAllocation alloc) {
  SolveResult result;
  result.alloc = std::move(alloc);
  result.converged = true;
  result.rounds_used = 0;
  finish_result(scenario, result, "grid");
  return result;
}

void grid_preamble(const SecrecyScenario& scenario, int resolution) {
  validate_scenario(scenario);
  if (resolution < 1) {
    throw std::invalid_argument("resolution must be positive");
  }
  if (scenario.n_channels() > 3) {
    throw resource_limit_error("grid oracle supports at most 3 channels");
  }
}

}  // namespace

SolveResult solve_grid_oracle_serial(const SecrecyScenario& scenario,
                                     int resolution) {
  grid_preamble(scenario, resolution);
  const std::size_t n = scenario.n_channels();
  const double p_total = scenario.p_total_w;
  if (n == 1) {
    return grid_result(scenario, {p_total});
  }
  const double step = p_total / static_cast<double>(resolution);
  const std::size_t res = static_cast<std::size_t>(resolution);
  GridBest best;
  double p[3] = {0.0, 0.0, 0.0};
  if (n == 2) {
    for (std::size_t k = 0; k <= res; ++k) {
      grid_cell_alloc_2(p_total, step, k, p);
      best.offer(grid_cell_value(scenario, p, 2), k);
    }
    grid_cell_alloc_2(p_total, step, best.index, p);
    return grid_result(scenario, {p[0], p[1]});
  }
  for (std::size_t k1 = 0; k1 <= res; ++k1) {
    for (std::size_t k2 = 0; k2 + k1 <= res; ++k2) {
      grid_cell_alloc_3(p_total, step, k1, k2, p);
      best.offer(grid_cell_value(scenario, p, 3), k1 * (res + 1) + k2);
    }
  }
  grid_cell_alloc_3(p_total, step, best.index / (res + 1),
                    best.index % (res + 1), p);
  return grid_result(scenario, {p[0], p[1], p[2]});
}

SolveResult solve_grid_oracle(const SecrecyScenario& scenario,
                              int resolution) {
  grid_preamble(scenario, resolution);
  const std::size_t n = scenario.n_channels();
  const double p_total = scenario.p_total_w;
  if (n == 1) {
    return grid_result(scenario, {p_total});
  }
  const double step = p_total / static_cast<double>(resolution);
  const std::size_t res = static_cast<std::size_t>(resolution);
  GridBest best;
  if (n == 2) {
#pragma omp parallel
    {
      GridBest local;
      double p[3] = {0.0, 0.0, 0.0};
#pragma omp for schedule(static) nowait
      for (long long k = 0; k <= static_cast<long long>(res); ++k) {
        grid_cell_alloc_2(p_total, step, static_cast<std::size_t>(k), p);
        local.offer(grid_cell_value(scenario, p, 2),
                    static_cast<std::size_t>(k));
      }
#pragma omp critical
      best.merge(local);
    }
    double p[3];
    grid_cell_alloc_2(p_total, step, best.index, p);
    return grid_result(scenario, {p[0], p[1]});
  }
#pragma omp parallel
  {
    GridBest local;
    double p[3] = {0.0, 0.0, 0.0};
#pragma omp for schedule(static) nowait
    for (long long k1 = 0; k1 <= static_cast<long long>(res); ++k1) {
      for (std::size_t k2 = 0;
           k2 + static_cast<std::size_t>(k1) <= res; ++k2) {
        grid_cell_alloc_3(p_total, step, static_cast<std::size_t>(k1), k2, p);
        local.offer(grid_cell_value(scenario, p, 3),
                    static_cast<std::size_t>(k1) * (res + 1) + k2);
      }
    }
#pragma omp critical
    best.merge(local);
  }
  double p[3];
  grid_cell_alloc_3(p_total, step, best.index / (res + 1),
                    best.index % (res + 1), p);
  return grid_result(scenario, {p[0], p[1], p[2]});
}

std::vector<double> project_simplex(const std::vector<double>& v,
                                    double budget) {
  if (v.empty()) {
    throw std::invalid_argument("cannot project an empty vector");
  }
  if (!(budget > 0.0) || !std::isfinite(budget)) {
    throw std::invalid_argument("budget must be positive");
  }
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw std::invalid_argument("vector entries must be finite");
    }
  }
  std::vector<double> u = v;
  std::sort(u.begin(), u.end(), std::greater<double>());
  double css = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    css += u[j];
    const double t = (css - budget) / static_cast<double>(j + 1);
    if (u[j] - t > 0.0) {
      theta = t;
    }
  }
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = std::max(0.0, v[i] - theta);
  }
  return out;
}

SolveResult solve_projected_gradient(const SecrecyScenario& scenario,
                                     double step, int iters) {
  validate_scenario(scenario);
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw std::invalid_argument("step must be positive");
  }
  if (iters < 0) {
    throw std::invalid_argument("iteration count must be nonnegative");
  }
  PowerAllocation p(scenario.n_channels(),
                    scenario.p_total_w /
                        static_cast<double>(scenario.n_channels()));
  PowerAllocation best_p = p;
  double best_v = sum_secrecy_rate(scenario, p, false);
  std::vector<double> moved(scenario.n_channels());
  for (int it = 0; it < iters; ++it) {
    const std::vector<double> grad = secrecy_rate_gradient(scenario, p);
    for (std::size_t i = 0; i < moved.size(); ++i) {
      moved[i] = p[i] + step * grad[i];
    }
    p = project_simplex(moved, scenario.p_total_w);
    const double v = sum_secrecy_rate(scenario, p, false);
    if (v > best_v) {
      best_v = v;
      best_p = p;
    }
  }
  SolveResult result;
  result.alloc = std::move(best_p);
  result.converged = true;
  result.rounds_used = iters;
  finish_result(scenario, result, "pga");
  return result;
}

}  // namespace netgame
