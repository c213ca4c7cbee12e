#include "netgame/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "netgame/errors.hpp"

namespace netgame {

namespace {

std::size_t checked_profile_count(const std::vector<std::size_t>& counts) {
  if (counts.empty()) {
    throw std::invalid_argument("game needs at least one player");
  }
  std::size_t product = 1;
  for (std::size_t c : counts) {
    if (c == 0) {
      throw std::invalid_argument("every player needs at least one strategy");
    }
    if (product > std::numeric_limits<std::size_t>::max() / c) {
      throw std::invalid_argument("strategy space size overflows");
    }
    product *= c;
  }
  return product;
}

std::vector<std::size_t> make_strides(const std::vector<std::size_t>& counts) {
  std::vector<std::size_t> strides(counts.size());
  std::size_t acc = 1;
  for (std::size_t i = counts.size(); i-- > 0;) {
    strides[i] = acc;
    acc *= counts[i];
  }
  return strides;
}

}  // namespace

FiniteGame::FiniteGame(std::vector<std::size_t> strategy_counts)
    : counts_(std::move(strategy_counts)),
      strides_(make_strides(counts_)),
      profile_count_(checked_profile_count(counts_)),
      payoffs_(profile_count_ * counts_.size(), 0.0) {}

FiniteGame::FiniteGame(std::vector<std::size_t> strategy_counts,
                       std::vector<double> payoffs)
    : counts_(std::move(strategy_counts)),
      strides_(make_strides(counts_)),
      profile_count_(checked_profile_count(counts_)),
      payoffs_(std::move(payoffs)) {
  if (payoffs_.size() != profile_count_ * counts_.size()) {
    throw std::invalid_argument("payoff tensor size mismatch");
  }
}

void FiniteGame::validate_profile(const FiniteProfile& profile) const {
  if (profile.size() != counts_.size()) {
    throw std::invalid_argument("profile length != player count");
  }
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (profile[i] >= counts_[i]) {
      throw std::invalid_argument("strategy index out of range");
    }
  }
}

std::size_t FiniteGame::linear_index(const FiniteProfile& profile) const {
  validate_profile(profile);
  std::size_t linear = 0;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    linear += profile[i] * strides_[i];
  }
  return linear;
}

FiniteProfile FiniteGame::profile_from_linear(std::size_t linear) const {
  if (linear >= profile_count_) {
    throw std::invalid_argument("profile index out of range");
  }
  FiniteProfile profile(counts_.size());
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    profile[i] = linear / strides_[i];
    linear %= strides_[i];
  }
  return profile;
}

double FiniteGame::payoff(const FiniteProfile& profile,
                          std::size_t player) const {
  if (player >= counts_.size()) {
    throw std::invalid_argument("player index out of range");
  }
  return payoffs_[linear_index(profile) * counts_.size() + player];
}

void FiniteGame::set_payoff(const FiniteProfile& profile, std::size_t player,
                            double value) {
  if (player >= counts_.size()) {
    throw std::invalid_argument("player index out of range");
  }
  payoffs_[linear_index(profile) * counts_.size() + player] = value;
}

ContinuousGame::ContinuousGame(std::vector<Interval> intervals,
                               PayoffOracle oracle)
    : intervals_(std::move(intervals)), oracle_(std::move(oracle)) {
  if (intervals_.empty()) {
    throw std::invalid_argument("game needs at least one player");
  }
  for (const Interval& iv : intervals_) {
    if (!(std::isfinite(iv.lo) && std::isfinite(iv.hi)) || iv.lo > iv.hi) {
      throw std::invalid_argument("malformed strategy interval");
    }
  }
  if (!oracle_) {
    throw std::invalid_argument("payoff oracle must be callable");
  }
}

void ContinuousGame::validate_profile(const RealProfile& profile) const {
  if (profile.size() != intervals_.size()) {
    throw std::invalid_argument("profile length != player count");
  }
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (!(profile[i] >= intervals_[i].lo && profile[i] <= intervals_[i].hi)) {
      throw std::invalid_argument("action outside strategy interval");
    }
  }
}

std::vector<double> ContinuousGame::payoffs(const RealProfile& profile) const {
  validate_profile(profile);
  std::vector<double> result = oracle_(profile);
  if (result.size() != intervals_.size()) {
    throw std::invalid_argument("payoff oracle returned wrong arity");
  }
  return result;
}

double eval_payoff(const FiniteGame& game, const FiniteProfile& profile,
                   std::size_t player) {
  return game.payoff(profile, player);
}

double eval_payoff(const ContinuousGame& game, const RealProfile& profile,
                   std::size_t player) {
  if (player >= game.player_count()) {
    throw std::invalid_argument("player index out of range");
  }
  return game.payoffs(profile)[player];
}

std::size_t best_response(const FiniteGame& game, const FiniteProfile& profile,
                          std::size_t player) {
  if (player >= game.player_count()) {
    throw std::invalid_argument("player index out of range");
  }
  FiniteProfile work = profile;
  std::size_t best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < game.strategy_counts()[player]; ++s) {
    work[player] = s;
    const double v = game.payoff(work, player);
    if (v > best_value) {
      best_value = v;
      best = s;
    }
  }
  return best;
}

double best_response(const ContinuousGame& game, const RealProfile& profile,
                     std::size_t player, double tol) {
  if (player >= game.player_count()) {
    throw std::invalid_argument("player index out of range");
  }
  if (!(tol > 0.0)) {
    throw std::invalid_argument("tolerance must be positive");
  }
  game.validate_profile(profile);
  const Interval iv = game.intervals()[player];
  double a = iv.lo;
  double b = iv.hi;
  if (b - a <= tol) {
    return 0.5 * (a + b);
  }
  RealProfile work = profile;
  const auto eval = [&](double x) {
    work[player] = x;
    return game.payoffs(work)[player];
  };
  // Golden-section search: keeps one interior evaluation per shrink step.
  constexpr double kInvPhi = 0.6180339887498949;
  double h = b - a;
  double c = b - kInvPhi * h;
  double d = a + kInvPhi * h;
  double fc = eval(c);
  double fd = eval(d);
  double width = h;
  while (width > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      h = b - a;
      c = b - kInvPhi * h;
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      h = b - a;
      d = a + kInvPhi * h;
      fd = eval(d);
    }
    const double next_width = b - a;
    if (!(next_width < width)) {
      break;  // interval no longer representable any tighter
    }
    width = next_width;
  }
  return 0.5 * (a + b);
}

double max_deviation_gain(const FiniteGame& game,
                          const FiniteProfile& profile) {
  game.validate_profile(profile);
  FiniteProfile work = profile;
  double worst = 0.0;
  for (std::size_t player = 0; player < game.player_count(); ++player) {
    const double current = game.payoff(profile, player);
    double best = current;
    for (std::size_t s = 0; s < game.strategy_counts()[player]; ++s) {
      work[player] = s;
      best = std::max(best, game.payoff(work, player));
    }
    work[player] = profile[player];
    worst = std::max(worst, best - current);
  }
  return worst;
}

double max_deviation_gain(const ContinuousGame& game,
                          const RealProfile& profile, double tol) {
  const std::vector<double> current = game.payoffs(profile);
  RealProfile work = profile;
  double worst = 0.0;
  for (std::size_t player = 0; player < game.player_count(); ++player) {
    const double response = best_response(game, profile, player, tol);
    work[player] = response;
    const double deviated = game.payoffs(work)[player];
    work[player] = profile[player];
    worst = std::max(worst, std::max(0.0, deviated - current[player]));
  }
  return worst;
}

namespace {

// One profile, addressed by linear index: is any unilateral deviation
// strictly profitable?
bool is_pure_nash_at(const FiniteGame& game, std::size_t linear,
                     const FiniteProfile& profile) {
  for (std::size_t player = 0; player < game.player_count(); ++player) {
    const std::size_t stride = game.strides()[player];
    const double current = game.payoff_at(linear, player);
    const std::size_t base = linear - profile[player] * stride;
    for (std::size_t s = 0; s < game.strategy_counts()[player]; ++s) {
      if (game.payoff_at(base + s * stride, player) > current) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

std::vector<FiniteProfile> enumerate_pure_nash_serial(const FiniteGame& game,
                                                      std::size_t cap) {
  if (game.profile_count() > cap) {
    throw resource_limit_error("profile count exceeds enumeration cap");
  }
  std::vector<FiniteProfile> result;
  FiniteProfile profile(game.player_count(), 0);
  for (std::size_t linear = 0; linear < game.profile_count(); ++linear) {
    if (is_pure_nash_at(game, linear, profile)) {
      result.push_back(profile);
    }
    // Odometer increment, last player fastest (matches linear order).
    for (std::size_t i = game.player_count(); i-- > 0;) {
      if (++profile[i] < game.strategy_counts()[i]) {
        break;
      }
      profile[i] = 0;
    }
  }
  return result;
}

std::vector<FiniteProfile> enumerate_pure_nash(const FiniteGame& game,
                                               std::size_t cap) {
  if (game.profile_count() > cap) {
    throw resource_limit_error("profile count exceeds enumeration cap");
  }
  std::vector<std::size_t> hits;
  const long long total = static_cast<long long>(game.profile_count());
#pragma omp parallel
  {
    std::vector<std::size_t> local;
#pragma omp for schedule(static) nowait
    for (long long linear = 0; linear < total; ++linear) {
      const FiniteProfile profile =
          game.profile_from_linear(static_cast<std::size_t>(linear));
      if (is_pure_nash_at(game, static_cast<std::size_t>(linear), profile)) {
        local.push_back(static_cast<std::size_t>(linear));
      }
    }
#pragma omp critical
    hits.insert(hits.end(), local.begin(), local.end());
  }
  std::sort(hits.begin(), hits.end());
  std::vector<FiniteProfile> result;
  result.reserve(hits.size());
  for (std::size_t linear : hits) {
    result.push_back(game.profile_from_linear(linear));
  }
  return result;
}

BRDynamicsResult<FiniteProfile> best_response_dynamics(const FiniteGame& game,
                                                       FiniteProfile init,
                                                       int max_rounds) {
  game.validate_profile(init);
  if (max_rounds < 0) {
    throw std::invalid_argument("max_rounds must be nonnegative");
  }
  BRDynamicsResult<FiniteProfile> result;
  result.trajectory.push_back(init);
  FiniteProfile current = std::move(init);
  for (int round = 1; round <= max_rounds; ++round) {
    bool changed = false;
    for (std::size_t player = 0; player < game.player_count(); ++player) {
      const std::size_t response = best_response(game, current, player);
      if (response != current[player]) {
        current[player] = response;
        changed = true;
      }
    }
    result.trajectory.push_back(current);
    result.rounds_used = round;
    if (!changed) {
      result.converged = true;
      break;
    }
  }
  result.final_max_deviation_gain = max_deviation_gain(game, current);
  return result;
}

BRDynamicsResult<RealProfile> best_response_dynamics(const ContinuousGame& game,
                                                     RealProfile init,
                                                     int max_rounds,
                                                     double tol) {
  game.validate_profile(init);
  if (max_rounds < 0) {
    throw std::invalid_argument("max_rounds must be nonnegative");
  }
  if (!(tol > 0.0)) {
    throw std::invalid_argument("tolerance must be positive");
  }
  BRDynamicsResult<RealProfile> result;
  result.trajectory.push_back(init);
  RealProfile current = std::move(init);
  for (int round = 1; round <= max_rounds; ++round) {
    double round_change = 0.0;
    for (std::size_t player = 0; player < game.player_count(); ++player) {
      const double response = best_response(game, current, player, tol);
      round_change = std::max(round_change,
                              std::abs(response - current[player]));
      current[player] = response;
    }
    result.trajectory.push_back(current);
    result.rounds_used = round;
    if (round_change <= tol) {
      result.converged = true;
      break;
    }
  }
  result.final_max_deviation_gain = max_deviation_gain(game, current, tol);
  return result;
}

}  // namespace netgame
