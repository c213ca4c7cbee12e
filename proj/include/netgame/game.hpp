#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace netgame {

// A joint action: one strategy index per player (finite games) or one real
// action per player (continuous games).
using FiniteProfile = std::vector<std::size_t>;
using RealProfile = std::vector<double>;

// Strategic-form game with enumerable strategy sets and a dense payoff
// tensor.  Payoffs are stored flat: profiles are linearised row-major with
// player 0's strategy most significant, and each profile owns a contiguous
// block of player_count payoffs.
class FiniteGame {
 public:
  // Zero-initialised tensor; fill via set_payoff.
  explicit FiniteGame(std::vector<std::size_t> strategy_counts);

  // Full tensor up front; payoffs.size() must equal
  // profile_count() * player_count().
  FiniteGame(std::vector<std::size_t> strategy_counts,
             std::vector<double> payoffs);

  std::size_t player_count() const noexcept { return counts_.size(); }
  const std::vector<std::size_t>& strategy_counts() const noexcept {
    return counts_;
  }
  std::size_t profile_count() const noexcept { return profile_count_; }
  // Stride of each player's strategy index in the linearised profile order.
  const std::vector<std::size_t>& strides() const noexcept { return strides_; }

  double payoff(const FiniteProfile& profile, std::size_t player) const;
  void set_payoff(const FiniteProfile& profile, std::size_t player,
                  double value);

  // Payoff addressed by linearised profile index (hot path for enumeration).
  double payoff_at(std::size_t linear, std::size_t player) const noexcept {
    return payoffs_[linear * counts_.size() + player];
  }

  std::size_t linear_index(const FiniteProfile& profile) const;
  FiniteProfile profile_from_linear(std::size_t linear) const;

  void validate_profile(const FiniteProfile& profile) const;

 private:
  std::vector<std::size_t> counts_;
  std::vector<std::size_t> strides_;
  std::size_t profile_count_ = 1;
  std::vector<double> payoffs_;
};

// Closed real action interval for one player.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Game over real action intervals with a caller-supplied payoff oracle.  The
// oracle must be deterministic (same profile, same payoffs) and return one
// payoff per player.
class ContinuousGame {
 public:
  using PayoffOracle = std::function<std::vector<double>(const RealProfile&)>;

  ContinuousGame(std::vector<Interval> intervals, PayoffOracle oracle);

  std::size_t player_count() const noexcept { return intervals_.size(); }
  const std::vector<Interval>& intervals() const noexcept { return intervals_; }

  std::vector<double> payoffs(const RealProfile& profile) const;

  void validate_profile(const RealProfile& profile) const;

 private:
  std::vector<Interval> intervals_;
  PayoffOracle oracle_;
};

// Outcome of a round-robin best-response run.  trajectory[0] is the initial
// profile; one entry follows per completed round.
template <class Profile>
struct BRDynamicsResult {
  std::vector<Profile> trajectory;
  bool converged = false;
  int rounds_used = 0;
  double final_max_deviation_gain = 0.0;
};

double eval_payoff(const FiniteGame& game, const FiniteProfile& profile,
                   std::size_t player);
double eval_payoff(const ContinuousGame& game, const RealProfile& profile,
                   std::size_t player);

// Exhaustive argmax over the player's strategies; ties broken by lowest
// strategy index.
std::size_t best_response(const FiniteGame& game, const FiniteProfile& profile,
                          std::size_t player);

// Golden-section search on the player's interval, assuming the payoff in the
// player's own action (others fixed) is unimodal there.  The interval is
// shrunk until its width is below tol, so the returned action is within tol
// of the maximiser; non-unimodal payoffs yield a local maximum undetected.
double best_response(const ContinuousGame& game, const RealProfile& profile,
                     std::size_t player, double tol);

// Largest payoff any single player can gain by deviating unilaterally;
// always >= 0, and == 0 exactly at a pure Nash equilibrium (finite case).
double max_deviation_gain(const FiniteGame& game, const FiniteProfile& profile);
double max_deviation_gain(const ContinuousGame& game,
                          const RealProfile& profile, double tol);

// All pure Nash equilibria (profiles with zero deviation gain), in
// lexicographic profile order.  Games with more than cap profiles are
// rejected with resource_limit_error.  The default entry point parallelises
// the profile scan with OpenMP; the _serial variant is the reference
// implementation and returns identical results.
std::vector<FiniteProfile> enumerate_pure_nash(const FiniteGame& game,
                                               std::size_t cap = 1000000);
std::vector<FiniteProfile> enumerate_pure_nash_serial(
    const FiniteGame& game, std::size_t cap = 1000000);

// Sequential round-robin best responses (ascending player index).  Stops
// after a full round that changes no action (finite) or changes no action by
// more than tol in absolute value (continuous), or after max_rounds.
BRDynamicsResult<FiniteProfile> best_response_dynamics(const FiniteGame& game,
                                                       FiniteProfile init,
                                                       int max_rounds);
BRDynamicsResult<RealProfile> best_response_dynamics(const ContinuousGame& game,
                                                     RealProfile init,
                                                     int max_rounds,
                                                     double tol);

}  // namespace netgame
