#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "netgame/errors.hpp"
#include "netgame/game.hpp"
#include "netgame/rng.hpp"

using netgame::best_response;
using netgame::best_response_dynamics;
using netgame::ContinuousGame;
using netgame::enumerate_pure_nash;
using netgame::enumerate_pure_nash_serial;
using netgame::eval_payoff;
using netgame::FiniteGame;
using netgame::FiniteProfile;
using netgame::Interval;
using netgame::max_deviation_gain;
using netgame::RealProfile;
using netgame::SplitMix64;

namespace {

constexpr std::size_t kCooperate = 0;
constexpr std::size_t kDefect = 1;

// Prisoner's dilemma with the classic payoffs T=5, R=3, P=1, S=0.
FiniteGame make_pd() {
  return FiniteGame({2, 2}, {/*CC*/ 3, 3, /*CD*/ 0, 5, /*DC*/ 5, 0,
                             /*DD*/ 1, 1});
}

// Matching pennies; player 0 (row) wins +1 when the coins match.
FiniteGame make_mp() {
  return FiniteGame({2, 2}, {/*HH*/ 1, -1, /*HT*/ -1, 1, /*TH*/ -1, 1,
                             /*TT*/ 1, -1});
}

FiniteGame make_seeded_bimatrix(std::uint64_t seed, std::size_t rows,
                                std::size_t cols) {
  SplitMix64 rng(seed);
  std::vector<double> payoffs(rows * cols * 2);
  for (double& v : payoffs) {
    v = rng.next_unit();
  }
  return FiniteGame({rows, cols}, payoffs);
}

// Independent equilibrium check: double loop over profiles and deviations,
// written without linear indices so it shares no code with the library.
std::vector<FiniteProfile> brute_force_nash_2p(const FiniteGame& game) {
  const std::size_t rows = game.strategy_counts()[0];
  const std::size_t cols = game.strategy_counts()[1];
  std::vector<FiniteProfile> result;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      bool stable = true;
      for (std::size_t k = 0; k < rows && stable; ++k) {
        if (game.payoff({k, j}, 0) > game.payoff({i, j}, 0)) {
          stable = false;
        }
      }
      for (std::size_t k = 0; k < cols && stable; ++k) {
        if (game.payoff({i, k}, 1) > game.payoff({i, j}, 1)) {
          stable = false;
        }
      }
      if (stable) {
        result.push_back({i, j});
      }
    }
  }
  return result;
}

}  // namespace

TEST_SUITE("game") {
  TEST_CASE("finite payoff lookup matches the stored tensor") {
    const FiniteGame game = make_seeded_bimatrix(11, 3, 3);
    SplitMix64 rng(11);
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        const double u0 = rng.next_unit();
        const double u1 = rng.next_unit();
        CHECK(eval_payoff(game, {i, j}, 0) == u0);
        CHECK(eval_payoff(game, {i, j}, 1) == u1);
      }
    }
  }

  TEST_CASE("prisoner's dilemma payoffs") {
    const FiniteGame pd = make_pd();
    CHECK(eval_payoff(pd, {kCooperate, kCooperate}, 0) == 3.0);
    CHECK(eval_payoff(pd, {kCooperate, kDefect}, 0) == 0.0);
    CHECK(eval_payoff(pd, {kCooperate, kDefect}, 1) == 5.0);
    CHECK(eval_payoff(pd, {kDefect, kDefect}, 1) == 1.0);
  }

  TEST_CASE("construction and lookup reject malformed input") {
    CHECK_THROWS_AS(FiniteGame({}), std::invalid_argument);
    CHECK_THROWS_AS(FiniteGame({2, 0}), std::invalid_argument);
    CHECK_THROWS_AS(FiniteGame({2, 2}, {1.0, 2.0}), std::invalid_argument);
    const FiniteGame pd = make_pd();
    CHECK_THROWS_AS(eval_payoff(pd, {0, 0, 0}, 0), std::invalid_argument);
    CHECK_THROWS_AS(eval_payoff(pd, {0, 2}, 0), std::invalid_argument);
    CHECK_THROWS_AS(eval_payoff(pd, {0, 0}, 2), std::invalid_argument);
    CHECK_THROWS_AS(
        ContinuousGame({{1.0, 0.0}}, [](const RealProfile&) {
          return std::vector<double>{0.0};
        }),
        std::invalid_argument);
    CHECK_THROWS_AS(ContinuousGame({{0.0, 1.0}}, nullptr),
                    std::invalid_argument);
  }

  TEST_CASE("finite best response: dominant and matching strategies") {
    const FiniteGame pd = make_pd();
    CHECK(best_response(pd, {kCooperate, kCooperate}, 0) == kDefect);
    CHECK(best_response(pd, {kDefect, kDefect}, 0) == kDefect);
    const FiniteGame mp = make_mp();
    CHECK(best_response(mp, {1, 0}, 0) == 0);  // column plays H -> play H
    CHECK(best_response(mp, {0, 1}, 0) == 1);  // column plays T -> play T
  }

  TEST_CASE("finite best response breaks ties at the lowest index") {
    const FiniteGame flat({3, 2}, std::vector<double>(3 * 2 * 2, 7.0));
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(best_response(flat, {2, j}, 0) == 0);
    }
    // Deterministic across repeated calls.
    const FiniteGame game = make_seeded_bimatrix(5, 4, 4);
    for (std::size_t j = 0; j < 4; ++j) {
      const std::size_t first = best_response(game, {0, j}, 0);
      CHECK(best_response(game, {0, j}, 0) == first);
    }
  }

  TEST_CASE("continuous best response finds a quadratic vertex") {
    const ContinuousGame game({{0.0, 1.0}}, [](const RealProfile& x) {
      return std::vector<double>{-(x[0] - 0.3) * (x[0] - 0.3)};
    });
    const double x = best_response(game, {0.5}, 0, 1e-9);
    CHECK(std::abs(x - 0.3) <= 1e-9);
  }

  TEST_CASE("continuous best response payoff is within tol of a grid max") {
    const std::vector<double> vertices = {0.05, 0.37, 0.5, 0.93};
    for (double c : vertices) {
      const ContinuousGame game({{0.0, 1.0}}, [c](const RealProfile& x) {
        return std::vector<double>{-(x[0] - c) * (x[0] - c)};
      });
      const double tol = 1e-7;
      const double x = best_response(game, {0.0}, 0, tol);
      const double got = game.payoffs({x})[0];
      double grid_best = -1e300;
      for (int k = 0; k <= 20000; ++k) {
        const double p = static_cast<double>(k) / 20000.0;
        grid_best = std::max(grid_best, -(p - c) * (p - c));
      }
      CHECK(got >= grid_best - tol);
    }
  }

  TEST_CASE("max deviation gain on the classic 2x2 games") {
    const FiniteGame pd = make_pd();
    CHECK(max_deviation_gain(pd, {kDefect, kDefect}) == 0.0);
    CHECK(max_deviation_gain(pd, {kCooperate, kCooperate}) == 2.0);
    const FiniteGame mp = make_mp();
    for (std::size_t i = 0; i < 2; ++i) {
      for (std::size_t j = 0; j < 2; ++j) {
        CHECK(max_deviation_gain(mp, {i, j}) == 2.0);
      }
    }
  }

  TEST_CASE("max deviation gain is nonnegative on seeded games") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const FiniteGame game = make_seeded_bimatrix(seed, 3, 4);
      for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
          CHECK(max_deviation_gain(game, {i, j}) >= 0.0);
        }
      }
    }
    const ContinuousGame game({{0.0, 1.0}, {0.0, 1.0}},
                              [](const RealProfile& x) {
                                return std::vector<double>{
                                    -(x[0] - 0.4) * (x[0] - 0.4),
                                    -(x[1] - 0.6) * (x[1] - 0.6)};
                              });
    CHECK(max_deviation_gain(game, {0.4, 0.6}, 1e-9) >= 0.0);
    CHECK(max_deviation_gain(game, {0.4, 0.6}, 1e-9) <= 1e-15);
    CHECK(max_deviation_gain(game, {0.0, 0.0}, 1e-9) ==
          doctest::Approx(0.36).epsilon(1e-6));
  }

  TEST_CASE("pure Nash enumeration on the classic 2x2 games") {
    const std::vector<FiniteProfile> pd_nash = enumerate_pure_nash(make_pd());
    REQUIRE(pd_nash.size() == 1);
    CHECK(pd_nash[0] == FiniteProfile{kDefect, kDefect});
    CHECK(enumerate_pure_nash(make_mp()).empty());
  }

  TEST_CASE("pure Nash enumeration matches a brute-force double loop") {
    for (std::uint64_t seed = 100; seed < 140; ++seed) {
      const FiniteGame game = make_seeded_bimatrix(seed, 4, 4);
      const auto fast = enumerate_pure_nash(game);
      auto slow = brute_force_nash_2p(game);
      std::sort(slow.begin(), slow.end());
      CHECK(fast == slow);
    }
  }

  TEST_CASE("parallel enumeration equals the serial reference") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const FiniteGame game = make_seeded_bimatrix(seed, 6, 7);
      CHECK(enumerate_pure_nash(game) == enumerate_pure_nash_serial(game));
    }
    SplitMix64 rng(31);
    std::vector<double> payoffs(3 * 4 * 5 * 3);
    for (double& v : payoffs) {
      v = rng.next_unit();
    }
    const FiniteGame three({3, 4, 5}, payoffs);
    CHECK(enumerate_pure_nash(three) == enumerate_pure_nash_serial(three));
  }

  TEST_CASE("equilibrium set is invariant under positive affine rescaling") {
    for (std::uint64_t seed = 40; seed < 50; ++seed) {
      FiniteGame game = make_seeded_bimatrix(seed, 4, 4);
      const auto before = enumerate_pure_nash(game);
      for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
          game.set_payoff({i, j}, 0, 2.5 * game.payoff({i, j}, 0) - 3.0);
        }
      }
      CHECK(enumerate_pure_nash(game) == before);
    }
  }

  TEST_CASE("enumeration refuses games beyond the profile cap") {
    const FiniteGame big({5, 5, 5}, std::vector<double>(125 * 3, 0.0));
    CHECK_THROWS_AS(enumerate_pure_nash(big, 100),
                    netgame::resource_limit_error);
    CHECK_THROWS_AS(enumerate_pure_nash_serial(big, 100),
                    netgame::resource_limit_error);
    CHECK_NOTHROW(enumerate_pure_nash(big, 125));
  }

  TEST_CASE("dynamics: prisoner's dilemma reaches defection in two rounds") {
    const auto r = best_response_dynamics(make_pd(),
                                          {kCooperate, kCooperate}, 10);
    CHECK(r.converged);
    CHECK(r.rounds_used <= 2);
    REQUIRE(!r.trajectory.empty());
    CHECK(r.trajectory.front() == FiniteProfile{kCooperate, kCooperate});
    CHECK(r.trajectory.back() == FiniteProfile{kDefect, kDefect});
    CHECK(r.final_max_deviation_gain == 0.0);
  }

  TEST_CASE("dynamics: matching pennies cycles without converging") {
    const auto r = best_response_dynamics(make_mp(), {0, 0}, 8);
    CHECK(!r.converged);
    CHECK(r.rounds_used == 8);
    CHECK(r.trajectory.size() == 9);  // init + one entry per round
    CHECK(r.final_max_deviation_gain > 0.0);
  }

  TEST_CASE("dynamics fixed points are pure Nash equilibria") {
    for (std::uint64_t seed = 200; seed < 230; ++seed) {
      const FiniteGame game = make_seeded_bimatrix(seed, 4, 4);
      const auto nash = enumerate_pure_nash(game);
      for (std::size_t i = 0; i < 4; ++i) {
        const auto r = best_response_dynamics(game, {i, (i * 2) % 4}, 50);
        if (r.converged) {
          const FiniteProfile final = r.trajectory.back();
          CHECK(std::find(nash.begin(), nash.end(), final) != nash.end());
          CHECK(max_deviation_gain(game, final) == 0.0);
        }
      }
    }
  }

  TEST_CASE("continuous dynamics on independent quadratics converge") {
    const ContinuousGame game({{0.0, 1.0}, {0.0, 1.0}},
                              [](const RealProfile& x) {
                                return std::vector<double>{
                                    -(x[0] - 0.25) * (x[0] - 0.25),
                                    -(x[1] - 0.75) * (x[1] - 0.75)};
                              });
    const auto r = best_response_dynamics(game, {0.0, 0.0}, 20, 1e-9);
    CHECK(r.converged);
    REQUIRE(!r.trajectory.empty());
    CHECK(r.trajectory.front() == RealProfile{0.0, 0.0});
    CHECK(std::abs(r.trajectory.back()[0] - 0.25) <= 1e-8);
    CHECK(std::abs(r.trajectory.back()[1] - 0.75) <= 1e-8);
    CHECK(r.final_max_deviation_gain <= 1e-9);
  }
}
