#pragma once

#include <cstddef>
#include <vector>

namespace netgame {

// Per-channel link gains, dimensionless.
//   g_s : legitimate user -> base station
//   g_e : legitimate user -> eavesdropper
//   g_j : jammer -> eavesdropper
struct ChannelGains {
  double g_s = 0.0;
  double g_e = 0.0;
  double g_j = 0.0;
};

// Static physical model: N legitimate users on orthogonal channels, one
// eavesdropper, one friendly jammer with a shared power budget.  Jamming
// raises only the eavesdropper's noise floor.
struct SecrecyScenario {
  std::vector<ChannelGains> channels;
  double p_total_w = 0.05;  // jammer power budget (watts)
  double p_s_w = 0.01;      // per-user transmit power (watts)
  double sigma2_w = 1.0;    // receiver noise power (watts)

  std::size_t n_channels() const noexcept { return channels.size(); }
};

// Jamming power per channel, watts.  Feasible when every entry is >= 0 and
// the total stays within the budget (tiny relative slack for round-off).
using PowerAllocation = std::vector<double>;

// Throws std::invalid_argument on empty channels, non-positive powers, or
// negative/non-finite gains.
void validate_scenario(const SecrecyScenario& scenario);

// Throws std::invalid_argument on length mismatch, negative entries, or
// budget excess beyond p_total_w * (1 + 1e-9).
void validate_allocation(const SecrecyScenario& scenario,
                         const PowerAllocation& alloc);

// Per-channel secrecy rate in bits/s/Hz at jamming power p_i:
//   phi_i(p) = log2(1 + P_s*g_s/sigma2) - log2(1 + P_s*g_e/(sigma2 + p*g_j))
// With clipped = true the physically meaningful max(0, phi_i) is returned;
// clipped = false gives the smooth concave surrogate the solvers optimise.
double channel_secrecy_rate(const SecrecyScenario& scenario,
                            std::size_t channel, double p_i, bool clipped);

// Sum of channel_secrecy_rate over all channels (the system sum secrecy
// rate; the clipped variant is the reported metric).
double sum_secrecy_rate(const SecrecyScenario& scenario,
                        const PowerAllocation& alloc, bool clipped);

// d phi_i / d p_i of the unclipped rate at p_i; always >= 0.
double channel_rate_derivative(const SecrecyScenario& scenario,
                               std::size_t channel, double p_i);

// Gradient of the unclipped sum rate; component i is
// channel_rate_derivative(scenario, i, alloc[i]).
std::vector<double> secrecy_rate_gradient(const SecrecyScenario& scenario,
                                          const PowerAllocation& alloc);

// A channel with g_e = 0 or g_j = 0 has identically flat secrecy rate in
// p_i: jamming it is useless.  Solvers assign such channels zero power.
bool channel_effective(const ChannelGains& gains);

}  // namespace netgame
