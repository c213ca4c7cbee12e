#include "netgame/secrecy.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace netgame {

void validate_scenario(const SecrecyScenario& scenario) {
  if (scenario.channels.empty()) {
    throw std::invalid_argument("scenario needs at least one channel");
  }
  if (!(scenario.p_total_w > 0.0) || !std::isfinite(scenario.p_total_w) ||
      !(scenario.p_s_w > 0.0) || !std::isfinite(scenario.p_s_w) ||
      !(scenario.sigma2_w > 0.0) || !std::isfinite(scenario.sigma2_w)) {
    throw std::invalid_argument("powers must be positive and finite");
  }
  for (const ChannelGains& g : scenario.channels) {
    if (!(g.g_s >= 0.0) || !std::isfinite(g.g_s) || !(g.g_e >= 0.0) ||
        !std::isfinite(g.g_e) || !(g.g_j >= 0.0) || !std::isfinite(g.g_j)) {
      throw std::invalid_argument("gains must be nonnegative and finite");
    }
  }
}

void validate_allocation(const SecrecyScenario& scenario,
                         const PowerAllocation& alloc) {
  if (alloc.size() != scenario.n_channels()) {
    throw std::invalid_argument("allocation length != channel count");
  }
  double total = 0.0;
  for (double p : alloc) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw std::invalid_argument("jamming power must be nonnegative");
    }
    total += p;
  }
  if (total > scenario.p_total_w * (1.0 + 1e-9)) {
    throw std::invalid_argument("allocation exceeds the power budget");
  }
}

double channel_secrecy_rate(const SecrecyScenario& scenario,
                            std::size_t channel, double p_i, bool clipped) {
  if (channel >= scenario.n_channels()) {
    throw std::invalid_argument("channel index out of range");
  }
  if (!(p_i >= 0.0) || !std::isfinite(p_i)) {
    throw std::invalid_argument("jamming power must be nonnegative");
  }
  const ChannelGains& g = scenario.channels[channel];
  const double legit =
      std::log2(1.0 + scenario.p_s_w * g.g_s / scenario.sigma2_w);
  const double eave =
      std::log2(1.0 + scenario.p_s_w * g.g_e / (scenario.sigma2_w + p_i * g.g_j));
  const double rate = legit - eave;
  return clipped ? std::max(0.0, rate) : rate;
}

double sum_secrecy_rate(const SecrecyScenario& scenario,
                        const PowerAllocation& alloc, bool clipped) {
  validate_allocation(scenario, alloc);
  double total = 0.0;
  for (std::size_t i = 0; i < alloc.size(); ++i) {
    total += channel_secrecy_rate(scenario, i, alloc[i], clipped);
  }
  return total;
}

double channel_rate_derivative(const SecrecyScenario& scenario,
                               std::size_t channel, double p_i) {
  if (channel >= scenario.n_channels()) {
    throw std::invalid_argument("channel index out of range");
  }
  if (!(p_i >= 0.0) || !std::isfinite(p_i)) {
    throw std::invalid_argument("jamming power must be nonnegative");
  }
  const ChannelGains& g = scenario.channels[channel];
  const double d = scenario.sigma2_w + p_i * g.g_j;
  return (g.g_j / std::numbers::ln2) *
         (1.0 / d - 1.0 / (d + scenario.p_s_w * g.g_e));
}

std::vector<double> secrecy_rate_gradient(const SecrecyScenario& scenario,
                                          const PowerAllocation& alloc) {
  validate_allocation(scenario, alloc);
  std::vector<double> grad(alloc.size());
  for (std::size_t i = 0; i < alloc.size(); ++i) {
    grad[i] = channel_rate_derivative(scenario, i, alloc[i]);
  }
  return grad;
}

bool channel_effective(const ChannelGains& gains) {
  return gains.g_e > 0.0 && gains.g_j > 0.0;
}

}  // namespace netgame
