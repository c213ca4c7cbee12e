#include "netgame/experiments.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

#include "netgame/errors.hpp"
#include "netgame/rng.hpp"

namespace netgame {

namespace {

void validate_spec(const ScenarioSpec& spec) {
  if (spec.n_channels < 1) {
    throw std::invalid_argument("spec needs at least one channel");
  }
  if (!(spec.p_total_w > 0.0) || !(spec.p_s_w > 0.0) ||
      !(spec.sigma2_w > 0.0) || !(spec.gain_scale > 0.0)) {
    throw std::invalid_argument("powers and gain scale must be positive");
  }
}

}  // namespace

SecrecyScenario gen_scenario(const ScenarioSpec& spec) {
  validate_spec(spec);
  SplitMix64 rng(spec.seed);
  SecrecyScenario scenario;
  scenario.p_total_w = spec.p_total_w;
  scenario.p_s_w = spec.p_s_w;
  scenario.sigma2_w = spec.sigma2_w;
  scenario.channels.reserve(spec.n_channels);
  for (std::size_t i = 0; i < spec.n_channels; ++i) {
    ChannelGains g;
    g.g_s = rng.next_unit() * spec.gain_scale;
    g.g_e = rng.next_unit() * spec.gain_scale;
    g.g_j = rng.next_unit() * spec.gain_scale;
    if (spec.nonneg_baseline && g.g_e > g.g_s) {
      std::swap(g.g_s, g.g_e);
    }
    scenario.channels.push_back(g);
  }
  validate_scenario(scenario);
  return scenario;
}

bool method_known(const std::string& method) {
  return method == "epr" || method == "expert" || method == "game" ||
         method == "grid" || method == "pga";
}

SolveResult solve_by_method(const SecrecyScenario& scenario,
                            const std::string& method,
                            const SolveConfig& config,
                            const MethodParams& params) {
  if (method == "epr") {
    return solve_epr(scenario);
  }
  if (method == "expert") {
    return solve_expert(scenario);
  }
  if (method == "game") {
    return solve_game(scenario, config);
  }
  if (method == "grid") {
    return solve_grid_oracle(scenario, params.grid_resolution);
  }
  if (method == "pga") {
    return solve_projected_gradient(
        scenario, params.pga_step_rel * scenario.p_total_w, params.pga_iters);
  }
  throw std::invalid_argument("unknown method: " + method);
}

std::vector<std::pair<int, double>> run_convergence(
    const SecrecyScenario& scenario, const SolveConfig& config) {
  return solve_game(scenario, config).trajectory_clipped;
}

SweepTable run_sweep(const std::vector<std::size_t>& n_list, int seeds_per_n,
                     const ScenarioSpec& base,
                     const std::vector<std::string>& methods, bool parallel,
                     const SolveConfig& config, const MethodParams& params) {
  if (n_list.empty() || methods.empty()) {
    throw std::invalid_argument("need at least one channel count and method");
  }
  if (seeds_per_n < 1) {
    throw std::invalid_argument("seeds_per_n must be positive");
  }
  if (std::set<std::size_t>(n_list.begin(), n_list.end()).size() !=
      n_list.size()) {
    throw std::invalid_argument("duplicate channel counts in sweep");
  }
  for (std::size_t n : n_list) {
    if (n < 1) {
      throw std::invalid_argument("channel counts must be positive");
    }
  }
  for (const std::string& m : methods) {
    if (!method_known(m)) {
      throw std::invalid_argument("unknown method: " + m);
    }
  }

  SweepTable table;
  const bool has_grid =
      std::find(methods.begin(), methods.end(), "grid") != methods.end();
  if (has_grid) {
    for (std::size_t n : n_list) {
      if (n > 3) {
        table.annotations.push_back(
            "grid skipped for n=" + std::to_string(n) +
            " (grid oracle supports at most 3 channels)");
      }
    }
  }

  const std::size_t n_cells = n_list.size() * static_cast<std::size_t>(seeds_per_n);
  const std::size_t n_methods = methods.size();
  struct Slot {
    bool used = false;
    SweepRow row;
  };
  std::vector<Slot> slots(n_cells * n_methods);
  std::string first_error;

#pragma omp parallel for schedule(dynamic) if (parallel)
  for (long long cell = 0; cell < static_cast<long long>(n_cells); ++cell) {
    try {
      const std::size_t n =
          n_list[static_cast<std::size_t>(cell) /
                 static_cast<std::size_t>(seeds_per_n)];
      const std::uint64_t s = static_cast<std::uint64_t>(
          cell % static_cast<long long>(seeds_per_n));
      ScenarioSpec spec = base;
      spec.n_channels = n;
      spec.seed = mix_seed(base.seed, n, s);
      const SecrecyScenario scenario = gen_scenario(spec);
      for (std::size_t m = 0; m < n_methods; ++m) {
        if (methods[m] == "grid" && n > 3) {
          continue;
        }
        const SolveResult r =
            solve_by_method(scenario, methods[m], config, params);
        Slot& slot = slots[static_cast<std::size_t>(cell) * n_methods + m];
        slot.row = SweepRow{methods[m], n,     spec.seed,
                            r.sum_rate_clipped, r.rounds_used, r.converged};
        slot.used = true;
      }
    } catch (const std::exception& e) {
#pragma omp critical
      {
        if (first_error.empty()) {
          first_error = e.what();
        }
      }
    }
  }
  if (!first_error.empty()) {
    throw std::runtime_error("sweep cell failed: " + first_error);
  }

  table.rows.reserve(slots.size());
  for (const Slot& slot : slots) {
    if (slot.used) {
      table.rows.push_back(slot.row);
    }
  }
  std::sort(table.rows.begin(), table.rows.end(),
            [](const SweepRow& a, const SweepRow& b) {
              return std::tie(a.method, a.n, a.seed) <
                     std::tie(b.method, b.n, b.seed);
            });
  return table;
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string scenario_to_json(const SecrecyScenario& scenario,
                             const ScenarioSpec* provenance) {
  nlohmann::ordered_json j;
  j["n_channels"] = scenario.n_channels();
  j["p_total_w"] = scenario.p_total_w;
  j["p_s_w"] = scenario.p_s_w;
  j["sigma2_w"] = scenario.sigma2_w;
  nlohmann::ordered_json channels = nlohmann::ordered_json::array();
  for (const ChannelGains& g : scenario.channels) {
    nlohmann::ordered_json c;
    c["g_s"] = g.g_s;
    c["g_e"] = g.g_e;
    c["g_j"] = g.g_j;
    channels.push_back(std::move(c));
  }
  j["channels"] = std::move(channels);
  if (provenance != nullptr) {
    nlohmann::ordered_json p;
    p["seed"] = provenance->seed;
    p["n_channels"] = provenance->n_channels;
    p["p_total_w"] = provenance->p_total_w;
    p["p_s_w"] = provenance->p_s_w;
    p["sigma2_w"] = provenance->sigma2_w;
    p["gain_scale"] = provenance->gain_scale;
    p["nonneg_baseline"] = provenance->nonneg_baseline;
    j["provenance"] = std::move(p);
  }
  return j.dump(2) + "\n";
}

SecrecyScenario scenario_from_json(const std::string& text) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    SecrecyScenario scenario;
    const std::size_t n = j.at("n_channels").get<std::size_t>();
    scenario.p_total_w = j.at("p_total_w").get<double>();
    scenario.p_s_w = j.at("p_s_w").get<double>();
    scenario.sigma2_w = j.at("sigma2_w").get<double>();
    const nlohmann::json& channels = j.at("channels");
    if (!channels.is_array() || channels.size() != n) {
      throw std::invalid_argument(
          "channels array must match n_channels");
    }
    for (const nlohmann::json& c : channels) {
      ChannelGains g;
      g.g_s = c.at("g_s").get<double>();
      g.g_e = c.at("g_e").get<double>();
      g.g_j = c.at("g_j").get<double>();
      scenario.channels.push_back(g);
    }
    validate_scenario(scenario);
    return scenario;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed scenario JSON: ") +
                                e.what());
  }
}

SecrecyScenario load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot read scenario file: " + path);
  }
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw std::runtime_error("cannot read scenario file: " + path);
  }
  return scenario_from_json(text);
}

std::string sweep_to_csv(const SweepTable& table) {
  std::string out = "method,n,seed,sum_secrecy_rate_bps_hz,rounds,converged\n";
  for (const SweepRow& row : table.rows) {
    out += row.method;
    out += ',';
    out += std::to_string(row.n);
    out += ',';
    out += std::to_string(row.seed);
    out += ',';
    out += format_real(row.sum_rate_clipped);
    out += ',';
    out += std::to_string(row.rounds);
    out += ',';
    out += row.converged ? '1' : '0';
    out += '\n';
  }
  return out;
}

std::string convergence_to_csv(
    const std::vector<std::pair<int, double>>& series) {
  std::string out = "iteration,sum_secrecy_rate_bps_hz\n";
  for (const auto& [iteration, rate] : series) {
    out += std::to_string(iteration);
    out += ',';
    out += format_real(rate);
    out += '\n';
  }
  return out;
}

void write_text_file_atomic(const std::string& path,
                            const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot open for writing: " + tmp.string());
    }
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw std::runtime_error("write failed: " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    std::error_code ec2;
    fs::remove(tmp, ec2);
    throw std::runtime_error("cannot move into place: " + target.string() +
                             ": " + ec.message());
  }
}

}  // namespace netgame
