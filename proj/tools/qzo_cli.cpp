// Copyright 2026 The qzo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: run, sweep, circuit-demo, verify.
// Exit codes: 0 success, 1 runtime failure, 2 configuration error, 3 budget abort.

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "qzo/circuit.hpp"
#include "qzo/harness.hpp"
#include "qzo/stationarity.hpp"
#include "qzo/stats.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;
constexpr int kExitBudget = 3;

struct GlobalFlags {
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string cost_mode;
};

void apply_overrides(const GlobalFlags& flags, qzo::ExperimentConfig& config) {
  if (flags.seed) config.seeds = {*flags.seed};
  if (!flags.out.empty()) config.out_path = flags.out;
  if (!flags.cost_mode.empty()) {
    try {
      config.cost.mode = qzo::parse_cost_mode(flags.cost_mode);
    } catch (const std::invalid_argument& e) {
      throw qzo::ConfigError(e.what());
    }
  }
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

bool any_aborted(const qzo::ExperimentOutput& output) {
  for (const auto& row : output.rows) {
    if (row.aborted) return true;
  }
  return false;
}

int cmd_run(const std::string& config_path, const GlobalFlags& flags) {
  qzo::ExperimentConfig config = qzo::load_config(config_path);
  apply_overrides(flags, config);
  const qzo::ExperimentOutput output = qzo::run_experiment(config);
  emit(config.out_path, qzo::to_csv(output.rows));
  if (config.trace) {
    const std::string trace_path =
        config.out_path.empty() || config.out_path == "-" ? "trace.csv"
                                                          : config.out_path + ".trace.csv";
    emit(trace_path, qzo::trace_csv(output));
  }
  return any_aborted(output) ? kExitBudget : 0;
}

int cmd_sweep(const std::string& config_path, const GlobalFlags& flags) {
  qzo::ExperimentConfig config = qzo::load_config(config_path);
  apply_overrides(flags, config);
  qzo::ExperimentOutput output;
  const qzo::SlopeFit fit = qzo::scaling_sweep(config, &output);
  emit(config.out_path, qzo::to_csv(output.rows));
  std::cerr << fmt::format("slope={:.4f} intercept={:.4f} r_squared={:.6f}\n", fit.slope,
                           fit.intercept, fit.r_squared);
  for (const auto& [x, y] : fit.points) {
    std::cerr << fmt::format("  log(1/eps)={:.6f} log(queries)={:.6f}\n", x, y);
  }
  return any_aborted(output) ? kExitBudget : 0;
}

int cmd_circuit_demo(int m1, int m2, int d, std::int64_t n, std::uint64_t seed) {
  qzo::RegisterLayout layout{m1, m2, d, 32};
  try {
    layout.validate();
  } catch (const std::invalid_argument& e) {
    throw qzo::ConfigError(e.what());
  }
  if (n < 2) throw qzo::ConfigError("--n must be >= 2");
  qzo::RandomStream rng(seed, "circuit-demo");

  std::cout << fmt::format("layout: m1={} m2={} d={} state_qubits={}\n", m1, m2, d,
                           layout.state_qubits());
  std::cout << fmt::format("exact invalid probability: {:.6g}\n",
                           qzo::invalid_probability(layout));

  std::int64_t rejections = 0;
  std::vector<std::int64_t> xi_counts(std::size_t{1} << std::min(m1, 16), 0);
  std::vector<double> h0, wlast, wlast_smooth;
  qzo::RandomStream jitter = rng.split("jitter");
  for (std::int64_t i = 0; i < n; ++i) {
    const qzo::OracleSample s = qzo::pipeline_sample_valid(layout, rng, &rejections);
    if (m1 <= 16) ++xi_counts[s.xi];
    h0.push_back(s.h[0]);
    wlast.push_back(s.w[d - 1]);
    wlast_smooth.push_back(qzo::continuum_direction(s, m2, jitter)[d - 1]);
  }
  std::cout << fmt::format("pipeline rejection rate: {:.6g} ({} of {})\n",
                           static_cast<double>(rejections) / (rejections + n), rejections,
                           rejections + n);
  const qzo::Moments mom = qzo::sample_moments(h0);
  std::cout << fmt::format("h_0 mean={:.5f} var={:.5f} skew={:.5f} excess_kurtosis={:.5f}\n",
                           mom.mean, mom.variance, mom.skewness, mom.excess_kurtosis);
  if (m1 <= 16) {
    std::vector<double> uniform(xi_counts.size(), 1.0 / static_cast<double>(xi_counts.size()));
    const auto chi = qzo::chi_square_test(xi_counts, uniform);
    std::cout << fmt::format("xi uniformity: chi2={:.4f} dof={} p={:.4g}\n", chi.statistic,
                             chi.dof, chi.p_value);
  }
  if (d >= 2) {
    // A coordinate of a uniform point on S^2 is uniform on [-1, 1].
    if (d == 3) {
      auto uniform_cdf = [](double t) { return std::clamp((t + 1.0) / 2.0, 0.0, 1.0); };
      const auto raw = qzo::ks_test(wlast, uniform_cdf);
      const auto smooth = qzo::ks_test(wlast_smooth, uniform_cdf);
      std::cout << fmt::format("w_3 vs uniform[-1,1]: lattice D={:.5f} p={:.4g}; "
                               "continuity-corrected D={:.5f} p={:.4g}\n",
                               raw.statistic, raw.p_value, smooth.statistic, smooth.p_value);
    }
  }
  if (layout.state_qubits() <= 12) {
    const auto state =
        qzo::statevector_apply_h_and_norm(qzo::statevector_prepare(layout));
    const auto a = qzo::statevector_distribution(state);
    const auto b = qzo::pipeline_distribution(layout);
    double diff = 0.0;
    for (const auto& [k, p] : b) {
      auto it = a.find(k);
      diff = std::max(diff, std::abs(p - (it == a.end() ? 0.0 : it->second)));
    }
    std::cout << fmt::format("state-vector vs pipeline exact max |dp|: {:.3g} (norm {:.12f})\n",
                             diff, state.norm_squared());
  }
  return 0;
}

int cmd_verify(const std::string& problem, int d, const std::string& point, double delta,
               double eps, double noise, std::uint64_t seed) {
  qzo::ObjectiveSpec spec;
  try {
    spec = qzo::catalog_make(problem, d, noise);
  } catch (const std::invalid_argument& e) {
    throw qzo::ConfigError(e.what());
  }
  std::vector<double> coords;
  std::size_t pos = 0;
  while (pos <= point.size()) {
    const auto comma = point.find(',', pos);
    const std::string item =
        point.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      coords.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw qzo::ConfigError("--point: cannot parse '" + item + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (static_cast<int>(coords.size()) != d) {
    throw qzo::ConfigError(fmt::format("--point has {} coordinates, expected {}",
                                       coords.size(), d));
  }
  if (!(delta > 0.0) || !(eps > 0.0)) throw qzo::ConfigError("--delta and --eps must be > 0");
  const qzo::Vector x = Eigen::Map<const qzo::Vector>(coords.data(), d);
  qzo::RandomStream rng(seed, "verify");
  const auto result = qzo::verify_stationary(spec, x, qzo::SmoothingParams{delta}, eps, 0.95, rng);
  std::cout << fmt::format("verdict={} estimate={:.6g} half_width={:.6g} n={}",
                           qzo::to_string(result.verdict), result.report.estimate,
                           result.report.half_width, result.report.n);
  if (result.report.exact) std::cout << fmt::format(" exact={:.6g}", *result.report.exact);
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zeroth-order Goldstein-stationarity optimizers with emulated quantum query costs"};
  app.require_subcommand(1);
  GlobalFlags flags;
  std::uint64_t seed_value = 0;
  auto* seed_opt = app.add_option("--seed", seed_value, "Master seed override")->capture_default_str();
  app.add_option("--out", flags.out, "Output path ('-' for stdout)");
  app.add_option("--cost-mode", flags.cost_mode, "quantum | classical")
      ->check(CLI::IsMember({"quantum", "classical"}));

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run every (eps, seed) pair of a config and write CSV");
  run->add_option("--config", config_path, "Config file")->required();
  auto* sweep = app.add_subcommand("sweep", "Run an eps grid and fit the log-log query slope");
  sweep->add_option("--config", config_path, "Config file")->required();

  int m1 = 1, m2 = 2, d = 2;
  std::int64_t n = 10000;
  auto* demo = app.add_subcommand("circuit-demo", "Sample the sampling-oracle circuit");
  demo->add_option("--m1", m1, "Qubits for xi")->required();
  demo->add_option("--m2", m2, "Qubits per coordinate")->required();
  demo->add_option("--d", d, "Coordinates")->required();
  demo->add_option("--n", n, "Valid samples to draw")->required();

  std::string problem, point;
  int vd = 1;
  double delta = 0.1, eps = 0.1, noise = 0.0;
  auto* verify = app.add_subcommand("verify", "Check (delta, eps)-stationarity of a point");
  verify->add_option("--problem", problem, "Catalog problem")->required();
  verify->add_option("--d", vd, "Dimension")->required();
  verify->add_option("--point", point, "Comma-separated coordinates")->required();
  verify->add_option("--delta", delta, "Smoothing radius")->required();
  verify->add_option("--eps", eps, "Tolerance")->required();
  verify->add_option("--noise", noise, "Additive noise scale");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  if (*seed_opt) flags.seed = seed_value;

  try {
    if (*run) return cmd_run(config_path, flags);
    if (*sweep) return cmd_sweep(config_path, flags);
    if (*demo) return cmd_circuit_demo(m1, m2, d, n, flags.seed.value_or(1));
    if (*verify) return cmd_verify(problem, vd, point, delta, eps, noise, flags.seed.value_or(1));
  } catch (const qzo::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
