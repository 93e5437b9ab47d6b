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

#include "qzo/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace qzo {

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kQgfm:
      return "qgfm";
    case Algorithm::kQgfmPlus:
      return "qgfm_plus";
    case Algorithm::kQgmPlus:
      return "qgm_plus";
  }
  return "qgfm";
}

Algorithm parse_algorithm(std::string_view text) {
  if (text == "qgfm") return Algorithm::kQgfm;
  if (text == "qgfm_plus") return Algorithm::kQgfmPlus;
  if (text == "qgm_plus") return Algorithm::kQgmPlus;
  throw ConfigError("unknown algorithm: " + std::string(text));
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = s.find(',');
    const auto item = trim(s.substr(0, comma));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(fmt::format("{}: cannot parse '{}'", key, text));
  }
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(fmt::format("{}: expected a boolean, got '{}'", key, text));
}

std::vector<std::uint64_t> parse_seeds(std::string_view text) {
  std::vector<std::uint64_t> seeds;
  const auto range = text.find("..");
  if (range != std::string_view::npos) {
    const auto lo = parse_number<std::uint64_t>("seeds", trim(text.substr(0, range)));
    const auto hi = parse_number<std::uint64_t>("seeds", trim(text.substr(range + 2)));
    if (hi < lo || hi - lo > 1'000'000) throw ConfigError("seeds: bad range");
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    return seeds;
  }
  for (auto item : split_list(text)) seeds.push_back(parse_number<std::uint64_t>("seeds", item));
  return seeds;
}

template <typename F>
auto wrap_domain_error(F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  if (d < 1) throw ConfigError("problem.d must be >= 1");
  if (!(noise_scale >= 0.0)) throw ConfigError("problem.noise_scale must be >= 0");
  if (!(delta > 0.0)) throw ConfigError("delta must be > 0");
  if (eps.empty()) throw ConfigError("eps or eps_grid is required");
  std::set<double> distinct;
  for (double e : eps) {
    if (!(e > 0.0) || !std::isfinite(e)) throw ConfigError("eps values must be positive");
    if (!distinct.insert(e).second) throw ConfigError("eps values must be distinct");
  }
  if (seeds.empty()) throw ConfigError("seeds must not be empty");
  if (residual_samples != 0 && residual_samples < 2) {
    throw ConfigError("residual.samples must be 0 or >= 2");
  }
  if (!(residual_confidence > 0.0 && residual_confidence < 1.0)) {
    throw ConfigError("residual.confidence must lie in (0, 1)");
  }
  if (budget < 1) throw ConfigError("budget must be >= 1");
  wrap_domain_error([&] {
    cost.validate();
    return 0;
  });
  if (algorithm == Algorithm::kQgmPlus && problem != "quadratic-smooth") {
    throw ConfigError("qgm_plus needs a smooth problem (quadratic-smooth)");
  }
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig c;
  bool have_eps = false;
  std::set<std::string, std::less<>> seen;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(fmt::format("line {}: expected key=value", line_no));
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (!seen.emplace(key).second) {
      throw ConfigError(fmt::format("line {}: duplicate key '{}'", line_no, key));
    }
    if (key == "algorithm") {
      c.algorithm = parse_algorithm(value);
    } else if (key == "problem") {
      c.problem = std::string(value);
    } else if (key == "problem.d") {
      c.d = parse_number<int>(key, value);
    } else if (key == "problem.noise_scale") {
      c.noise_scale = parse_number<double>(key, value);
    } else if (key == "problem.noise_kind") {
      c.noise_kind = wrap_domain_error([&] { return parse_noise_kind(value); });
    } else if (key == "delta") {
      c.delta = parse_number<double>(key, value);
    } else if (key == "eps" || key == "eps_grid") {
      if (have_eps) throw ConfigError("give either eps or eps_grid, not both");
      have_eps = true;
      c.eps.clear();
      for (auto item : split_list(value)) c.eps.push_back(parse_number<double>(key, item));
    } else if (key == "cost.mode") {
      c.cost.mode = wrap_domain_error([&] { return parse_cost_mode(value); });
    } else if (key == "cost.cq") {
      c.cost.c_q = parse_number<double>(key, value);
    } else if (key == "cost.logk") {
      c.cost.log_k = parse_number<int>(key, value);
    } else if (key == "cost.batch") {
      c.cost.batch = wrap_domain_error([&] { return parse_batch_rule(value); });
    } else if (key == "seeds") {
      c.seeds = parse_seeds(value);
    } else if (key == "trace") {
      c.trace = parse_bool(key, value);
    } else if (key == "out_path") {
      c.out_path = std::string(value);
    } else if (key == "residual.samples") {
      c.residual_samples = parse_number<std::int64_t>(key, value);
    } else if (key == "residual.confidence") {
      c.residual_confidence = parse_number<double>(key, value);
    } else if (key == "timing") {
      c.timing = parse_bool(key, value);
    } else if (key == "budget") {
      c.budget = static_cast<std::int64_t>(parse_number<double>(key, value));
    } else {
      throw ConfigError(fmt::format("line {}: unknown key '{}'", line_no, key));
    }
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

ObjectiveSpec make_problem(const ExperimentConfig& config) {
  return wrap_domain_error([&] {
    if (config.noise_kind) {
      return catalog_make(config.problem, config.d, config.noise_scale, *config.noise_kind);
    }
    return catalog_make(config.problem, config.d, config.noise_scale);
  });
}

namespace {

std::string classify(const ResidualReport& r, double eps) {
  if (r.estimate + r.half_width <= eps) return "accepted";
  if (r.estimate - r.half_width > eps) return "rejected";
  return "inconclusive";
}

ResultRow run_one(const ExperimentConfig& config, const ObjectiveSpec& spec, double eps,
                  std::uint64_t seed, std::vector<TraceRecord>* trace) {
  const auto start = std::chrono::steady_clock::now();
  RunOptions options;
  options.trace = config.trace;
  options.residual_samples = config.residual_samples;
  options.residual_confidence = config.residual_confidence;
  options.budget = config.budget;
  const SmoothingParams smoothing{config.delta};

  ResultRow row;
  row.algorithm = std::string(to_string(config.algorithm));
  row.problem = spec.name;
  row.d = spec.d;
  row.L = spec.L;
  row.delta = config.delta;
  row.eps = eps;
  row.seed = seed;

  RunResult result;
  switch (config.algorithm) {
    case Algorithm::kQgfm: {
      const QgfmParams params = wrap_domain_error(
          [&] { return derive_params_qgfm(spec.d, spec.L, config.delta, eps, spec.delta_0); });
      row.T = params.T;
      row.p = 1.0;
      result = qgfm(spec, spec.x0, params, smoothing, config.cost, seed, options);
      break;
    }
    case Algorithm::kQgfmPlus: {
      const QgfmPlusParams params = wrap_domain_error([&] {
        return derive_params_qgfm_plus(spec.d, spec.L, config.delta, eps, spec.delta_0);
      });
      row.T = params.T;
      row.p = params.p;
      result = qgfm_plus(spec, spec.x0, params, smoothing, config.cost, seed, options);
      break;
    }
    case Algorithm::kQgmPlus: {
      const SmoothParams sp = *spec.smooth_params;
      const QgfmPlusParams params = wrap_domain_error(
          [&] { return derive_params_qgm_plus(sp.l, sp.sigma, eps, spec.delta_0, spec.d); });
      row.T = params.T;
      row.p = params.p;
      result = qgm_plus(spec, spec.x0, params, config.cost, seed, options);
      break;
    }
  }
  row.uf_queries = result.ledger.uf_queries();
  row.classical_queries = result.ledger.classical_queries();
  row.grad_oracle_queries = result.ledger.grad_oracle_queries();
  row.aborted = result.aborted;
  if (result.residual) {
    row.residual_est = result.residual->estimate;
    row.residual_halfwidth = result.residual->half_width;
  }
  if (result.aborted) {
    row.verdict = "aborted";
  } else if (result.residual) {
    row.verdict = classify(*result.residual, eps);
  } else {
    row.verdict = "skipped";
  }
  if (config.timing) {
    row.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  }
  if (trace != nullptr) *trace = std::move(result.trace);
  return row;
}

}  // namespace

ExperimentOutput run_experiment(const ExperimentConfig& config) {
  config.validate();
  const ObjectiveSpec spec = make_problem(config);
  std::vector<double> eps = config.eps;
  std::sort(eps.begin(), eps.end(), std::greater<>());
  std::vector<std::uint64_t> seeds = config.seeds;
  std::sort(seeds.begin(), seeds.end());

  ExperimentOutput out;
  for (double e : eps) {
    for (std::uint64_t s : seeds) {
      std::vector<TraceRecord> trace;
      out.rows.push_back(run_one(config, spec, e, s, config.trace ? &trace : nullptr));
      if (config.trace) out.traces.emplace_back(out.rows.size() - 1, std::move(trace));
    }
  }
  return out;
}

std::string csv_header() {
  return "algorithm,problem,d,L,delta,eps,seed,T,p,uf_queries,classical_queries,"
         "grad_oracle_queries,residual_est,residual_halfwidth,verdict,wall_ms\n";
}

std::string to_csv(const std::vector<ResultRow>& rows) {
  std::string out = csv_header();
  for (const auto& r : rows) {
    // fmt's "{}" is the shortest round-trip form and ignores the C locale.
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", r.algorithm,
                       r.problem, r.d, r.L, r.delta, r.eps, r.seed, r.T, r.p, r.uf_queries,
                       r.classical_queries, r.grad_oracle_queries, r.residual_est,
                       r.residual_halfwidth, r.verdict, r.wall_ms);
  }
  return out;
}

std::string trace_csv(const ExperimentOutput& output) {
  std::string out = "eps,seed,t,grad_norm,step_norm,coin,charge,phi,true_grad_norm\n";
  for (const auto& [index, trace] : output.traces) {
    const ResultRow& row = output.rows[index];
    for (const auto& rec : trace) {
      out += fmt::format("{},{},{},{},{},{},{},{},{}\n", row.eps, row.seed, rec.t,
                         rec.grad_norm, rec.step_norm, rec.coin, rec.charge, rec.phi,
                         rec.true_grad_norm);
    }
  }
  return out;
}

SlopeFit fit_loglog(const std::vector<std::pair<double, double>>& points) {
  std::set<double> xs;
  for (const auto& [x, y] : points) {
    if (!std::isfinite(x) || !std::isfinite(y)) throw std::invalid_argument("non-finite point");
    xs.insert(x);
  }
  if (xs.size() < 2) throw std::invalid_argument("fit needs at least two distinct abscissae");
  const double n = static_cast<double>(points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : points) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [x, y] : points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  SlopeFit fit;
  fit.points = points;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  return fit;
}

std::vector<std::pair<double, double>> loglog_points(const std::vector<double>& x,
                                                     const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("loglog_points: size mismatch");
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("log of non-positive value");
    out.emplace_back(std::log(1.0 / x[i]), std::log(y[i]));
  }
  return out;
}

std::int64_t measured_queries(const ExperimentConfig& config, const ResultRow& row) {
  if (config.algorithm == Algorithm::kQgmPlus) return row.grad_oracle_queries;
  if (config.cost.mode == CostMode::kClassical) return row.classical_queries;
  return row.uf_queries;
}

SlopeFit scaling_sweep(const ExperimentConfig& config, ExperimentOutput* output) {
  config.validate();
  if (config.eps.size() < 3) throw ConfigError("a sweep needs at least 3 eps values");
  const auto [lo, hi] = std::minmax_element(config.eps.begin(), config.eps.end());
  if (*hi < 4.0 * *lo) throw ConfigError("eps grid must span at least a factor of 4");

  ExperimentOutput result = run_experiment(config);
  std::map<double, std::pair<double, int>> by_eps;
  for (const auto& row : result.rows) {
    auto& [sum, count] = by_eps[row.eps];
    sum += static_cast<double>(measured_queries(config, row));
    ++count;
  }
  std::vector<double> eps, queries;
  for (const auto& [e, acc] : by_eps) {
    eps.push_back(e);
    queries.push_back(acc.first / acc.second);
  }
  SlopeFit fit = fit_loglog(loglog_points(eps, queries));
  if (output != nullptr) *output = std::move(result);
  return fit;
}

}  // namespace qzo
