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

#ifndef QZO_HARNESS_HPP
#define QZO_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qzo/algorithms.hpp"
#include "qzo/objectives.hpp"
#include "qzo/qoracle.hpp"

namespace qzo {

/// Malformed or inconsistent experiment configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Algorithm { kQgfm, kQgfmPlus, kQgmPlus };

std::string_view to_string(Algorithm algorithm);
Algorithm parse_algorithm(std::string_view text);

/// Flat key=value configuration; '#' starts a comment.
///
/// Keys: algorithm, problem, problem.d, problem.noise_scale,
/// problem.noise_kind, delta, eps | eps_grid (comma list), cost.mode,
/// cost.cq, cost.logk, cost.batch, seeds (comma list or a..b), trace,
/// out_path, residual.samples, residual.confidence, timing, budget.
struct ExperimentConfig {
  Algorithm algorithm = Algorithm::kQgfm;
  std::string problem = "sawtooth";
  int d = 8;
  double noise_scale = 0.0;
  std::optional<NoiseKind> noise_kind;
  double delta = 0.1;
  std::vector<double> eps{0.3};
  CostModel cost;
  std::vector<std::uint64_t> seeds{1};
  bool trace = false;
  std::string out_path;
  std::int64_t residual_samples = 10'000;
  double residual_confidence = 0.95;
  bool timing = false;  // wall_ms stays 0 unless set, keeping output byte-stable
  std::int64_t budget = 1'000'000'000;

  /// Throws ConfigError.
  void validate() const;
};

ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

ObjectiveSpec make_problem(const ExperimentConfig& config);

struct ResultRow {
  std::string algorithm;
  std::string problem;
  int d = 0;
  double L = 0.0;
  double delta = 0.0;
  double eps = 0.0;
  std::uint64_t seed = 0;
  std::int64_t T = 0;
  double p = 1.0;
  std::int64_t uf_queries = 0;
  std::int64_t classical_queries = 0;
  std::int64_t grad_oracle_queries = 0;
  double residual_est = 0.0;
  double residual_halfwidth = 0.0;
  std::string verdict;  // accepted | rejected | inconclusive | skipped | aborted
  std::int64_t wall_ms = 0;
  bool aborted = false;
};

struct ExperimentOutput {
  std::vector<ResultRow> rows;  // eps descending, then seed ascending
  std::vector<std::pair<std::size_t, std::vector<TraceRecord>>> traces;  // row index, trace
};

ExperimentOutput run_experiment(const ExperimentConfig& config);

std::string csv_header();
std::string to_csv(const std::vector<ResultRow>& rows);
std::string trace_csv(const ExperimentOutput& output);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<std::pair<double, double>> points;  // (log(1/eps), log(queries))
};

/// Ordinary least squares y = slope x + intercept. Throws on fewer than two
/// distinct abscissae.
SlopeFit fit_loglog(const std::vector<std::pair<double, double>>& points);

/// (log(1/x_i), log(y_i)) pairs.
std::vector<std::pair<double, double>> loglog_points(const std::vector<double>& x,
                                                     const std::vector<double>& y);

/// Ledger counter measured by a sweep: grad_oracle for the smooth track,
/// classical in classical mode, uf otherwise.
std::int64_t measured_queries(const ExperimentConfig& config, const ResultRow& row);

/// Runs the grid (>= 3 eps values spanning >= 4x), averages the measured
/// counter over seeds per eps and fits it against log(1/eps).
SlopeFit scaling_sweep(const ExperimentConfig& config, ExperimentOutput* output = nullptr);

}  // namespace qzo

#endif  // QZO_HARNESS_HPP
