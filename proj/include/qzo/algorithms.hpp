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

#ifndef QZO_ALGORITHMS_HPP
#define QZO_ALGORITHMS_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "qzo/objectives.hpp"
#include "qzo/qoracle.hpp"
#include "qzo/smoothing.hpp"
#include "qzo/stationarity.hpp"

namespace qzo {

struct QgfmParams {
  double eta = 0.0;
  std::int64_t T = 0;
  double sigma1_sq = 0.0;

  void validate() const;
};

/// Schedule shared by the variance-reduced methods. The difference estimate
/// at step t targets variance kappa * |x_t - x_{t-1}|^2.
struct QgfmPlusParams {
  double eta = 0.0;
  std::int64_t T = 0;
  double p = 1.0;
  double sigma1_sq = 0.0;
  double kappa = 0.0;

  void validate() const;
};

/// eta = delta / (2 sqrt(d) L), sigma1^2 = eps^2 / 2,
/// T = ceil(2 eps^-2 (4 sqrt(d) L^2 + 2 sqrt(d) L Delta / delta)).
QgfmParams derive_params_qgfm(int d, double L, double delta, double eps, double Delta);

/// As above with p = (eps / L)^{2/3}, kappa = eps^{2/3} L^{4/3} d / delta^2 and
/// T = ceil(8 L_delta eps^-2 (Delta + 2 delta L) + 4 / p), L_delta = sqrt(d) L / delta.
/// Throws if eps > L.
QgfmPlusParams derive_params_qgfm_plus(int d, double L, double delta, double eps,
                                       double Delta);

/// eta = 1 / (2 l), p = (eps / sigma)^{2/3}, kappa = l^2 eps^{2/3} / sigma^{2/3},
/// T = ceil(8 l Delta eps^-2 + 4 sigma^{2/3} eps^{-4/3}). sigma = 0 gives p = 1.
/// d is accepted for signature symmetry; the schedule does not depend on it.
QgfmPlusParams derive_params_qgm_plus(double l, double sigma, double eps, double Delta,
                                      int d);

struct TraceRecord {
  std::int64_t t = 0;
  double grad_norm = 0.0;       // |g_t|
  double step_norm = 0.0;       // |x_{t+1} - x_t|
  int coin = -1;                // theta_t, or -1 where no coin is flipped
  std::int64_t charge = 0;      // all ledger counters charged in iteration t
  double phi = 0.0;             // potential at (x_t, g_t)
  double true_grad_norm = 0.0;  // |grad f_delta(x_t)| (|grad f(x_t)| when smooth)
};

struct RunOptions {
  bool trace = false;
  std::int64_t residual_samples = 0;  // 0 skips the residual estimate
  double residual_confidence = 0.95;
  std::int64_t budget = 1'000'000'000;  // cap on total ledger charges
};

struct RunResult {
  Vector x_out;
  std::int64_t out_index = 0;
  Vector x_last;
  std::int64_t iterations = 0;  // iterations actually completed
  QueryLedger ledger;
  std::vector<TraceRecord> trace;
  std::optional<ResidualReport> residual;
  std::uint64_t seed = 0;
  bool aborted = false;
};

RunResult qgfm(const ObjectiveSpec& spec, const VectorRef& x0, const QgfmParams& params,
               const SmoothingParams& smoothing, const CostModel& model,
               std::uint64_t seed, const RunOptions& options = {});

RunResult qgfm_plus(const ObjectiveSpec& spec, const VectorRef& x0,
                    const QgfmPlusParams& params, const SmoothingParams& smoothing,
                    const CostModel& model, std::uint64_t seed,
                    const RunOptions& options = {});

/// Requires smooth_params. The residual is the exact |grad f(x_out)|.
RunResult qgm_plus(const ObjectiveSpec& spec, const VectorRef& x0,
                   const QgfmPlusParams& params, const CostModel& model,
                   std::uint64_t seed, const RunOptions& options = {});

}  // namespace qzo

#endif  // QZO_ALGORITHMS_HPP
