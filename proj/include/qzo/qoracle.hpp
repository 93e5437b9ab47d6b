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

#ifndef QZO_QORACLE_HPP
#define QZO_QORACLE_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>

#include "qzo/objectives.hpp"
#include "qzo/random.hpp"
#include "qzo/smoothing.hpp"

namespace qzo {

// Oracle layer. Quantum estimators are realized classically at their
// statistical contract (unbiased, mean squared error at most sigma_hat^2);
// only the ledger reflects the quantum query cost.

struct LedgerCounts {
  std::int64_t uf = 0;           // quantum function-value oracle calls
  std::int64_t classical = 0;    // classical function-value queries
  std::int64_t grad_oracle = 0;  // stochastic-gradient oracle calls

  std::int64_t total() const { return uf + classical + grad_oracle; }
  LedgerCounts& operator+=(const LedgerCounts& other);
  bool operator==(const LedgerCounts&) const = default;
};

LedgerCounts operator+(LedgerCounts a, const LedgerCounts& b);

/// Additive, monotone query counters with per-phase breakdown.
class QueryLedger {
 public:
  /// Charges go to the current phase (initially "default").
  void set_phase(std::string_view phase);
  const std::string& phase() const { return phase_; }

  /// Throws std::invalid_argument on a negative count.
  void charge(const LedgerCounts& counts);

  const LedgerCounts& totals() const { return totals_; }
  std::int64_t uf_queries() const { return totals_.uf; }
  std::int64_t classical_queries() const { return totals_.classical; }
  std::int64_t grad_oracle_queries() const { return totals_.grad_oracle; }
  const std::map<std::string, LedgerCounts, std::less<>>& phases() const {
    return phases_;
  }

  /// Adds every counter of other into this ledger.
  void merge(const QueryLedger& other);

  bool operator==(const QueryLedger& other) const {
    return totals_ == other.totals_ && phases_ == other.phases_;
  }

 private:
  std::string phase_ = "default";
  LedgerCounts totals_;
  std::map<std::string, LedgerCounts, std::less<>> phases_;
};

enum class CostMode { kQuantum, kClassical };

enum class BatchRule {
  // Batch size from the generic variance bound 16 sqrt(2 pi) d L^2.
  kPropositionBound,
  // Batch size from the objective's certified second-moment bound (<= d L^2).
  kCertified,
};

struct CostModel {
  CostMode mode = CostMode::kQuantum;
  double c_q = 1.0;
  // 0 drops polylog factors; k > 0 multiplies quantum charges by
  // max(1, ceil(log2(1 / sigma_hat)))^k.
  int log_k = 0;
  BatchRule batch = BatchRule::kPropositionBound;

  void validate() const;
};

std::string_view to_string(CostMode mode);
CostMode parse_cost_mode(std::string_view text);
std::string_view to_string(BatchRule rule);
BatchRule parse_batch_rule(std::string_view text);

/// 16 sqrt(2 pi).
double variance_constant();

/// ceil(x) that ignores relative rounding noise below 1e-12.
std::int64_t stable_ceil(double x);

enum class EstimateKind { kGrad, kGradDiff, kStochasticGrad, kStochasticGradDiff };

struct GradEstimate {
  Vector value;
  double target_variance = 0.0;
  std::int64_t queries_charged = 0;
  EstimateKind kind = EstimateKind::kGrad;
  std::int64_t samples = 0;  // classical draws used to realize the estimate
};

/// One draw of g_delta with fresh (w, xi). Charges 2.
Vector o_g_delta(const ObjectiveSpec& spec, const VectorRef& x,
                 const SmoothingParams& params, const CostModel& model,
                 RandomStream& rng, QueryLedger& ledger);

/// g_delta(x; w, xi) - g_delta(y; w, xi) for one shared (w, xi). Charges 4.
Vector o_delta_g(const ObjectiveSpec& spec, const VectorRef& x, const VectorRef& y,
                 const SmoothingParams& params, const CostModel& model,
                 RandomStream& rng, QueryLedger& ledger);

/// Queries to estimate a d-dimensional mean to standard deviation sigma_hat
/// when each sample deviates by at most L_hat: ceil(c_q sqrt(d) L_hat / sigma_hat)
/// in quantum mode, ceil(L_hat^2 / sigma_hat^2) in classical mode, floor 1.
std::int64_t quantum_mean_cost(double L_hat, int d, double sigma_hat,
                               const CostModel& model);

/// Batch size used to realize estimate_grad at target sd sigma_hat.
std::int64_t grad_batch_size(const ObjectiveSpec& spec, double sigma_hat,
                             const CostModel& model);
/// Quantum charge of estimate_grad: 2 max(1, ceil(c_q d L / sigma_hat)).
std::int64_t grad_quantum_charge(const ObjectiveSpec& spec, double sigma_hat,
                                 const CostModel& model);
std::int64_t grad_diff_batch_size(const ObjectiveSpec& spec, double distance,
                                  const SmoothingParams& params, double sigma_hat);
/// 4 max(1, ceil(c_q d^{3/2} L |x - y| / (sigma_hat delta))).
std::int64_t grad_diff_quantum_charge(const ObjectiveSpec& spec, double distance,
                                      const SmoothingParams& params, double sigma_hat,
                                      const CostModel& model);

GradEstimate estimate_grad(const ObjectiveSpec& spec, const VectorRef& x,
                           const SmoothingParams& params, double sigma_hat,
                           const CostModel& model, RandomStream& rng,
                           QueryLedger& ledger);

GradEstimate estimate_grad_diff(const ObjectiveSpec& spec, const VectorRef& x,
                                const VectorRef& y, const SmoothingParams& params,
                                double sigma_hat, const CostModel& model,
                                RandomStream& rng, QueryLedger& ledger);

GradEstimate estimate_sgrad(const ObjectiveSpec& spec, const VectorRef& x,
                            double sigma_hat, const CostModel& model, RandomStream& rng,
                            QueryLedger& ledger);

GradEstimate estimate_sgrad_diff(const ObjectiveSpec& spec, const VectorRef& x,
                                 const VectorRef& y, double sigma_hat,
                                 const CostModel& model, RandomStream& rng,
                                 QueryLedger& ledger);

}  // namespace qzo

#endif  // QZO_QORACLE_HPP
