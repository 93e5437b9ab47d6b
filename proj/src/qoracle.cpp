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

#include "qzo/qoracle.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qzo {

LedgerCounts& LedgerCounts::operator+=(const LedgerCounts& other) {
  uf += other.uf;
  classical += other.classical;
  grad_oracle += other.grad_oracle;
  return *this;
}

LedgerCounts operator+(LedgerCounts a, const LedgerCounts& b) { return a += b; }

void QueryLedger::set_phase(std::string_view phase) { phase_ = std::string(phase); }

void QueryLedger::charge(const LedgerCounts& counts) {
  if (counts.uf < 0 || counts.classical < 0 || counts.grad_oracle < 0) {
    throw std::invalid_argument("ledger charges must be nonnegative");
  }
  totals_ += counts;
  auto it = phases_.find(phase_);
  if (it == phases_.end()) it = phases_.emplace(phase_, LedgerCounts{}).first;
  it->second += counts;
}

void QueryLedger::merge(const QueryLedger& other) {
  totals_ += other.totals_;
  for (const auto& [name, counts] : other.phases_) phases_[name] += counts;
}

void CostModel::validate() const {
  if (!(c_q > 0.0) || !std::isfinite(c_q)) throw std::invalid_argument("c_q must be > 0");
  if (log_k < 0) throw std::invalid_argument("log factor exponent must be >= 0");
}

std::string_view to_string(CostMode mode) {
  return mode == CostMode::kQuantum ? "quantum" : "classical";
}

CostMode parse_cost_mode(std::string_view text) {
  if (text == "quantum") return CostMode::kQuantum;
  if (text == "classical") return CostMode::kClassical;
  throw std::invalid_argument("unknown cost mode: " + std::string(text));
}

std::string_view to_string(BatchRule rule) {
  return rule == BatchRule::kPropositionBound ? "proposition" : "certified";
}

BatchRule parse_batch_rule(std::string_view text) {
  if (text == "proposition") return BatchRule::kPropositionBound;
  if (text == "certified") return BatchRule::kCertified;
  throw std::invalid_argument("unknown batch rule: " + std::string(text));
}

double variance_constant() { return 16.0 * std::sqrt(2.0 * std::numbers::pi); }

std::int64_t stable_ceil(double x) {
  if (!std::isfinite(x) || x > 4.0e18) {
    throw std::overflow_error("query count does not fit in 64 bits");
  }
  const double r = std::nearbyint(x);
  if (std::abs(x - r) <= 1e-12 * std::max(1.0, std::abs(x))) {
    return static_cast<std::int64_t>(r);
  }
  return static_cast<std::int64_t>(std::ceil(x));
}

namespace {

std::int64_t at_least_one(double x) { return std::max<std::int64_t>(1, stable_ceil(x)); }

std::int64_t log_multiplier(double sigma_hat, const CostModel& model) {
  if (model.log_k == 0) return 1;
  const std::int64_t base = std::max<std::int64_t>(1, stable_ceil(std::log2(1.0 / sigma_hat)));
  std::int64_t m = 1;
  for (int i = 0; i < model.log_k; ++i) m *= base;
  return m;
}

LedgerCounts function_charge(const CostModel& model, std::int64_t count) {
  LedgerCounts c;
  if (model.mode == CostMode::kQuantum) {
    c.uf = count;
  } else {
    c.classical = count;
  }
  return c;
}

void check_point(const ObjectiveSpec& spec, const VectorRef& x) {
  if (x.size() != spec.d) throw std::invalid_argument("oracle: dimension mismatch");
}

void check_sigma_positive(double sigma_hat) {
  if (!(sigma_hat > 0.0) || !std::isfinite(sigma_hat)) {
    throw std::invalid_argument("sigma_hat must be positive and finite");
  }
}

void require_smooth(const ObjectiveSpec& spec) {
  if (!spec.smooth_params) {
    throw std::invalid_argument("stochastic-gradient oracle needs a smooth spec: " + spec.name);
  }
}

}  // namespace

Vector o_g_delta(const ObjectiveSpec& spec, const VectorRef& x,
                 const SmoothingParams& params, const CostModel& model,
                 RandomStream& rng, QueryLedger& ledger) {
  check_point(spec, x);
  params.validate();
  Vector w(spec.d);
  Vector scratch(spec.d);
  sample_sphere_into(rng, w);
  const XiSample xi = sample_xi(spec, rng);
  const double c = g_delta_coefficient(spec, x, params, w, xi, scratch);
  ledger.charge(function_charge(model, 2));
  return c * w;
}

Vector o_delta_g(const ObjectiveSpec& spec, const VectorRef& x, const VectorRef& y,
                 const SmoothingParams& params, const CostModel& model,
                 RandomStream& rng, QueryLedger& ledger) {
  check_point(spec, x);
  check_point(spec, y);
  params.validate();
  Vector w(spec.d);
  Vector scratch(spec.d);
  sample_sphere_into(rng, w);
  const XiSample xi = sample_xi(spec, rng);
  const double cx = g_delta_coefficient(spec, x, params, w, xi, scratch);
  const double cy = g_delta_coefficient(spec, y, params, w, xi, scratch);
  ledger.charge(function_charge(model, 4));
  return (cx - cy) * w;
}

std::int64_t quantum_mean_cost(double L_hat, int d, double sigma_hat,
                               const CostModel& model) {
  model.validate();
  if (!(L_hat >= 0.0)) throw std::invalid_argument("L_hat must be >= 0");
  if (d <= 0) throw std::invalid_argument("dimension must be positive");
  check_sigma_positive(sigma_hat);
  if (model.mode == CostMode::kClassical) {
    return at_least_one(L_hat * L_hat / (sigma_hat * sigma_hat));
  }
  return at_least_one(model.c_q * std::sqrt(static_cast<double>(d)) * L_hat / sigma_hat) *
         log_multiplier(sigma_hat, model);
}

std::int64_t grad_batch_size(const ObjectiveSpec& spec, double sigma_hat,
                             const CostModel& model) {
  check_sigma_positive(sigma_hat);
  const double bound = model.batch == BatchRule::kCertified
                           ? spec.g_second_moment_bound
                           : variance_constant() * spec.d * spec.L * spec.L;
  return at_least_one(bound / (sigma_hat * sigma_hat));
}

std::int64_t grad_quantum_charge(const ObjectiveSpec& spec, double sigma_hat,
                                 const CostModel& model) {
  model.validate();
  check_sigma_positive(sigma_hat);
  return 2 * at_least_one(model.c_q * spec.d * spec.L / sigma_hat) *
         log_multiplier(sigma_hat, model);
}

std::int64_t grad_diff_batch_size(const ObjectiveSpec& spec, double distance,
                                  const SmoothingParams& params, double sigma_hat) {
  check_sigma_positive(sigma_hat);
  const double r = spec.d * spec.L * distance / (params.delta * sigma_hat);
  return at_least_one(r * r);
}

std::int64_t grad_diff_quantum_charge(const ObjectiveSpec& spec, double distance,
                                      const SmoothingParams& params, double sigma_hat,
                                      const CostModel& model) {
  model.validate();
  check_sigma_positive(sigma_hat);
  const double d = spec.d;
  return 4 *
         at_least_one(model.c_q * d * std::sqrt(d) * spec.L * distance /
                      (sigma_hat * params.delta)) *
         log_multiplier(sigma_hat, model);
}

GradEstimate estimate_grad(const ObjectiveSpec& spec, const VectorRef& x,
                           const SmoothingParams& params, double sigma_hat,
                           const CostModel& model, RandomStream& rng,
                           QueryLedger& ledger) {
  check_point(spec, x);
  params.validate();
  model.validate();
  check_sigma_positive(sigma_hat);

  const std::int64_t n = grad_batch_size(spec, sigma_hat, model);
  const std::int64_t charge = model.mode == CostMode::kQuantum
                                  ? grad_quantum_charge(spec, sigma_hat, model)
                                  : 2 * n;
  Vector sum = Vector::Zero(spec.d);
  Vector w(spec.d);
  Vector scratch(spec.d);
  for (std::int64_t i = 0; i < n; ++i) {
    sample_sphere_into(rng, w);
    const XiSample xi = sample_xi(spec, rng);
    sum += g_delta_coefficient(spec, x, params, w, xi, scratch) * w;
  }
  ledger.charge(function_charge(model, charge));
  return GradEstimate{sum / static_cast<double>(n), sigma_hat * sigma_hat, charge,
                      EstimateKind::kGrad, n};
}

GradEstimate estimate_grad_diff(const ObjectiveSpec& spec, const VectorRef& x,
                                const VectorRef& y, const SmoothingParams& params,
                                double sigma_hat, const CostModel& model,
                                RandomStream& rng, QueryLedger& ledger) {
  check_point(spec, x);
  check_point(spec, y);
  params.validate();
  model.validate();
  if (x == y) {
    ledger.charge(LedgerCounts{});
    return GradEstimate{Vector::Zero(spec.d), 0.0, 0, EstimateKind::kGradDiff, 0};
  }
  if (!(sigma_hat > 0.0)) {
    throw std::invalid_argument("estimate_grad_diff: sigma_hat = 0 requires x = y");
  }
  check_sigma_positive(sigma_hat);

  const double distance = (x - y).norm();
  const std::int64_t n = grad_diff_batch_size(spec, distance, params, sigma_hat);
  const std::int64_t charge =
      model.mode == CostMode::kQuantum
          ? grad_diff_quantum_charge(spec, distance, params, sigma_hat, model)
          : 4 * n;
  Vector sum = Vector::Zero(spec.d);
  Vector w(spec.d);
  Vector scratch(spec.d);
  for (std::int64_t i = 0; i < n; ++i) {
    sample_sphere_into(rng, w);
    const XiSample xi = sample_xi(spec, rng);
    const double cx = g_delta_coefficient(spec, x, params, w, xi, scratch);
    const double cy = g_delta_coefficient(spec, y, params, w, xi, scratch);
    sum += (cx - cy) * w;
  }
  ledger.charge(function_charge(model, charge));
  return GradEstimate{sum / static_cast<double>(n), sigma_hat * sigma_hat, charge,
                      EstimateKind::kGradDiff, n};
}

GradEstimate estimate_sgrad(const ObjectiveSpec& spec, const VectorRef& x,
                            double sigma_hat, const CostModel& model, RandomStream& rng,
                            QueryLedger& ledger) {
  require_smooth(spec);
  check_point(spec, x);
  model.validate();
  check_sigma_positive(sigma_hat);
  const double sigma = spec.smooth_params->sigma;

  const std::int64_t n = at_least_one(sigma * sigma / (sigma_hat * sigma_hat));
  const std::int64_t charge =
      model.mode == CostMode::kQuantum
          ? at_least_one(model.c_q * std::sqrt(static_cast<double>(spec.d)) * sigma /
                         sigma_hat) *
                log_multiplier(sigma_hat, model)
          : n;
  Vector sum = Vector::Zero(spec.d);
  for (std::int64_t i = 0; i < n; ++i) {
    sum += eval_grad_smooth(spec, x, sample_xi(spec, rng));
  }
  LedgerCounts counts;
  counts.grad_oracle = charge;
  ledger.charge(counts);
  return GradEstimate{sum / static_cast<double>(n), sigma_hat * sigma_hat, charge,
                      EstimateKind::kStochasticGrad, n};
}

GradEstimate estimate_sgrad_diff(const ObjectiveSpec& spec, const VectorRef& x,
                                 const VectorRef& y, double sigma_hat,
                                 const CostModel& model, RandomStream& rng,
                                 QueryLedger& ledger) {
  require_smooth(spec);
  check_point(spec, x);
  check_point(spec, y);
  model.validate();
  if (x == y) {
    ledger.charge(LedgerCounts{});
    return GradEstimate{Vector::Zero(spec.d), 0.0, 0, EstimateKind::kStochasticGradDiff, 0};
  }
  if (!(sigma_hat > 0.0)) {
    throw std::invalid_argument("estimate_sgrad_diff: sigma_hat = 0 requires x = y");
  }
  check_sigma_positive(sigma_hat);
  const double l = spec.smooth_params->l;
  const double distance = (x - y).norm();

  const double ratio = l * distance / sigma_hat;
  const std::int64_t n = at_least_one(ratio * ratio);
  const std::int64_t charge =
      model.mode == CostMode::kQuantum
          ? at_least_one(model.c_q * std::sqrt(static_cast<double>(spec.d)) * ratio) *
                log_multiplier(sigma_hat, model)
          : n;
  Vector sum = Vector::Zero(spec.d);
  for (std::int64_t i = 0; i < n; ++i) {
    const XiSample xi = sample_xi(spec, rng);
    sum += eval_grad_smooth(spec, x, xi) - eval_grad_smooth(spec, y, xi);
  }
  LedgerCounts counts;
  counts.grad_oracle = charge;
  ledger.charge(counts);
  return GradEstimate{sum / static_cast<double>(n), sigma_hat * sigma_hat, charge,
                      EstimateKind::kStochasticGradDiff, n};
}

}  // namespace qzo
