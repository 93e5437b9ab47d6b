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

#ifndef QZO_STATIONARITY_HPP
#define QZO_STATIONARITY_HPP

#include <cstdint>
#include <optional>
#include <string_view>

#include "qzo/objectives.hpp"
#include "qzo/random.hpp"
#include "qzo/smoothing.hpp"

namespace qzo {

struct ResidualReport {
  Vector point;
  double delta = 0.0;
  double estimate = 0.0;    // norm of the mean of n g_delta draws
  double half_width = 0.0;  // at level `confidence`
  double confidence = 0.0;
  std::int64_t n = 0;
  std::optional<double> exact;  // dist(0, Goldstein subdifferential) if known
};

/// Estimates |grad f_delta(x)|. The half-width is the norm of per-coordinate
/// normal intervals, each at level 1 - (1 - confidence) / d, so it bounds
/// |mean - grad f_delta(x)| (and hence the estimate's error) with probability
/// at least `confidence`. Draws are not charged to any ledger.
ResidualReport goldstein_residual(const ObjectiveSpec& spec, const VectorRef& x,
                                  const SmoothingParams& params, std::int64_t n,
                                  double confidence, RandomStream& rng);

enum class Verdict { kAccepted, kRejected, kInconclusive };

std::string_view to_string(Verdict verdict);

struct VerifyResult {
  Verdict verdict = Verdict::kInconclusive;
  ResidualReport report;  // from the final round
};

/// Accepts when estimate + half_width <= eps, rejects when
/// estimate - half_width > eps, and otherwise doubles n (from n0, up to n_cap).
VerifyResult verify_stationary(const ObjectiveSpec& spec, const VectorRef& x,
                               const SmoothingParams& params, double eps,
                               double confidence, RandomStream& rng,
                               std::int64_t n0 = 1000, std::int64_t n_cap = 10'000'000);

/// Exact dist(0, Goldstein delta-subdifferential of f at x). Known for
/// constant, abs-linear, one-dimensional sawtooth, and the quadratic.
std::optional<double> exact_goldstein_distance(const ObjectiveSpec& spec,
                                               const VectorRef& x, double delta);

}  // namespace qzo

#endif  // QZO_STATIONARITY_HPP
