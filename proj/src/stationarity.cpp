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

#include "qzo/stationarity.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

namespace qzo {

ResidualReport goldstein_residual(const ObjectiveSpec& spec, const VectorRef& x,
                                  const SmoothingParams& params, std::int64_t n,
                                  double confidence, RandomStream& rng) {
  if (n < 2) throw std::invalid_argument("goldstein_residual: n must be >= 2");
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw std::invalid_argument("confidence must lie in (0, 1)");
  }
  const GradReference ref = grad_f_delta_ref(spec, x, params, n, rng);
  const double alpha = 1.0 - confidence;
  const double z = boost::math::quantile(boost::math::normal(), 1.0 - alpha / (2.0 * spec.d));

  ResidualReport report;
  report.point = x;
  report.delta = params.delta;
  report.estimate = ref.mean.norm();
  report.half_width = z * ref.std_error.norm();
  report.confidence = confidence;
  report.n = n;
  report.exact = exact_goldstein_distance(spec, x, params.delta);
  return report;
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::kAccepted:
      return "accepted";
    case Verdict::kRejected:
      return "rejected";
    case Verdict::kInconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

VerifyResult verify_stationary(const ObjectiveSpec& spec, const VectorRef& x,
                               const SmoothingParams& params, double eps,
                               double confidence, RandomStream& rng, std::int64_t n0,
                               std::int64_t n_cap) {
  if (!(eps > 0.0)) throw std::invalid_argument("verify_stationary: eps must be > 0");
  if (n0 < 2 || n_cap < n0) throw std::invalid_argument("verify_stationary: bad sample sizes");
  VerifyResult result;
  for (std::int64_t n = n0;; n *= 2) {
    n = std::min(n, n_cap);
    result.report = goldstein_residual(spec, x, params, n, confidence, rng);
    const double est = result.report.estimate;
    const double hw = result.report.half_width;
    if (est + hw <= eps) {
      result.verdict = Verdict::kAccepted;
      return result;
    }
    if (est - hw > eps) {
      result.verdict = Verdict::kRejected;
      return result;
    }
    if (n >= n_cap) break;
  }
  result.verdict = Verdict::kInconclusive;
  return result;
}

namespace {

// min |diag(lambda) y| over |y - x| <= delta. The minimizer is
// y = mu (diag(lambda)^2 + mu I)^{-1} x with mu chosen so that |y - x| = delta.
double quadratic_hull_distance(const Vector& lambda, const VectorRef& x, double delta) {
  if (x.norm() <= delta) return 0.0;
  const Vector l2 = lambda.cwiseAbs2();
  auto gap = [&](double mu) {
    return (l2.array() / (l2.array() + mu) * x.array()).matrix().norm();
  };
  double lo = 0.0;
  double hi = 1.0;
  while (gap(hi) > delta) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (gap(mid) > delta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double mu = 0.5 * (lo + hi);
  const Vector y = (mu / (l2.array() + mu) * x.array()).matrix();
  return lambda.cwiseProduct(y).norm();
}

}  // namespace

std::optional<double> exact_goldstein_distance(const ObjectiveSpec& spec,
                                               const VectorRef& x, double delta) {
  if (x.size() != spec.d) throw std::invalid_argument("exact distance: dimension mismatch");
  if (!(delta > 0.0)) throw std::invalid_argument("exact distance: delta must be > 0");
  switch (spec.kind) {
    case ProblemKind::kConstant:
      return 0.0;
    case ProblemKind::kAbsLinear:
      return std::abs(spec.direction.dot(x)) <= delta ? 0.0 : 1.0;
    case ProblemKind::kSawtooth: {
      if (spec.d != 1) return std::nullopt;
      // Kinks sit at multiples of 1/2 and have 0 in their subdifferential.
      const double nearest = 0.5 * std::nearbyint(2.0 * x[0]);
      return std::abs(x[0] - nearest) <= delta ? 0.0 : 1.0;
    }
    case ProblemKind::kQuadraticSmooth:
      return quadratic_hull_distance(spec.curvature, x, delta);
  }
  return std::nullopt;
}

}  // namespace qzo
