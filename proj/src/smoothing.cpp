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

#include "qzo/smoothing.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "qzo/ball_marginal.hpp"

namespace qzo {

void SmoothingParams::validate() const {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw std::invalid_argument("smoothing radius delta must be positive and finite");
  }
}

void sample_sphere_into(RandomStream& rng, Eigen::Ref<Vector> w) {
  if (w.size() <= 0) throw std::invalid_argument("sphere dimension must be positive");
  while (true) {
    for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = rng.normal();
    const double n = w.norm();
    if (n > 0.0) {
      w /= n;
      return;
    }
  }
}

SphereDirection sample_sphere(int d, RandomStream& rng) {
  if (d <= 0) throw std::invalid_argument("sphere dimension must be positive");
  SphereDirection out{Vector(d)};
  sample_sphere_into(rng, out.w);
  return out;
}

Vector sample_ball(int d, RandomStream& rng) {
  if (d <= 0) throw std::invalid_argument("ball dimension must be positive");
  Vector u(d);
  sample_sphere_into(rng, u);
  u *= std::pow(rng.uniform(), 1.0 / d);
  return u;
}

double g_delta_coefficient(const ObjectiveSpec& spec, const VectorRef& x,
                           const SmoothingParams& params, const VectorRef& w,
                           const XiSample& xi, Vector& scratch) {
  if (x.size() != spec.d || w.size() != spec.d) {
    throw std::invalid_argument("g_delta: dimension mismatch");
  }
  const double delta = params.delta;
  scratch = x + delta * w;
  const double plus = eval_F(spec, scratch, xi);
  scratch = x - delta * w;
  const double minus = eval_F(spec, scratch, xi);
  return spec.d / (2.0 * delta) * (plus - minus);
}

Vector g_delta(const ObjectiveSpec& spec, const VectorRef& x,
               const SmoothingParams& params, const SphereDirection& w,
               const XiSample& xi) {
  params.validate();
  Vector scratch;
  const double c = g_delta_coefficient(spec, x, params, w.w, xi, scratch);
  return c * w.w;
}

namespace {

void require_closed(const ObjectiveSpec& spec) {
  if (!spec.has_closed_f_delta) {
    throw std::invalid_argument("no closed-form smoothed value for " + spec.name);
  }
}

}  // namespace

SmoothedValue f_delta(const ObjectiveSpec& spec, const VectorRef& x,
                      const SmoothingParams& params, FDeltaMode mode,
                      RandomStream& rng) {
  params.validate();
  if (x.size() != spec.d) throw std::invalid_argument("f_delta: dimension mismatch");
  const double delta = params.delta;
  if (mode.kind == FDeltaMode::Kind::kMonteCarlo) {
    if (mode.n < 1) throw std::invalid_argument("f_delta: mc mode needs n >= 1");
    double sum = 0.0;
    double sum_sq = 0.0;
    Vector y(spec.d);
    Vector u(spec.d);
    for (std::int64_t i = 0; i < mode.n; ++i) {
      sample_sphere_into(rng, u);
      y = x + (delta * std::pow(rng.uniform(), 1.0 / spec.d)) * u;
      const double v = eval_f(spec, y);
      sum += v;
      sum_sq += v * v;
    }
    const double n = static_cast<double>(mode.n);
    const double mean = sum / n;
    double se = std::numeric_limits<double>::infinity();
    if (mode.n > 1) {
      const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
      se = std::sqrt(var / n);
    }
    return {mean, se};
  }

  require_closed(spec);
  switch (spec.kind) {
    case ProblemKind::kConstant:
      return {0.0, 0.0};
    case ProblemKind::kAbsLinear:
      return {abs_marginal_average(spec.d, spec.direction.dot(x), delta).value, 0.0};
    case ProblemKind::kSawtooth: {
      double s = 0.0;
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        s += sawtooth_marginal_average(spec.d, x[i], delta).value;
      }
      return {s / std::sqrt(static_cast<double>(spec.d)), 0.0};
    }
    case ProblemKind::kQuadraticSmooth:
      // E[u_i^2] = 1 / (d + 2) for u uniform in the unit ball.
      return {eval_f(spec, x) + delta * delta * spec.curvature.sum() / (2.0 * (spec.d + 2)),
              0.0};
  }
  return {0.0, 0.0};
}

Vector grad_f_delta_exact(const ObjectiveSpec& spec, const VectorRef& x,
                          const SmoothingParams& params) {
  params.validate();
  require_closed(spec);
  if (x.size() != spec.d) throw std::invalid_argument("grad_f_delta: dimension mismatch");
  switch (spec.kind) {
    case ProblemKind::kConstant:
      return Vector::Zero(spec.d);
    case ProblemKind::kAbsLinear:
      return spec.direction *
             abs_marginal_average(spec.d, spec.direction.dot(x), params.delta).derivative;
    case ProblemKind::kSawtooth: {
      Vector g(spec.d);
      const double scale = 1.0 / std::sqrt(static_cast<double>(spec.d));
      for (int i = 0; i < spec.d; ++i) {
        g[i] = scale * sawtooth_marginal_average(spec.d, x[i], params.delta).derivative;
      }
      return g;
    }
    case ProblemKind::kQuadraticSmooth:
      return spec.curvature.cwiseProduct(x);
  }
  return Vector::Zero(spec.d);
}

GradReference grad_f_delta_ref(const ObjectiveSpec& spec, const VectorRef& x,
                               const SmoothingParams& params, std::int64_t n,
                               RandomStream& rng) {
  params.validate();
  if (n < 1) throw std::invalid_argument("grad_f_delta_ref: n must be >= 1");
  if (x.size() != spec.d) throw std::invalid_argument("grad_f_delta_ref: dimension mismatch");
  const int d = spec.d;
  Vector sum = Vector::Zero(d);
  Vector sum_sq = Vector::Zero(d);
  Vector w(d);
  Vector scratch(d);
  for (std::int64_t i = 0; i < n; ++i) {
    sample_sphere_into(rng, w);
    const XiSample xi = sample_xi(spec, rng);
    const double c = g_delta_coefficient(spec, x, params, w, xi, scratch);
    sum += c * w;
    sum_sq += (c * c) * w.cwiseAbs2();
  }
  const double nn = static_cast<double>(n);
  GradReference out;
  out.mean = sum / nn;
  if (n > 1) {
    const Vector var =
        ((sum_sq - nn * out.mean.cwiseAbs2()) / (nn - 1.0)).cwiseMax(0.0);
    out.std_error = (var / nn).cwiseSqrt();
  } else {
    out.std_error = Vector::Constant(d, std::numeric_limits<double>::infinity());
  }
  return out;
}

}  // namespace qzo
