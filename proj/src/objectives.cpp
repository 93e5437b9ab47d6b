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

#include "qzo/objectives.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qzo {

namespace {

double dist_to_integer(double s) { return std::abs(s - std::nearbyint(s)); }

void check_dim(const ObjectiveSpec& spec, const VectorRef& x) {
  if (x.size() != spec.d) {
    throw std::invalid_argument("dimension mismatch: expected " + std::to_string(spec.d) +
                                ", got " + std::to_string(x.size()));
  }
}

void check_positive_dim(int d) {
  if (d <= 0) throw std::invalid_argument("dimension must be positive");
}

ObjectiveSpec make_constant(int d, double noise_scale) {
  ObjectiveSpec spec;
  spec.name = "constant";
  spec.kind = ProblemKind::kConstant;
  spec.d = d;
  // Any L > 0 bounds a constant; 1 keeps derived step sizes well scaled.
  spec.L = 1.0;
  spec.noise_kind = noise_scale > 0.0 ? NoiseKind::kAdditiveOffset : NoiseKind::kNone;
  spec.noise_scale = noise_scale;
  spec.x0 = Vector::Zero(d);
  spec.f_star = 0.0;
  spec.delta_0 = 0.0;
  spec.g_second_moment_bound = 0.0;
  return spec;
}

ObjectiveSpec make_sawtooth(int d, double noise_scale, NoiseKind noise) {
  ObjectiveSpec spec;
  spec.name = "sawtooth";
  spec.kind = ProblemKind::kSawtooth;
  spec.d = d;
  spec.noise_kind = noise;
  spec.noise_scale = noise == NoiseKind::kComponentSubsample ? 0.0 : noise_scale;
  spec.L = noise == NoiseKind::kComponentSubsample ? std::sqrt(static_cast<double>(d)) : 1.0;
  // 0.5 in every coordinate is a symmetric local maximum where every
  // two-point difference vanishes; 0.4 keeps the delta-ball on one linear piece.
  spec.x0 = Vector::Constant(d, 0.4);
  spec.f_star = 0.0;
  spec.delta_0 = 0.4 * std::sqrt(static_cast<double>(d));
  spec.g_second_moment_bound = d * spec.L * spec.L;
  return spec;
}

}  // namespace

ObjectiveSpec make_abs_linear(const Vector& a, double noise_scale) {
  check_positive_dim(static_cast<int>(a.size()));
  const double norm = a.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw std::invalid_argument("abs-linear direction must be a nonzero finite vector");
  }
  if (noise_scale < 0.0) throw std::invalid_argument("noise_scale must be >= 0");
  const int d = static_cast<int>(a.size());
  ObjectiveSpec spec;
  spec.name = "abs-linear";
  spec.kind = ProblemKind::kAbsLinear;
  spec.d = d;
  spec.L = 1.0;
  spec.noise_kind = noise_scale > 0.0 ? NoiseKind::kAdditiveOffset : NoiseKind::kNone;
  spec.noise_scale = noise_scale;
  spec.direction = a / norm;
  spec.x0 = Vector::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));
  spec.f_star = 0.0;
  spec.delta_0 = std::abs(spec.direction.dot(spec.x0));
  spec.g_second_moment_bound = d * spec.L * spec.L;
  return spec;
}

ObjectiveSpec make_quadratic(const Vector& lambda, double sigma) {
  check_positive_dim(static_cast<int>(lambda.size()));
  if ((lambda.array() <= 0.0).any()) {
    throw std::invalid_argument("quadratic curvatures must be positive");
  }
  if (sigma < 0.0) throw std::invalid_argument("sigma must be >= 0");
  const int d = static_cast<int>(lambda.size());
  ObjectiveSpec spec;
  spec.name = "quadratic-smooth";
  spec.kind = ProblemKind::kQuadraticSmooth;
  spec.d = d;
  spec.noise_kind = sigma > 0.0 ? NoiseKind::kAdditiveOffset : NoiseKind::kNone;
  spec.noise_scale = sigma;
  spec.curvature = lambda;
  const double l = lambda.maxCoeff();
  spec.smooth_params = SmoothParams{l, sigma};
  // On the box |x_i| <= R: |grad F| <= |diag(lambda) x| + |z| <= l R sqrt(d) + sigma.
  // R = 1.5 covers x +/- delta w for iterates in the unit box and delta <= 0.5.
  spec.domain_radius = 1.5;
  spec.L = l * spec.domain_radius * std::sqrt(static_cast<double>(d)) + sigma;
  spec.x0 = Vector::Ones(d);
  spec.f_star = 0.0;
  spec.delta_0 = 0.5 * lambda.sum();
  spec.g_second_moment_bound = d * spec.L * spec.L;
  return spec;
}

ObjectiveSpec catalog_make(std::string_view name, int d, double noise_scale) {
  return catalog_make(name, d, noise_scale,
                      noise_scale > 0.0 ? NoiseKind::kAdditiveOffset : NoiseKind::kNone);
}

ObjectiveSpec catalog_make(std::string_view name, int d, double noise_scale,
                           NoiseKind noise) {
  check_positive_dim(d);
  if (noise_scale < 0.0) throw std::invalid_argument("noise_scale must be >= 0");
  if (noise == NoiseKind::kComponentSubsample && name != "sawtooth") {
    throw std::invalid_argument("component-subsample noise is only defined for sawtooth");
  }
  if (noise == NoiseKind::kAdditiveOffset && noise_scale == 0.0) noise = NoiseKind::kNone;
  if (noise == NoiseKind::kNone) noise_scale = 0.0;

  if (name == "constant") {
    return make_constant(d, noise_scale);
  }
  if (name == "sawtooth") {
    return make_sawtooth(d, noise_scale, noise);
  }
  if (name == "abs-linear") {
    return make_abs_linear(Vector::Ones(d), noise_scale);
  }
  if (name == "quadratic-smooth") {
    Vector lambda(d);
    for (int i = 0; i < d; ++i) {
      lambda[i] = d == 1 ? 1.0 : 1.0 + static_cast<double>(i) / (d - 1);
    }
    return make_quadratic(lambda, noise_scale);
  }
  throw std::invalid_argument("unknown problem: " + std::string(name));
}

XiSample sample_xi(const ObjectiveSpec& spec, RandomStream& rng) {
  XiSample xi;
  switch (spec.noise_kind) {
    case NoiseKind::kNone:
      break;
    case NoiseKind::kAdditiveOffset:
      if (spec.kind == ProblemKind::kQuadraticSmooth) {
        Vector z(spec.d);
        for (int i = 0; i < spec.d; ++i) z[i] = rng.normal();
        const double n = z.norm();
        xi.shift = n > 0.0 ? Vector(spec.noise_scale * z / n) : Vector::Zero(spec.d);
      } else {
        xi.offset = rng.uniform(-spec.noise_scale, spec.noise_scale);
      }
      break;
    case NoiseKind::kComponentSubsample:
      xi.component = static_cast<int>(rng.below(static_cast<std::uint64_t>(spec.d)));
      break;
  }
  return xi;
}

double eval_f(const ObjectiveSpec& spec, const VectorRef& x) {
  check_dim(spec, x);
  switch (spec.kind) {
    case ProblemKind::kConstant:
      return 0.0;
    case ProblemKind::kAbsLinear:
      return std::abs(spec.direction.dot(x));
    case ProblemKind::kSawtooth: {
      double s = 0.0;
      for (Eigen::Index i = 0; i < x.size(); ++i) s += dist_to_integer(x[i]);
      return s / std::sqrt(static_cast<double>(spec.d));
    }
    case ProblemKind::kQuadraticSmooth:
      return 0.5 * x.dot(spec.curvature.cwiseProduct(x));
  }
  return 0.0;
}

double eval_F(const ObjectiveSpec& spec, const VectorRef& x, const XiSample& xi) {
  check_dim(spec, x);
  if (spec.noise_kind == NoiseKind::kComponentSubsample) {
    if (xi.component < 0 || xi.component >= spec.d) {
      throw std::invalid_argument("xi sample carries no valid component index");
    }
    return std::sqrt(static_cast<double>(spec.d)) * dist_to_integer(x[xi.component]);
  }
  double value = eval_f(spec, x);
  if (spec.noise_kind == NoiseKind::kAdditiveOffset) {
    if (spec.kind == ProblemKind::kQuadraticSmooth) {
      if (xi.shift.size() == spec.d) value += xi.shift.dot(x);
    } else {
      value += xi.offset;
    }
  }
  return value;
}

Vector grad_f(const ObjectiveSpec& spec, const VectorRef& x) {
  check_dim(spec, x);
  if (!spec.smooth_params) {
    throw std::invalid_argument("grad_f requires a smooth spec: " + spec.name);
  }
  return spec.curvature.cwiseProduct(x);
}

Vector eval_grad_smooth(const ObjectiveSpec& spec, const VectorRef& x,
                        const XiSample& xi) {
  Vector g = grad_f(spec, x);
  if (xi.shift.size() == spec.d) g += xi.shift;
  return g;
}

std::string_view to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::kNone:
      return "none";
    case NoiseKind::kAdditiveOffset:
      return "additive-offset";
    case NoiseKind::kComponentSubsample:
      return "component-subsample";
  }
  return "none";
}

NoiseKind parse_noise_kind(std::string_view text) {
  if (text == "none") return NoiseKind::kNone;
  if (text == "additive-offset") return NoiseKind::kAdditiveOffset;
  if (text == "component-subsample") return NoiseKind::kComponentSubsample;
  throw std::invalid_argument("unknown noise kind: " + std::string(text));
}

}  // namespace qzo
