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

#ifndef QZO_OBJECTIVES_HPP
#define QZO_OBJECTIVES_HPP

#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Core>

#include "qzo/random.hpp"

namespace qzo {

using Vector = Eigen::VectorXd;
using VectorRef = Eigen::Ref<const Eigen::VectorXd>;

enum class ProblemKind { kAbsLinear, kSawtooth, kQuadraticSmooth, kConstant };

enum class NoiseKind {
  kNone,
  // F(x; xi) = f(x) + r, r uniform on [-s, s]. For the quadratic the offset
  // is linear, <z, x> with z = s * (uniform unit vector), so that the
  // stochastic gradient is grad f(x) + z.
  kAdditiveOffset,
  // Sawtooth only: F(x; xi) = sqrt(d) dist(x_xi, Z), xi uniform over
  // coordinates. Raises L from 1 to sqrt(d).
  kComponentSubsample,
};

/// Parameters of the smooth stochastic-gradient track: mean-square
/// smoothness l and gradient-noise level sigma (E||grad F - grad f||^2 <= sigma^2).
struct SmoothParams {
  double l;
  double sigma;
};

/// A catalog problem.
///
/// Every F(.; xi) is L-Lipschitz on the box |x_i| <= domain_radius, which is
/// unbounded except for the quadratic (only locally Lipschitz).
struct ObjectiveSpec {
  std::string name;
  ProblemKind kind = ProblemKind::kConstant;
  int d = 1;
  double L = 1.0;
  NoiseKind noise_kind = NoiseKind::kNone;
  double noise_scale = 0.0;
  double f_star = 0.0;
  double delta_0 = 0.0;  // f(x0) - f_star
  bool has_closed_f_delta = true;
  std::optional<SmoothParams> smooth_params;

  Vector x0;
  Vector direction;  // abs-linear: unit vector a
  Vector curvature;  // quadratic: diagonal lambda
  double domain_radius = std::numeric_limits<double>::infinity();

  /// Upper bound on E||g_delta||^2, valid for every x and delta. For all
  /// catalog problems the two-point difference is an odd function of each
  /// sphere coordinate, which gives E||g_delta||^2 <= d L^2.
  double g_second_moment_bound = 0.0;
};

/// Randomness of one stochastic evaluation.
struct XiSample {
  double offset = 0.0;
  int component = -1;
  Vector shift;  // quadratic gradient noise z

  bool operator==(const XiSample&) const = default;
};

/// name is one of "abs-linear", "sawtooth", "quadratic-smooth", "constant".
/// noise_scale > 0 selects additive-offset noise, 0 selects none.
ObjectiveSpec catalog_make(std::string_view name, int d, double noise_scale);
ObjectiveSpec catalog_make(std::string_view name, int d, double noise_scale,
                           NoiseKind noise);

/// |<a, x>| with a normalized to unit length.
ObjectiveSpec make_abs_linear(const Vector& a, double noise_scale = 0.0);
/// 0.5 x' diag(lambda) x with gradient noise of norm sigma.
ObjectiveSpec make_quadratic(const Vector& lambda, double sigma = 0.0);

XiSample sample_xi(const ObjectiveSpec& spec, RandomStream& rng);

double eval_F(const ObjectiveSpec& spec, const VectorRef& x, const XiSample& xi);
double eval_f(const ObjectiveSpec& spec, const VectorRef& x);

/// Stochastic gradient for specs with smooth_params.
Vector eval_grad_smooth(const ObjectiveSpec& spec, const VectorRef& x,
                        const XiSample& xi);
/// Exact gradient for specs with smooth_params.
Vector grad_f(const ObjectiveSpec& spec, const VectorRef& x);

std::string_view to_string(NoiseKind kind);
NoiseKind parse_noise_kind(std::string_view text);

}  // namespace qzo

#endif  // QZO_OBJECTIVES_HPP
