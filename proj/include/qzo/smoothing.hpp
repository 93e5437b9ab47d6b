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

#ifndef QZO_SMOOTHING_HPP
#define QZO_SMOOTHING_HPP

#include <cstdint>

#include "qzo/objectives.hpp"
#include "qzo/random.hpp"

namespace qzo {

struct SmoothingParams {
  double delta = 0.0;

  /// Throws std::invalid_argument unless delta > 0 and finite.
  void validate() const;
};

struct SphereDirection {
  Vector w;
};

/// Uniform on the unit sphere in R^d (normalized Gaussian).
SphereDirection sample_sphere(int d, RandomStream& rng);
/// Allocation-free variant; w must already have size d >= 1.
void sample_sphere_into(RandomStream& rng, Eigen::Ref<Vector> w);

/// Uniform in the unit ball in R^d (sphere direction scaled by U^(1/d)).
Vector sample_ball(int d, RandomStream& rng);

/// Scalar c with g_delta(x; w, xi) = c * w, namely
/// (d / (2 delta)) (F(x + delta w; xi) - F(x - delta w; xi)).
/// scratch is resized as needed and reused across calls.
double g_delta_coefficient(const ObjectiveSpec& spec, const VectorRef& x,
                           const SmoothingParams& params, const VectorRef& w,
                           const XiSample& xi, Vector& scratch);

/// The two-point estimator (d / (2 delta)) (F(x + delta w) - F(x - delta w)) w.
Vector g_delta(const ObjectiveSpec& spec, const VectorRef& x,
               const SmoothingParams& params, const SphereDirection& w,
               const XiSample& xi);

struct FDeltaMode {
  enum class Kind { kClosed, kMonteCarlo };
  Kind kind = Kind::kClosed;
  std::int64_t n = 0;

  static FDeltaMode closed() { return {Kind::kClosed, 0}; }
  static FDeltaMode mc(std::int64_t n) { return {Kind::kMonteCarlo, n}; }
};

struct SmoothedValue {
  double value = 0.0;
  double std_error = 0.0;  // 0 in closed mode
};

/// Ball average f_delta(x) = E_u[f(x + delta u)].
SmoothedValue f_delta(const ObjectiveSpec& spec, const VectorRef& x,
                      const SmoothingParams& params, FDeltaMode mode,
                      RandomStream& rng);

/// Exact gradient of f_delta for specs with has_closed_f_delta.
Vector grad_f_delta_exact(const ObjectiveSpec& spec, const VectorRef& x,
                          const SmoothingParams& params);

struct GradReference {
  Vector mean;
  Vector std_error;  // per coordinate
};

/// Mean of n independent g_delta draws with per-coordinate standard errors.
GradReference grad_f_delta_ref(const ObjectiveSpec& spec, const VectorRef& x,
                               const SmoothingParams& params, std::int64_t n,
                               RandomStream& rng);

}  // namespace qzo

#endif  // QZO_SMOOTHING_HPP
