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

#ifndef QZO_FIXED_POINT_HPP
#define QZO_FIXED_POINT_HPP

#include <cstdint>
#include <vector>

#include "qzo/objectives.hpp"
#include "qzo/smoothing.hpp"

namespace qzo {

// Signed two's-complement fixed point: value = raw * 2^-frac_bits. Every
// operation throws std::overflow_error instead of wrapping.

void check_frac_bits(int frac_bits);

/// Round to nearest.
std::int64_t fx_encode(double value, int frac_bits);
double fx_decode(std::int64_t raw, int frac_bits);
std::int64_t fx_add(std::int64_t a, std::int64_t b);
std::int64_t fx_sub(std::int64_t a, std::int64_t b);
/// floor(a * b * 2^-frac_bits) in raw units.
std::int64_t fx_mul_floor(std::int64_t a, std::int64_t b, int frac_bits);
/// Round-to-nearest product.
std::int64_t fx_mul_round(std::int64_t a, std::int64_t b, int frac_bits);

struct FixedVector {
  std::vector<std::int64_t> raw;
  int frac_bits = 32;
  int uf_queries = 0;  // U_F invocations made by the pipeline

  Vector to_vector() const;
};

/// Reversible pipeline for g_delta(x; w, xi):
/// A-/A+ form x -/+ delta w, two U_F calls write F at both points, sub takes
/// the difference, Fmul scales by d / (2 delta) (floor), and one U_mul per
/// coordinate multiplies by w_i (floor).
FixedVector emulate_U_g(const ObjectiveSpec& spec, const VectorRef& x,
                        const SmoothingParams& params, const XiSample& xi,
                        const VectorRef& w, int frac_bits = 32);

/// g_delta(x; w, xi) - g_delta(y; w, xi) by two U_g pipelines and a final sub.
FixedVector emulate_V_g(const ObjectiveSpec& spec, const VectorRef& x, const VectorRef& y,
                        const SmoothingParams& params, const XiSample& xi,
                        const VectorRef& w, int frac_bits = 32);

/// Per-coordinate tolerance 2^(1 - frac_bits) (d / (2 delta)) (1 + |x| + L).
double emulation_tolerance(const ObjectiveSpec& spec, const VectorRef& x,
                           const SmoothingParams& params, int frac_bits);

}  // namespace qzo

#endif  // QZO_FIXED_POINT_HPP
