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

#include "qzo/fixed_point.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qzo {

namespace {

using i128 = __int128;

std::int64_t narrow(i128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() ||
      v < std::numeric_limits<std::int64_t>::min()) {
    throw std::overflow_error("fixed-point overflow");
  }
  return static_cast<std::int64_t>(v);
}

}  // namespace

void check_frac_bits(int frac_bits) {
  if (frac_bits < 1 || frac_bits > 52) {
    throw std::invalid_argument("frac_bits must lie in [1, 52]");
  }
}

std::int64_t fx_encode(double value, int frac_bits) {
  check_frac_bits(frac_bits);
  const double scaled = std::nearbyint(std::ldexp(value, frac_bits));
  if (!std::isfinite(scaled) || std::abs(scaled) >= 0x1.0p63) {
    throw std::overflow_error("fixed-point overflow");
  }
  return static_cast<std::int64_t>(scaled);
}

double fx_decode(std::int64_t raw, int frac_bits) {
  return std::ldexp(static_cast<double>(raw), -frac_bits);
}

std::int64_t fx_add(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("fixed-point overflow");
  return out;
}

std::int64_t fx_sub(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_sub_overflow(a, b, &out)) throw std::overflow_error("fixed-point overflow");
  return out;
}

std::int64_t fx_mul_floor(std::int64_t a, std::int64_t b, int frac_bits) {
  check_frac_bits(frac_bits);
  // Arithmetic right shift of a signed value rounds toward -infinity.
  return narrow((static_cast<i128>(a) * b) >> frac_bits);
}

std::int64_t fx_mul_round(std::int64_t a, std::int64_t b, int frac_bits) {
  check_frac_bits(frac_bits);
  const i128 half = static_cast<i128>(1) << (frac_bits - 1);
  return narrow((static_cast<i128>(a) * b + half) >> frac_bits);
}

Vector FixedVector::to_vector() const {
  Vector v(static_cast<Eigen::Index>(raw.size()));
  for (std::size_t i = 0; i < raw.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = fx_decode(raw[i], frac_bits);
  }
  return v;
}

namespace {

// Registers of one U_g pass over fixed-point x and w.
std::vector<std::int64_t> u_g_pass(const ObjectiveSpec& spec,
                                   const std::vector<std::int64_t>& x,
                                   const std::vector<std::int64_t>& w, std::int64_t delta,
                                   std::int64_t scale, const XiSample& xi, int frac_bits,
                                   int& uf_queries) {
  const std::size_t d = x.size();
  std::vector<std::int64_t> minus(d), plus(d);
  for (std::size_t i = 0; i < d; ++i) {
    const std::int64_t step = fx_mul_round(delta, w[i], frac_bits);
    minus[i] = fx_sub(x[i], step);  // A-
    plus[i] = fx_add(x[i], step);   // A+
  }
  // U_F: the oracle writes F at the register contents into a fresh register.
  auto oracle = [&](const std::vector<std::int64_t>& point) {
    Vector p(static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i) {
      p[static_cast<Eigen::Index>(i)] = fx_decode(point[i], frac_bits);
    }
    ++uf_queries;
    return fx_encode(eval_F(spec, p, xi), frac_bits);
  };
  const std::int64_t f_minus = oracle(minus);
  const std::int64_t f_plus = oracle(plus);
  const std::int64_t diff = fx_sub(f_plus, f_minus);             // sub
  const std::int64_t coeff = fx_mul_floor(scale, diff, frac_bits);  // Fmul
  std::vector<std::int64_t> out(d);
  for (std::size_t i = 0; i < d; ++i) out[i] = fx_mul_floor(coeff, w[i], frac_bits);  // U_mul
  return out;
}

std::vector<std::int64_t> encode_all(const VectorRef& v, int frac_bits) {
  std::vector<std::int64_t> out(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out[static_cast<std::size_t>(i)] = fx_encode(v[i], frac_bits);
  }
  return out;
}

void check_inputs(const ObjectiveSpec& spec, const VectorRef& x, const VectorRef& w,
                  const SmoothingParams& params, int frac_bits) {
  check_frac_bits(frac_bits);
  params.validate();
  if (x.size() != spec.d || w.size() != spec.d) {
    throw std::invalid_argument("pipeline: dimension mismatch");
  }
}

}  // namespace

FixedVector emulate_U_g(const ObjectiveSpec& spec, const VectorRef& x,
                        const SmoothingParams& params, const XiSample& xi,
                        const VectorRef& w, int frac_bits) {
  check_inputs(spec, x, w, params, frac_bits);
  FixedVector out;
  out.frac_bits = frac_bits;
  const std::int64_t delta = fx_encode(params.delta, frac_bits);
  const std::int64_t scale = fx_encode(spec.d / (2.0 * params.delta), frac_bits);
  out.raw = u_g_pass(spec, encode_all(x, frac_bits), encode_all(w, frac_bits), delta, scale,
                     xi, frac_bits, out.uf_queries);
  return out;
}

FixedVector emulate_V_g(const ObjectiveSpec& spec, const VectorRef& x, const VectorRef& y,
                        const SmoothingParams& params, const XiSample& xi,
                        const VectorRef& w, int frac_bits) {
  check_inputs(spec, x, w, params, frac_bits);
  if (y.size() != spec.d) throw std::invalid_argument("pipeline: dimension mismatch");
  FixedVector out;
  out.frac_bits = frac_bits;
  const std::int64_t delta = fx_encode(params.delta, frac_bits);
  const std::int64_t scale = fx_encode(spec.d / (2.0 * params.delta), frac_bits);
  const std::vector<std::int64_t> wf = encode_all(w, frac_bits);
  const std::vector<std::int64_t> gx =
      u_g_pass(spec, encode_all(x, frac_bits), wf, delta, scale, xi, frac_bits, out.uf_queries);
  const std::vector<std::int64_t> gy =
      u_g_pass(spec, encode_all(y, frac_bits), wf, delta, scale, xi, frac_bits, out.uf_queries);
  out.raw.resize(gx.size());
  for (std::size_t i = 0; i < gx.size(); ++i) out.raw[i] = fx_sub(gx[i], gy[i]);
  return out;
}

double emulation_tolerance(const ObjectiveSpec& spec, const VectorRef& x,
                           const SmoothingParams& params, int frac_bits) {
  check_frac_bits(frac_bits);
  return std::ldexp(1.0, 1 - frac_bits) * (spec.d / (2.0 * params.delta)) *
         (1.0 + x.norm() + spec.L);
}

}  // namespace qzo
