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


#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>
#include <stdexcept>

#include "qzo/fixed_point.hpp"

using qzo::catalog_make;
using qzo::NoiseKind;
using qzo::ObjectiveSpec;
using qzo::RandomStream;
using qzo::SmoothingParams;
using qzo::Vector;

namespace {

struct Case {
  ObjectiveSpec spec;
  Vector x;
  Vector y;
  Vector w;
  qzo::XiSample xi;
  double delta;
};

Case random_case(RandomStream& rng) {
  const char* names[] = {"constant", "abs-linear", "sawtooth", "quadratic-smooth"};
  const int d = 1 + static_cast<int>(rng.below(8));
  const char* name = names[rng.below(4)];
  const double noise = rng.bernoulli(0.5) ? 0.2 : 0.0;
  ObjectiveSpec spec = catalog_make(name, d, noise);
  if (spec.kind == qzo::ProblemKind::kSawtooth && rng.bernoulli(0.3)) {
    spec = catalog_make(name, d, 0.0, NoiseKind::kComponentSubsample);
  }
  const double delta = rng.uniform(0.01, 0.5);
  const double radius = std::isfinite(spec.domain_radius) ? spec.domain_radius - delta : 5.0;
  Vector x(d), y(d);
  for (int i = 0; i < d; ++i) {
    x[i] = rng.uniform(-radius, radius);
    y[i] = rng.uniform(-radius, radius);
  }
  const Vector w = qzo::sample_sphere(d, rng).w;
  const auto xi = qzo::sample_xi(spec, rng);
  return {spec, x, y, w, xi, delta};
}

double max_error(const Case& c, int frac_bits) {
  const SmoothingParams params{c.delta};
  const Vector fx = qzo::emulate_U_g(c.spec, c.x, params, c.xi, c.w, frac_bits).to_vector();
  const Vector ref = qzo::g_delta(c.spec, c.x, params, qzo::SphereDirection{c.w}, c.xi);
  return (fx - ref).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("fixed-point primitives") {
  CHECK(qzo::fx_encode(1.5, 4) == 24);
  CHECK(qzo::fx_decode(24, 4) == 1.5);
  CHECK(qzo::fx_encode(-0.03125, 4) == 0);  // ties to even
  CHECK(qzo::fx_mul_floor(qzo::fx_encode(1.5, 8), qzo::fx_encode(-0.5, 8), 8) ==
        qzo::fx_encode(-0.75, 8));
  CHECK(qzo::fx_mul_floor(1, -1, 4) == -1);
  CHECK(qzo::fx_mul_round(1, -1, 4) == 0);
  CHECK(qzo::fx_mul_round(8, 1, 4) == 1);
  CHECK_THROWS_AS(qzo::fx_encode(1e10, 32), std::overflow_error);
  CHECK_THROWS_AS(qzo::fx_encode(std::numeric_limits<double>::quiet_NaN(), 32),
                  std::overflow_error);
  CHECK_THROWS_AS(qzo::fx_add(std::numeric_limits<std::int64_t>::max(), 1), std::overflow_error);
  CHECK_THROWS_AS(qzo::fx_sub(std::numeric_limits<std::int64_t>::min(), 1), std::overflow_error);
  CHECK_THROWS_AS(qzo::fx_mul_floor(std::int64_t{1} << 62, std::int64_t{1} << 62, 8),
                  std::overflow_error);
  CHECK_THROWS_AS(qzo::check_frac_bits(0), std::invalid_argument);
  CHECK_THROWS_AS(qzo::check_frac_bits(53), std::invalid_argument);
}

TEST_CASE("emulate_U_g examples") {
  const auto abs = qzo::make_abs_linear(Vector::Unit(2, 0));
  const auto out = qzo::emulate_U_g(abs, Vector{{5.0, 0.0}}, SmoothingParams{0.5}, {},
                                    Vector::Unit(2, 0), 32);
  CHECK(out.uf_queries == 2);
  const Vector v = out.to_vector();
  CHECK(std::abs(v[0] - 2.0) <= 1e-6);
  CHECK(std::abs(v[1]) <= 1e-6);

  const auto constant = catalog_make("constant", 3, 0.0);
  const auto zero = qzo::emulate_U_g(constant, Vector::Constant(3, 0.3), SmoothingParams{0.1},
                                     {}, Vector::Unit(3, 1), 32);
  for (auto r : zero.raw) CHECK(r == 0);

  CHECK_THROWS_AS(qzo::emulate_U_g(abs, Vector{{1e10, 0.0}}, SmoothingParams{0.5}, {},
                                   Vector::Unit(2, 0), 32),
                  std::overflow_error);
}

TEST_CASE("emulate_U_g stays within the fixed-point bound") {
  RandomStream rng(1, "fixed");
  for (int i = 0; i < 1000; ++i) {
    const Case c = random_case(rng);
    const double bound = qzo::emulation_tolerance(c.spec, c.x, SmoothingParams{c.delta}, 32);
    REQUIRE(max_error(c, 32) <= bound);
  }
}

TEST_CASE("the bound halves per extra fractional bit") {
  RandomStream rng(2, "halving");
  for (int i = 0; i < 100; ++i) {
    const Case c = random_case(rng);
    const SmoothingParams params{c.delta};
    for (int f : {12, 20, 28, 36}) {
      const double b0 = qzo::emulation_tolerance(c.spec, c.x, params, f);
      const double b1 = qzo::emulation_tolerance(c.spec, c.x, params, f + 1);
      REQUIRE(b1 == doctest::Approx(b0 / 2.0).epsilon(1e-14));
      REQUIRE(max_error(c, f) <= b0);
      REQUIRE(max_error(c, f + 1) <= b1);
    }
  }
}

TEST_CASE("emulate_V_g") {
  RandomStream rng(3, "vg");
  for (int i = 0; i < 200; ++i) {
    const Case c = random_case(rng);
    const SmoothingParams params{c.delta};
    const auto same = qzo::emulate_V_g(c.spec, c.x, c.x, params, c.xi, c.w, 32);
    for (auto r : same.raw) REQUIRE(r == 0);
    CHECK(same.uf_queries == 4);

    const auto v = qzo::emulate_V_g(c.spec, c.x, c.y, params, c.xi, c.w, 32);
    REQUIRE(v.uf_queries == 4);
    const auto ux = qzo::emulate_U_g(c.spec, c.x, params, c.xi, c.w, 32);
    const auto uy = qzo::emulate_U_g(c.spec, c.y, params, c.xi, c.w, 32);
    REQUIRE(ux.uf_queries == 2);
    const double tol = 2.0 * qzo::emulation_tolerance(c.spec, c.x, params, 32);
    REQUIRE((v.to_vector() - (ux.to_vector() - uy.to_vector())).cwiseAbs().maxCoeff() <= tol);
    const Vector ref = qzo::g_delta(c.spec, c.x, params, qzo::SphereDirection{c.w}, c.xi) -
                       qzo::g_delta(c.spec, c.y, params, qzo::SphereDirection{c.w}, c.xi);
    const double tol_ref = qzo::emulation_tolerance(c.spec, c.x, params, 32) +
                           qzo::emulation_tolerance(c.spec, c.y, params, 32);
    REQUIRE((v.to_vector() - ref).cwiseAbs().maxCoeff() <= tol_ref);
  }
}
