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
#include <numbers>
#include <vector>
#include <stdexcept>

#include "qzo/smoothing.hpp"

using qzo::catalog_make;
using qzo::FDeltaMode;
using qzo::NoiseKind;
using qzo::ObjectiveSpec;
using qzo::RandomStream;
using qzo::SmoothingParams;
using qzo::SphereDirection;
using qzo::Vector;
using qzo::XiSample;

namespace {

Vector uniform_point(int d, double radius, RandomStream& rng) {
  Vector x(d);
  for (int i = 0; i < d; ++i) x[i] = rng.uniform(-radius, radius);
  return x;
}

std::vector<ObjectiveSpec> smoothing_specs(int d) {
  return {catalog_make("constant", d, 0.0), catalog_make("abs-linear", d, 0.0),
          catalog_make("sawtooth", d, 0.0), catalog_make("quadratic-smooth", d, 0.0),
          catalog_make("abs-linear", d, 0.2), catalog_make("sawtooth", d, 0.2),
          catalog_make("sawtooth", d, 0.0, NoiseKind::kComponentSubsample),
          catalog_make("quadratic-smooth", d, 0.5)};
}

// Probe points stay inside the quadratic's Lipschitz box after a delta step.
double probe_radius(const ObjectiveSpec& spec, double delta) {
  return std::isfinite(spec.domain_radius) ? spec.domain_radius - delta : 2.0;
}

double closed_f(const ObjectiveSpec& spec, const Vector& x, double delta) {
  RandomStream unused(0, "unused");
  return qzo::f_delta(spec, x, SmoothingParams{delta}, FDeltaMode::closed(), unused).value;
}

}  // namespace

TEST_CASE("sample_sphere") {
  RandomStream rng(1, "sphere");
  int plus = 0;
  for (int i = 0; i < 10000; ++i) {
    const Vector w = qzo::sample_sphere(1, rng).w;
    REQUIRE(std::abs(w[0]) == 1.0);
    plus += w[0] > 0.0 ? 1 : 0;
  }
  CHECK(std::abs(plus / 10000.0 - 0.5) < 0.02);

  for (int d : {2, 5, 40}) {
    for (int i = 0; i < 1000; ++i) {
      REQUIRE(std::abs(qzo::sample_sphere(d, rng).w.norm() - 1.0) <= 1e-12);
    }
  }

  const int n = 100000;
  Vector sum = Vector::Zero(3);
  for (int i = 0; i < n; ++i) sum += qzo::sample_sphere(3, rng).w;
  for (int k = 0; k < 3; ++k) CHECK(std::abs(sum[k] / n) < 4.0 / std::sqrt(n));

  CHECK_THROWS_AS(qzo::sample_sphere(0, rng), std::invalid_argument);
}

TEST_CASE("sample_ball") {
  RandomStream rng(2, "ball");
  const int n = 100000;
  int inside = 0;
  for (int i = 0; i < n; ++i) {
    const Vector u = qzo::sample_ball(2, rng);
    REQUIRE(u.norm() <= 1.0);
    inside += u.norm() <= 0.5 ? 1 : 0;
  }
  CHECK(std::abs(static_cast<double>(inside) / n - 0.25) < 0.01);

  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += qzo::sample_ball(1, rng)[0];
  CHECK(std::abs(sum / n) < 4.0 * (1.0 / std::sqrt(3.0)) / std::sqrt(n));
}

TEST_CASE("g_delta examples") {
  const auto spec = qzo::make_abs_linear(Vector::Unit(2, 0));
  const Vector x{{5.0, 0.0}};
  const SmoothingParams half{0.5};
  const Vector orth = qzo::g_delta(spec, x, half, SphereDirection{Vector::Unit(2, 1)}, {});
  CHECK(orth.norm() == 0.0);
  const Vector along = qzo::g_delta(spec, x, half, SphereDirection{Vector::Unit(2, 0)}, {});
  CHECK(along[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(along[1] == 0.0);

  const auto saw = catalog_make("sawtooth", 1, 0.0);
  const Vector zero = Vector::Zero(1);
  CHECK(qzo::g_delta(saw, zero, SmoothingParams{0.25}, SphereDirection{Vector::Ones(1)}, {})
            .norm() == 0.0);

  CHECK_THROWS_AS(SmoothingParams{0.0}.validate(), std::invalid_argument);
  CHECK_THROWS_AS(qzo::g_delta(saw, zero, SmoothingParams{-1.0},
                               SphereDirection{Vector::Ones(1)}, {}),
                  std::invalid_argument);
}

TEST_CASE("f_delta examples") {
  RandomStream rng(3, "fdelta");
  SUBCASE("abs-linear away from the kink equals f") {
    const auto spec = qzo::make_abs_linear(Vector{{1.0, 1.0}});
    const Vector x{{2.0, 1.0}};
    CHECK(closed_f(spec, x, 0.5) == doctest::Approx(qzo::eval_f(spec, x)).epsilon(1e-12));
  }
  SUBCASE("quadratic at the origin") {
    const auto spec = qzo::make_quadratic(Vector::Ones(2));
    CHECK(closed_f(spec, Vector::Zero(2), 1.0) == doctest::Approx(0.25).epsilon(1e-14));
    const auto mc = qzo::f_delta(spec, Vector::Zero(2), SmoothingParams{1.0},
                                 FDeltaMode::mc(200000), rng);
    CHECK(std::abs(mc.value - 0.25) <= 4.0 * mc.std_error);
  }
  SUBCASE("sawtooth d=1 at 0 with delta 1") {
    // dist(u, Z) averaged over u uniform on [-1, 1] is 1/4.
    const auto spec = catalog_make("sawtooth", 1, 0.0);
    CHECK(closed_f(spec, Vector::Zero(1), 1.0) == doctest::Approx(0.25).epsilon(1e-14));
    const int m = 100000;
    double quad = 0.0;
    for (int i = 0; i < m; ++i) {
      const double u = -1.0 + (i + 0.5) * 2.0 / m;
      quad += std::abs(u - std::nearbyint(u));
    }
    CHECK(quad / m == doctest::Approx(0.25).epsilon(1e-8));
    const auto mc = qzo::f_delta(spec, Vector::Zero(1), SmoothingParams{1.0},
                                 FDeltaMode::mc(200000), rng);
    CHECK(std::abs(mc.value - 0.25) <= 4.0 * mc.std_error);
  }
  SUBCASE("closed form on an unsupported spec throws") {
    auto spec = catalog_make("sawtooth", 2, 0.0);
    spec.has_closed_f_delta = false;
    CHECK_THROWS_AS(closed_f(spec, Vector::Zero(2), 0.1), std::invalid_argument);
    CHECK_NOTHROW(qzo::f_delta(spec, Vector::Zero(2), SmoothingParams{0.1},
                               FDeltaMode::mc(10), rng));
  }
}

TEST_CASE("closed-form f_delta matches Monte Carlo") {
  RandomStream rng(4, "fdelta-mc");
  for (int d : {1, 2, 5}) {
    for (const auto& spec : smoothing_specs(d)) {
      for (double delta : {0.1, 0.7}) {
        for (int p = 0; p < 4; ++p) {
          CAPTURE(spec.name);
          CAPTURE(d);
          const Vector x = uniform_point(d, probe_radius(spec, delta), rng);
          const auto mc = qzo::f_delta(spec, x, SmoothingParams{delta},
                                       FDeltaMode::mc(40000), rng);
          REQUIRE(std::abs(closed_f(spec, x, delta) - mc.value) <= 4.5 * mc.std_error + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("grad_f_delta_ref examples") {
  RandomStream rng(5, "gref");
  const auto constant = catalog_make("constant", 3, 0.0);
  for (std::int64_t n : {1, 10, 1000}) {
    CHECK(qzo::grad_f_delta_ref(constant, Vector::Ones(3), SmoothingParams{0.3}, n, rng)
              .mean.norm() == 0.0);
  }
  const auto abs = qzo::make_abs_linear(Vector::Unit(2, 0));
  const auto ref = qzo::grad_f_delta_ref(abs, Vector{{5.0, 0.0}}, SmoothingParams{0.5},
                                         100000, rng);
  CHECK(std::abs(ref.mean[0] - 1.0) <= 4.0 * ref.std_error[0]);
  CHECK(std::abs(ref.mean[1]) <= 4.0 * ref.std_error[1]);

  const auto saw = catalog_make("sawtooth", 1, 0.0);
  const auto sref = qzo::grad_f_delta_ref(saw, Vector::Zero(1), SmoothingParams{0.25},
                                          100000, rng);
  CHECK(std::abs(sref.mean[0]) <= 4.0 * sref.std_error[0] + 1e-15);
}

TEST_CASE("surrogate value bounds") {
  RandomStream rng(6, "bounds");
  for (int d : {1, 3, 8}) {
    for (const auto& spec : smoothing_specs(d)) {
      for (int i = 0; i < 1000 / 8; ++i) {
        const double delta = rng.uniform(0.01, 0.5);
        const double radius = probe_radius(spec, delta);
        const Vector x = uniform_point(d, radius, rng);
        const Vector y = uniform_point(d, radius, rng);
        const double fx = closed_f(spec, x, delta);
        REQUIRE(std::abs(fx - qzo::eval_f(spec, x)) <= delta * spec.L + 1e-12);
        REQUIRE(std::abs(fx - closed_f(spec, y, delta)) <= spec.L * (x - y).norm() + 1e-12);
      }
    }
  }
}

TEST_CASE("surrogate gradient is sqrt(d) L / delta Lipschitz") {
  RandomStream rng(7, "grad-lipschitz");
  for (int d : {1, 2, 8}) {
    for (const auto& spec : smoothing_specs(d)) {
      const double delta = 0.2;
      const double L_delta = std::sqrt(static_cast<double>(d)) * spec.L / delta;
      const double radius = probe_radius(spec, delta);
      // Exact gradients on many pairs, including close ones near kinks.
      for (int i = 0; i < 1000; ++i) {
        const Vector x = uniform_point(d, radius, rng);
        Vector y = uniform_point(d, radius, rng);
        if (i % 2 == 0) y = (x + 0.05 * (y - x)).eval();
        const Vector gx = qzo::grad_f_delta_exact(spec, x, SmoothingParams{delta});
        const Vector gy = qzo::grad_f_delta_exact(spec, y, SmoothingParams{delta});
        REQUIRE((gx - gy).norm() <= L_delta * (x - y).norm() + 1e-12);
      }
      // Monte Carlo references, with the combined standard error as slack.
      for (int i = 0; i < 3; ++i) {
        const Vector x = uniform_point(d, radius, rng);
        const Vector y = (x + 0.1 * uniform_point(d, 1.0, rng)).eval();
        const auto rx = qzo::grad_f_delta_ref(spec, x, SmoothingParams{delta}, 20000, rng);
        const auto ry = qzo::grad_f_delta_ref(spec, y, SmoothingParams{delta}, 20000, rng);
        const double se = std::sqrt(rx.std_error.squaredNorm() + ry.std_error.squaredNorm());
        REQUIRE((rx.mean - ry.mean).norm() <= L_delta * (x - y).norm() + 5.0 * se + 1e-12);
      }
    }
  }
}

TEST_CASE("gradient references agree with exact gradients and central differences") {
  RandomStream rng(8, "grad-unbiased");
  for (int d : {1, 2, 5}) {
    for (const auto& spec : smoothing_specs(d)) {
      for (int p = 0; p < 20 / 4; ++p) {
        CAPTURE(spec.name);
        CAPTURE(d);
        const double delta = 0.3;
        const Vector x = uniform_point(d, probe_radius(spec, delta), rng);
        const Vector exact = qzo::grad_f_delta_exact(spec, x, SmoothingParams{delta});
        const double h = 1e-5;
        for (int k = 0; k < d; ++k) {
          const Vector e = Vector::Unit(d, k) * h;
          const double cd = (closed_f(spec, x + e, delta) - closed_f(spec, x - e, delta)) / (2 * h);
          REQUIRE(std::abs(cd - exact[k]) <= 1e-6 * (1.0 + std::abs(exact[k])));
        }
        const auto ref = qzo::grad_f_delta_ref(spec, x, SmoothingParams{delta}, 50000, rng);
        for (int k = 0; k < d; ++k) {
          REQUIRE(std::abs(ref.mean[k] - exact[k]) <= 4.5 * ref.std_error[k] + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("variance bound") {
  RandomStream rng(9, "variance");
  const double c = 16.0 * std::sqrt(2.0 * std::numbers::pi);
  for (int d : {2, 8, 32}) {
    for (const auto& spec : smoothing_specs(d)) {
      const double delta = 0.1;
      const Vector x = uniform_point(d, probe_radius(spec, delta), rng);
      const Vector mean = qzo::grad_f_delta_exact(spec, x, SmoothingParams{delta});
      const int n = 10000;
      double acc = 0.0;
      double raw = 0.0;
      for (int i = 0; i < n; ++i) {
        const auto w = qzo::sample_sphere(d, rng);
        const XiSample xi = qzo::sample_xi(spec, rng);
        const Vector g = qzo::g_delta(spec, x, SmoothingParams{delta}, w, xi);
        acc += (g - mean).squaredNorm();
        raw += g.squaredNorm();
      }
      CHECK(acc / n <= c * d * spec.L * spec.L);
      // Tighter certified bound used by the harness batch rule.
      CHECK(raw / n <= spec.g_second_moment_bound * 1.05 + 1e-12);
    }
  }
}

TEST_CASE("mean-square smoothness") {
  RandomStream rng(10, "ms-smooth");
  for (int d : {1, 4}) {
    for (const auto& spec : smoothing_specs(d)) {
      const double delta = 0.2;
      const double radius = probe_radius(spec, delta);
      const double bound = d * d * spec.L * spec.L / (delta * delta);
      for (int i = 0; i < 1000 / 8; ++i) {
        const Vector x = uniform_point(d, radius, rng);
        Vector y = (x + rng.uniform(0.0, 0.3) * uniform_point(d, 1.0, rng)).eval();
        y = y.cwiseMax(-radius).cwiseMin(radius);
        double acc = 0.0;
        const int draws = 50;
        for (int k = 0; k < draws; ++k) {
          const auto w = qzo::sample_sphere(d, rng);
          const XiSample xi = qzo::sample_xi(spec, rng);
          acc += (qzo::g_delta(spec, x, SmoothingParams{delta}, w, xi) -
                  qzo::g_delta(spec, y, SmoothingParams{delta}, w, xi))
                     .squaredNorm();
        }
        REQUIRE(acc / draws <= bound * (x - y).squaredNorm() + 1e-12);
      }
    }
  }
}
