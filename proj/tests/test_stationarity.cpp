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
#include <stdexcept>

#include "qzo/stationarity.hpp"

using qzo::catalog_make;
using qzo::RandomStream;
using qzo::SmoothingParams;
using qzo::Vector;
using qzo::Verdict;

TEST_CASE("goldstein_residual examples") {
  RandomStream rng(1, "residual");
  const auto constant = catalog_make("constant", 3, 0.0);
  const auto c = qzo::goldstein_residual(constant, Vector::Ones(3), SmoothingParams{0.1}, 1000,
                                         0.95, rng);
  CHECK(c.estimate == 0.0);
  CHECK(c.exact.value() == 0.0);

  const auto abs = qzo::make_abs_linear(Vector::Unit(2, 0));
  const auto r = qzo::goldstein_residual(abs, Vector{{5.0, 1.0}}, SmoothingParams{0.1}, 100000,
                                         0.95, rng);
  CHECK(std::abs(r.estimate - 1.0) <= r.half_width);
  CHECK(r.half_width > 0.0);
  CHECK(r.exact.value() == 1.0);

  const auto saw = catalog_make("sawtooth", 1, 0.0);
  const auto s = qzo::goldstein_residual(saw, Vector::Zero(1), SmoothingParams{0.25}, 100000,
                                         0.95, rng);
  CHECK(s.estimate <= s.half_width + 1e-15);

  CHECK_THROWS_AS(qzo::goldstein_residual(saw, Vector::Zero(1), SmoothingParams{0.25}, 1, 0.95,
                                          rng),
                  std::invalid_argument);
  CHECK_THROWS_AS(qzo::goldstein_residual(saw, Vector::Zero(1), SmoothingParams{0.25}, 10, 1.0,
                                          rng),
                  std::invalid_argument);
}

TEST_CASE("verify_stationary examples") {
  RandomStream rng(2, "verify");
  const auto constant = catalog_make("constant", 2, 0.0);
  for (double eps : {1.0, 0.01}) {
    CHECK(qzo::verify_stationary(constant, Vector::Ones(2), SmoothingParams{0.1}, eps, 0.95, rng)
              .verdict == Verdict::kAccepted);
  }
  const auto abs = qzo::make_abs_linear(Vector::Unit(2, 0));
  CHECK(qzo::verify_stationary(abs, Vector{{5.0, 0.0}}, SmoothingParams{0.1}, 0.5, 0.95, rng)
            .verdict == Verdict::kRejected);
  for (int d : {1, 3}) {
    const auto saw = catalog_make("sawtooth", d, 0.0);
    CHECK(qzo::verify_stationary(saw, Vector::Constant(d, 2.0), SmoothingParams{0.1}, 0.2, 0.95,
                                 rng)
              .verdict == Verdict::kAccepted);
  }
  CHECK(qzo::to_string(Verdict::kInconclusive) == "inconclusive");
}

TEST_CASE("exact_goldstein_distance") {
  const auto abs = qzo::make_abs_linear(Vector{{3.0, 4.0}});
  CHECK(qzo::exact_goldstein_distance(abs, Vector{{0.1, 0.0}}, 0.1).value() == 0.0);
  CHECK(qzo::exact_goldstein_distance(abs, Vector{{1.0, 1.0}}, 0.1).value() == 1.0);

  const auto saw1 = catalog_make("sawtooth", 1, 0.0);
  CHECK(qzo::exact_goldstein_distance(saw1, Vector::Constant(1, 0.45), 0.1).value() == 0.0);
  CHECK(qzo::exact_goldstein_distance(saw1, Vector::Constant(1, 0.25), 0.1).value() == 1.0);
  CHECK_FALSE(qzo::exact_goldstein_distance(catalog_make("sawtooth", 2, 0.0), Vector::Zero(2), 0.1)
                  .has_value());

  const auto iso = qzo::make_quadratic(Vector::Ones(2));
  CHECK(qzo::exact_goldstein_distance(iso, Vector{{0.6, 0.8}}, 0.25).value() ==
        doctest::Approx(0.75).epsilon(1e-12));
  CHECK(qzo::exact_goldstein_distance(iso, Vector{{0.1, 0.0}}, 0.25).value() == 0.0);

  // Anisotropic curvature against a dense scan of the ball boundary.
  const auto aniso = qzo::make_quadratic(Vector{{1.0, 3.0}});
  RandomStream rng(3, "scan");
  for (int p = 0; p < 20; ++p) {
    const Vector x{{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)}};
    const double delta = 0.2;
    if (x.norm() <= delta) continue;
    double best = 1e300;
    const int m = 200000;
    for (int i = 0; i < m; ++i) {
      const double t = 2.0 * std::numbers::pi * i / m;
      const Vector y = x + delta * Vector{{std::cos(t), std::sin(t)}};
      best = std::min(best, aniso.curvature.cwiseProduct(y).norm());
    }
    CHECK(qzo::exact_goldstein_distance(aniso, x, delta).value() ==
          doctest::Approx(best).epsilon(1e-6));
  }
}

TEST_CASE("soundness link") {
  RandomStream rng(4, "soundness");
  const std::vector<qzo::ObjectiveSpec> specs{
      catalog_make("constant", 2, 0.0), catalog_make("abs-linear", 2, 0.0),
      catalog_make("abs-linear", 2, 0.2), catalog_make("sawtooth", 1, 0.0),
      catalog_make("sawtooth", 1, 0.2), qzo::make_quadratic(Vector{{1.0, 2.0}}),
      qzo::make_quadratic(Vector{{1.0, 2.0}}, 0.3)};
  int probes = 0;
  int violations = 0;
  while (probes < 1000) {
    for (const auto& spec : specs) {
      Vector x(spec.d);
      for (int i = 0; i < spec.d; ++i) x[i] = rng.uniform(-1.0, 1.0);
      const double delta = rng.uniform(0.02, 0.4);
      const auto r = qzo::goldstein_residual(spec, x, SmoothingParams{delta}, 1000, 0.9999, rng);
      REQUIRE(r.exact.has_value());
      if (r.estimate + r.half_width < *r.exact - 1e-9) ++violations;
      ++probes;
    }
  }
  CHECK(violations == 0);
}

TEST_CASE("half width shrinks at rate 1/sqrt(n)") {
  RandomStream rng(5, "consistency");
  const auto spec = catalog_make("sawtooth", 4, 0.1);
  const Vector x = Vector::Constant(4, 0.3);
  double previous = 0.0;
  for (std::int64_t n : {1000, 10000, 100000}) {
    const auto r = qzo::goldstein_residual(spec, x, SmoothingParams{0.2}, n, 0.95, rng);
    if (previous > 0.0) {
      CHECK(previous / r.half_width == doctest::Approx(std::sqrt(10.0)).epsilon(0.15));
    }
    previous = r.half_width;
  }
}
