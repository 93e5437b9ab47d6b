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

#include "qzo/ball_marginal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

namespace qzo {

namespace {

double density_constant(int d) {
  // Gamma(d/2 + 1) / (sqrt(pi) Gamma((d + 1)/2))
  return std::exp(std::lgamma(0.5 * d + 1.0) - std::lgamma(0.5 * (d + 1.0))) /
         std::sqrt(std::numbers::pi);
}

// Slope and intercept of a linear piece: phi(s) = intercept + slope * s.
struct Piece {
  double intercept;
  double slope;
};

template <typename PieceAt>
MarginalAverage average_piecewise(int d, double center, double radius,
                                  const std::vector<double>& breaks,
                                  PieceAt piece_at) {
  std::vector<double> edges{center - radius};
  for (double b : breaks) {
    if (b > center - radius && b < center + radius) edges.push_back(b);
  }
  edges.push_back(center + radius);

  MarginalAverage out{0.0, 0.0};
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const double s0 = edges[k];
    const double s1 = edges[k + 1];
    if (s1 <= s0) continue;
    const Piece p = piece_at(0.5 * (s0 + s1));
    const double t0 = std::clamp((s0 - center) / radius, -1.0, 1.0);
    const double t1 = std::clamp((s1 - center) / radius, -1.0, 1.0);
    const double mass = ball_marginal_cdf(d, t1) - ball_marginal_cdf(d, t0);
    const double first =
        ball_marginal_partial_mean(d, t1) - ball_marginal_partial_mean(d, t0);
    out.value += (p.intercept + p.slope * center) * mass + p.slope * radius * first;
    out.derivative += p.slope * mass;
  }
  return out;
}

}  // namespace

double ball_marginal_cdf(int d, double t) {
  if (t <= -1.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = 0.5 * (d + 1.0);
  return boost::math::ibeta(a, a, 0.5 * (1.0 + t));
}

double ball_marginal_partial_mean(int d, double t) {
  t = std::clamp(t, -1.0, 1.0);
  return -density_constant(d) * std::pow(1.0 - t * t, 0.5 * (d + 1.0)) / (d + 1.0);
}

MarginalAverage sawtooth_marginal_average(int d, double center, double radius) {
  std::vector<double> breaks;
  const auto first = static_cast<long long>(std::floor(2.0 * (center - radius)));
  const auto last = static_cast<long long>(std::ceil(2.0 * (center + radius)));
  for (long long j = first; j <= last; ++j) breaks.push_back(0.5 * static_cast<double>(j));
  return average_piecewise(d, center, radius, breaks, [](double s) {
    const double k = std::floor(2.0 * s);
    const auto ki = static_cast<long long>(k);
    if (ki % 2 == 0) return Piece{-0.5 * k, 1.0};  // rising: s - k/2
    return Piece{0.5 * (k + 1.0), -1.0};           // falling: (k+1)/2 - s
  });
}

MarginalAverage abs_marginal_average(int d, double center, double radius) {
  return average_piecewise(d, center, radius, {0.0}, [](double s) {
    return s < 0.0 ? Piece{0.0, -1.0} : Piece{0.0, 1.0};
  });
}

}  // namespace qzo
