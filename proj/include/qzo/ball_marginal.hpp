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

#ifndef QZO_BALL_MARGINAL_HPP
#define QZO_BALL_MARGINAL_HPP

namespace qzo {

// One coordinate t = <e, u> of u uniform on the unit ball in R^d has density
// c_d (1 - t^2)^((d-1)/2) on [-1, 1]; (1 + t)/2 is Beta((d+1)/2, (d+1)/2).
// Averages of piecewise-linear functions of t are therefore closed-form.

double ball_marginal_cdf(int d, double t);

/// Integral of t * density over [-1, t].
double ball_marginal_partial_mean(int d, double t);

struct MarginalAverage {
  double value;       // E[phi(center + radius * t)]
  double derivative;  // d/dcenter of value, i.e. E[phi'(center + radius * t)]
};

/// phi(s) = dist(s, Z).
MarginalAverage sawtooth_marginal_average(int d, double center, double radius);

/// phi(s) = |s|.
MarginalAverage abs_marginal_average(int d, double center, double radius);

}  // namespace qzo

#endif  // QZO_BALL_MARGINAL_HPP
