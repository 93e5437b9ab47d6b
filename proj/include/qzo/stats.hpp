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

#ifndef QZO_STATS_HPP
#define QZO_STATS_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

namespace qzo {

struct KsResult {
  double statistic = 0.0;
  double p_value = 0.0;
};

/// One-sample Kolmogorov-Smirnov test against a continuous CDF. The p-value
/// uses the asymptotic Kolmogorov distribution with Stephens' correction.
KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf);

/// P(K > lambda) for the Kolmogorov distribution.
double kolmogorov_survival(double lambda);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 0.0;
};

/// Pearson test of observed counts against expected probabilities.
ChiSquareResult chi_square_test(const std::vector<std::int64_t>& observed,
                                const std::vector<double>& expected_prob);

/// Half the L1 distance between two empirical distributions.
template <typename Key>
double total_variation(const std::map<Key, std::int64_t>& a,
                       const std::map<Key, std::int64_t>& b) {
  double na = 0.0;
  double nb = 0.0;
  for (const auto& [k, c] : a) na += static_cast<double>(c);
  for (const auto& [k, c] : b) nb += static_cast<double>(c);
  double sum = 0.0;
  for (const auto& [k, c] : a) {
    auto it = b.find(k);
    const double pb = it == b.end() ? 0.0 : static_cast<double>(it->second) / nb;
    sum += std::abs(static_cast<double>(c) / na - pb);
  }
  for (const auto& [k, c] : b) {
    if (a.find(k) == a.end()) sum += static_cast<double>(c) / nb;
  }
  return 0.5 * sum;
}

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
};

Moments sample_moments(const std::vector<double>& x);

}  // namespace qzo

#endif  // QZO_STATS_HPP
