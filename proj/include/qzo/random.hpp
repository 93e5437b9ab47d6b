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

#ifndef QZO_RANDOM_HPP
#define QZO_RANDOM_HPP

#include <cstdint>
#include <limits>
#include <string_view>

namespace qzo {

/// Counter-based random stream.
///
/// Output i of a stream is a pure function of (key, i): the key is derived
/// from a master seed and a label, and each draw hashes key + (i+1)*gamma
/// through the SplitMix64 finalizer. Child streams are obtained with split(),
/// which never advances the parent, so the order in which independent
/// consumers draw cannot perturb each other's numbers.
///
/// Satisfies UniformRandomBitGenerator.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  RandomStream(std::uint64_t seed, std::string_view label);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

  RandomStream split(std::string_view label) const;
  RandomStream split(std::uint64_t index) const;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);
  /// Standard normal (Box-Muller, second variate cached).
  double normal();
  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);
  bool bernoulli(double p);

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }
  /// Repositions the stream; the normal cache is discarded.
  void seek(std::uint64_t counter);

 private:
  explicit RandomStream(std::uint64_t key) : key_(key) {}

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

std::uint64_t mix64(std::uint64_t z);
std::uint64_t hash_label(std::string_view label);

}  // namespace qzo

#endif  // QZO_RANDOM_HPP
