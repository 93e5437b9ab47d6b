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

#include "qzo/circuit.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace qzo {

void RegisterLayout::validate() const {
  if (m1 < 1 || m2 < 1 || d < 1) throw std::invalid_argument("m1, m2 and d must be >= 1");
  if (m1 > 63) throw std::invalid_argument("m1 must be <= 63");
  if (frac_bits < 1 || frac_bits > 52) throw std::invalid_argument("frac_bits out of range");
}

void RegisterLayout::validate_for_state() const {
  validate();
  if (static_cast<long long>(m1) + static_cast<long long>(d) * m2 > kMaxStateQubits) {
    throw std::invalid_argument("register too large for a state vector (m1 + d m2 > " +
                                std::to_string(kMaxStateQubits) + ")");
  }
}

double h_from_count(int ones, int m2, HFormula formula) {
  if (m2 < 1 || ones < 0 || ones > m2) throw std::invalid_argument("bad bit count");
  const double root = std::sqrt(static_cast<double>(m2));
  if (formula == HFormula::kVerbatim) return 2.0 * root * (ones / root - 0.5);
  return (2.0 * ones - m2) / root;
}

double h_standardize(const std::vector<int>& bits, HFormula formula) {
  int ones = 0;
  for (int b : bits) {
    if (b != 0 && b != 1) throw std::invalid_argument("bits must be 0 or 1");
    ones += b;
  }
  return h_from_count(ones, static_cast<int>(bits.size()), formula);
}

double StateVector::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amplitudes) s += std::norm(a);
  return s;
}

StateVector StateVector::basis(const RegisterLayout& layout, std::uint64_t index) {
  layout.validate_for_state();
  StateVector s;
  s.layout = layout;
  s.amplitudes.assign(std::size_t{1} << layout.state_qubits(), 0.0);
  if (index >= s.amplitudes.size()) throw std::invalid_argument("basis index out of range");
  s.amplitudes[index] = 1.0;
  s.stage = CircuitStage::kEmpty;
  return s;
}

void apply_hadamard(StateVector& state, int qubit) {
  if (qubit < 0 || qubit >= state.layout.state_qubits()) {
    throw std::invalid_argument("qubit index out of range");
  }
  const std::size_t stride = std::size_t{1} << qubit;
  const double r = 1.0 / std::sqrt(2.0);
  auto& amp = state.amplitudes;
  for (std::size_t base = 0; base < amp.size(); base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      const auto a = amp[i];
      const auto b = amp[i + stride];
      amp[i] = r * (a + b);
      amp[i + stride] = r * (a - b);
    }
  }
}

StateVector statevector_prepare(const RegisterLayout& layout) {
  StateVector s = StateVector::basis(layout, 0);
  for (int q = 0; q < layout.state_qubits(); ++q) apply_hadamard(s, q);
  s.stage = CircuitStage::kPrepared;
  return s;
}

StateVector statevector_apply_h_and_norm(const StateVector& state, HFormula formula) {
  if (state.stage != CircuitStage::kPrepared && state.stage != CircuitStage::kEmpty) {
    throw std::invalid_argument("state has already been transformed");
  }
  // |j>|0>|0> -> |j>|h(j)>|norm(h(j))> permutes basis states of the extended
  // register, so amplitudes carry over unchanged.
  StateVector out = state;
  out.stage = CircuitStage::kTransformed;
  out.formula = formula;
  return out;
}

std::optional<OracleSample> decode_basis(const RegisterLayout& layout, std::uint64_t index,
                                         HFormula formula) {
  OracleSample s;
  s.xi = index & ((std::uint64_t{1} << layout.m1) - 1);
  s.h.resize(layout.d);
  s.bit_sums.resize(static_cast<std::size_t>(layout.d));
  const std::uint64_t mask = (std::uint64_t{1} << layout.m2) - 1;
  for (int k = 0; k < layout.d; ++k) {
    const std::uint64_t bits = (index >> (layout.m1 + k * layout.m2)) & mask;
    const int ones = std::popcount(bits);
    s.bit_sums[static_cast<std::size_t>(k)] = ones;
    s.h[k] = h_from_count(ones, layout.m2, formula);
  }
  const double n = s.h.norm();
  if (!(n > 0.0)) return std::nullopt;
  s.w = s.h / n;
  return s;
}

BornSampler::BornSampler(const StateVector& state)
    : layout_(state.layout), formula_(state.formula) {
  cumulative_.resize(state.amplitudes.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < state.amplitudes.size(); ++i) {
    acc += std::norm(state.amplitudes[i]);
    cumulative_[i] = acc;
  }
  if (!(acc > 0.0)) throw std::invalid_argument("state has zero norm");
}

MeasureOutcome BornSampler::sample(RandomStream& rng) const {
  const double u = rng.uniform() * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  MeasureOutcome out;
  out.basis_index = static_cast<std::uint64_t>(it - cumulative_.begin());
  out.sample = decode_basis(layout_, out.basis_index, formula_);
  return out;
}

MeasureOutcome measure_sample(const StateVector& state, RandomStream& rng) {
  return BornSampler(state).sample(rng);
}

namespace {

int random_bit_count(int m2, RandomStream& rng) {
  int ones = 0;
  int remaining = m2;
  while (remaining > 0) {
    std::uint64_t word = rng();
    if (remaining < 64) word &= (std::uint64_t{1} << remaining) - 1;
    ones += std::popcount(word);
    remaining -= 64;
  }
  return ones;
}

}  // namespace

std::optional<OracleSample> pipeline_sample(const RegisterLayout& layout, RandomStream& rng,
                                            HFormula formula) {
  layout.validate();
  OracleSample s;
  s.xi = layout.m1 == 64 ? rng() : rng() & ((std::uint64_t{1} << layout.m1) - 1);
  s.h.resize(layout.d);
  s.bit_sums.resize(static_cast<std::size_t>(layout.d));
  for (int k = 0; k < layout.d; ++k) {
    const int ones = random_bit_count(layout.m2, rng);
    s.bit_sums[static_cast<std::size_t>(k)] = ones;
    s.h[k] = h_from_count(ones, layout.m2, formula);
  }
  const double n = s.h.norm();
  if (!(n > 0.0)) return std::nullopt;
  s.w = s.h / n;
  return s;
}

OracleSample pipeline_sample_valid(const RegisterLayout& layout, RandomStream& rng,
                                   std::int64_t* rejections, HFormula formula) {
  if (invalid_probability(layout, formula) >= 1.0) {
    throw std::invalid_argument("layout never yields a valid sample");
  }
  while (true) {
    if (auto s = pipeline_sample(layout, rng, formula)) return *s;
    if (rejections != nullptr) ++*rejections;
  }
}

Vector continuum_direction(const OracleSample& sample, int m2, RandomStream& rng) {
  const double half_cell = 1.0 / std::sqrt(static_cast<double>(m2));
  Vector v = sample.h;
  for (Eigen::Index k = 0; k < v.size(); ++k) v[k] += rng.uniform(-half_cell, half_cell);
  return v / v.norm();
}

OutcomeKey outcome_key(std::uint64_t xi, const std::vector<int>& bit_sums) {
  OutcomeKey key;
  key.reserve(bit_sums.size() + 1);
  key.push_back(static_cast<std::int64_t>(xi));
  for (int b : bit_sums) key.push_back(b);
  return key;
}

OutcomeKey outcome_key(const RegisterLayout& layout, std::uint64_t basis_index) {
  std::vector<int> sums(static_cast<std::size_t>(layout.d));
  const std::uint64_t mask = (std::uint64_t{1} << layout.m2) - 1;
  for (int k = 0; k < layout.d; ++k) {
    sums[static_cast<std::size_t>(k)] =
        std::popcount((basis_index >> (layout.m1 + k * layout.m2)) & mask);
  }
  return outcome_key(basis_index & ((std::uint64_t{1} << layout.m1) - 1), sums);
}

std::map<OutcomeKey, double> statevector_distribution(const StateVector& state) {
  std::map<OutcomeKey, double> dist;
  for (std::size_t i = 0; i < state.amplitudes.size(); ++i) {
    const double p = std::norm(state.amplitudes[i]);
    if (p > 0.0) dist[outcome_key(state.layout, i)] += p;
  }
  return dist;
}

namespace {

std::vector<double> binomial_half(int m) {
  std::vector<double> p(static_cast<std::size_t>(m) + 1);
  for (int k = 0; k <= m; ++k) {
    p[static_cast<std::size_t>(k)] =
        std::exp(std::lgamma(m + 1.0) - std::lgamma(k + 1.0) - std::lgamma(m - k + 1.0) -
                 m * std::log(2.0));
  }
  return p;
}

}  // namespace

std::map<OutcomeKey, double> pipeline_distribution(const RegisterLayout& layout) {
  layout.validate();
  const double count = std::pow(static_cast<double>(layout.m2 + 1), layout.d) *
                       std::ldexp(1.0, layout.m1);
  if (count > 1e7) throw std::invalid_argument("outcome space too large to enumerate");
  const std::vector<double> binom = binomial_half(layout.m2);
  const double p_xi = std::ldexp(1.0, -layout.m1);
  std::map<OutcomeKey, double> dist;
  std::vector<int> sums(static_cast<std::size_t>(layout.d), 0);
  for (std::uint64_t xi = 0; xi < (std::uint64_t{1} << layout.m1); ++xi) {
    std::fill(sums.begin(), sums.end(), 0);
    while (true) {
      double p = p_xi;
      for (int s : sums) p *= binom[static_cast<std::size_t>(s)];
      dist[outcome_key(xi, sums)] = p;
      std::size_t k = 0;
      while (k < sums.size() && sums[k] == layout.m2) sums[k++] = 0;
      if (k == sums.size()) break;
      ++sums[k];
    }
  }
  return dist;
}

double invalid_probability(const RegisterLayout& layout, HFormula formula) {
  layout.validate();
  const std::vector<double> binom = binomial_half(layout.m2);
  double zero_mass = 0.0;
  for (int k = 0; k <= layout.m2; ++k) {
    if (h_from_count(k, layout.m2, formula) == 0.0) zero_mass += binom[static_cast<std::size_t>(k)];
  }
  return std::pow(zero_mass, layout.d);
}

}  // namespace qzo
