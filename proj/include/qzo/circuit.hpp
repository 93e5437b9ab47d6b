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

#ifndef QZO_CIRCUIT_HPP
#define QZO_CIRCUIT_HPP

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "qzo/objectives.hpp"
#include "qzo/random.hpp"

namespace qzo {

// Sampling-oracle circuit: Hadamards on a xi register (m1 qubits) and d
// coordinate registers (m2 qubits each), a per-coordinate standardized bit
// count h, and normalization w = h / |h|.
//
// Qubit order is little-endian: xi occupies bits [0, m1), coordinate k
// occupies bits [m1 + k m2, m1 + (k + 1) m2) of the basis index.

inline constexpr int kMaxStateQubits = 22;

struct RegisterLayout {
  int m1 = 1;
  int m2 = 1;
  int d = 1;
  int frac_bits = 32;

  int state_qubits() const { return m1 + d * m2; }
  /// Throws unless m1, m2, d >= 1 and m1 <= 63.
  void validate() const;
  /// validate() plus the state-vector size guard.
  void validate_for_state() const;
};

enum class HFormula {
  kCorrected,  // (2 sum - m2) / sqrt(m2): mean 0, variance 1
  kVerbatim,   // 2 sqrt(m2) (sum / sqrt(m2) - 0.5), kept for inspection
};

double h_standardize(const std::vector<int>& bits, HFormula formula = HFormula::kCorrected);
double h_from_count(int ones, int m2, HFormula formula = HFormula::kCorrected);

enum class CircuitStage { kEmpty, kPrepared, kTransformed };

/// Amplitudes over the xi and coordinate registers. The h, norm and w
/// registers written by the transform are functions of these basis states
/// (the transform is a basis permutation on the extended space), so they are
/// decoded from the basis index rather than stored.
struct StateVector {
  RegisterLayout layout;
  std::vector<std::complex<double>> amplitudes;
  CircuitStage stage = CircuitStage::kEmpty;
  HFormula formula = HFormula::kCorrected;

  double norm_squared() const;
  static StateVector basis(const RegisterLayout& layout, std::uint64_t index);
};

/// |0...0> followed by a Hadamard on every xi and coordinate qubit.
StateVector statevector_prepare(const RegisterLayout& layout);

/// Applies a single-qubit Hadamard in place.
void apply_hadamard(StateVector& state, int qubit);

/// Computes h per coordinate and the norm into ancillas, then normalizes.
StateVector statevector_apply_h_and_norm(const StateVector& state,
                                         HFormula formula = HFormula::kCorrected);

struct OracleSample {
  std::uint64_t xi = 0;
  Vector w;                    // unit vector
  Vector h;                    // standardized counts
  std::vector<int> bit_sums;  // ones per coordinate register
};

struct MeasureOutcome {
  std::uint64_t basis_index = 0;
  std::optional<OracleSample> sample;  // empty when every h is 0
};

/// Decodes (xi, h, w) from a basis index; empty when |h| = 0.
std::optional<OracleSample> decode_basis(const RegisterLayout& layout, std::uint64_t index,
                                         HFormula formula = HFormula::kCorrected);

/// Born-rule sampler with a precomputed cumulative table.
class BornSampler {
 public:
  explicit BornSampler(const StateVector& state);
  MeasureOutcome sample(RandomStream& rng) const;

 private:
  RegisterLayout layout_;
  HFormula formula_;
  std::vector<double> cumulative_;
};

MeasureOutcome measure_sample(const StateVector& state, RandomStream& rng);

/// Same distribution as measuring the transformed state, drawn from
/// independent fair bits without building the state. Empty on |h| = 0.
std::optional<OracleSample> pipeline_sample(const RegisterLayout& layout, RandomStream& rng,
                                            HFormula formula = HFormula::kCorrected);

/// Resamples until |h| > 0; adds the number of rejected draws to *rejections.
OracleSample pipeline_sample_valid(const RegisterLayout& layout, RandomStream& rng,
                                   std::int64_t* rejections = nullptr,
                                   HFormula formula = HFormula::kCorrected);

/// Continuity-corrected direction: each h_k is spread uniformly over its
/// lattice cell (width 2 / sqrt(m2) for the corrected formula) before
/// normalizing. Used to compare the discrete law with continuous targets.
Vector continuum_direction(const OracleSample& sample, int m2, RandomStream& rng);

/// Outcome key: xi followed by the bit count of every coordinate register.
using OutcomeKey = std::vector<std::int64_t>;
OutcomeKey outcome_key(std::uint64_t xi, const std::vector<int>& bit_sums);
OutcomeKey outcome_key(const RegisterLayout& layout, std::uint64_t basis_index);

/// Exact outcome distribution of a state (sums |amplitude|^2 per key).
std::map<OutcomeKey, double> statevector_distribution(const StateVector& state);
/// Exact outcome distribution of pipeline_sample (uniform xi, binomial counts).
std::map<OutcomeKey, double> pipeline_distribution(const RegisterLayout& layout);

/// Probability that every coordinate has h = 0 (the invalid outcome).
double invalid_probability(const RegisterLayout& layout,
                           HFormula formula = HFormula::kCorrected);

}  // namespace qzo

#endif  // QZO_CIRCUIT_HPP
