// Copyright 2026 The sosdec Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <vector>

#include "sosdec/gf2.hpp"

namespace sosdec {

// Per-bit error priors, each strictly inside (0,1).
struct NoisePrior {
  std::vector<double> p;
};

// Log-odds weights gamma_i = ln((1-p_i)/p_i). Positive iff p_i < 1/2.
struct WeightVector {
  std::vector<double> gamma;
};

WeightVector weights_from_priors(const NoisePrior& prior);
WeightVector uniform_weights(std::size_t n, double p);

// Deterministic counter-based random stream: the sequence depends only on
// (master_seed, stream_id), never on which other streams were drawn first.
// Used one stream per Monte-Carlo trial so parallel and serial runs agree.
class TrialRng {
 public:
  TrialRng(std::uint64_t master_seed, std::uint64_t stream_id);
  std::uint64_t next_u64();
  double next_double();  // uniform in [0,1)
  bool bernoulli(double p);
  // uniform integer in [0, bound)
  std::uint64_t next_below(std::uint64_t bound);

 private:
  std::uint64_t state_;
};

// I.i.d. bit flips: each bit set with probability p. p=0 and p=1 are allowed.
BitVector sample_error(std::size_t n, double p, TrialRng& rng);

// s = H e over F2.
BitVector syndrome(const BitMatrix& h, const BitVector& e);

// Classical-decoding instance mapped to syndrome form: costs lambda_i =
// (-1)^{y_i} gamma_i, constant offset k = sum_{y_i=1} gamma_i, and s = H y.
// The bijection between the two problems is x = y xor e.
struct ClassicalToSyndrome {
  std::vector<double> lambda;
  double offset = 0.0;
  BitVector s;
};

ClassicalToSyndrome classical_to_syndrome(const BitMatrix& h, const BitVector& received,
                                          const WeightVector& gamma);

}  // namespace sosdec
