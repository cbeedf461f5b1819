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

#include "sosdec/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace sosdec {

namespace {
// splitmix64 step; statistically solid and trivially seedable.
std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}
}  // namespace

WeightVector weights_from_priors(const NoisePrior& prior) {
  WeightVector w;
  w.gamma.reserve(prior.p.size());
  for (double p : prior.p) {
    if (!(p > 0.0) || !(p < 1.0))
      throw std::domain_error("error prior must lie strictly inside (0,1)");
    w.gamma.push_back(std::log((1.0 - p) / p));
  }
  return w;
}

WeightVector uniform_weights(std::size_t n, double p) {
  return weights_from_priors(NoisePrior{std::vector<double>(n, p)});
}

TrialRng::TrialRng(std::uint64_t master_seed, std::uint64_t stream_id) {
  // Two mixing rounds decorrelate adjacent (seed, stream) pairs.
  state_ = mix64(mix64(master_seed) ^ (stream_id * 0xD1B54A32D192ED03ull + 1));
}

std::uint64_t TrialRng::next_u64() {
  state_ += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double TrialRng::next_double() {
  // 53 uniform mantissa bits; avoids platform-dependent std distributions.
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

bool TrialRng::bernoulli(double p) {
  if (p <= 0.0) {
    if (p < 0.0) throw std::domain_error("probability must be in [0,1]");
    return false;
  }
  if (p >= 1.0) {
    if (p > 1.0) throw std::domain_error("probability must be in [0,1]");
    return true;
  }
  return next_double() < p;
}

std::uint64_t TrialRng::next_below(std::uint64_t bound) {
  if (bound == 0) throw std::domain_error("bound must be positive");
  // Rejection sampling removes modulo bias.
  const std::uint64_t limit = bound * (UINT64_MAX / bound);
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % bound;
}

BitVector sample_error(std::size_t n, double p, TrialRng& rng) {
  BitVector e(n);
  for (std::size_t i = 0; i < n; ++i)
    if (rng.bernoulli(p)) e.set(i, true);
  return e;
}

BitVector syndrome(const BitMatrix& h, const BitVector& e) { return h.mul(e); }

ClassicalToSyndrome classical_to_syndrome(const BitMatrix& h, const BitVector& received,
                                          const WeightVector& gamma) {
  if (received.size() != h.cols() || gamma.gamma.size() != h.cols())
    throw std::invalid_argument("received word and weights must match column count");
  ClassicalToSyndrome out;
  out.lambda.resize(h.cols());
  for (std::size_t i = 0; i < h.cols(); ++i) {
    if (received.get(i)) {
      out.lambda[i] = -gamma.gamma[i];
      out.offset += gamma.gamma[i];
    } else {
      out.lambda[i] = gamma.gamma[i];
    }
  }
  out.s = h.mul(received);
  return out;
}

}  // namespace sosdec
