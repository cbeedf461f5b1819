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

// Test-only oracles, independent of the library's solution paths: full 2^n
// enumeration for MLD, and basic random-instance generators.

#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "sosdec/mld_problem.hpp"
#include "sosdec/noise.hpp"

namespace sosdec::testing {

struct BruteForceMld {
  bool feasible = false;
  double value = 0.0;
  BitVector argmin;                 // lexicographically smallest minimizer
  std::vector<BitVector> all_min;   // every minimizer within 1e-9 of value
};

// Exhaustive 2^n enumeration; completely independent of gf2 row reduction.
inline BruteForceMld brute_force_mld(const MldInstance& inst) {
  const std::size_t n = inst.num_vars();
  BruteForceMld out;
  if (n > 24) throw std::invalid_argument("oracle limited to 24 variables");
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    BitVector e(n);
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (std::uint64_t{1} << i)) e.set(i, true);
    bool ok = true;
    for (std::size_t r = 0; r < inst.h.rows() && ok; ++r) {
      bool parity = false;
      for (std::size_t i = 0; i < n; ++i)
        if (inst.h.get(r, i) && e.get(i)) parity = !parity;
      ok = parity == inst.s.get(r);
    }
    if (!ok) continue;
    double value = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (e.get(i)) value += inst.gamma[i];
    if (!out.feasible || value < out.value - 1e-12 * (1.0 + std::abs(out.value))) {
      out.feasible = true;
      out.value = value;
      out.argmin = e;
      out.all_min.clear();
      out.all_min.push_back(e);
    } else if (std::abs(value - out.value) <= 1e-9 * (1.0 + std::abs(out.value))) {
      out.all_min.push_back(e);
      if (e.lex_less(out.argmin)) out.argmin = e;
    }
  }
  return out;
}

// Random parity-check matrix with bounded row weights.
inline BitMatrix random_check_matrix(TrialRng& rng, std::size_t rows, std::size_t cols,
                                     std::size_t max_weight) {
  BitMatrix h(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t weight = 1 + rng.next_below(max_weight);
    for (std::size_t k = 0; k < weight; ++k) h.set(r, rng.next_below(cols), true);
  }
  return h;
}

// Random instance with a consistent syndrome (s = He for a sampled e).
inline MldInstance random_consistent_instance(TrialRng& rng, std::size_t rows, std::size_t cols,
                                              std::size_t max_weight, double flip_p = 0.3) {
  MldInstance inst;
  inst.h = random_check_matrix(rng, rows, cols, max_weight);
  BitVector e(cols);
  for (std::size_t i = 0; i < cols; ++i)
    if (rng.bernoulli(flip_p)) e.set(i, true);
  inst.s = inst.h.mul(e);
  inst.gamma.resize(cols);
  for (std::size_t i = 0; i < cols; ++i) inst.gamma[i] = 0.1 + 3.0 * rng.next_double();
  return inst;
}

// Vertex enumeration for LPs min c.x over {Ex=f, 0<=x<=1}: every basic
// solution fixes all but rank(E) coordinates at a bound.
struct VertexLp {
  bool feasible = false;
  double value = std::numeric_limits<double>::infinity();
};

VertexLp vertex_enumerate_lp(const std::vector<double>& c,
                             const std::vector<std::vector<double>>& e_rows,
                             const std::vector<double>& f);

}  // namespace sosdec::testing
