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
#include "sosdec/noise.hpp"

namespace sosdec {

// One syndrome decoding problem: minimize sum_i gamma_i e_i over He = s (F2).
struct MldInstance {
  BitMatrix h;
  BitVector s;
  std::vector<double> gamma;

  std::size_t num_vars() const { return h.cols(); }
  bool dims_consistent() const {
    return h.rows() == s.size() && h.cols() == gamma.size();
  }
  bool syndrome_consistent() const { return solve(h, s).has_value(); }
  double cost(const BitVector& e) const;
};

enum class ParityEncoding { slack_binary, product_parity };

// Multilinear monomial with a real coefficient; vars sorted, empty = constant.
struct PolyTerm {
  std::vector<int> vars;
  double coeff = 0.0;
};

// Polynomial equality sum_T coeff_T * prod_{i in T} x_i = 0 over binary x.
struct PolyEquality {
  std::vector<PolyTerm> terms;
  std::vector<int> support;  // union of term supports, sorted
  int degree = 0;
};

// Binary polynomial optimization form of an MLD instance. All variables are
// binary (x^2 = x); error variables come first, then per-check slack bits.
struct PolyProblem {
  int num_error_vars = 0;
  int num_vars = 0;
  std::vector<double> objective;  // gamma on error vars, 0 on slacks
  std::vector<PolyEquality> equalities;
  ParityEncoding encoding = ParityEncoding::slack_binary;
  bool syndrome_consistent = true;
  // slack_vars[j] lists the slack variable indices of check j (slack_binary).
  std::vector<std::vector<int>> slack_vars;
};

// Slack bits restoring mod-2 semantics for check j: the smallest B with
// w_j - s_j <= 2*(2^B - 1), so that sum_i H_ji e_i = s_j + 2k is always
// representable with k in [0, 2^B).
int slack_bits_for_check(int weight, int syndrome_bit);

// Lower an instance to polynomial form. slack_binary keeps every equality
// affine by adding binary slack bits; product_parity instead emits one
// degree-w equality prod_{i in supp}(1-2e_i) = 1-2s_j per check.
PolyProblem to_polynomial(const MldInstance& inst,
                          ParityEncoding encoding = ParityEncoding::slack_binary);

// Symmetric QUBO with value x^T Q x + constant on binary points.
struct QuboMatrix {
  int n = 0;
  std::vector<double> q;  // row-major n x n, symmetric
  double constant = 0.0;

  double& at(int i, int j) { return q[static_cast<std::size_t>(i) * n + j]; }
  double at(int i, int j) const { return q[static_cast<std::size_t>(i) * n + j]; }
  double value(const BitVector& x) const;
};

// Literal penalty form Q = Gamma + xi*(H^T H + Delta) over the error bits
// alone; penalizes the integer equality He = s, not its mod-2 weakening.
QuboMatrix to_qubo(const MldInstance& inst, double xi);

// Parity-faithful form: penalty on the slack-augmented affine equalities, so
// the minimizer set projected to e equals the F2-constrained minimizer set
// once xi >= 1 + sum|gamma|.
QuboMatrix to_qubo(const PolyProblem& poly, double xi);

double default_qubo_penalty(const std::vector<double>& gamma);

// Block-diagonal CSS assembly over (e_X, e_Z); solving it sector-wise and
// jointly agree.
QuboMatrix css_qubo(const MldInstance& inst_x, const MldInstance& inst_z, double xi);

struct QuboMinimum {
  std::vector<BitVector> argmin;  // every minimizer, lexicographic order
  double value = 0.0;
};

// Exhaustive minimization, at most 24 variables. Points whose recomputed
// value is within 1e-9*(1+|min|) of the minimum count as co-minimizers.
QuboMinimum brute_force_qubo(const QuboMatrix& q);

}  // namespace sosdec
