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

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace sosdec {

// Entry of a symmetric block matrix; (row, col) stored with row <= col and
// implicitly mirrored, so <A, X> counts off-diagonal entries twice.
struct SymEntry {
  int block = 0;
  int row = 0;
  int col = 0;
  double value = 0.0;
};

// One trace equality <A_i, X> + sum_k B_ik u_k = b_i.
struct SdpConstraint {
  std::vector<SymEntry> a;
  std::vector<std::pair<int, double>> free_terms;
  double b = 0.0;
};

// Standard-form conic program
//     minimize  <C, X> + d^T u
//     s.t.      <A_i, X> + (B u)_i = b_i,   X >= 0 block-diagonal, u free
// with dual
//     maximize  b^T y
//     s.t.      C - sum_i y_i A_i >= 0,     B^T y = d.
// Size-1 blocks are nonnegative scalars, so LPs are the all-1x1 special
// case. The free part (u, d) is empty in the plain trace form.
struct SdpStandardForm {
  std::vector<int> blocks;
  std::vector<SymEntry> c;
  std::vector<SdpConstraint> constraints;
  int free_dim = 0;
  std::vector<double> free_cost;

  std::size_t total_psd_dim() const;
};

enum class SdpStatus { optimal, infeasible, unbounded, max_iterations, numerical_failure };

const char* status_name(SdpStatus status);

struct SdpOptions {
  double tol = 1e-8;
  int max_iter = 200;
  double infeasibility_threshold = 1e-8;
  // Skip the rank presolve on trace rows (set by assemblers whose rows are
  // independent by construction).
  bool trace_rows_independent = false;
  // Cooperative deadline; unset means no limit.
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct SdpSolution {
  SdpStatus status = SdpStatus::numerical_failure;
  std::vector<std::vector<double>> x;  // dense row-major per block
  std::vector<double> free_x;          // u
  std::vector<double> y;               // dual multipliers, original row indexing
  std::vector<std::vector<double>> z;  // dual slack blocks
  double primal_value = 0.0;
  double dual_value = 0.0;
  double gap = 0.0;  // |primal - dual|
  int iterations = 0;
  // Worst scaled residuals at the final iterate (diagnostics).
  double primal_residual = 0.0;
  double dual_residual = 0.0;
};

// Primal-dual interior-point solve (Nesterov-Todd scaling, Mehrotra
// predictor-corrector, dense per-block factorizations). Deterministic.
SdpSolution solve_sdp(const SdpStandardForm& problem, const SdpOptions& options = {});

struct PresolveResult {
  SdpStandardForm reduced;
  std::vector<int> kept_rows;       // reduced row -> original row
  std::vector<int> kept_free;       // reduced free var -> original free var
  bool infeasible = false;          // contradictory dependent trace rows
  bool dual_inconsistent = false;   // contradictory dependent free rows
};

// Removes linearly dependent equality rows (relative threshold 1e-10) on
// both the trace side and the free-variable side; solutions lift back with
// zeros on eliminated multipliers.
PresolveResult presolve(const SdpStandardForm& problem, bool trace_rows_independent = false);

// Sparse text dump, one line per nonzero: "constraint_index block row col
// value" with constraint_index 0 the objective. Right-hand sides use block
// -1; free-variable terms use pseudo-blocks past the last real block.
void dump_sparse(const SdpStandardForm& problem, std::ostream& os);

}  // namespace sosdec
