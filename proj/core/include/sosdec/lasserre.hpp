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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sosdec/mld_problem.hpp"
#include "sosdec/sdp.hpp"

namespace sosdec {

enum class SparsityMode { dense, sparse };

const char* sparsity_mode_name(SparsityMode mode);

// Monomial basis of multilinear subsets |S| <= level in graded-lex order;
// position 0 is the empty set. Size is sum_k C(n,k), smaller than the
// generic C(n+l, l) because x^2 = x is folded into the indexing.
struct MomentBasis {
  int level = 0;
  int num_vars = 0;
  std::vector<std::vector<int>> monomials;
  std::map<std::vector<int>, int> index;

  std::size_t size() const { return monomials.size(); }
};

// Throws when the basis would exceed 1e6 monomials.
MomentBasis build_basis(int num_vars, int level);

// Variable cliques of the chordal extension of the correlative graph
// (minimum-degree elimination, ties by variable index). Every constraint
// support is contained in some clique and the cliques cover all variables.
struct CliqueDecomposition {
  std::vector<std::vector<int>> cliques;
};

CliqueDecomposition correlative_cliques(const PolyProblem& poly);

struct AssemblyOptions {
  // Adds y(S) >= 0 and y(S u {i}) <= y(S) rows, valid for every binary
  // measure. Off by default (the plain hierarchy); compare_relaxations
  // turns it on so the cross-hierarchy dominance is structural.
  bool monotone_strengthening = false;
};

// One PSD block of the assembled moment program.
struct MomentBlockLayout {
  std::vector<int> clique;                // variables, sorted
  std::vector<std::vector<int>> basis;    // subsets |S| <= level, graded-lex
  std::vector<int> moment_of_pair;        // row-major basis x basis -> moment id
};

struct MomentAssembly {
  SdpStandardForm sdp;  // moment program embedded on the dual side
  std::vector<std::vector<int>> moment_subsets;  // moment id -> subset
  std::map<std::vector<int>, int> moment_index;
  std::vector<MomentBlockLayout> blocks;
  int level = 0;
  SparsityMode mode = SparsityMode::dense;
  int num_localizing = 0;
};

// Builds the level-l moment relaxation of a PolyProblem. Free variables of
// the SDP are the moments y(S), |S| <= 2l; constraints are y(0)=1, one
// moment-matrix PSD block per clique (a single global clique in dense
// mode), and the localizing equalities of every polynomial constraint over
// subsets of its owning clique with |S| <= 2l - deg.
MomentAssembly assemble_moment_sdp(const PolyProblem& poly, int level, SparsityMode mode,
                                   const AssemblyOptions& options = {});

struct MomentSolution {
  int level = 0;
  SparsityMode mode = SparsityMode::dense;
  SdpStatus status = SdpStatus::numerical_failure;
  double lambda = 0.0;  // relaxation optimum sum_i gamma_i y({i})
  std::vector<std::vector<int>> subsets;
  std::vector<double> y;  // moment values, normalized so y(0) = 1
  std::vector<MomentBlockLayout> layout;
  int iterations = 0;
  double solver_gap = 0.0;

  std::optional<double> moment(const std::vector<int>& subset) const;
  // Dense moment matrix of one block, [S][T] = y(S u T).
  std::vector<double> block_matrix(std::size_t block) const;

  std::map<std::vector<int>, int> index;
};

MomentSolution solve_level(const PolyProblem& poly, int level, SparsityMode mode,
                           double tol = 1e-8,
                           std::optional<std::chrono::steady_clock::time_point> deadline =
                               std::nullopt,
                           const AssemblyOptions& options = {});

struct Extraction {
  BitVector e_hat;
  bool feasible = false;
  int repair_flips = 0;
};

// Rounds first moments at 1/2 (ties to 0); on syndrome mismatch repeatedly
// flips the bit with fractional moment closest to 1/2 among bits incident
// to unsatisfied checks, up to n flips.
Extraction extract_error(const MomentSolution& sol, const MldInstance& inst);

struct RankReport {
  int rank = 0;
  // Smallest kept and largest dropped singular value ratios across blocks,
  // for auditing borderline tolerance decisions.
  double smallest_kept_ratio = 0.0;
  double largest_dropped_ratio = 0.0;
};

// Numerical rank of the level-r principal submatrix (summed over blocks in
// sparse mode): singular values above rel_tol times the block's largest.
int moment_rank(const MomentSolution& sol, int level, double rel_tol = 1e-6);
RankReport moment_rank_report(const MomentSolution& sol, int level, double rel_tol = 1e-6);

// Flat-extension certificate: rank M_l = rank M_{l-1}. Requires level >= 2.
bool rank_loop(const MomentSolution& sol, double rel_tol = 1e-6);

struct DecodeTimings {
  double assemble_ms = 0.0;
  double solve_ms = 0.0;
  double extract_ms = 0.0;
  double total_ms = 0.0;
};

struct DecodeResult {
  BitVector e_hat;
  double lambda = 0.0;
  bool feasible_after_rounding = false;
  int moment_rank = 0;
  bool rank_loop = false;
  int level = 0;
  SparsityMode mode = SparsityMode::sparse;
  SdpStatus solver_status = SdpStatus::numerical_failure;
  DecodeTimings timings;
};

// Full pipeline: to_polynomial -> solve_level -> extract_error -> rank
// certificates. Solver failures are recorded in the result, not thrown.
DecodeResult decode(const MldInstance& inst, int level, SparsityMode mode, double tol = 1e-8,
                    std::optional<std::chrono::steady_clock::time_point> deadline = std::nullopt);

// Debug dump: JSON map from sorted index lists to moment values plus
// lambda, ranks and the certificate flag.
std::string moment_solution_to_json(const MomentSolution& sol, double rank_rel_tol = 1e-6);

}  // namespace sosdec
