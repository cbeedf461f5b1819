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

#include <string>
#include <vector>

#include "sosdec/mld_problem.hpp"
#include "sosdec/sdp.hpp"

namespace sosdec {

enum class RelaxMethod { lp, sa, ls, ls_plus, lasserre };

const char* relax_method_name(RelaxMethod method);

// Value and fractional optimum of one relaxation; always a lower bound on
// the exact optimum (up to solver tolerance).
struct RelaxationValue {
  RelaxMethod method = RelaxMethod::lp;
  int level = 1;
  double value = 0.0;
  std::vector<double> fractional;  // over error variables
  SdpStatus status = SdpStatus::numerical_failure;
};

// Plain LP over the slack-augmented affine system with every binary
// variable relaxed to [0,1]; 1x1 blocks through the conic solver.
RelaxationValue lp_relax(const PolyProblem& poly, const SdpOptions& options = {});

// LP over the same system with some variables pinned to 0/1; used as the
// branch-and-bound bound. fixed[i] in {-1 (free), 0, 1} over all variables
// (error variables first, slacks free).
struct BoundedLpResult {
  SdpStatus status = SdpStatus::numerical_failure;
  double value = 0.0;
  std::vector<double> x;  // over all poly variables; fixed entries echoed
};
BoundedLpResult solve_affine_lp(const PolyProblem& poly, const std::vector<int>& fixed,
                                const SdpOptions& options = {});

// Level-t Sherali-Adams LP: variables Y_S for |S| <= t+1 over the
// slack-augmented binary system, with Y_0 = 1, the syndrome equalities
// multiplied by products over S (|S| <= t), and 0 <= Y_{S u i} <= Y_S.
RelaxationValue sherali_adams(const MldInstance& inst, int t, const SdpOptions& options = {});

// Level-1 Lovasz-Schrijver protection-matrix program; plus=true adds the
// PSD constraint on the protection matrix (LS+).
RelaxationValue lovasz_schrijver(const MldInstance& inst, bool plus,
                                 const SdpOptions& options = {});

struct ComparisonRow {
  RelaxMethod method = RelaxMethod::lp;
  int level = 1;
  double value = 0.0;
  SdpStatus status = SdpStatus::numerical_failure;
};

struct ComparisonTable {
  std::vector<ComparisonRow> rows;
  double exact_value = 0.0;
  bool exact_ok = false;
};

// Runs lp, ls, ls_plus, sa(t) and lasserre(t) against the exact optimum on
// one instance; sub-solver failures are recorded per cell.
ComparisonTable compare_relaxations(const MldInstance& inst, int t,
                                    const SdpOptions& options = {});

}  // namespace sosdec
