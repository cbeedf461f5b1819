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
#include <optional>
#include <stdexcept>

#include "sosdec/mld_problem.hpp"

namespace sosdec {

struct InconsistentSyndromeError : std::runtime_error {
  InconsistentSyndromeError() : std::runtime_error("syndrome is not in the column space of H") {}
};

struct BudgetExceededError : std::runtime_error {
  explicit BudgetExceededError(const char* what) : std::runtime_error(what) {}
};

struct ExactResult {
  BitVector e_star;
  double value = 0.0;
  std::uint64_t nodes_explored = 0;  // branch and bound only
};

// Exact MLD by enumerating particular + span(nullspace); requires the
// nullspace dimension to be at most 26. Ties break to the lexicographically
// smallest minimizer.
ExactResult mld_coset(const MldInstance& inst);

// Exact MLD by depth-first branch and bound on the error variables, pruned
// with the LP relaxation of the slack-augmented system. Matches mld_coset
// in value exactly.
ExactResult mld_branch_and_bound(
    const MldInstance& inst,
    std::optional<std::chrono::steady_clock::time_point> deadline = std::nullopt);

}  // namespace sosdec
