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

#include "sosdec/exact_decoder.hpp"

#include <bit>
#include <cmath>
#include <vector>

#include "sosdec/relaxations.hpp"

namespace sosdec {

namespace {

// Replaces the incumbent when the candidate is strictly cheaper, or equally
// cheap and lexicographically smaller. Costs are compared on canonically
// summed values so equal support sets compare exactly equal.
void consider(const MldInstance& inst, const BitVector& candidate, BitVector& best,
              double& best_value, bool& has_best) {
  const double value = inst.cost(candidate);
  if (!has_best || value < best_value ||
      (value == best_value && candidate.lex_less(best))) {
    best = candidate;
    best_value = value;
    has_best = true;
  }
}

}  // namespace

ExactResult mld_coset(const MldInstance& inst) {
  if (!inst.dims_consistent()) throw std::invalid_argument("instance dimensions inconsistent");
  std::optional<BitVector> particular = solve(inst.h, inst.s);
  if (!particular) throw InconsistentSyndromeError();
  const std::vector<BitVector> basis = nullspace_basis(inst.h);
  if (basis.size() > 26) throw BudgetExceededError("coset enumeration limited to 2^26 elements");

  std::vector<std::vector<std::size_t>> supports;
  supports.reserve(basis.size());
  for (const BitVector& b : basis) {
    std::vector<std::size_t> sup;
    for (std::size_t i = 0; i < b.size(); ++i)
      if (b.get(i)) sup.push_back(i);
    supports.push_back(std::move(sup));
  }

  BitVector current = *particular;
  double running = inst.cost(current);
  BitVector best = current;
  double best_value = running;
  bool has_best = true;

  const std::uint64_t count = std::uint64_t{1} << basis.size();
  // Gray-code walk; the running cost is resynced periodically and every
  // candidate is re-evaluated canonically before replacing the incumbent.
  const double margin = 1e-7;
  for (std::uint64_t step = 1; step < count; ++step) {
    const int j = std::countr_zero(step);
    double delta = 0.0;
    for (std::size_t i : supports[j]) delta += current.get(i) ? -inst.gamma[i] : inst.gamma[i];
    current.xor_assign(basis[j]);
    running += delta;
    if ((step & 0xFFFF) == 0) running = inst.cost(current);
    if (running <= best_value + margin * (1.0 + std::abs(best_value)))
      consider(inst, current, best, best_value, has_best);
  }
  return {best, best_value, 0};
}

namespace {

struct BnbState {
  const MldInstance& inst;
  const PolyProblem& poly;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  BitVector best;
  double best_value = 0.0;
  bool has_best = false;
  std::uint64_t nodes = 0;
  SdpOptions lp_options;

  static constexpr std::uint64_t kNodeBudget = 500000;
};

// Exact feasibility of the remaining F2 system under the current partial
// assignment; prunes without any numerical tolerance.
bool subproblem_consistent(const MldInstance& inst, const std::vector<int>& fixed) {
  const std::size_t n = inst.num_vars();
  std::vector<std::size_t> free_cols;
  for (std::size_t i = 0; i < n; ++i)
    if (fixed[i] < 0) free_cols.push_back(i);
  BitMatrix sub(inst.h.rows(), free_cols.size());
  BitVector rhs(inst.h.rows());
  for (std::size_t r = 0; r < inst.h.rows(); ++r) {
    bool parity = inst.s.get(r);
    for (std::size_t i = 0; i < n; ++i)
      if (fixed[i] == 1 && inst.h.get(r, i)) parity = !parity;
    rhs.set(r, parity);
    for (std::size_t k = 0; k < free_cols.size(); ++k)
      if (inst.h.get(r, free_cols[k])) sub.set(r, k, true);
  }
  return solve(sub, rhs).has_value();
}

void bnb_recurse(BnbState& state, std::vector<int>& fixed) {
  if (++state.nodes > BnbState::kNodeBudget)
    throw BudgetExceededError("branch and bound node budget exceeded");
  if (state.deadline && std::chrono::steady_clock::now() > *state.deadline)
    throw BudgetExceededError("branch and bound deadline exceeded");

  if (!subproblem_consistent(state.inst, fixed)) return;

  const std::size_t n = state.inst.num_vars();
  bool complete = true;
  for (std::size_t i = 0; i < n; ++i)
    if (fixed[i] < 0) {
      complete = false;
      break;
    }
  if (complete) {
    BitVector e(n);
    for (std::size_t i = 0; i < n; ++i)
      if (fixed[i] == 1) e.set(i, true);
    if (syndrome(state.inst.h, e) == state.inst.s)
      consider(state.inst, e, state.best, state.best_value, state.has_best);
    return;
  }

  // LP bound over the slack system with the current pins.
  std::vector<int> full_fixed(state.poly.num_vars, -1);
  for (std::size_t i = 0; i < n; ++i) full_fixed[i] = fixed[i];
  BoundedLpResult lp = solve_affine_lp(state.poly, full_fixed, state.lp_options);

  int branch_var = -1;
  double branch_frac = 0.0;
  if (lp.status == SdpStatus::optimal) {
    if (state.has_best && lp.value > state.best_value + 1e-6) return;

    // Integral LP optimum solves this node outright.
    bool integral = true;
    double most_fractional = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (fixed[i] >= 0) continue;
      const double v = lp.x[i];
      if (std::min(v, 1.0 - v) > 1e-7) integral = false;
      const double dist = 0.5 - std::abs(v - 0.5);
      if (dist > most_fractional) {
        most_fractional = dist;
        branch_var = static_cast<int>(i);
        branch_frac = v;
      }
    }
    if (integral) {
      BitVector e(n);
      for (std::size_t i = 0; i < n; ++i) {
        const bool bit = fixed[i] >= 0 ? fixed[i] == 1 : lp.x[i] > 0.5;
        if (bit) e.set(i, true);
      }
      if (syndrome(state.inst.h, e) == state.inst.s) {
        consider(state.inst, e, state.best, state.best_value, state.has_best);
        return;
      }
    }
  } else {
    // No usable bound; branch on the first free variable.
    for (std::size_t i = 0; i < n && branch_var < 0; ++i)
      if (fixed[i] < 0) branch_var = static_cast<int>(i);
    branch_frac = 0.0;
  }

  const int first = branch_frac > 0.5 ? 1 : 0;  // nearest side first, ties to 0
  for (int child = 0; child < 2; ++child) {
    fixed[branch_var] = child == 0 ? first : 1 - first;
    bnb_recurse(state, fixed);
    fixed[branch_var] = -1;
  }
}

}  // namespace

ExactResult mld_branch_and_bound(const MldInstance& inst,
                                 std::optional<std::chrono::steady_clock::time_point> deadline) {
  if (!inst.dims_consistent()) throw std::invalid_argument("instance dimensions inconsistent");
  std::optional<BitVector> particular = solve(inst.h, inst.s);
  if (!particular) throw InconsistentSyndromeError();

  const PolyProblem poly = to_polynomial(inst, ParityEncoding::slack_binary);
  BnbState state{inst, poly, deadline, *particular, inst.cost(*particular), true, 0, {}};
  state.lp_options.tol = 1e-8;
  state.lp_options.deadline = deadline;

  std::vector<int> fixed(inst.num_vars(), -1);
  bnb_recurse(state, fixed);
  return {state.best, state.best_value, state.nodes};
}

}  // namespace sosdec
