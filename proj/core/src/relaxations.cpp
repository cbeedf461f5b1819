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

#include "sosdec/relaxations.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "sosdec/exact_decoder.hpp"
#include "sosdec/lasserre.hpp"

namespace sosdec {

const char* relax_method_name(RelaxMethod method) {
  switch (method) {
    case RelaxMethod::lp: return "lp";
    case RelaxMethod::sa: return "sa";
    case RelaxMethod::ls: return "ls";
    case RelaxMethod::ls_plus: return "lsplus";
    case RelaxMethod::lasserre: return "lasserre";
  }
  return "unknown";
}

BoundedLpResult solve_affine_lp(const PolyProblem& poly, const std::vector<int>& fixed,
                                const SdpOptions& options) {
  if (fixed.size() != static_cast<std::size_t>(poly.num_vars))
    throw std::invalid_argument("fixed vector must cover all variables");

  std::vector<int> block_of(poly.num_vars, -1);
  int active = 0;
  for (int i = 0; i < poly.num_vars; ++i)
    if (fixed[i] < 0) block_of[i] = active++;

  SdpStandardForm lp;
  // x_j and its box slack t_j = 1 - x_j, all as 1x1 blocks.
  lp.blocks.assign(2 * active, 1);
  for (int i = 0; i < poly.num_vars; ++i)
    if (fixed[i] < 0 && poly.objective[i] != 0.0)
      lp.c.push_back({block_of[i], 0, 0, poly.objective[i]});

  BoundedLpResult result;
  double fixed_cost = 0.0;
  for (int i = 0; i < poly.num_vars; ++i)
    if (fixed[i] == 1) fixed_cost += poly.objective[i];

  for (int k = 0; k < active; ++k) {
    SdpConstraint box;
    box.a.push_back({k, 0, 0, 1.0});
    box.a.push_back({active + k, 0, 0, 1.0});
    box.b = 1.0;
    lp.constraints.push_back(std::move(box));
  }
  for (const PolyEquality& eq : poly.equalities) {
    if (eq.degree > 1) throw std::invalid_argument("LP relaxation needs affine equalities");
    SdpConstraint row;
    double rhs = 0.0;
    for (const PolyTerm& term : eq.terms) {
      if (term.vars.empty()) {
        rhs -= term.coeff;
      } else if (fixed[term.vars[0]] >= 0) {
        rhs -= term.coeff * fixed[term.vars[0]];
      } else {
        row.a.push_back({block_of[term.vars[0]], 0, 0, term.coeff});
      }
    }
    row.b = rhs;
    if (row.a.empty()) {
      if (std::abs(rhs) > 1e-9) {
        result.status = SdpStatus::infeasible;
        return result;
      }
      continue;
    }
    lp.constraints.push_back(std::move(row));
  }

  if (active == 0) {
    result.status = SdpStatus::optimal;
    result.value = fixed_cost;
    result.x.assign(poly.num_vars, 0.0);
    for (int i = 0; i < poly.num_vars; ++i) result.x[i] = fixed[i] == 1 ? 1.0 : 0.0;
    return result;
  }

  const SdpSolution sol = solve_sdp(lp, options);
  result.status = sol.status;
  result.value = sol.primal_value + fixed_cost;
  result.x.assign(poly.num_vars, 0.0);
  for (int i = 0; i < poly.num_vars; ++i) {
    if (fixed[i] >= 0)
      result.x[i] = fixed[i];
    else
      result.x[i] = sol.x[block_of[i]][0];
  }
  return result;
}

RelaxationValue lp_relax(const PolyProblem& poly, const SdpOptions& options) {
  const BoundedLpResult lp = solve_affine_lp(poly, std::vector<int>(poly.num_vars, -1), options);
  RelaxationValue out;
  out.method = RelaxMethod::lp;
  out.level = 1;
  out.status = lp.status;
  out.value = lp.value;
  out.fractional.assign(lp.x.begin(),
                        lp.x.begin() + std::min<std::size_t>(lp.x.size(), poly.num_error_vars));
  return out;
}

namespace {

// Subset helpers shared by the lifted LPs.
std::vector<int> with_element(const std::vector<int>& s, int i) {
  std::vector<int> out;
  out.reserve(s.size() + 1);
  bool inserted = false;
  for (int v : s) {
    if (!inserted && i < v) {
      out.push_back(i);
      inserted = true;
    }
    if (v == i) inserted = true;
    out.push_back(v);
  }
  if (!inserted) out.push_back(i);
  return out;
}

std::vector<std::vector<int>> subsets_up_to(int n, int max_size, std::size_t budget) {
  std::vector<std::vector<int>> out;
  out.push_back({});
  for (int k = 1; k <= std::min(max_size, n); ++k) {
    std::vector<int> pick(k);
    for (int i = 0; i < k; ++i) pick[i] = i;
    while (true) {
      out.emplace_back(pick.begin(), pick.end());
      if (out.size() > budget)
        throw BudgetExceededError("Sherali-Adams subset budget exceeded");
      int i = k - 1;
      while (i >= 0 && pick[i] == n - k + i) --i;
      if (i < 0) break;
      ++pick[i];
      for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return out;
}

}  // namespace

RelaxationValue sherali_adams(const MldInstance& inst, int t, const SdpOptions& options) {
  if (t < 1) throw std::invalid_argument("Sherali-Adams level must be >= 1");
  const PolyProblem poly = to_polynomial(inst, ParityEncoding::slack_binary);
  const int n = poly.num_vars;

  const std::vector<std::vector<int>> lifted = subsets_up_to(n, t + 1, 200000);
  std::map<std::vector<int>, int> id;
  for (std::size_t i = 0; i < lifted.size(); ++i) id.emplace(lifted[i], static_cast<int>(i));

  SdpStandardForm lp;
  lp.blocks.assign(lifted.size(), 1);  // Y_S >= 0
  for (int i = 0; i < poly.num_error_vars; ++i)
    if (poly.objective[i] != 0.0)
      lp.c.push_back({id.at({i}), 0, 0, poly.objective[i]});

  {
    SdpConstraint norm;  // Y_0 = 1
    norm.a.push_back({0, 0, 0, 1.0});
    norm.b = 1.0;
    lp.constraints.push_back(std::move(norm));
  }

  // Syndrome equalities multiplied by prod_{i in S} x_i for |S| <= t.
  for (const PolyEquality& eq : poly.equalities) {
    if (eq.degree > 1) throw std::invalid_argument("Sherali-Adams needs affine equalities");
    for (const std::vector<int>& s : lifted) {
      if (static_cast<int>(s.size()) > t) continue;
      std::map<int, double> row;
      for (const PolyTerm& term : eq.terms) {
        const int var = term.vars.empty() ? id.at(s) : id.at(with_element(s, term.vars[0]));
        row[var] += term.coeff;
      }
      SdpConstraint con;
      for (const auto& [var, coeff] : row)
        if (coeff != 0.0) con.a.push_back({var, 0, 0, coeff});
      con.b = 0.0;
      if (!con.a.empty()) lp.constraints.push_back(std::move(con));
    }
  }

  // Monotonicity Y_{S u i} <= Y_S via one slack block per pair.
  for (const std::vector<int>& s : lifted) {
    if (static_cast<int>(s.size()) > t) continue;
    for (int i = 0; i < n; ++i) {
      if (std::binary_search(s.begin(), s.end(), i)) continue;
      const int slack = static_cast<int>(lp.blocks.size());
      lp.blocks.push_back(1);
      SdpConstraint con;
      con.a.push_back({id.at(s), 0, 0, 1.0});
      con.a.push_back({id.at(with_element(s, i)), 0, 0, -1.0});
      con.a.push_back({slack, 0, 0, -1.0});
      con.b = 0.0;
      lp.constraints.push_back(std::move(con));
    }
  }

  const SdpSolution sol = solve_sdp(lp, options);
  RelaxationValue out;
  out.method = RelaxMethod::sa;
  out.level = t;
  out.status = sol.status;
  out.value = sol.primal_value;
  out.fractional.resize(poly.num_error_vars, 0.0);
  if (!sol.x.empty())
    for (int i = 0; i < poly.num_error_vars; ++i) out.fractional[i] = sol.x[id.at({i})][0];
  return out;
}

RelaxationValue lovasz_schrijver(const MldInstance& inst, bool plus, const SdpOptions& options) {
  const PolyProblem poly = to_polynomial(inst, ParityEncoding::slack_binary);
  const int n = poly.num_vars;
  const int dim = n + 1;  // protection matrix indexed 0..n

  // Upper-triangle scalar variables Y(i,j).
  std::vector<std::vector<int>> pair_id(dim, std::vector<int>(dim, -1));
  SdpStandardForm prog;
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      pair_id[i][j] = pair_id[j][i] = static_cast<int>(prog.blocks.size());
      prog.blocks.push_back(1);
    }

  for (int i = 0; i < poly.num_error_vars; ++i)
    if (poly.objective[i] != 0.0)
      prog.c.push_back({pair_id[0][i + 1], 0, 0, poly.objective[i]});

  {
    SdpConstraint con;  // Y_00 = 1
    con.a.push_back({pair_id[0][0], 0, 0, 1.0});
    con.b = 1.0;
    prog.constraints.push_back(std::move(con));
  }
  for (int i = 1; i < dim; ++i) {  // Y_0i = Y_ii
    SdpConstraint con;
    con.a.push_back({pair_id[0][i], 0, 0, 1.0});
    con.a.push_back({pair_id[i][i], 0, 0, -1.0});
    con.b = 0.0;
    prog.constraints.push_back(std::move(con));
  }

  // Every row of the protection matrix and its complement satisfy the
  // homogenized affine system.
  for (const PolyEquality& eq : poly.equalities) {
    if (eq.degree > 1) throw std::invalid_argument("Lovasz-Schrijver needs affine equalities");
    for (int i = 0; i < dim; ++i) {
      std::map<int, double> row;
      for (const PolyTerm& term : eq.terms) {
        if (term.vars.empty())
          row[pair_id[0][i]] += term.coeff;
        else
          row[pair_id[i][term.vars[0] + 1]] += term.coeff;
      }
      SdpConstraint con;
      for (const auto& [var, coeff] : row)
        if (coeff != 0.0) con.a.push_back({var, 0, 0, coeff});
      con.b = 0.0;
      if (!con.a.empty()) prog.constraints.push_back(std::move(con));
    }
    for (int i = 1; i < dim; ++i) {
      std::map<int, double> row;
      double rhs = 0.0;
      for (const PolyTerm& term : eq.terms) {
        if (term.vars.empty()) {
          rhs -= term.coeff;  // coeff * 1
          row[pair_id[0][i]] -= term.coeff;
        } else {
          row[pair_id[0][term.vars[0] + 1]] += term.coeff;
          row[pair_id[i][term.vars[0] + 1]] -= term.coeff;
        }
      }
      SdpConstraint con;
      for (const auto& [var, coeff] : row)
        if (coeff != 0.0) con.a.push_back({var, 0, 0, coeff});
      con.b = rhs;
      if (!con.a.empty()) prog.constraints.push_back(std::move(con));
    }
  }

  // 0 <= Y_ij <= Y_0i (and by symmetry <= Y_0j).
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      for (int anchor : {i, j}) {
        if (pair_id[0][anchor] == pair_id[i][j]) continue;
        const int slack = static_cast<int>(prog.blocks.size());
        prog.blocks.push_back(1);
        SdpConstraint con;
        con.a.push_back({pair_id[0][anchor], 0, 0, 1.0});
        con.a.push_back({pair_id[i][j], 0, 0, -1.0});
        con.a.push_back({slack, 0, 0, -1.0});
        con.b = 0.0;
        prog.constraints.push_back(std::move(con));
        if (i == j) break;
      }
    }

  if (plus) {
    // PSD copy of the protection matrix, linked entrywise.
    const int psd = static_cast<int>(prog.blocks.size());
    prog.blocks.push_back(dim);
    for (int i = 0; i < dim; ++i)
      for (int j = i; j < dim; ++j) {
        SdpConstraint con;
        con.a.push_back({psd, i, j, i == j ? 1.0 : 0.5});
        con.a.push_back({pair_id[i][j], 0, 0, -1.0});
        con.b = 0.0;
        prog.constraints.push_back(std::move(con));
      }
  }

  const SdpSolution sol = solve_sdp(prog, options);
  RelaxationValue out;
  out.method = plus ? RelaxMethod::ls_plus : RelaxMethod::ls;
  out.level = 1;
  out.status = sol.status;
  out.value = sol.primal_value;
  out.fractional.resize(poly.num_error_vars, 0.0);
  if (!sol.x.empty())
    for (int i = 0; i < poly.num_error_vars; ++i) out.fractional[i] = sol.x[pair_id[0][i + 1]][0];
  return out;
}

ComparisonTable compare_relaxations(const MldInstance& inst, int t, const SdpOptions& options) {
  ComparisonTable table;
  const PolyProblem poly = to_polynomial(inst, ParityEncoding::slack_binary);

  const auto record = [&table](RelaxMethod method, int level, auto&& run) {
    ComparisonRow row;
    row.method = method;
    row.level = level;
    try {
      const RelaxationValue value = run();
      row.value = value.value;
      row.status = value.status;
    } catch (const std::exception&) {
      row.status = SdpStatus::numerical_failure;
    }
    table.rows.push_back(row);
  };

  record(RelaxMethod::lp, 1, [&] { return lp_relax(poly, options); });
  record(RelaxMethod::ls, 1, [&] { return lovasz_schrijver(inst, false, options); });
  record(RelaxMethod::ls_plus, 1, [&] { return lovasz_schrijver(inst, true, options); });
  record(RelaxMethod::sa, t, [&] { return sherali_adams(inst, t, options); });
  record(RelaxMethod::lasserre, t, [&] {
    // Monotone strengthening makes the cross-hierarchy dominance structural.
    AssemblyOptions strengthen;
    strengthen.monotone_strengthening = true;
    const MomentSolution sol =
        solve_level(poly, t, SparsityMode::dense, options.tol, options.deadline, strengthen);
    RelaxationValue value;
    value.method = RelaxMethod::lasserre;
    value.level = t;
    value.status = sol.status;
    value.value = sol.lambda;
    return value;
  });

  try {
    const ExactResult exact = mld_coset(inst);
    table.exact_value = exact.value;
    table.exact_ok = true;
  } catch (const std::exception&) {
    table.exact_ok = false;
  }
  return table;
}

}  // namespace sosdec
