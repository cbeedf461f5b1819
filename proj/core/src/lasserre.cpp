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

#include "sosdec/lasserre.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sosdec {

const char* sparsity_mode_name(SparsityMode mode) {
  return mode == SparsityMode::dense ? "dense" : "sparse";
}

namespace {

// Subsets of `vars` with size <= level, graded-lex over the sorted list.
std::vector<std::vector<int>> graded_subsets(const std::vector<int>& vars, int level,
                                             std::size_t limit) {
  std::vector<std::vector<int>> out;
  out.push_back({});
  const int n = static_cast<int>(vars.size());
  for (int k = 1; k <= std::min(level, n); ++k) {
    std::vector<int> pick(k);
    for (int i = 0; i < k; ++i) pick[i] = i;
    while (true) {
      std::vector<int> subset(k);
      for (int i = 0; i < k; ++i) subset[i] = vars[pick[i]];
      out.push_back(std::move(subset));
      if (out.size() > limit) throw std::length_error("moment basis exceeds size budget");
      int i = k - 1;
      while (i >= 0 && pick[i] == n - k + i) --i;
      if (i < 0) break;
      ++pick[i];
      for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return out;
}

std::vector<int> sorted_union(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> u;
  u.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(u));
  return u;
}

}  // namespace

MomentBasis build_basis(int num_vars, int level) {
  if (level < 1) throw std::invalid_argument("hierarchy level must be >= 1");
  if (num_vars < 0) throw std::invalid_argument("variable count must be nonnegative");
  std::vector<int> vars(num_vars);
  for (int i = 0; i < num_vars; ++i) vars[i] = i;
  MomentBasis basis;
  basis.level = level;
  basis.num_vars = num_vars;
  basis.monomials = graded_subsets(vars, level, 1000000);
  for (std::size_t i = 0; i < basis.monomials.size(); ++i)
    basis.index.emplace(basis.monomials[i], static_cast<int>(i));
  return basis;
}

CliqueDecomposition correlative_cliques(const PolyProblem& poly) {
  const int n = poly.num_vars;
  std::vector<std::set<int>> adj(n);
  for (const PolyEquality& eq : poly.equalities) {
    for (std::size_t a = 0; a < eq.support.size(); ++a)
      for (std::size_t b = a + 1; b < eq.support.size(); ++b) {
        adj[eq.support[a]].insert(eq.support[b]);
        adj[eq.support[b]].insert(eq.support[a]);
      }
  }

  // Minimum-degree elimination; each eliminated vertex contributes the
  // clique {v} u N(v), with fill edges keeping the extension chordal.
  std::vector<bool> eliminated(n, false);
  std::vector<std::vector<int>> elim_cliques;
  for (int round = 0; round < n; ++round) {
    int v = -1;
    std::size_t best_deg = 0;
    for (int i = 0; i < n; ++i) {
      if (eliminated[i]) continue;
      std::size_t deg = 0;
      for (int u : adj[i])
        if (!eliminated[u]) ++deg;
      if (v < 0 || deg < best_deg) {
        v = i;
        best_deg = deg;
      }
    }
    std::vector<int> clique{v};
    for (int u : adj[v])
      if (!eliminated[u]) clique.push_back(u);
    std::sort(clique.begin(), clique.end());
    for (std::size_t a = 0; a < clique.size(); ++a)
      for (std::size_t b = a + 1; b < clique.size(); ++b) {
        adj[clique[a]].insert(clique[b]);
        adj[clique[b]].insert(clique[a]);
      }
    eliminated[v] = true;
    elim_cliques.push_back(std::move(clique));
  }

  // Keep the maximal ones, deterministically ordered.
  std::sort(elim_cliques.begin(), elim_cliques.end());
  elim_cliques.erase(std::unique(elim_cliques.begin(), elim_cliques.end()), elim_cliques.end());
  CliqueDecomposition result;
  for (std::size_t i = 0; i < elim_cliques.size(); ++i) {
    bool contained = false;
    for (std::size_t j = 0; j < elim_cliques.size() && !contained; ++j) {
      if (i == j || elim_cliques[j].size() < elim_cliques[i].size()) continue;
      if (i < j && elim_cliques[j].size() == elim_cliques[i].size()) continue;
      contained = std::includes(elim_cliques[j].begin(), elim_cliques[j].end(),
                                elim_cliques[i].begin(), elim_cliques[i].end());
    }
    if (!contained) result.cliques.push_back(elim_cliques[i]);
  }
  return result;
}

MomentAssembly assemble_moment_sdp(const PolyProblem& poly, int level, SparsityMode mode,
                                   const AssemblyOptions& options) {
  if (level < 1) throw std::invalid_argument("hierarchy level must be >= 1");
  for (const PolyEquality& eq : poly.equalities)
    if (eq.degree > 2 * level)
      throw std::invalid_argument("hierarchy level too low for constraint degree");

  MomentAssembly asmb;
  asmb.level = level;
  asmb.mode = mode;

  std::vector<std::vector<int>> cliques;
  if (mode == SparsityMode::dense) {
    std::vector<int> all(poly.num_vars);
    for (int i = 0; i < poly.num_vars; ++i) all[i] = i;
    cliques.push_back(std::move(all));
  } else {
    cliques = correlative_cliques(poly).cliques;
  }

  constexpr std::size_t kMomentBudget = 1000000;
  const auto intern = [&asmb](const std::vector<int>& subset) {
    const auto it = asmb.moment_index.find(subset);
    if (it != asmb.moment_index.end()) return it->second;
    const int id = static_cast<int>(asmb.moment_subsets.size());
    asmb.moment_index.emplace(subset, id);
    asmb.moment_subsets.push_back(subset);
    if (asmb.moment_subsets.size() > kMomentBudget)
      throw std::length_error("moment dictionary exceeds size budget");
    return id;
  };
  intern({});  // moment id 0 is y(0)

  // PSD moment block per clique: Z_b = sum_U y_U T_U with T_U the 0/1
  // indicator of the pair positions whose union is U.
  std::vector<std::vector<SymEntry>> entries_per_moment;
  const auto entry_for = [&](int id) -> std::vector<SymEntry>& {
    if (entries_per_moment.size() <= static_cast<std::size_t>(id))
      entries_per_moment.resize(id + 1);
    return entries_per_moment[id];
  };

  for (const std::vector<int>& clique : cliques) {
    MomentBlockLayout layout;
    layout.clique = clique;
    layout.basis = graded_subsets(clique, level, kMomentBudget);
    const int bs = static_cast<int>(layout.basis.size());
    layout.moment_of_pair.assign(static_cast<std::size_t>(bs) * bs, -1);
    const int block_id = static_cast<int>(asmb.sdp.blocks.size());
    asmb.sdp.blocks.push_back(bs);
    for (int i = 0; i < bs; ++i) {
      for (int j = i; j < bs; ++j) {
        const int id = intern(sorted_union(layout.basis[i], layout.basis[j]));
        layout.moment_of_pair[static_cast<std::size_t>(i) * bs + j] = id;
        layout.moment_of_pair[static_cast<std::size_t>(j) * bs + i] = id;
        entry_for(id).push_back({block_id, i, j, -1.0});
      }
    }
    asmb.blocks.push_back(std::move(layout));
  }

  // Optional monotone strengthening: y_U >= 0 and y_{S u v} <= y_S as 1x1
  // slack blocks of the dual matrix.
  const int num_moments = static_cast<int>(asmb.moment_subsets.size());
  if (options.monotone_strengthening) {
    for (int id = 1; id < num_moments; ++id) {
      const int blk = static_cast<int>(asmb.sdp.blocks.size());
      asmb.sdp.blocks.push_back(1);
      entry_for(id).push_back({blk, 0, 0, -1.0});
    }
    for (int id = 1; id < num_moments; ++id) {
      const std::vector<int>& u = asmb.moment_subsets[id];
      for (int drop : u) {
        std::vector<int> s;
        for (int v : u)
          if (v != drop) s.push_back(v);
        const auto it = asmb.moment_index.find(s);
        if (it == asmb.moment_index.end()) continue;
        const int blk = static_cast<int>(asmb.sdp.blocks.size());
        asmb.sdp.blocks.push_back(1);
        entry_for(it->second).push_back({blk, 0, 0, -1.0});
        entry_for(id).push_back({blk, 0, 0, 1.0});
      }
    }
  }

  // One trace constraint per moment; the dual vector of the solved SDP is
  // the moment vector itself. b carries the (negated) objective.
  asmb.sdp.constraints.resize(num_moments);
  for (int id = 0; id < num_moments; ++id) {
    asmb.sdp.constraints[id].a = std::move(entry_for(id));
    const std::vector<int>& subset = asmb.moment_subsets[id];
    asmb.sdp.constraints[id].b =
        subset.size() == 1 ? -poly.objective[subset[0]] : 0.0;
  }

  // Localizing equalities enter as free variables; the normalization row
  // y(0) = 1 is the only inhomogeneous one.
  int free_count = 0;
  asmb.sdp.constraints[0].free_terms.emplace_back(free_count, 1.0);
  asmb.sdp.free_cost.push_back(1.0);
  ++free_count;

  for (const PolyEquality& eq : poly.equalities) {
    // Owning clique: first clique containing the support.
    int owner = -1;
    for (std::size_t c = 0; c < cliques.size(); ++c) {
      if (std::includes(cliques[c].begin(), cliques[c].end(), eq.support.begin(),
                        eq.support.end())) {
        owner = static_cast<int>(c);
        break;
      }
    }
    if (owner < 0) throw std::logic_error("constraint support not covered by any clique");
    const int max_s = 2 * level - eq.degree;
    const std::vector<std::vector<int>> shifts =
        graded_subsets(cliques[owner], max_s, kMomentBudget);
    for (const std::vector<int>& shift : shifts) {
      std::map<int, double> row;
      for (const PolyTerm& term : eq.terms) {
        const int id = asmb.moment_index.at(sorted_union(shift, term.vars));
        row[id] += term.coeff;
      }
      bool nonzero = false;
      for (const auto& [id, coeff] : row)
        if (coeff != 0.0) nonzero = true;
      if (!nonzero) continue;
      for (const auto& [id, coeff] : row)
        if (coeff != 0.0) asmb.sdp.constraints[id].free_terms.emplace_back(free_count, coeff);
      asmb.sdp.free_cost.push_back(0.0);
      ++free_count;
    }
  }
  asmb.sdp.free_dim = free_count;
  asmb.num_localizing = free_count - 1;
  return asmb;
}

std::optional<double> MomentSolution::moment(const std::vector<int>& subset) const {
  const auto it = index.find(subset);
  if (it == index.end()) return std::nullopt;
  return y[it->second];
}

std::vector<double> MomentSolution::block_matrix(std::size_t block) const {
  const MomentBlockLayout& lay = layout[block];
  const std::size_t bs = lay.basis.size();
  std::vector<double> m(bs * bs, 0.0);
  for (std::size_t i = 0; i < bs; ++i)
    for (std::size_t j = 0; j < bs; ++j) m[i * bs + j] = y[lay.moment_of_pair[i * bs + j]];
  return m;
}

MomentSolution solve_level(const PolyProblem& poly, int level, SparsityMode mode, double tol,
                           std::optional<std::chrono::steady_clock::time_point> deadline,
                           const AssemblyOptions& options) {
  MomentAssembly asmb = assemble_moment_sdp(poly, level, mode, options);
  SdpOptions sdp_options;
  sdp_options.tol = tol;
  sdp_options.trace_rows_independent = true;
  sdp_options.deadline = deadline;
  SdpSolution sol = solve_sdp(asmb.sdp, sdp_options);

  MomentSolution out;
  out.level = level;
  out.mode = mode;
  out.status = sol.status;
  out.subsets = std::move(asmb.moment_subsets);
  out.index = std::move(asmb.moment_index);
  out.layout = std::move(asmb.blocks);
  out.iterations = sol.iterations;
  out.solver_gap = sol.gap;
  out.y.assign(out.subsets.size(), 0.0);
  if (!sol.y.empty()) {
    for (std::size_t i = 0; i < out.y.size(); ++i) out.y[i] = sol.y[i];
    // The normalization row holds at solver tolerance; rescaling makes
    // y(0) = 1 exact and preserves PSD and the homogeneous localizing rows.
    if (std::abs(out.y[0]) > 0.5)
      for (double& v : out.y) v /= out.y[0];
  }
  double lambda = 0.0;
  for (int i = 0; i < poly.num_vars; ++i) {
    if (poly.objective[i] == 0.0) continue;
    const auto it = out.index.find(std::vector<int>{i});
    if (it != out.index.end()) lambda += poly.objective[i] * out.y[it->second];
  }
  out.lambda = lambda;
  return out;
}

Extraction extract_error(const MomentSolution& sol, const MldInstance& inst) {
  const std::size_t n = inst.num_vars();
  std::vector<double> first(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto it = sol.index.find(std::vector<int>{static_cast<int>(i)});
    if (it != sol.index.end()) first[i] = sol.y[it->second];
  }
  Extraction ext;
  ext.e_hat = BitVector(n);
  for (std::size_t i = 0; i < n; ++i)
    if (first[i] > 0.5) ext.e_hat.set(i, true);  // ties round to 0

  const auto unsatisfied = [&](const BitVector& e) {
    std::vector<std::size_t> rows;
    const BitVector observed = inst.h.mul(e);
    for (std::size_t r = 0; r < inst.h.rows(); ++r)
      if (observed.get(r) != inst.s.get(r)) rows.push_back(r);
    return rows;
  };

  std::vector<std::size_t> unsat = unsatisfied(ext.e_hat);
  for (std::size_t flip = 0; flip < n && !unsat.empty(); ++flip) {
    // Flip the most uncertain bit touching an unsatisfied check.
    int candidate = -1;
    double best_dist = 0.0;
    for (std::size_t r : unsat) {
      for (std::size_t i : inst.h.row_support(r)) {
        const double dist = std::abs(first[i] - 0.5);
        if (candidate < 0 || dist < best_dist) {
          candidate = static_cast<int>(i);
          best_dist = dist;
        }
      }
    }
    if (candidate < 0) break;
    ext.e_hat.flip(candidate);
    ++ext.repair_flips;
    unsat = unsatisfied(ext.e_hat);
  }
  ext.feasible = unsat.empty();
  return ext;
}

namespace {

struct BlockRankDetail {
  int rank = 0;
  double smallest_kept = 0.0;
  double largest_dropped = 0.0;
};

BlockRankDetail block_rank(const MomentSolution& sol, std::size_t block, int level,
                           double rel_tol) {
  const MomentBlockLayout& lay = sol.layout[block];
  std::size_t prefix = 0;
  while (prefix < lay.basis.size() && static_cast<int>(lay.basis[prefix].size()) <= level)
    ++prefix;
  Eigen::MatrixXd m(prefix, prefix);
  const std::size_t bs = lay.basis.size();
  for (std::size_t i = 0; i < prefix; ++i)
    for (std::size_t j = 0; j < prefix; ++j) m(i, j) = sol.y[lay.moment_of_pair[i * bs + j]];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd sv = es.eigenvalues().cwiseAbs();
  const double top = sv.maxCoeff();
  BlockRankDetail detail;
  if (top <= 0.0) return detail;
  std::vector<double> sorted(sv.data(), sv.data() + sv.size());
  std::sort(sorted.rbegin(), sorted.rend());
  for (double s : sorted) {
    if (s > rel_tol * top) {
      ++detail.rank;
      detail.smallest_kept = s / top;
    } else {
      detail.largest_dropped = s / top;
      break;
    }
  }
  return detail;
}

}  // namespace

RankReport moment_rank_report(const MomentSolution& sol, int level, double rel_tol) {
  if (level < 0 || level > sol.level)
    throw std::invalid_argument("rank level must satisfy 0 <= r <= solution level");
  RankReport report;
  report.smallest_kept_ratio = 1.0;
  for (std::size_t b = 0; b < sol.layout.size(); ++b) {
    const BlockRankDetail detail = block_rank(sol, b, level, rel_tol);
    report.rank += detail.rank;
    if (detail.rank > 0)
      report.smallest_kept_ratio = std::min(report.smallest_kept_ratio, detail.smallest_kept);
    report.largest_dropped_ratio = std::max(report.largest_dropped_ratio, detail.largest_dropped);
  }
  return report;
}

int moment_rank(const MomentSolution& sol, int level, double rel_tol) {
  return moment_rank_report(sol, level, rel_tol).rank;
}

bool rank_loop(const MomentSolution& sol, double rel_tol) {
  if (sol.level < 2) throw std::invalid_argument("rank loop needs level >= 2");
  return moment_rank(sol, sol.level, rel_tol) == moment_rank(sol, sol.level - 1, rel_tol);
}

DecodeResult decode(const MldInstance& inst, int level, SparsityMode mode, double tol,
                    std::optional<std::chrono::steady_clock::time_point> deadline) {
  using clock = std::chrono::steady_clock;
  const auto ms_since = [](clock::time_point start) {
    return std::chrono::duration<double, std::milli>(clock::now() - start).count();
  };

  DecodeResult result;
  result.level = level;
  result.mode = mode;
  const auto t0 = clock::now();

  const PolyProblem poly = to_polynomial(inst, ParityEncoding::slack_binary);
  result.timings.assemble_ms = ms_since(t0);

  const auto t1 = clock::now();
  MomentSolution sol = solve_level(poly, level, mode, tol, deadline);
  result.timings.solve_ms = ms_since(t1);
  result.solver_status = sol.status;
  result.lambda = sol.lambda;

  const auto t2 = clock::now();
  if (sol.status == SdpStatus::optimal || sol.status == SdpStatus::max_iterations) {
    Extraction ext = extract_error(sol, inst);
    result.e_hat = ext.e_hat;
    result.feasible_after_rounding = ext.feasible;
  } else {
    result.e_hat = BitVector(inst.num_vars());
    result.feasible_after_rounding = false;
  }
  if (sol.status == SdpStatus::optimal) {
    result.moment_rank = moment_rank(sol, level);
    result.rank_loop = level >= 2 ? rank_loop(sol) : false;
  }
  result.timings.extract_ms = ms_since(t2);
  result.timings.total_ms = ms_since(t0);
  return result;
}

std::string moment_solution_to_json(const MomentSolution& sol, double rank_rel_tol) {
  nlohmann::json doc;
  doc["level"] = sol.level;
  doc["mode"] = sparsity_mode_name(sol.mode);
  doc["status"] = status_name(sol.status);
  doc["lambda"] = sol.lambda;
  if (sol.status == SdpStatus::optimal) {
    doc["rank"] = moment_rank(sol, sol.level, rank_rel_tol);
    if (sol.level >= 2) {
      doc["rank_prev"] = moment_rank(sol, sol.level - 1, rank_rel_tol);
      doc["rank_loop"] = rank_loop(sol, rank_rel_tol);
    }
  }
  nlohmann::json moments = nlohmann::json::object();
  for (std::size_t i = 0; i < sol.subsets.size(); ++i) {
    std::ostringstream key;
    for (std::size_t k = 0; k < sol.subsets[i].size(); ++k) {
      if (k) key << ',';
      key << sol.subsets[i][k];
    }
    moments[key.str()] = sol.y[i];
  }
  doc["moments"] = std::move(moments);
  return doc.dump(2) + "\n";
}

}  // namespace sosdec
