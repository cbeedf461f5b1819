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

#include "sosdec/sdp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace sosdec {

std::size_t SdpStandardForm::total_psd_dim() const {
  std::size_t total = 0;
  for (int b : blocks) total += static_cast<std::size_t>(b);
  return total;
}

const char* status_name(SdpStatus status) {
  switch (status) {
    case SdpStatus::optimal: return "optimal";
    case SdpStatus::infeasible: return "infeasible";
    case SdpStatus::unbounded: return "unbounded";
    case SdpStatus::max_iterations: return "max_iterations";
    case SdpStatus::numerical_failure: return "numerical_failure";
  }
  return "unknown";
}

namespace {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Per-constraint entries grouped by block for fast Schur assembly.
struct BlockEntries {
  int block;
  std::vector<SymEntry> entries;
};

struct PreppedConstraint {
  std::vector<BlockEntries> parts;
  std::vector<std::pair<int, double>> free_terms;
  double b = 0.0;
  double norm = 0.0;  // Frobenius norm of A_i
};

std::vector<PreppedConstraint> prep_constraints(const SdpStandardForm& p) {
  std::vector<PreppedConstraint> prepped(p.constraints.size());
  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    const SdpConstraint& con = p.constraints[i];
    std::map<int, std::vector<SymEntry>> by_block;
    double sq = 0.0;
    for (const SymEntry& e : con.a) {
      by_block[e.block].push_back(e);
      sq += (e.row == e.col) ? e.value * e.value : 2.0 * e.value * e.value;
    }
    for (auto& [blk, entries] : by_block) prepped[i].parts.push_back({blk, std::move(entries)});
    prepped[i].free_terms = con.free_terms;
    prepped[i].b = con.b;
    prepped[i].norm = std::sqrt(sq);
  }
  return prepped;
}

double dot_block(const std::vector<SymEntry>& entries, const Mat& m) {
  double total = 0.0;
  for (const SymEntry& e : entries) {
    if (e.row == e.col)
      total += e.value * m(e.row, e.col);
    else
      total += e.value * (m(e.row, e.col) + m(e.col, e.row));
  }
  return total;
}

double dot_constraint(const PreppedConstraint& con, const std::vector<Mat>& blocks) {
  double total = 0.0;
  for (const BlockEntries& part : con.parts) total += dot_block(part.entries, blocks[part.block]);
  return total;
}

void add_entries(std::vector<Mat>& acc, const std::vector<SymEntry>& entries, double scale) {
  for (const SymEntry& e : entries) {
    acc[e.block](e.row, e.col) += scale * e.value;
    if (e.row != e.col) acc[e.block](e.col, e.row) += scale * e.value;
  }
}

// W A W for a sparse symmetric A, via rank-one accumulation of W columns.
Mat scale_pair(const Mat& w, const std::vector<SymEntry>& entries) {
  Mat out = Mat::Zero(w.rows(), w.cols());
  for (const SymEntry& e : entries) {
    if (e.row == e.col) {
      out.noalias() += e.value * (w.col(e.row) * w.col(e.col).transpose());
    } else {
      out.noalias() += e.value * (w.col(e.row) * w.col(e.col).transpose());
      out.noalias() += e.value * (w.col(e.col) * w.col(e.row).transpose());
    }
  }
  return out;
}

struct Scaling {
  Mat w;   // NT point, W Z W = X
  Mat g;   // W = G G^T
  Mat gi;  // G^{-1}
  Vec v;   // scaled spectrum, Xhat = Zhat = diag(v)
  bool ok = false;
};

Scaling nt_scaling(const Mat& x, const Mat& z) {
  Scaling s;
  Eigen::LLT<Mat> llt(z);
  if (llt.info() != Eigen::Success) return s;
  const Mat l = llt.matrixL();
  Mat ltxl = l.transpose() * x * l;
  ltxl = 0.5 * (ltxl + ltxl.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(ltxl);
  if (es.info() != Eigen::Success) return s;
  Vec d = es.eigenvalues();
  if (d.minCoeff() <= 0.0) return s;
  const Mat& u = es.eigenvectors();
  const Vec d_q = d.array().pow(0.25);
  // G = L^{-T} U D^{1/4}, Gi = D^{-1/4} U^T L^T.
  Mat ud = u * d_q.asDiagonal();
  s.g = l.transpose().triangularView<Eigen::Upper>().solve(ud);
  s.gi = d_q.cwiseInverse().asDiagonal() * u.transpose() * l.transpose();
  s.w = s.g * s.g.transpose();
  s.v = d.cwiseSqrt();
  s.ok = true;
  return s;
}

// Largest step with S + alpha*dS psd, as a multiple of 1.
double max_step(const Mat& s, const Mat& ds) {
  Mat shifted = s;
  Eigen::LLT<Mat> llt(shifted);
  double jitter = 1e-14 * (1.0 + s.diagonal().cwiseAbs().maxCoeff());
  int tries = 0;
  while (llt.info() != Eigen::Success && tries < 6) {
    shifted = s + jitter * Mat::Identity(s.rows(), s.cols());
    llt.compute(shifted);
    jitter *= 100.0;
    ++tries;
  }
  if (llt.info() != Eigen::Success) return 0.0;
  const Mat l = llt.matrixL();
  Mat t = l.triangularView<Eigen::Lower>().solve(ds);
  t = l.triangularView<Eigen::Lower>().solve(t.transpose()).eval();
  t = 0.5 * (t + t.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(t, Eigen::EigenvaluesOnly);
  const double lam_min = es.eigenvalues().minCoeff();
  if (lam_min >= -1e-14) return kInf;
  return -1.0 / lam_min;
}

double entries_norm(const std::vector<SymEntry>& entries) {
  double sq = 0.0;
  for (const SymEntry& e : entries)
    sq += (e.row == e.col) ? e.value * e.value : 2.0 * e.value * e.value;
  return std::sqrt(sq);
}

struct DenseRowSpace {
  // Incremental row reduction with partial pivoting over a fixed coordinate
  // dictionary; reports whether each new row is independent and, if not,
  // the residual of its right-hand side against the eliminated combination.
  std::vector<Vec> rows;
  std::vector<double> rhs;
  std::vector<int> pivot_cols;

  // Returns {independent, rhs_residual}.
  std::pair<bool, double> insert(Vec row, double b, double rel_tol) {
    const double original_norm = std::max(row.norm(), 1.0);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const double factor = row(pivot_cols[k]) / rows[k](pivot_cols[k]);
      if (factor != 0.0) {
        row -= factor * rows[k];
        b -= factor * rhs[k];
      }
    }
    int pivot = -1;
    double best = rel_tol * original_norm;
    for (int j = 0; j < row.size(); ++j) {
      if (std::abs(row(j)) > best) {
        best = std::abs(row(j));
        pivot = j;
      }
    }
    if (pivot < 0) return {false, std::abs(b)};
    rows.push_back(std::move(row));
    rhs.push_back(b);
    pivot_cols.push_back(pivot);
    return {true, 0.0};
  }
};

}  // namespace

PresolveResult presolve(const SdpStandardForm& problem, bool trace_rows_independent) {
  PresolveResult result;
  result.reduced.blocks = problem.blocks;
  result.reduced.c = problem.c;
  const double rel_tol = 1e-10;

  // Trace side: vectorize each row over the coordinates it touches.
  if (trace_rows_independent) {
    result.reduced.constraints = problem.constraints;
    result.kept_rows.resize(problem.constraints.size());
    for (std::size_t i = 0; i < problem.constraints.size(); ++i)
      result.kept_rows[i] = static_cast<int>(i);
  } else {
    std::map<std::tuple<int, int, int>, int> coord;
    for (const SdpConstraint& con : problem.constraints)
      for (const SymEntry& e : con.a)
        coord.emplace(std::make_tuple(e.block, e.row, e.col), static_cast<int>(coord.size()));
    const int free_base = static_cast<int>(coord.size());
    const int dim = free_base + problem.free_dim;

    DenseRowSpace space;
    for (std::size_t i = 0; i < problem.constraints.size(); ++i) {
      const SdpConstraint& con = problem.constraints[i];
      Vec row = Vec::Zero(std::max(dim, 1));
      for (const SymEntry& e : con.a) {
        const double weight = (e.row == e.col) ? 1.0 : std::numbers::sqrt2;
        row(coord.at({e.block, e.row, e.col})) += weight * e.value;
      }
      for (const auto& [k, v] : con.free_terms) row(free_base + k) += v;
      auto [independent, residual] = space.insert(std::move(row), con.b, rel_tol);
      if (independent) {
        result.reduced.constraints.push_back(con);
        result.kept_rows.push_back(static_cast<int>(i));
      } else if (residual > rel_tol * (1.0 + std::abs(con.b))) {
        result.infeasible = true;
        return result;
      }
    }
  }

  // Free side: dependent rows of [B^T | d] drop the corresponding free
  // variable; an inconsistent dependency makes the dual equalities
  // unsatisfiable (the primal is then unbounded if feasible).
  result.reduced.free_dim = 0;
  if (problem.free_dim > 0) {
    const int m = static_cast<int>(result.reduced.constraints.size());
    Mat bt = Mat::Zero(problem.free_dim, m);
    for (int i = 0; i < m; ++i)
      for (const auto& [k, v] : result.reduced.constraints[i].free_terms) bt(k, i) += v;

    DenseRowSpace space;
    std::vector<int> keep;
    for (int k = 0; k < problem.free_dim; ++k) {
      const double dk = problem.free_cost.empty() ? 0.0 : problem.free_cost[k];
      auto [independent, residual] = space.insert(bt.row(k).transpose(), dk, rel_tol);
      if (independent) {
        keep.push_back(k);
      } else if (residual > rel_tol * (1.0 + std::abs(dk))) {
        result.dual_inconsistent = true;
        return result;
      }
    }
    std::vector<int> remap(problem.free_dim, -1);
    for (std::size_t pos = 0; pos < keep.size(); ++pos) remap[keep[pos]] = static_cast<int>(pos);
    result.kept_free = keep;
    result.reduced.free_dim = static_cast<int>(keep.size());
    for (int k : keep)
      result.reduced.free_cost.push_back(problem.free_cost.empty() ? 0.0 : problem.free_cost[k]);
    for (SdpConstraint& con : result.reduced.constraints) {
      std::vector<std::pair<int, double>> filtered;
      for (const auto& [k, v] : con.free_terms)
        if (remap[k] >= 0) filtered.emplace_back(remap[k], v);
      con.free_terms = std::move(filtered);
    }
  }
  return result;
}

namespace {

struct Workspace {
  const SdpStandardForm& p;
  std::vector<PreppedConstraint> cons;
  int m;
  int q;
  std::size_t ntot;
  std::vector<Mat> c_blocks;
  Vec b;
  Vec d;
  Mat bmat;  // m x q free-term matrix
  double norm_c;

  explicit Workspace(const SdpStandardForm& problem)
      : p(problem), cons(prep_constraints(problem)) {
    m = static_cast<int>(problem.constraints.size());
    q = problem.free_dim;
    ntot = problem.total_psd_dim();
    c_blocks.reserve(problem.blocks.size());
    for (int bs : problem.blocks) c_blocks.push_back(Mat::Zero(bs, bs));
    add_entries(c_blocks, problem.c, 1.0);
    b = Vec::Zero(m);
    for (int i = 0; i < m; ++i) b(i) = problem.constraints[i].b;
    d = Vec::Zero(std::max(q, 1));
    if (q > 0)
      for (int k = 0; k < q; ++k) d(k) = problem.free_cost[k];
    bmat = Mat::Zero(m, std::max(q, 1));
    for (int i = 0; i < m; ++i)
      for (const auto& [k, v] : problem.constraints[i].free_terms) bmat(i, k) += v;
    norm_c = entries_norm(problem.c);
  }
};

struct Direction {
  std::vector<Mat> dx, dz;
  Vec dy, du;
};

}  // namespace

SdpSolution solve_sdp(const SdpStandardForm& problem, const SdpOptions& options) {
  SdpSolution sol;
  if (problem.constraints.empty()) throw std::invalid_argument("SDP needs at least 1 constraint");
  if (problem.free_dim > 0 && problem.free_cost.size() != static_cast<std::size_t>(problem.free_dim))
    throw std::invalid_argument("free_cost size must match free_dim");
  for (const SymEntry& e : problem.c)
    if (e.block < 0 || e.block >= static_cast<int>(problem.blocks.size()))
      throw std::invalid_argument("objective entry references unknown block");
  for (const SdpConstraint& con : problem.constraints)
    if (con.a.empty())
      throw std::invalid_argument(
          "every constraint needs a PSD part; eliminate pure-free equalities upstream");

  PresolveResult pre = presolve(problem, options.trace_rows_independent);
  if (pre.infeasible) {
    sol.status = SdpStatus::infeasible;
    return sol;
  }
  if (pre.dual_inconsistent) {
    sol.status = SdpStatus::unbounded;
    return sol;
  }
  const SdpStandardForm& prob = pre.reduced;
  Workspace ws(prob);
  const int m = ws.m;
  const int q = ws.q;
  const int nblocks = static_cast<int>(prob.blocks.size());
  const double ntot = static_cast<double>(std::max<std::size_t>(ws.ntot, 1));

  // Identity start with SDPT3-style magnitudes.
  double scale_p = std::max(10.0, std::sqrt(ntot));
  double scale_d = std::max({10.0, std::sqrt(ntot), ws.norm_c});
  for (int i = 0; i < m; ++i) {
    scale_p = std::max(scale_p, ntot * (1.0 + std::abs(ws.b(i))) / (1.0 + ws.cons[i].norm));
    scale_d = std::max(scale_d, ws.cons[i].norm);
  }

  std::vector<Mat> x, z;
  for (int bs : prob.blocks) {
    x.push_back(scale_p * Mat::Identity(bs, bs));
    z.push_back(scale_d * Mat::Identity(bs, bs));
  }
  Vec y = Vec::Zero(m);
  Vec u = Vec::Zero(std::max(q, 1));

  std::vector<Mat> rd(nblocks), wrdw(nblocks), rc(nblocks);
  Vec rp = Vec::Zero(m), rg = Vec::Zero(std::max(q, 1)), h = Vec::Zero(m);
  std::vector<Scaling> scal(nblocks);
  Mat schur = Mat::Zero(m, m);
  int stall_count = 0;
  sol.status = SdpStatus::max_iterations;

  // Near degenerate optima late iterates can lose feasibility digits; the
  // best iterate seen is kept and restored on exit.
  struct Snapshot {
    std::vector<Mat> x, z;
    Vec y, u;
    double metric = kInf;
  } best;
  int degrade_count = 0;

  const auto primal_objective = [&]() {
    double val = 0.0;
    for (int blk = 0; blk < nblocks; ++blk) val += (ws.c_blocks[blk].array() * x[blk].array()).sum();
    if (q > 0) val += ws.d.head(q).dot(u.head(q));
    return val;
  };

  for (int iter = 0; iter < options.max_iter; ++iter) {
    sol.iterations = iter;
    if (options.deadline && std::chrono::steady_clock::now() > *options.deadline) {
      sol.status = SdpStatus::max_iterations;
      break;
    }

    // Residuals.
    double mu = 0.0;
    for (int blk = 0; blk < nblocks; ++blk) mu += (x[blk].array() * z[blk].array()).sum();
    mu /= ntot;

    for (int i = 0; i < m; ++i) {
      double ax = dot_constraint(ws.cons[i], x);
      for (const auto& [k, v] : ws.cons[i].free_terms) ax += v * u(k);
      rp(i) = ws.b(i) - ax;
    }
    for (int blk = 0; blk < nblocks; ++blk) rd[blk] = ws.c_blocks[blk] - z[blk];
    for (int i = 0; i < m; ++i)
      for (const BlockEntries& part : ws.cons[i].parts) {
        for (const SymEntry& e : part.entries) {
          rd[part.block](e.row, e.col) -= y(i) * e.value;
          if (e.row != e.col) rd[part.block](e.col, e.row) -= y(i) * e.value;
        }
      }
    if (q > 0) {
      rg.head(q) = ws.d.head(q) - ws.bmat.transpose() * y;
    }

    const double pobj = primal_objective();
    const double dobj = ws.b.dot(y);
    double prim_res = 0.0;
    for (int i = 0; i < m; ++i)
      prim_res = std::max(prim_res, std::abs(rp(i)) / (1.0 + std::abs(ws.b(i))));
    double dual_res = 0.0;
    for (int blk = 0; blk < nblocks; ++blk)
      dual_res = std::max(dual_res, rd[blk].norm() / (1.0 + ws.norm_c));
    if (q > 0)
      for (int k = 0; k < q; ++k)
        dual_res = std::max(dual_res, std::abs(rg(k)) / (1.0 + std::abs(ws.d(k))));
    const double gap_metric = std::abs(pobj - dobj) / (1.0 + std::abs(pobj));

    sol.primal_value = pobj;
    sol.dual_value = dobj;
    sol.gap = std::abs(pobj - dobj);
    sol.primal_residual = prim_res;
    sol.dual_residual = dual_res;

    if (std::getenv("SOSDEC_SDP_TRACE"))
      std::fprintf(stderr, "it %3d mu %.3e pres %.3e dres %.3e gap %.3e pobj %.9f\n", iter, mu,
                   prim_res, dual_res, gap_metric, pobj);

    if (prim_res <= options.tol && dual_res <= options.tol && gap_metric <= options.tol) {
      sol.status = SdpStatus::optimal;
      break;
    }

    const double metric = std::max({prim_res, dual_res, gap_metric});
    if (metric < best.metric) {
      best.x = x;
      best.z = z;
      best.y = y;
      best.u = u;
      best.metric = metric;
      degrade_count = 0;
    } else if (metric > 1.5 * best.metric) {
      if (++degrade_count >= 5) {
        sol.status = SdpStatus::numerical_failure;
        break;
      }
    }

    // Farkas-style certificates on the raw iterates.
    const double by = ws.b.dot(y);
    if (by > 0.0) {
      std::vector<Mat> aty(nblocks);
      for (int blk = 0; blk < nblocks; ++blk)
        aty[blk] = Mat::Zero(prob.blocks[blk], prob.blocks[blk]);
      for (int i = 0; i < m; ++i)
        for (const BlockEntries& part : ws.cons[i].parts)
          for (const SymEntry& e : part.entries) {
            aty[part.block](e.row, e.col) += y(i) * e.value;
            if (e.row != e.col) aty[part.block](e.col, e.row) += y(i) * e.value;
          }
      double lam_max = -kInf;
      for (int blk = 0; blk < nblocks; ++blk) {
        Eigen::SelfAdjointEigenSolver<Mat> es(aty[blk], Eigen::EigenvaluesOnly);
        lam_max = std::max(lam_max, es.eigenvalues().maxCoeff());
      }
      double free_viol = 0.0;
      if (q > 0) free_viol = (ws.bmat.transpose() * y).cwiseAbs().maxCoeff();
      if (std::max(lam_max, free_viol) <= options.infeasibility_threshold * by) {
        sol.status = SdpStatus::infeasible;
        return sol;
      }
    }
    {
      const double pdir = pobj;
      if (pdir < 0.0) {
        double viol = 0.0;
        for (int i = 0; i < m; ++i) {
          double ax = dot_constraint(ws.cons[i], x);
          for (const auto& [k, v] : ws.cons[i].free_terms) ax += v * u(k);
          viol = std::max(viol, std::abs(ax));
        }
        if (viol <= options.infeasibility_threshold * (-pdir)) {
          sol.status = SdpStatus::unbounded;
          return sol;
        }
      }
    }

    // NT scaling.
    bool scaling_ok = true;
    for (int blk = 0; blk < nblocks; ++blk) {
      scal[blk] = nt_scaling(x[blk], z[blk]);
      if (!scal[blk].ok) scaling_ok = false;
    }
    if (!scaling_ok) {
      sol.status = SdpStatus::numerical_failure;
      break;
    }

    // Schur complement M_ij = sum_b <A_i, W A_j W>.
    schur.setZero();
    for (int i = 0; i < m; ++i) {
      std::map<int, Mat> s_i;
      for (const BlockEntries& part : ws.cons[i].parts)
        s_i.emplace(part.block, scale_pair(scal[part.block].w, part.entries));
      for (int j = 0; j <= i; ++j) {
        double val = 0.0;
        for (const BlockEntries& part : ws.cons[j].parts) {
          const auto it = s_i.find(part.block);
          if (it != s_i.end()) val += dot_block(part.entries, it->second);
        }
        schur(i, j) = val;
        schur(j, i) = val;
      }
    }

    Eigen::LLT<Mat> schur_llt(schur);
    {
      double jitter = 1e-13 * (1.0 + schur.diagonal().maxCoeff());
      int tries = 0;
      while (schur_llt.info() != Eigen::Success && tries < 8) {
        schur_llt.compute(schur + jitter * Mat::Identity(m, m));
        jitter *= 100.0;
        ++tries;
      }
      if (schur_llt.info() != Eigen::Success) {
        sol.status = SdpStatus::numerical_failure;
        break;
      }
    }
    Mat minv_b;
    Eigen::LLT<Mat> border_llt;
    if (q > 0) {
      minv_b = schur_llt.solve(ws.bmat.leftCols(q));
      Mat border = ws.bmat.leftCols(q).transpose() * minv_b;
      border = 0.5 * (border + border.transpose());
      border_llt.compute(border);
      double jitter = 1e-13 * (1.0 + border.diagonal().maxCoeff());
      int tries = 0;
      while (border_llt.info() != Eigen::Success && tries < 8) {
        border_llt.compute(border + jitter * Mat::Identity(q, q));
        jitter *= 100.0;
        ++tries;
      }
      if (border_llt.info() != Eigen::Success) {
        sol.status = SdpStatus::numerical_failure;
        break;
      }
    }

    for (int blk = 0; blk < nblocks; ++blk)
      wrdw[blk] = scal[blk].w * rd[blk] * scal[blk].w;

    // Saddle solve with two rounds of iterative refinement; the Schur
    // factors go ill-conditioned near degenerate optima and the refinement
    // recovers the lost feasibility digits.
    const auto saddle_solve = [&](const Vec& rhs_y, const Vec& rhs_u, Vec& dy, Vec& du) {
      if (q > 0) {
        du = border_llt.solve(minv_b.transpose() * rhs_y - rhs_u);
        dy = schur_llt.solve(rhs_y - ws.bmat.leftCols(q) * du);
        for (int round = 0; round < 2; ++round) {
          const Vec res_y = rhs_y - schur * dy - ws.bmat.leftCols(q) * du;
          const Vec res_u = rhs_u - ws.bmat.leftCols(q).transpose() * dy;
          Vec cy, cu;
          cu = border_llt.solve(minv_b.transpose() * res_y - res_u);
          cy = schur_llt.solve(res_y - ws.bmat.leftCols(q) * cu);
          dy += cy;
          du += cu;
        }
      } else {
        du = Vec::Zero(1);
        dy = schur_llt.solve(rhs_y);
        for (int round = 0; round < 2; ++round) dy += schur_llt.solve(rhs_y - schur * dy);
      }
    };

    const auto solve_direction = [&](Direction& dir) {
      for (int i = 0; i < m; ++i)
        h(i) = rp(i) - dot_constraint(ws.cons[i], rc) + dot_constraint(ws.cons[i], wrdw);
      saddle_solve(h, rg.head(std::max(q, 1)), dir.dy, dir.du);
      dir.dz.assign(nblocks, Mat());
      dir.dx.assign(nblocks, Mat());
      for (int blk = 0; blk < nblocks; ++blk) dir.dz[blk] = rd[blk];
      for (int i = 0; i < m; ++i)
        for (const BlockEntries& part : ws.cons[i].parts)
          for (const SymEntry& e : part.entries) {
            dir.dz[part.block](e.row, e.col) -= dir.dy(i) * e.value;
            if (e.row != e.col) dir.dz[part.block](e.col, e.row) -= dir.dy(i) * e.value;
          }
      for (int blk = 0; blk < nblocks; ++blk) {
        Mat wdzw = scal[blk].w * dir.dz[blk] * scal[blk].w;
        dir.dx[blk] = rc[blk] - wdzw;
        dir.dx[blk] = 0.5 * (dir.dx[blk] + dir.dx[blk].transpose()).eval();
      }
    };

    const auto step_lengths = [&](const Direction& dir) {
      double ap = kInf, ad = kInf;
      for (int blk = 0; blk < nblocks; ++blk) {
        ap = std::min(ap, max_step(x[blk], dir.dx[blk]));
        ad = std::min(ad, max_step(z[blk], dir.dz[blk]));
      }
      return std::make_pair(ap, ad);
    };

    // Predictor: affine direction, Rc = -X.
    for (int blk = 0; blk < nblocks; ++blk) rc[blk] = -x[blk];
    Direction aff;
    solve_direction(aff);
    auto [ap_aff, ad_aff] = step_lengths(aff);
    const double a_aff = std::min({1.0, ap_aff, ad_aff});

    double mu_aff = 0.0;
    for (int blk = 0; blk < nblocks; ++blk) {
      const Mat xa = x[blk] + std::min(1.0, ap_aff) * aff.dx[blk];
      const Mat za = z[blk] + std::min(1.0, ad_aff) * aff.dz[blk];
      mu_aff += (xa.array() * za.array()).sum();
    }
    mu_aff = std::max(mu_aff / ntot, 0.0);
    double sigma = std::pow(mu_aff / std::max(mu, 1e-300), 3.0);
    sigma = std::clamp(sigma, 0.0, 1.0);

    // Corrector in the scaled space, where Xhat = Zhat = diag(v).
    for (int blk = 0; blk < nblocks; ++blk) {
      const Scaling& sc = scal[blk];
      const Mat xhat = sc.gi * aff.dx[blk] * sc.gi.transpose();
      const Mat zhat = sc.g.transpose() * aff.dz[blk] * sc.g;
      Mat rhat = -0.5 * (xhat * zhat + zhat * xhat);
      rhat.diagonal().array() += sigma * mu;
      rhat.diagonal().array() -= sc.v.array().square();
      Mat rtilde(rhat.rows(), rhat.cols());
      for (int r = 0; r < rhat.rows(); ++r)
        for (int col = 0; col < rhat.cols(); ++col)
          rtilde(r, col) = 2.0 * rhat(r, col) / (sc.v(r) + sc.v(col));
      rc[blk] = sc.g * rtilde * sc.g.transpose();
      rc[blk] = 0.5 * (rc[blk] + rc[blk].transpose()).eval();
    }
    Direction dir;
    solve_direction(dir);
    auto [ap_max, ad_max] = step_lengths(dir);
    const double tau = std::min(0.99, 0.90 + 0.09 * std::min(1.0, a_aff));
    const double ap = std::min(1.0, tau * ap_max);
    const double ad = std::min(1.0, tau * ad_max);

    if (ap < 1e-10 && ad < 1e-10) {
      if (++stall_count >= 3) {
        sol.status = SdpStatus::numerical_failure;
        break;
      }
    } else {
      stall_count = 0;
    }

    for (int blk = 0; blk < nblocks; ++blk) {
      x[blk] += ap * dir.dx[blk];
      z[blk] += ad * dir.dz[blk];
      x[blk] = 0.5 * (x[blk] + x[blk].transpose()).eval();
      z[blk] = 0.5 * (z[blk] + z[blk].transpose()).eval();
    }
    y += ad * dir.dy;
    if (q > 0) u.head(q) += ap * dir.du;
  }

  // Return the best iterate when the run ended without convergence.
  if (sol.status != SdpStatus::optimal && best.metric < kInf) {
    x = best.x;
    z = best.z;
    y = best.y;
    u = best.u;
    double pobj = 0.0;
    for (int blk = 0; blk < nblocks; ++blk) pobj += (ws.c_blocks[blk].array() * x[blk].array()).sum();
    if (q > 0) pobj += ws.d.head(q).dot(u.head(q));
    sol.primal_value = pobj;
    sol.dual_value = ws.b.dot(y);
    sol.gap = std::abs(sol.primal_value - sol.dual_value);
  }

  // Lift back to the original indexing (zeros on eliminated rows/vars).
  sol.x.clear();
  sol.z.clear();
  for (std::size_t blk = 0; blk < x.size(); ++blk) {
    sol.x.emplace_back(x[blk].data(), x[blk].data() + x[blk].size());
    sol.z.emplace_back(z[blk].data(), z[blk].data() + z[blk].size());
  }
  sol.y.assign(problem.constraints.size(), 0.0);
  for (int i = 0; i < m; ++i) sol.y[pre.kept_rows[i]] = y(i);
  sol.free_x.assign(problem.free_dim, 0.0);
  for (int k = 0; k < q; ++k) sol.free_x[pre.kept_free[k]] = u(k);
  return sol;
}

void dump_sparse(const SdpStandardForm& problem, std::ostream& os) {
  const int free_base = static_cast<int>(problem.blocks.size());
  os << "# sosdec sdp dump: constraint_index block row col value\n";
  os << "# constraint_index 0 is the objective; block -1 carries b_i;"
        " blocks >= " << free_base << " are free variables\n";
  for (const SymEntry& e : problem.c)
    os << 0 << ' ' << e.block << ' ' << e.row << ' ' << e.col << ' ' << e.value << '\n';
  for (std::size_t i = 0; i < problem.constraints.size(); ++i) {
    const SdpConstraint& con = problem.constraints[i];
    for (const SymEntry& e : con.a)
      os << i + 1 << ' ' << e.block << ' ' << e.row << ' ' << e.col << ' ' << e.value << '\n';
    for (const auto& [k, v] : con.free_terms)
      os << i + 1 << ' ' << free_base + k << ' ' << 0 << ' ' << 0 << ' ' << v << '\n';
    if (con.b != 0.0) os << i + 1 << " -1 -1 -1 " << con.b << '\n';
  }
}

}  // namespace sosdec
