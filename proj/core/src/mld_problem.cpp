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

#include "sosdec/mld_problem.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace sosdec {

double MldInstance::cost(const BitVector& e) const {
  if (e.size() != gamma.size()) throw std::invalid_argument("error length mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < gamma.size(); ++i)
    if (e.get(i)) total += gamma[i];
  return total;
}

int slack_bits_for_check(int weight, int syndrome_bit) {
  const int reach = weight - syndrome_bit;
  int bits = 0;
  while (2 * ((1 << bits) - 1) < reach) ++bits;
  return bits;
}

PolyProblem to_polynomial(const MldInstance& inst, ParityEncoding encoding) {
  if (!inst.dims_consistent()) throw std::invalid_argument("instance dimensions inconsistent");
  PolyProblem poly;
  poly.encoding = encoding;
  poly.num_error_vars = static_cast<int>(inst.num_vars());
  poly.num_vars = poly.num_error_vars;
  poly.objective.assign(inst.gamma.begin(), inst.gamma.end());
  poly.syndrome_consistent = inst.syndrome_consistent();
  poly.slack_vars.resize(inst.h.rows());

  for (std::size_t j = 0; j < inst.h.rows(); ++j) {
    const std::vector<std::size_t> support = inst.h.row_support(j);
    const int sj = inst.s.get(j) ? 1 : 0;
    PolyEquality eq;

    if (encoding == ParityEncoding::slack_binary) {
      for (std::size_t q : support) eq.terms.push_back({{static_cast<int>(q)}, 1.0});
      const int bits = slack_bits_for_check(static_cast<int>(support.size()), sj);
      for (int b = 0; b < bits; ++b) {
        const int var = poly.num_vars++;
        poly.slack_vars[j].push_back(var);
        eq.terms.push_back({{var}, -static_cast<double>(2ll << b)});
      }
      if (sj) eq.terms.push_back({{}, -1.0});
      eq.degree = support.empty() ? 0 : 1;
    } else {
      if (support.size() > 20)
        throw std::invalid_argument("product_parity expansion limited to weight <= 20");
      // prod_{i in supp}(1-2e_i) - (1-2s_j) = 0, expanded multilinearly.
      const std::size_t w = support.size();
      for (std::size_t mask = 1; mask < (std::size_t{1} << w); ++mask) {
        PolyTerm term;
        for (std::size_t b = 0; b < w; ++b)
          if (mask & (std::size_t{1} << b)) term.vars.push_back(static_cast<int>(support[b]));
        term.coeff = ((std::popcount(mask) % 2) ? -2.0 : 2.0) *
                     static_cast<double>(std::size_t{1} << (std::popcount(mask) - 1));
        eq.terms.push_back(std::move(term));
      }
      if (sj) eq.terms.push_back({{}, 2.0});
      eq.degree = static_cast<int>(w);
    }

    for (const PolyTerm& t : eq.terms)
      for (int v : t.vars) eq.support.push_back(v);
    std::sort(eq.support.begin(), eq.support.end());
    eq.support.erase(std::unique(eq.support.begin(), eq.support.end()), eq.support.end());
    poly.equalities.push_back(std::move(eq));
  }
  poly.objective.resize(poly.num_vars, 0.0);
  return poly;
}

double QuboMatrix::value(const BitVector& x) const {
  if (static_cast<int>(x.size()) != n) throw std::invalid_argument("assignment length mismatch");
  double total = constant;
  for (int i = 0; i < n; ++i) {
    if (!x.get(i)) continue;
    total += at(i, i);
    for (int j = i + 1; j < n; ++j)
      if (x.get(j)) total += 2.0 * at(i, j);
  }
  return total;
}

QuboMatrix to_qubo(const MldInstance& inst, double xi) {
  if (!(xi > 0.0)) throw std::invalid_argument("penalty xi must be positive");
  const int n = static_cast<int>(inst.num_vars());
  QuboMatrix qubo;
  qubo.n = n;
  qubo.q.assign(static_cast<std::size_t>(n) * n, 0.0);
  // Q = Gamma + xi*H^T H + Delta with Delta_ii = -2 xi (s^T H)_i.
  for (int i = 0; i < n; ++i) qubo.at(i, i) += inst.gamma[i];
  for (std::size_t r = 0; r < inst.h.rows(); ++r) {
    const auto support = inst.h.row_support(r);
    for (std::size_t a = 0; a < support.size(); ++a)
      for (std::size_t b = 0; b < support.size(); ++b)
        qubo.at(static_cast<int>(support[a]), static_cast<int>(support[b])) += xi;
    if (inst.s.get(r))
      for (std::size_t a = 0; a < support.size(); ++a)
        qubo.at(static_cast<int>(support[a]), static_cast<int>(support[a])) -= 2.0 * xi;
  }
  qubo.constant = xi * static_cast<double>(inst.s.weight());
  return qubo;
}

QuboMatrix to_qubo(const PolyProblem& poly, double xi) {
  if (!(xi > 0.0)) throw std::invalid_argument("penalty xi must be positive");
  QuboMatrix qubo;
  qubo.n = poly.num_vars;
  qubo.q.assign(static_cast<std::size_t>(poly.num_vars) * poly.num_vars, 0.0);
  for (int i = 0; i < poly.num_vars; ++i) qubo.at(i, i) += poly.objective[i];

  for (const PolyEquality& eq : poly.equalities) {
    if (eq.degree > 1)
      throw std::invalid_argument("quadratic penalty needs affine equalities (slack encoding)");
    // (a^T x + a0)^2 with linear terms folded onto the diagonal via x^2 = x.
    double a0 = 0.0;
    std::vector<std::pair<int, double>> linear;
    for (const PolyTerm& t : eq.terms) {
      if (t.vars.empty())
        a0 += t.coeff;
      else
        linear.emplace_back(t.vars[0], t.coeff);
    }
    for (const auto& [vi, ci] : linear) {
      qubo.at(vi, vi) += xi * (ci * ci + 2.0 * a0 * ci);
      for (const auto& [vj, cj] : linear)
        if (vj != vi) qubo.at(vi, vj) += xi * ci * cj;
    }
    qubo.constant += xi * a0 * a0;
  }
  return qubo;
}

double default_qubo_penalty(const std::vector<double>& gamma) {
  double total = 1.0;
  for (double g : gamma) total += std::abs(g);
  return total;
}

QuboMatrix css_qubo(const MldInstance& inst_x, const MldInstance& inst_z, double xi) {
  if (!inst_x.dims_consistent() || !inst_z.dims_consistent())
    throw std::invalid_argument("instance dimensions inconsistent");
  const QuboMatrix qx = to_qubo(inst_x, xi);
  const QuboMatrix qz = to_qubo(inst_z, xi);
  QuboMatrix qubo;
  qubo.n = qx.n + qz.n;
  qubo.q.assign(static_cast<std::size_t>(qubo.n) * qubo.n, 0.0);
  for (int i = 0; i < qx.n; ++i)
    for (int j = 0; j < qx.n; ++j) qubo.at(i, j) = qx.at(i, j);
  for (int i = 0; i < qz.n; ++i)
    for (int j = 0; j < qz.n; ++j) qubo.at(qx.n + i, qx.n + j) = qz.at(i, j);
  qubo.constant = qx.constant + qz.constant;
  return qubo;
}

QuboMinimum brute_force_qubo(const QuboMatrix& qubo) {
  if (qubo.n > 24) throw std::invalid_argument("brute force limited to 24 variables");
  const int n = qubo.n;
  const std::uint32_t count = std::uint32_t{1} << n;

  // Gray-code sweep with O(n) updates locates the minimum; candidate values
  // are then recomputed from scratch before tie comparison.
  std::vector<char> x(n, 0);
  double value = qubo.constant;
  double best = value;
  for (std::uint32_t step = 1; step < count; ++step) {
    const int k = std::countr_zero(step);
    const std::uint32_t next_gray = step ^ (step >> 1);
    const double sign = (next_gray >> k) & 1u ? 1.0 : -1.0;
    double delta = qubo.at(k, k);
    for (int j = 0; j < n; ++j)
      if (j != k && x[j]) delta += 2.0 * qubo.at(k, j);
    value += sign * delta;
    x[k] ^= 1;
    if (value < best) best = value;
  }

  QuboMinimum result;
  const double tol = 1e-9 * (1.0 + std::abs(best));
  double exact_best = best;
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    BitVector point(n);
    for (int i = 0; i < n; ++i)
      if (mask & (std::uint32_t{1} << i)) point.set(i, true);
    const double v = qubo.value(point);
    if (v <= best + tol) {
      if (v < exact_best) exact_best = v;
      result.argmin.push_back(std::move(point));
    }
  }
  // Second pass may have sharpened the minimum; drop points beyond tolerance.
  std::erase_if(result.argmin, [&](const BitVector& p) {
    return qubo.value(p) > exact_best + 1e-9 * (1.0 + std::abs(exact_best));
  });
  std::sort(result.argmin.begin(), result.argmin.end(),
            [](const BitVector& a, const BitVector& b) { return a.lex_less(b); });
  result.value = exact_best;
  return result;
}

}  // namespace sosdec
