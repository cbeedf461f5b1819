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

#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <set>

#include "sosdec/css_code.hpp"
#include "sosdec/mld_problem.hpp"
#include "support/oracles.hpp"

using namespace sosdec;

namespace {

// Evaluates every equality of a PolyProblem on a full binary assignment.
bool equalities_hold(const PolyProblem& poly, std::uint64_t assignment) {
  for (const PolyEquality& eq : poly.equalities) {
    double total = 0.0;
    for (const PolyTerm& term : eq.terms) {
      double value = term.coeff;
      for (int v : term.vars)
        if (!((assignment >> v) & 1u)) value = 0.0;
      total += value;
    }
    if (std::abs(total) > 1e-9) return false;
  }
  return true;
}

bool parity_holds(const MldInstance& inst, std::uint64_t error_mask) {
  BitVector e(inst.num_vars());
  for (std::size_t i = 0; i < inst.num_vars(); ++i)
    if ((error_mask >> i) & 1u) e.set(i, true);
  return inst.h.mul(e) == inst.s;
}

}  // namespace

TEST_SUITE("mld_problem") {
  TEST_CASE("slack bit counts") {
    CHECK(slack_bits_for_check(2, 1) == 1);  // weight 2, s=1
    CHECK(slack_bits_for_check(2, 0) == 1);
    CHECK(slack_bits_for_check(4, 0) == 2);  // weight-4 checks get 2 slack bits
    CHECK(slack_bits_for_check(4, 1) == 2);
    CHECK(slack_bits_for_check(6, 0) == 2);
    CHECK(slack_bits_for_check(1, 1) == 0);
    CHECK(slack_bits_for_check(0, 0) == 0);
  }

  TEST_CASE("single parity check lowers to one slack bit") {
    MldInstance inst{BitMatrix::from_rows({{1, 1}}), BitVector::from_bits({1}), {1.0, 2.0}};
    const PolyProblem poly = to_polynomial(inst);
    CHECK(poly.num_error_vars == 2);
    CHECK(poly.num_vars == 3);  // e1 + e2 - 2k - 1 = 0
    REQUIRE(poly.equalities.size() == 1);
    CHECK(poly.equalities[0].degree == 1);
    CHECK(poly.syndrome_consistent);
  }

  TEST_CASE("d=3 surface weight-4 checks get 2 slack bits at s=0") {
    const CssCode code = build_rotated_surface_code(3);
    MldInstance inst{code.h_z, BitVector(4), std::vector<double>(9, 1.0)};
    const PolyProblem poly = to_polynomial(inst);
    for (std::size_t j = 0; j < code.h_z.rows(); ++j) {
      const std::size_t w = code.h_z.row_weight(j);
      CHECK(poly.slack_vars[j].size() == (w == 4 ? 2 : 1));
    }
  }

  TEST_CASE("zero syndrome admits the zero assignment") {
    const CssCode code = build_rotated_surface_code(3);
    MldInstance inst{code.h_z, BitVector(4), std::vector<double>(9, 1.0)};
    const PolyProblem poly = to_polynomial(inst);
    CHECK(equalities_hold(poly, 0));
  }

  TEST_CASE("parity fidelity of the slack encoding") {
    // For every binary error assignment, slacks can complete it iff the
    // F2 parity holds; exhaustive over errors and slacks.
    TrialRng rng(31, 0);
    for (int trial = 0; trial < 25; ++trial) {
      const std::size_t n = 3 + rng.next_below(5);  // up to 7
      const std::size_t v = 1 + rng.next_below(3);
      MldInstance inst = testing::random_consistent_instance(rng, v, n, 4);
      const PolyProblem poly = to_polynomial(inst);
      const int slacks = poly.num_vars - poly.num_error_vars;
      REQUIRE(poly.num_vars <= 20);
      for (std::uint64_t e_mask = 0; e_mask < (std::uint64_t{1} << n); ++e_mask) {
        bool completable = false;
        for (std::uint64_t k_mask = 0; k_mask < (std::uint64_t{1} << slacks) && !completable;
             ++k_mask)
          completable = equalities_hold(poly, e_mask | (k_mask << n));
        CHECK(completable == parity_holds(inst, e_mask));
      }
    }
  }

  TEST_CASE("product encoding keeps parity without slacks") {
    TrialRng rng(37, 0);
    for (int trial = 0; trial < 15; ++trial) {
      const std::size_t n = 3 + rng.next_below(4);
      MldInstance inst = testing::random_consistent_instance(rng, 2, n, 4);
      const PolyProblem poly = to_polynomial(inst, ParityEncoding::product_parity);
      CHECK(poly.num_vars == poly.num_error_vars);
      for (std::uint64_t e_mask = 0; e_mask < (std::uint64_t{1} << n); ++e_mask)
        CHECK(equalities_hold(poly, e_mask) == parity_holds(inst, e_mask));
    }
  }

  TEST_CASE("inconsistent syndrome is flagged but still emitted") {
    const BitMatrix triangle = BitMatrix::from_rows({{1, 1, 0}, {0, 1, 1}, {1, 0, 1}});
    MldInstance inst{triangle, BitVector::from_bits({1, 1, 1}), {1.0, 1.0, 1.0}};
    const PolyProblem poly = to_polynomial(inst);
    CHECK_FALSE(poly.syndrome_consistent);
    CHECK(poly.equalities.size() == 3);
  }

  TEST_CASE("literal qubo reproduces the penalty form") {
    MldInstance inst{BitMatrix::from_rows({{1, 1}}), BitVector::from_bits({1}), {1.0, 2.0}};
    const QuboMatrix qubo = to_qubo(inst, 10.0);
    // y = e^T Gamma e + xi (He - s)^T (He - s), spelled out by hand:
    // e=(0,0): 10; e=(1,0): 1; e=(0,1): 2; e=(1,1): 3 + 10.
    CHECK(qubo.value(BitVector::from_bits({0, 0})) == doctest::Approx(10.0));
    CHECK(qubo.value(BitVector::from_bits({1, 0})) == doctest::Approx(1.0));
    CHECK(qubo.value(BitVector::from_bits({0, 1})) == doctest::Approx(2.0));
    CHECK(qubo.value(BitVector::from_bits({1, 1})) == doctest::Approx(13.0));
  }

  TEST_CASE("parity-faithful qubo minimizer") {
    MldInstance inst{BitMatrix::from_rows({{1, 1}}), BitVector::from_bits({1}), {1.0, 2.0}};
    const PolyProblem poly = to_polynomial(inst);
    const QuboMatrix qubo = to_qubo(poly, 10.0);
    const QuboMinimum minimum = brute_force_qubo(qubo);
    CHECK(minimum.value == doctest::Approx(1.0));
    REQUIRE(minimum.argmin.size() == 1);
    CHECK(minimum.argmin[0].get(0));
    CHECK_FALSE(minimum.argmin[0].get(1));
  }

  TEST_CASE("feasible points pay no penalty") {
    TrialRng rng(41, 0);
    for (int trial = 0; trial < 20; ++trial) {
      MldInstance inst = testing::random_consistent_instance(rng, 2, 5, 3);
      const auto oracle = testing::brute_force_mld(inst);
      REQUIRE(oracle.feasible);
      const QuboMatrix qubo = to_qubo(inst, 7.5);
      CHECK(qubo.value(oracle.argmin) == doctest::Approx(oracle.value).epsilon(1e-12));
    }
  }

  TEST_CASE("qubo threshold recovers the constrained minimizer set") {
    TrialRng rng(43, 0);
    for (int trial = 0; trial < 30; ++trial) {
      const std::size_t n = 3 + rng.next_below(4);
      MldInstance inst = testing::random_consistent_instance(rng, 2, n, 3);
      const PolyProblem poly = to_polynomial(inst);
      if (poly.num_vars > 14) continue;
      const double xi = default_qubo_penalty(inst.gamma);
      const QuboMinimum qmin = brute_force_qubo(to_qubo(poly, xi));
      const auto oracle = testing::brute_force_mld(inst);
      REQUIRE(oracle.feasible);
      CHECK(qmin.value == doctest::Approx(oracle.value).epsilon(1e-9));
      // Projection to the error variables matches the MLD minimizer set.
      std::set<std::vector<int>> projected;
      for (const BitVector& point : qmin.argmin) {
        std::vector<int> e(n);
        for (std::size_t i = 0; i < n; ++i) e[i] = point.get(i);
        projected.insert(e);
      }
      std::set<std::vector<int>> expected;
      for (const BitVector& point : oracle.all_min) expected.insert(point.to_bits());
      CHECK(projected == expected);
    }
  }

  TEST_CASE("css qubo is block separable") {
    TrialRng rng(47, 0);
    for (int trial = 0; trial < 10; ++trial) {
      MldInstance ix = testing::random_consistent_instance(rng, 2, 5, 3);
      MldInstance iz = testing::random_consistent_instance(rng, 2, 6, 3);
      const double xi = 9.0;
      const QuboMatrix joint = css_qubo(ix, iz, xi);
      CHECK(joint.n == 11);
      const QuboMinimum joint_min = brute_force_qubo(joint);
      const QuboMinimum x_min = brute_force_qubo(to_qubo(ix, xi));
      const QuboMinimum z_min = brute_force_qubo(to_qubo(iz, xi));
      CHECK(joint_min.value == doctest::Approx(x_min.value + z_min.value).epsilon(1e-9));
    }
  }

  TEST_CASE("css qubo zero syndromes") {
    MldInstance ix{BitMatrix::from_rows({{1, 1, 0}}), BitVector(1), {1.0, 1.0, 1.0}};
    MldInstance iz{BitMatrix::from_rows({{0, 1, 1}}), BitVector(1), {1.0, 1.0, 1.0}};
    const QuboMinimum joint_min = brute_force_qubo(css_qubo(ix, iz, 5.0));
    CHECK(joint_min.value == doctest::Approx(0.0));
    CHECK(joint_min.argmin.front().is_zero());
  }

  TEST_CASE("brute force qubo trivial cases") {
    QuboMatrix zero;
    zero.n = 3;
    zero.q.assign(9, 0.0);
    const QuboMinimum all = brute_force_qubo(zero);
    CHECK(all.value == doctest::Approx(0.0));
    CHECK(all.argmin.size() == 8);  // every point optimal

    QuboMatrix diag;
    diag.n = 4;
    diag.q.assign(16, 0.0);
    for (int i = 0; i < 4; ++i) diag.at(i, i) = 0.5 + i;
    const QuboMinimum at_zero = brute_force_qubo(diag);
    CHECK(at_zero.value == doctest::Approx(0.0));
    REQUIRE(at_zero.argmin.size() == 1);
    CHECK(at_zero.argmin[0].is_zero());

    QuboMatrix big;
    big.n = 25;
    CHECK_THROWS_AS((void)brute_force_qubo(big), std::invalid_argument);
  }
}
