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

#include "sosdec/css_code.hpp"
#include "sosdec/exact_decoder.hpp"
#include "sosdec/lasserre.hpp"
#include "support/oracles.hpp"

using namespace sosdec;

namespace {

MldInstance two_bit_instance() {
  return {BitMatrix::from_rows({{1, 1}}), BitVector::from_bits({1}), {1.0, 2.0}};
}

}  // namespace

TEST_SUITE("lasserre") {
  TEST_CASE("basis sizes follow the multilinear counting") {
    const MomentBasis b21 = build_basis(2, 1);
    CHECK(b21.size() == 3);  // {}, {0}, {1}
    CHECK(b21.monomials[0].empty());

    CHECK(build_basis(9, 1).size() == 10);  // level 1 has no reduction, C(10,1)+1
    CHECK(build_basis(3, 2).size() == 7);   // 1 + 3 + 3 < C(5,2) = 10
    CHECK_THROWS_AS((void)build_basis(64, 5), std::length_error);
  }

  TEST_CASE("basis is graded-lex with the empty set first") {
    const MomentBasis basis = build_basis(3, 2);
    CHECK(basis.monomials[0].empty());
    CHECK(basis.monomials[1] == std::vector<int>{0});
    CHECK(basis.monomials[3] == std::vector<int>{2});
    CHECK(basis.monomials[4] == std::vector<int>{0, 1});
    CHECK(basis.index.at({1, 2}) == 6);
  }

  TEST_CASE("cliques of single and disjoint checks") {
    const PolyProblem single = to_polynomial(two_bit_instance());
    const CliqueDecomposition one = correlative_cliques(single);
    REQUIRE(one.cliques.size() == 1);
    CHECK(one.cliques[0] == std::vector<int>{0, 1, 2});  // e0, e1, slack

    MldInstance disjoint{BitMatrix::from_rows({{1, 1, 0, 0}, {0, 0, 1, 1}}), BitVector(2),
                         {1.0, 1.0, 1.0, 1.0}};
    const CliqueDecomposition two = correlative_cliques(to_polynomial(disjoint));
    CHECK(two.cliques.size() == 2);
  }

  TEST_CASE("d=3 surface slack cliques stay small") {
    const CssCode code = build_rotated_surface_code(3);
    MldInstance inst{code.h_z, BitVector(4), std::vector<double>(9, 1.0)};
    const CliqueDecomposition cliques = correlative_cliques(to_polynomial(inst));
    for (const auto& clique : cliques.cliques) CHECK(clique.size() <= 6);
    // Cliques cover every variable.
    std::vector<bool> covered(15, false);
    for (const auto& clique : cliques.cliques)
      for (int v : clique) covered[v] = true;
    for (bool c : covered) CHECK(c);
  }

  TEST_CASE("unconstrained single variable relaxes to zero") {
    PolyProblem poly;
    poly.num_error_vars = 1;
    poly.num_vars = 1;
    poly.objective = {1.0};
    const MomentSolution sol = solve_level(poly, 1, SparsityMode::dense);
    REQUIRE(sol.status == SdpStatus::optimal);
    CHECK(sol.lambda == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(sol.y[0] == doctest::Approx(1.0));  // normalization
  }

  TEST_CASE("level-1 value is sandwiched for the two-bit instance") {
    const MldInstance inst = two_bit_instance();
    const PolyProblem poly = to_polynomial(inst);
    const MomentSolution sol = solve_level(poly, 1, SparsityMode::dense);
    REQUIRE(sol.status == SdpStatus::optimal);
    CHECK(sol.lambda <= 1.0 + 1e-6);  // exact optimum is 1
    CHECK(sol.lambda >= -1e-6);
  }

  TEST_CASE("zero syndrome gives lambda zero and clean extraction") {
    const CssCode code = build_rotated_surface_code(3);
    MldInstance inst{code.h_z, BitVector(4), uniform_weights(9, 0.05).gamma};
    const PolyProblem poly = to_polynomial(inst);
    const MomentSolution sol = solve_level(poly, 1, SparsityMode::sparse);
    REQUIRE(sol.status == SdpStatus::optimal);
    CHECK(sol.lambda == doctest::Approx(0.0).epsilon(1e-5));
    const Extraction ext = extract_error(sol, inst);
    CHECK(ext.feasible);
    CHECK(ext.e_hat.is_zero());
  }

  TEST_CASE("moment matrices are consistent with the union map") {
    const MldInstance inst = two_bit_instance();
    const MomentSolution sol = solve_level(to_polynomial(inst), 2, SparsityMode::dense);
    REQUIRE(sol.status == SdpStatus::optimal);
    const MomentBlockLayout& lay = sol.layout[0];
    const std::size_t bs = lay.basis.size();
    const std::vector<double> m = sol.block_matrix(0);
    for (std::size_t i = 0; i < bs; ++i)
      for (std::size_t j = 0; j < bs; ++j) {
        // [M]_{S,T} depends only on S u T.
        const int id = lay.moment_of_pair[i * bs + j];
        CHECK(m[i * bs + j] == sol.y[id]);
      }
    CHECK(sol.y[0] == 1.0);
  }

  TEST_CASE("lambda is monotone in the level and below the exact optimum") {
    TrialRng rng(61, 0);
    for (int trial = 0; trial < 12; ++trial) {
      const std::size_t n = 3 + rng.next_below(3);  // up to 5
      const MldInstance inst = testing::random_consistent_instance(rng, 2, n, 3);
      const PolyProblem poly = to_polynomial(inst);
      const double exact = mld_coset(inst).value;
      double previous = -1e30;
      for (int level = 1; level <= 3; ++level) {
        const MomentSolution sol = solve_level(poly, level, SparsityMode::dense);
        REQUIRE(sol.status == SdpStatus::optimal);
        CHECK(sol.lambda >= previous - 1e-6);
        CHECK(sol.lambda <= exact + 1e-6);
        previous = sol.lambda;
      }
    }
  }

  TEST_CASE("sparse matches dense at level 1 and stays below at level 2") {
    TrialRng rng(67, 0);
    for (int trial = 0; trial < 8; ++trial) {
      const MldInstance inst = testing::random_consistent_instance(rng, 2, 5, 3);
      const PolyProblem poly = to_polynomial(inst);
      const MomentSolution dense1 = solve_level(poly, 1, SparsityMode::dense);
      const MomentSolution sparse1 = solve_level(poly, 1, SparsityMode::sparse);
      REQUIRE(dense1.status == SdpStatus::optimal);
      REQUIRE(sparse1.status == SdpStatus::optimal);
      CHECK(sparse1.lambda == doctest::Approx(dense1.lambda).epsilon(1e-6).scale(1.0));

      const MomentSolution dense2 = solve_level(poly, 2, SparsityMode::dense);
      const MomentSolution sparse2 = solve_level(poly, 2, SparsityMode::sparse);
      REQUIRE(dense2.status == SdpStatus::optimal);
      REQUIRE(sparse2.status == SdpStatus::optimal);
      CHECK(sparse2.lambda <= dense2.lambda + 1e-6);
    }
  }

  TEST_CASE("first moments live in the unit box") {
    TrialRng rng(71, 0);
    for (int trial = 0; trial < 6; ++trial) {
      const MldInstance inst = testing::random_consistent_instance(rng, 2, 6, 4);
      const PolyProblem poly = to_polynomial(inst);
      const MomentSolution sol = solve_level(poly, 1, SparsityMode::sparse);
      REQUIRE(sol.status == SdpStatus::optimal);
      for (int i = 0; i < poly.num_vars; ++i) {
        const auto m = sol.moment({i});
        REQUIRE(m.has_value());
        CHECK(*m >= -1e-7);
        CHECK(*m <= 1.0 + 1e-7);
      }
    }
  }

  TEST_CASE("rank of synthetic solutions") {
    // Hand-built moment solution: one block over basis {0: {}, 1: {0}}.
    MomentSolution sol;
    sol.level = 1;
    MomentBlockLayout lay;
    lay.clique = {0};
    lay.basis = {{}, {0}};
    lay.moment_of_pair = {0, 1, 1, 1};
    sol.layout.push_back(lay);
    sol.subsets = {{}, {0}};
    sol.index.emplace(std::vector<int>{}, 0);
    sol.index.emplace(std::vector<int>{0}, 1);

    sol.y = {1.0, 1.0};  // rank-1 outer product (all-ones)
    CHECK(moment_rank(sol, 1) == 1);
    sol.y = {1.0, 0.5};  // strictly fractional: rank 2
    CHECK(moment_rank(sol, 1) == 2);
    CHECK(moment_rank(sol, 0) == 1);
    CHECK_THROWS_AS((void)rank_loop(sol), std::invalid_argument);
  }

  TEST_CASE("rank loop certifies exactness on a certified instance") {
    const MldInstance inst = two_bit_instance();
    const PolyProblem poly = to_polynomial(inst);
    const MomentSolution sol = solve_level(poly, 2, SparsityMode::dense);
    REQUIRE(sol.status == SdpStatus::optimal);
    const double exact = mld_coset(inst).value;
    if (rank_loop(sol)) {
      CHECK(sol.lambda == doctest::Approx(exact).epsilon(1e-5));
      const Extraction ext = extract_error(sol, inst);
      CHECK(ext.feasible);
      CHECK(inst.cost(ext.e_hat) == doctest::Approx(exact).epsilon(1e-5));
    }
  }

  TEST_CASE("decode pipeline matches the exact decoder on single errors") {
    const CssCode code = build_rotated_surface_code(3);
    const std::vector<double> gamma = uniform_weights(code.n, 0.05).gamma;
    for (int q = 0; q < code.n; q += 2) {
      BitVector e(code.n);
      e.set(q, true);
      MldInstance inst{code.h_z, code.h_z.mul(e), gamma};
      const DecodeResult res = decode(inst, 2, SparsityMode::sparse);
      REQUIRE(res.solver_status == SdpStatus::optimal);
      CHECK(res.feasible_after_rounding);
      const ExactResult exact = mld_coset(inst);
      CHECK(inst.cost(res.e_hat) == doctest::Approx(exact.value).epsilon(1e-5));
      CHECK(res.lambda == doctest::Approx(exact.value).epsilon(1e-5));
    }
  }

  TEST_CASE("product encoding needs level at least half the check weight") {
    const CssCode code = build_rotated_surface_code(3);
    MldInstance inst{code.h_z, BitVector(4), std::vector<double>(9, 1.0)};
    const PolyProblem poly = to_polynomial(inst, ParityEncoding::product_parity);
    CHECK_THROWS_AS((void)assemble_moment_sdp(poly, 1, SparsityMode::dense),
                    std::invalid_argument);
    // Level 2 covers the weight-4 checks.
    const MomentSolution sol = solve_level(poly, 2, SparsityMode::sparse);
    CHECK(sol.status == SdpStatus::optimal);
    CHECK(sol.lambda == doctest::Approx(0.0).epsilon(1e-5));
  }

  TEST_CASE("moment dump is valid json with lambda and certificate") {
    const MldInstance inst = two_bit_instance();
    const MomentSolution sol = solve_level(to_polynomial(inst), 2, SparsityMode::dense);
    const std::string text = moment_solution_to_json(sol);
    CHECK(text.find("\"lambda\"") != std::string::npos);
    CHECK(text.find("\"rank_loop\"") != std::string::npos);
    CHECK(text.find("\"moments\"") != std::string::npos);
  }
}
