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
#include "sosdec/gf2.hpp"
#include "sosdec/noise.hpp"

using namespace sosdec;

TEST_SUITE("gf2") {
  TEST_CASE("rref identity") {
    const RrefResult rr = rref(BitMatrix::identity(3));
    CHECK(rr.rank == 3);
    CHECK(rr.pivots == std::vector<std::size_t>{0, 1, 2});
    CHECK(rr.reduced == BitMatrix::identity(3));
  }

  TEST_CASE("rref zero matrix") {
    const RrefResult rr = rref(BitMatrix(2, 4));
    CHECK(rr.rank == 0);
    CHECK(rr.pivots.empty());
  }

  TEST_CASE("rref triangle matrix has rank 2") {
    // Third row is the sum of the first two.
    const BitMatrix m = BitMatrix::from_rows({{1, 1, 0}, {0, 1, 1}, {1, 0, 1}});
    CHECK(rref(m).rank == 2);
  }

  TEST_CASE("rref idempotence") {
    TrialRng rng(7, 0);
    for (int trial = 0; trial < 50; ++trial) {
      BitMatrix m(4, 7);
      for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 7; ++c)
          if (rng.bernoulli(0.4)) m.set(r, c, true);
      const BitMatrix once = rref(m).reduced;
      CHECK(rref(once).reduced == once);
    }
  }

  TEST_CASE("solve parity check") {
    const BitMatrix h = BitMatrix::from_rows({{1, 1}});
    const auto e = solve(h, BitVector::from_bits({1}));
    REQUIRE(e.has_value());
    // Pivot-based particular solution: free variable zero.
    CHECK(e->to_bits() == std::vector<int>{1, 0});
  }

  TEST_CASE("solve identity returns the syndrome") {
    const BitVector s = BitVector::from_bits({1, 0, 1, 1});
    const auto e = solve(BitMatrix::identity(4), s);
    REQUIRE(e.has_value());
    CHECK(*e == s);
  }

  TEST_CASE("solve detects inconsistent syndrome") {
    const BitMatrix triangle = BitMatrix::from_rows({{1, 1, 0}, {0, 1, 1}, {1, 0, 1}});
    // Rows sum to zero but the syndrome bits sum to one.
    CHECK_FALSE(solve(triangle, BitVector::from_bits({1, 1, 1})).has_value());
    CHECK(solve(triangle, BitVector::from_bits({1, 1, 0})).has_value());
  }

  TEST_CASE("solve rejects dimension mismatch") {
    CHECK_THROWS_AS((void)solve(BitMatrix(2, 3), BitVector(3)), std::invalid_argument);
  }

  TEST_CASE("nullspace of single parity check") {
    const auto basis = nullspace_basis(BitMatrix::from_rows({{1, 1}}));
    REQUIRE(basis.size() == 1);
    CHECK(basis[0].to_bits() == std::vector<int>{1, 1});
  }

  TEST_CASE("nullspace of identity is empty") {
    CHECK(nullspace_basis(BitMatrix::identity(5)).empty());
  }

  TEST_CASE("nullspace of d=3 surface Z checks has dimension 5") {
    const CssCode code = build_rotated_surface_code(3);
    REQUIRE(code.h_z.rows() == 4);
    CHECK(rref(code.h_z).rank == 4);
    CHECK(nullspace_basis(code.h_z).size() == 5);  // 9 - rank
  }

  TEST_CASE("solve and nullspace describe the full solution set") {
    TrialRng rng(11, 0);
    for (int trial = 0; trial < 30; ++trial) {
      BitMatrix h(3, 6);
      for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 6; ++c)
          if (rng.bernoulli(0.4)) h.set(r, c, true);
      BitVector e0(6);
      for (std::size_t c = 0; c < 6; ++c)
        if (rng.bernoulli(0.5)) e0.set(c, true);
      const BitVector s = h.mul(e0);

      const auto particular = solve(h, s);
      REQUIRE(particular.has_value());
      const auto basis = nullspace_basis(h);
      const std::size_t expected = std::size_t{1} << (6 - rref(h).rank);

      std::size_t count = 0;
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << basis.size()); ++mask) {
        BitVector e = *particular;
        for (std::size_t j = 0; j < basis.size(); ++j)
          if (mask & (std::uint64_t{1} << j)) e.xor_assign(basis[j]);
        CHECK(h.mul(e) == s);
        ++count;
      }
      CHECK(count == expected);
    }
  }

  TEST_CASE("in_rowspace basics") {
    const BitMatrix h = BitMatrix::from_rows({{1, 1, 0, 0}, {0, 0, 1, 1}});
    CHECK(in_rowspace(h, h.row(0)));
    CHECK(in_rowspace(h, BitVector(4)));  // zero vector
    BitVector sum = h.row(0);
    sum.xor_assign(h.row(1));
    CHECK(in_rowspace(h, sum));
    CHECK_FALSE(in_rowspace(h, BitVector::from_bits({1, 0, 0, 0})));
  }

  TEST_CASE("surface logical X is outside the Z-check rowspace") {
    const CssCode code = build_rotated_surface_code(3);
    REQUIRE(code.logicals_x.size() == 1);
    CHECK_FALSE(in_rowspace(code.h_z, code.logicals_x[0]));
    CHECK(in_rowspace(code.h_z, code.h_z.row(2)));
  }

  TEST_CASE("syndrome is linear") {
    TrialRng rng(13, 0);
    for (int trial = 0; trial < 50; ++trial) {
      BitMatrix h(4, 9);
      BitVector a(9), b(9);
      for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 9; ++c)
          if (rng.bernoulli(0.3)) h.set(r, c, true);
      for (std::size_t c = 0; c < 9; ++c) {
        if (rng.bernoulli(0.5)) a.set(c, true);
        if (rng.bernoulli(0.5)) b.set(c, true);
      }
      BitVector ab = a;
      ab.xor_assign(b);
      BitVector expect = h.mul(a);
      expect.xor_assign(h.mul(b));
      CHECK(h.mul(ab) == expect);
    }
  }

  TEST_CASE("lexicographic order treats index 0 as most significant") {
    const BitVector a = BitVector::from_bits({0, 1, 1});
    const BitVector b = BitVector::from_bits({1, 0, 0});
    CHECK(a.lex_less(b));
    CHECK_FALSE(b.lex_less(a));
    CHECK_FALSE(a.lex_less(a));
  }
}
