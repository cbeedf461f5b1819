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

#include <set>

#include "sosdec/css_code.hpp"
#include "sosdec/exact_decoder.hpp"

using namespace sosdec;

namespace {

// Brute-force code distance: minimum weight over ker(h_z) \ rowspace(h_x),
// walking the kernel span (fine for kernel dimension <= ~20).
std::size_t brute_force_distance(const BitMatrix& h_x, const BitMatrix& h_z) {
  const auto basis = nullspace_basis(h_z);
  REQUIRE(basis.size() <= 20);
  const RrefResult stab = rref(h_x);
  std::size_t best = h_z.cols() + 1;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << basis.size()); ++mask) {
    BitVector v(h_z.cols());
    for (std::size_t j = 0; j < basis.size(); ++j)
      if (mask & (std::uint64_t{1} << j)) v.xor_assign(basis[j]);
    // Reduce against the stabilizer rowspace to test membership.
    BitVector residual = v;
    for (std::size_t i = 0; i < stab.pivots.size(); ++i)
      if (residual.get(stab.pivots[i])) residual.xor_assign(stab.reduced.row(i));
    if (!residual.is_zero()) best = std::min(best, v.weight());
  }
  return best;
}

std::multiset<std::size_t> check_weights(const BitMatrix& h) {
  std::multiset<std::size_t> weights;
  for (std::size_t r = 0; r < h.rows(); ++r) weights.insert(h.row_weight(r));
  return weights;
}

}  // namespace

TEST_SUITE("code_model") {
  TEST_CASE("d=3 surface code shape") {
    const CssCode code = build_rotated_surface_code(3);
    CHECK(code.n == 9);
    CHECK(code.h_x.rows() == 4);
    CHECK(code.h_z.rows() == 4);
    CHECK(rref(code.h_z).rank == 4);
    // Every check has weight 4 (bulk) or 2 (boundary).
    for (std::size_t r = 0; r < code.h_z.rows(); ++r) {
      const std::size_t w = code.h_z.row_weight(r);
      CHECK((w == 4 || w == 2));
    }
    CHECK(check_weights(code.h_z) == std::multiset<std::size_t>{2, 2, 4, 4});
    CHECK(check_weights(code.h_x) == std::multiset<std::size_t>{2, 2, 4, 4});
    CHECK(validate(code).ok());
  }

  TEST_CASE("surface code commutation and logical counts for d in 2..5") {
    for (int d = 2; d <= 5; ++d) {
      const CssCode code = build_rotated_surface_code(d);
      CHECK(code.n == d * d);
      const CodeReport report = validate(code);
      for (const std::string& v : report.violations) MESSAGE(v);
      CHECK(report.ok());
      CHECK(code.n - rref(code.h_x).rank - rref(code.h_z).rank == 1);
      REQUIRE(code.logicals_x.size() == 1);
      CHECK(code.logicals_x[0].dot(code.logicals_z[0]));
    }
  }

  TEST_CASE("surface distance matches d by brute force") {
    for (int d : {2, 3}) {
      const CssCode code = build_rotated_surface_code(d);
      CHECK(brute_force_distance(code.h_x, code.h_z) == static_cast<std::size_t>(d));
      CHECK(brute_force_distance(code.h_z, code.h_x) == static_cast<std::size_t>(d));
    }
  }

  TEST_CASE("d=3 surface logical has minimum weight 3 over its coset") {
    const CssCode code = build_rotated_surface_code(3);
    // Minimum-weight representative via coset enumeration of Lx + rowspace(Hx).
    MldInstance inst;
    inst.h = code.h_z;
    inst.s = code.h_z.mul(code.logicals_x[0]);  // zero, Lx is in ker Hz
    REQUIRE(inst.s.is_zero());
    std::size_t best = code.n + 1;
    const auto stab_basis = nullspace_basis(code.h_z);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << stab_basis.size()); ++mask) {
      BitVector v = code.logicals_x[0];
      for (std::size_t j = 0; j < stab_basis.size(); ++j)
        if (mask & (std::uint64_t{1} << j)) v.xor_assign(stab_basis[j]);
      if (!in_rowspace(code.h_x, v)) best = std::min(best, v.weight());
    }
    CHECK(best == 3);
  }

  TEST_CASE("surface rejects d < 2") {
    CHECK_THROWS_AS((void)build_rotated_surface_code(1), std::invalid_argument);
  }

  TEST_CASE("d=3 color code is the 7-qubit triangular patch") {
    const CssCode code = build_color_code(3);
    CHECK(code.n == 7);
    CHECK(code.h_x.rows() == 3);
    CHECK(code.h_x == code.h_z);  // both stabilizer types on every face
    CHECK(check_weights(code.h_x) == std::multiset<std::size_t>{4, 4, 4});
    CHECK(validate(code).ok());
    CHECK(brute_force_distance(code.h_x, code.h_z) == 3);
  }

  TEST_CASE("color code family shape and distance") {
    const CssCode code5 = build_color_code(5);
    CHECK(code5.n == 19);
    CHECK(code5.h_x.rows() == 9);
    CHECK(code5.h_x == code5.h_z);
    CHECK(validate(code5).ok());
    CHECK(code5.n - rref(code5.h_x).rank - rref(code5.h_z).rank == 1);
    // Bulk faces are weight-6 hexagons.
    CHECK(check_weights(code5.h_x).count(6) == 3);
    CHECK(brute_force_distance(code5.h_x, code5.h_z) == 5);

    const CssCode code7 = build_color_code(7);
    CHECK(code7.n == 37);
    CHECK(code7.h_x.rows() == 18);
    CHECK(validate(code7).ok());
  }

  TEST_CASE("color code rejects unsupported distances") {
    CHECK_THROWS_AS((void)build_color_code(4), std::invalid_argument);
    CHECK_THROWS_AS((void)build_color_code(9), std::invalid_argument);
  }

  TEST_CASE("validate flags a flipped check bit") {
    CssCode code = build_rotated_surface_code(3);
    code.h_x.set(0, 4, !code.h_x.get(0, 4));
    const CodeReport report = validate(code);
    CHECK_FALSE(report.ok());
    bool commutation = false;
    for (const std::string& v : report.violations)
      commutation = commutation || v.find("commutation") != std::string::npos;
    CHECK(commutation);
  }

  TEST_CASE("validate flags missing logicals") {
    CssCode code = build_rotated_surface_code(3);
    code.logicals_x.clear();
    code.logicals_z.clear();
    const CodeReport report = validate(code);
    CHECK_FALSE(report.ok());
    bool missing = false;
    for (const std::string& v : report.violations)
      missing = missing || v.find("missing logical") != std::string::npos;
    CHECK(missing);
  }

  TEST_CASE("json round trip preserves the code") {
    for (const CssCode& code : {build_rotated_surface_code(3), build_color_code(3)}) {
      const std::string text = code_to_json(code);
      const CssCode back = code_from_json(text);
      CHECK(back.family == code.family);
      CHECK(back.distance == code.distance);
      CHECK(back.n == code.n);
      CHECK(back.h_x == code.h_x);
      CHECK(back.h_z == code.h_z);
      REQUIRE(back.logicals_x.size() == code.logicals_x.size());
      CHECK(back.logicals_x[0] == code.logicals_x[0]);
    }
  }

  TEST_CASE("json loader rejects corrupted documents") {
    CssCode code = build_rotated_surface_code(3);
    std::string text = code_to_json(code);
    // Flip one H_X bit in the document: commutation breaks.
    const std::size_t pos = text.find("\"hx\"");
    REQUIRE(pos != std::string::npos);
    const std::size_t zero = text.find('0', pos);
    text[zero] = '1';
    CHECK_THROWS_AS((void)code_from_json(text), std::invalid_argument);
  }
}
