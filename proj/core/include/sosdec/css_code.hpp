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

#include <string>
#include <utility>
#include <vector>

#include "sosdec/gf2.hpp"

namespace sosdec {

enum class CodeFamily { surface, color };

const char* family_name(CodeFamily family);

// A CSS stabilizer code: X/Z parity checks with H_X H_Z^T = 0 and one
// logical qubit for the families built here.
struct CssCode {
  CodeFamily family = CodeFamily::surface;
  int distance = 0;
  int n = 0;  // physical qubits
  BitMatrix h_x;
  BitMatrix h_z;
  std::vector<BitVector> logicals_x;
  std::vector<BitVector> logicals_z;
};

// Rotated surface code on a d x d qubit grid (d >= 2). Checks occupy
// alternating plaquettes in a checkerboard pattern; bulk checks have
// weight 4, boundary checks weight 2. Qubits are indexed row-major,
// checks ordered by plaquette (row, col).
CssCode build_rotated_surface_code(int distance);

// Triangular patch of the hexagonal (6.6.6) color code, d in {3,5,7}.
// Every face carries both an X and a Z stabilizer on the same support,
// so H_X = H_Z; bulk faces have weight 6, boundary faces are truncated.
CssCode build_color_code(int distance);

// Representatives spanning ker(h_z)/rowspace(h_x) and ker(h_x)/rowspace(h_z),
// paired so that <Lx_i, Lz_j> = delta_ij mod 2.
std::pair<std::vector<BitVector>, std::vector<BitVector>> compute_logicals(const BitMatrix& h_x,
                                                                           const BitMatrix& h_z);

struct CodeReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Checks every CssCode invariant and lists violations instead of throwing.
CodeReport validate(const CssCode& code);

// JSON document {"family","distance","n","hx","hz","lx","lz"} with 0/1
// integer bit arrays, rows in construction order.
std::string code_to_json(const CssCode& code);
CssCode code_from_json(const std::string& text);

}  // namespace sosdec
