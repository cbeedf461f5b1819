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

#include "sosdec/css_code.hpp"

#include <json.hpp>
#include <map>
#include <stdexcept>
#include <string>

namespace sosdec {

const char* family_name(CodeFamily family) {
  return family == CodeFamily::surface ? "surface" : "color";
}

namespace {

BitMatrix matrix_from_supports(const std::vector<std::vector<std::size_t>>& supports,
                               std::size_t cols) {
  BitMatrix m(supports.size(), cols);
  for (std::size_t r = 0; r < supports.size(); ++r)
    for (std::size_t q : supports[r]) m.set(r, q, true);
  return m;
}

}  // namespace

CssCode build_rotated_surface_code(int distance) {
  if (distance < 2) throw std::invalid_argument("surface code distance must be >= 2");
  const int d = distance;
  const auto qubit = [d](int r, int c) { return static_cast<std::size_t>(r * d + c); };

  std::vector<std::vector<std::size_t>> x_checks, z_checks;
  // Plaquette corners range one step outside the qubit grid; (pr+pc) parity
  // fixes the type, and only one type of 2-qubit plaquette survives on each
  // boundary so that all checks commute.
  for (int pr = -1; pr < d; ++pr) {
    for (int pc = -1; pc < d; ++pc) {
      std::vector<std::size_t> support;
      for (int dr = 0; dr <= 1; ++dr)
        for (int dc = 0; dc <= 1; ++dc) {
          const int r = pr + dr, c = pc + dc;
          if (r >= 0 && r < d && c >= 0 && c < d) support.push_back(qubit(r, c));
        }
      const bool z_type = ((pr + pc) % 2 + 2) % 2 == 0;
      if (support.size() == 4) {
        (z_type ? z_checks : x_checks).push_back(support);
      } else if (support.size() == 2) {
        const bool top_bottom = (pr == -1 || pr == d - 1);
        if (top_bottom && !z_type) x_checks.push_back(support);
        if (!top_bottom && z_type) z_checks.push_back(support);
      }
    }
  }

  CssCode code;
  code.family = CodeFamily::surface;
  code.distance = d;
  code.n = d * d;
  code.h_x = matrix_from_supports(x_checks, code.n);
  code.h_z = matrix_from_supports(z_checks, code.n);
  auto logicals = compute_logicals(code.h_x, code.h_z);
  code.logicals_x = std::move(logicals.first);
  code.logicals_z = std::move(logicals.second);
  return code;
}

CssCode build_color_code(int distance) {
  if (distance != 3 && distance != 5 && distance != 7)
    throw std::invalid_argument("color code distance must be one of {3,5,7}");
  const int d = distance;
  const int rows = 3 * (d - 1) / 2 + 1;

  // Triangular patch of the triangular lattice; sites with (r+c) % 3 == 1
  // are face centers, the rest are qubits. A face acts on its in-lattice
  // neighbors, which gives weight-6 hexagons in the bulk and truncated
  // faces along the boundary.
  std::map<std::pair<int, int>, std::size_t> qubit_index;
  std::vector<std::pair<int, int>> faces;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c <= r; ++c) {
      if ((r + c) % 3 == 1)
        faces.emplace_back(r, c);
      else
        qubit_index.emplace(std::make_pair(r, c), qubit_index.size());
    }
  }

  static constexpr int kNeighbor[6][2] = {{-1, -1}, {-1, 0}, {0, -1}, {0, 1}, {1, 0}, {1, 1}};
  std::vector<std::vector<std::size_t>> checks;
  for (const auto& [fr, fc] : faces) {
    std::vector<std::size_t> support;
    for (const auto& step : kNeighbor) {
      const auto it = qubit_index.find({fr + step[0], fc + step[1]});
      if (it != qubit_index.end()) support.push_back(it->second);
    }
    checks.push_back(std::move(support));
  }

  CssCode code;
  code.family = CodeFamily::color;
  code.distance = d;
  code.n = static_cast<int>(qubit_index.size());
  code.h_x = matrix_from_supports(checks, code.n);
  code.h_z = code.h_x;  // both stabilizer types live on every face
  auto logicals = compute_logicals(code.h_x, code.h_z);
  code.logicals_x = std::move(logicals.first);
  code.logicals_z = std::move(logicals.second);
  return code;
}

std::pair<std::vector<BitVector>, std::vector<BitVector>> compute_logicals(const BitMatrix& h_x,
                                                                           const BitMatrix& h_z) {
  if (h_x.cols() != h_z.cols()) throw std::invalid_argument("check matrices must share columns");
  const std::size_t n = h_x.cols();

  // Collect kernel vectors that are independent modulo the stabilizer rows.
  const auto representatives = [n](const BitMatrix& ker_of, const BitMatrix& modulo) {
    std::vector<BitVector> reps;
    BitMatrix stack(modulo.rows() + n, n);
    for (std::size_t r = 0; r < modulo.rows(); ++r) stack.set_row(r, modulo.row(r));
    std::size_t used = modulo.rows();
    std::size_t base_rank = rref(modulo).rank;
    for (const BitVector& b : nullspace_basis(ker_of)) {
      stack.set_row(used, b);
      BitMatrix candidate(used + 1, n);
      for (std::size_t r = 0; r <= used; ++r) candidate.set_row(r, stack.row(r));
      if (rref(candidate).rank > base_rank) {
        reps.push_back(b);
        ++base_rank;
        ++used;
      }
    }
    return reps;
  };

  std::vector<BitVector> lx = representatives(h_z, h_x);
  std::vector<BitVector> lz = representatives(h_x, h_z);
  if (lx.size() != lz.size())
    throw std::invalid_argument("inconsistent check matrices: X/Z logical counts differ");

  // Symplectic pairing: arrange <lx_i, lz_j> = delta_ij.
  for (std::size_t i = 0; i < lx.size(); ++i) {
    std::size_t partner = lz.size();
    for (std::size_t j = i; j < lz.size(); ++j) {
      if (lx[i].dot(lz[j])) {
        partner = j;
        break;
      }
    }
    if (partner == lz.size())
      throw std::invalid_argument("inconsistent check matrices: logical fails to anticommute");
    std::swap(lz[i], lz[partner]);
    for (std::size_t j = 0; j < lz.size(); ++j)
      if (j != i && lx[i].dot(lz[j])) lz[j].xor_assign(lz[i]);
    for (std::size_t k = 0; k < lx.size(); ++k)
      if (k != i && lx[k].dot(lz[i])) lx[k].xor_assign(lx[i]);
  }
  return {std::move(lx), std::move(lz)};
}

CodeReport validate(const CssCode& code) {
  CodeReport report;
  const auto complain = [&report](const std::string& msg) { report.violations.push_back(msg); };

  if (code.n <= 0) complain("qubit count must be positive");
  if (code.h_x.cols() != static_cast<std::size_t>(code.n) ||
      code.h_z.cols() != static_cast<std::size_t>(code.n)) {
    complain("check matrices do not match qubit count");
    return report;
  }
  if (code.family == CodeFamily::surface && code.n != code.distance * code.distance)
    complain("surface code must have n = d^2");

  for (std::size_t i = 0; i < code.h_x.rows(); ++i) {
    const BitVector xrow = code.h_x.row(i);
    for (std::size_t j = 0; j < code.h_z.rows(); ++j) {
      if (xrow.dot(code.h_z.row(j))) {
        complain("commutation violation: X check " + std::to_string(i) + " vs Z check " +
                 std::to_string(j));
      }
    }
  }

  if (code.logicals_x.empty() || code.logicals_z.empty()) complain("missing logical operators");
  if (code.logicals_x.size() != code.logicals_z.size()) complain("unpaired logical operators");

  const std::size_t rank_x = rref(code.h_x).rank;
  const std::size_t rank_z = rref(code.h_z).rank;
  const std::size_t k = code.n - rank_x - rank_z;
  if (k != code.logicals_x.size())
    complain("logical count disagrees with n - rank(Hx) - rank(Hz)");

  for (std::size_t i = 0; i < code.logicals_x.size(); ++i) {
    const BitVector& lx = code.logicals_x[i];
    if (lx.size() != static_cast<std::size_t>(code.n)) {
      complain("logical X length mismatch");
      continue;
    }
    if (!code.h_z.mul(lx).is_zero()) complain("logical X anticommutes with a Z check");
    if (in_rowspace(code.h_x, lx)) complain("logical X lies in the X stabilizer rowspace");
  }
  for (std::size_t i = 0; i < code.logicals_z.size(); ++i) {
    const BitVector& lz = code.logicals_z[i];
    if (lz.size() != static_cast<std::size_t>(code.n)) {
      complain("logical Z length mismatch");
      continue;
    }
    if (!code.h_x.mul(lz).is_zero()) complain("logical Z anticommutes with an X check");
    if (in_rowspace(code.h_z, lz)) complain("logical Z lies in the Z stabilizer rowspace");
  }
  for (std::size_t i = 0; i < code.logicals_x.size() && i < code.logicals_z.size(); ++i) {
    for (std::size_t j = 0; j < code.logicals_z.size(); ++j) {
      const bool expect = (i == j);
      if (code.logicals_x[i].size() == code.logicals_z[j].size() &&
          code.logicals_x[i].dot(code.logicals_z[j]) != expect)
        complain("logical pairing violates <Lx_i, Lz_j> = delta_ij");
    }
  }
  return report;
}

namespace {

nlohmann::json matrix_to_json(const BitMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) rows.push_back(m.row(r).to_bits());
  return rows;
}

nlohmann::json vectors_to_json(const std::vector<BitVector>& vs) {
  nlohmann::json rows = nlohmann::json::array();
  for (const BitVector& v : vs) rows.push_back(v.to_bits());
  return rows;
}

BitMatrix matrix_from_json(const nlohmann::json& rows, std::size_t cols) {
  std::vector<std::vector<int>> data;
  for (const auto& row : rows) data.push_back(row.get<std::vector<int>>());
  if (data.empty()) return BitMatrix(0, cols);
  return BitMatrix::from_rows(data);
}

}  // namespace

std::string code_to_json(const CssCode& code) {
  nlohmann::json doc;
  doc["family"] = family_name(code.family);
  doc["distance"] = code.distance;
  doc["n"] = code.n;
  doc["hx"] = matrix_to_json(code.h_x);
  doc["hz"] = matrix_to_json(code.h_z);
  doc["lx"] = vectors_to_json(code.logicals_x);
  doc["lz"] = vectors_to_json(code.logicals_z);
  return doc.dump(2) + "\n";
}

CssCode code_from_json(const std::string& text) {
  const nlohmann::json doc = nlohmann::json::parse(text);
  CssCode code;
  const std::string family = doc.at("family").get<std::string>();
  if (family == "surface")
    code.family = CodeFamily::surface;
  else if (family == "color")
    code.family = CodeFamily::color;
  else
    throw std::invalid_argument("unknown code family: " + family);
  code.distance = doc.at("distance").get<int>();
  code.n = doc.at("n").get<int>();
  code.h_x = matrix_from_json(doc.at("hx"), code.n);
  code.h_z = matrix_from_json(doc.at("hz"), code.n);
  for (const auto& row : doc.at("lx")) code.logicals_x.push_back(BitVector::from_bits(row));
  for (const auto& row : doc.at("lz")) code.logicals_z.push_back(BitVector::from_bits(row));
  CodeReport report = validate(code);
  if (!report.ok())
    throw std::invalid_argument("invalid code document: " + report.violations.front());
  return code;
}

}  // namespace sosdec
