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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace sosdec {

// Dense bit vector over F2, packed 64 bits per word.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t len);
  static BitVector from_bits(const std::vector<int>& bits);

  std::size_t size() const { return len_; }
  bool get(std::size_t i) const;
  void set(std::size_t i, bool value);
  void flip(std::size_t i);

  void xor_assign(const BitVector& other);
  std::size_t weight() const;
  bool is_zero() const;
  // Parity of the bitwise AND, i.e. <a,b> mod 2.
  bool dot(const BitVector& other) const;

  std::vector<int> to_bits() const;
  // Index 0 is the most significant position.
  bool lex_less(const BitVector& other) const;

  friend bool operator==(const BitVector& a, const BitVector& b) {
    return a.len_ == b.len_ && a.words_ == b.words_;
  }

 private:
  friend class BitMatrix;
  std::size_t len_ = 0;
  std::vector<std::uint64_t> words_;
};

// Dense bit matrix over F2, row-major. Dimensions are fixed at construction.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols);
  static BitMatrix identity(std::size_t n);
  static BitMatrix from_rows(const std::vector<std::vector<int>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool get(std::size_t r, std::size_t c) const;
  void set(std::size_t r, std::size_t c, bool value);

  BitVector row(std::size_t r) const;
  void set_row(std::size_t r, const BitVector& v);
  void xor_row(std::size_t dst, std::size_t src);  // row[dst] ^= row[src]

  // Matrix-vector product over F2 (syndrome map).
  BitVector mul(const BitVector& v) const;
  BitMatrix transpose() const;
  std::size_t row_weight(std::size_t r) const;
  std::vector<std::size_t> row_support(std::size_t r) const;

  friend bool operator==(const BitMatrix& a, const BitMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.words_ == b.words_;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0, stride_ = 0;
  std::vector<std::uint64_t> words_;
};

struct RrefResult {
  BitMatrix reduced;
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
  std::size_t rank = 0;
};

// Reduced row echelon form over F2; preserves the rowspace.
RrefResult rref(const BitMatrix& m);

// A particular solution of He = s, or nullopt if inconsistent. Free
// variables are set to 0 so the result is deterministic.
std::optional<BitVector> solve(const BitMatrix& h, const BitVector& s);

// Independent basis of {b : Hb = 0}; size is cols - rank(H).
std::vector<BitVector> nullspace_basis(const BitMatrix& h);

// True iff v is an F2-combination of the rows of h.
bool in_rowspace(const BitMatrix& h, const BitVector& v);

}  // namespace sosdec
