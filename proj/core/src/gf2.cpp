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

#include "sosdec/gf2.hpp"

#include <bit>
#include <stdexcept>

namespace sosdec {

namespace {
constexpr std::size_t kWordBits = 64;

std::size_t words_for(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }
}  // namespace

BitVector::BitVector(std::size_t len) : len_(len), words_(words_for(len), 0) {}

BitVector BitVector::from_bits(const std::vector<int>& bits) {
  BitVector v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != 0 && bits[i] != 1) throw std::invalid_argument("bit must be 0 or 1");
    v.set(i, bits[i] != 0);
  }
  return v;
}

bool BitVector::get(std::size_t i) const {
  return (words_[i / kWordBits] >> (i % kWordBits)) & 1u;
}

void BitVector::set(std::size_t i, bool value) {
  const std::uint64_t mask = std::uint64_t{1} << (i % kWordBits);
  if (value)
    words_[i / kWordBits] |= mask;
  else
    words_[i / kWordBits] &= ~mask;
}

void BitVector::flip(std::size_t i) { words_[i / kWordBits] ^= std::uint64_t{1} << (i % kWordBits); }

void BitVector::xor_assign(const BitVector& other) {
  if (other.len_ != len_) throw std::invalid_argument("BitVector length mismatch");
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
}

std::size_t BitVector::weight() const {
  std::size_t total = 0;
  for (std::uint64_t w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

bool BitVector::is_zero() const {
  for (std::uint64_t w : words_)
    if (w) return false;
  return true;
}

bool BitVector::dot(const BitVector& other) const {
  if (other.len_ != len_) throw std::invalid_argument("BitVector length mismatch");
  std::uint64_t acc = 0;
  for (std::size_t w = 0; w < words_.size(); ++w) acc ^= words_[w] & other.words_[w];
  return std::popcount(acc) & 1;
}

std::vector<int> BitVector::to_bits() const {
  std::vector<int> bits(len_);
  for (std::size_t i = 0; i < len_; ++i) bits[i] = get(i) ? 1 : 0;
  return bits;
}

bool BitVector::lex_less(const BitVector& other) const {
  if (other.len_ != len_) throw std::invalid_argument("BitVector length mismatch");
  for (std::size_t w = 0; w < words_.size(); ++w) {
    const std::uint64_t diff = words_[w] ^ other.words_[w];
    if (diff) {
      // Lowest differing bit is the earliest index, which decides the order.
      const int bit = std::countr_zero(diff);
      return ((words_[w] >> bit) & 1u) == 0;
    }
  }
  return false;
}

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), stride_(words_for(cols)), words_(rows * words_for(cols), 0) {}

BitMatrix BitMatrix::identity(std::size_t n) {
  BitMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
  return m;
}

BitMatrix BitMatrix::from_rows(const std::vector<std::vector<int>>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r ? rows[0].size() : 0;
  BitMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw std::invalid_argument("ragged row lengths");
    for (std::size_t j = 0; j < c; ++j) {
      if (rows[i][j] != 0 && rows[i][j] != 1) throw std::invalid_argument("bit must be 0 or 1");
      m.set(i, j, rows[i][j] != 0);
    }
  }
  return m;
}

bool BitMatrix::get(std::size_t r, std::size_t c) const {
  return (words_[r * stride_ + c / kWordBits] >> (c % kWordBits)) & 1u;
}

void BitMatrix::set(std::size_t r, std::size_t c, bool value) {
  const std::uint64_t mask = std::uint64_t{1} << (c % kWordBits);
  if (value)
    words_[r * stride_ + c / kWordBits] |= mask;
  else
    words_[r * stride_ + c / kWordBits] &= ~mask;
}

BitVector BitMatrix::row(std::size_t r) const {
  BitVector v(cols_);
  for (std::size_t w = 0; w < stride_; ++w) v.words_[w] = words_[r * stride_ + w];
  return v;
}

void BitMatrix::set_row(std::size_t r, const BitVector& v) {
  if (v.size() != cols_) throw std::invalid_argument("row length mismatch");
  for (std::size_t w = 0; w < stride_; ++w) words_[r * stride_ + w] = v.words_[w];
}

void BitMatrix::xor_row(std::size_t dst, std::size_t src) {
  for (std::size_t w = 0; w < stride_; ++w) words_[dst * stride_ + w] ^= words_[src * stride_ + w];
}

BitVector BitMatrix::mul(const BitVector& v) const {
  if (v.size() != cols_) throw std::invalid_argument("dimension mismatch in mat-vec product");
  BitVector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    std::uint64_t acc = 0;
    for (std::size_t w = 0; w < stride_; ++w) acc ^= words_[r * stride_ + w] & v.words_[w];
    if (std::popcount(acc) & 1) out.set(r, true);
  }
  return out;
}

BitMatrix BitMatrix::transpose() const {
  BitMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      if (get(r, c)) t.set(c, r, true);
  return t;
}

std::size_t BitMatrix::row_weight(std::size_t r) const {
  std::size_t total = 0;
  for (std::size_t w = 0; w < stride_; ++w)
    total += static_cast<std::size_t>(std::popcount(words_[r * stride_ + w]));
  return total;
}

std::vector<std::size_t> BitMatrix::row_support(std::size_t r) const {
  std::vector<std::size_t> support;
  for (std::size_t c = 0; c < cols_; ++c)
    if (get(r, c)) support.push_back(c);
  return support;
}

RrefResult rref(const BitMatrix& m) {
  RrefResult result{m, {}, 0};
  BitMatrix& a = result.reduced;
  std::size_t pivot_row = 0;
  for (std::size_t col = 0; col < a.cols() && pivot_row < a.rows(); ++col) {
    std::size_t found = a.rows();
    for (std::size_t r = pivot_row; r < a.rows(); ++r) {
      if (a.get(r, col)) {
        found = r;
        break;
      }
    }
    if (found == a.rows()) continue;
    if (found != pivot_row) {
      BitVector tmp = a.row(pivot_row);
      a.set_row(pivot_row, a.row(found));
      a.set_row(found, tmp);
    }
    for (std::size_t r = 0; r < a.rows(); ++r) {
      if (r != pivot_row && a.get(r, col)) a.xor_row(r, pivot_row);
    }
    result.pivots.push_back(col);
    ++pivot_row;
  }
  result.rank = result.pivots.size();
  return result;
}

std::optional<BitVector> solve(const BitMatrix& h, const BitVector& s) {
  if (h.rows() != s.size()) throw std::invalid_argument("syndrome length must equal row count");
  // Row-reduce the augmented system [H | s].
  BitMatrix aug(h.rows(), h.cols() + 1);
  for (std::size_t r = 0; r < h.rows(); ++r) {
    for (std::size_t c = 0; c < h.cols(); ++c) aug.set(r, c, h.get(r, c));
    aug.set(r, h.cols(), s.get(r));
  }
  RrefResult rr = rref(aug);
  BitVector e(h.cols());
  for (std::size_t i = 0; i < rr.pivots.size(); ++i) {
    if (rr.pivots[i] == h.cols()) return std::nullopt;  // pivot in augmented column
    e.set(rr.pivots[i], rr.reduced.get(i, h.cols()));
  }
  return e;
}

std::vector<BitVector> nullspace_basis(const BitMatrix& h) {
  RrefResult rr = rref(h);
  std::vector<bool> is_pivot(h.cols(), false);
  for (std::size_t p : rr.pivots) is_pivot[p] = true;

  std::vector<BitVector> basis;
  for (std::size_t free_col = 0; free_col < h.cols(); ++free_col) {
    if (is_pivot[free_col]) continue;
    BitVector b(h.cols());
    b.set(free_col, true);
    for (std::size_t i = 0; i < rr.pivots.size(); ++i)
      if (rr.reduced.get(i, free_col)) b.set(rr.pivots[i], true);
    basis.push_back(std::move(b));
  }
  return basis;
}

bool in_rowspace(const BitMatrix& h, const BitVector& v) {
  if (v.size() != h.cols()) throw std::invalid_argument("vector length must equal column count");
  RrefResult rr = rref(h);
  BitVector residual = v;
  for (std::size_t i = 0; i < rr.pivots.size(); ++i) {
    if (residual.get(rr.pivots[i])) residual.xor_assign(rr.reduced.row(i));
  }
  return residual.is_zero();
}

}  // namespace sosdec
