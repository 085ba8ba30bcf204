// Copyright 2026 The bbqram Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "bbqram/types.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <set>
#include <stdexcept>
#include <utility>

namespace bbqram {

std::size_t next_power_of_two(std::size_t x) {
  if (x <= 1) return 1;
  return std::bit_ceil(x);
}

unsigned exact_log2(std::size_t power_of_two) {
  if (!is_power_of_two(power_of_two)) {
    throw std::invalid_argument("exact_log2: argument is not a power of two");
  }
  return static_cast<unsigned>(std::countr_zero(power_of_two));
}

void Tolerance::validate() const {
  if (!(eps_amp > 0.0) || !(eps_norm > 0.0)) {
    throw std::invalid_argument("Tolerance: eps_amp and eps_norm must be strictly positive");
  }
}

SparseVector::SparseVector(std::size_t dim, std::vector<VectorEntry> entries)
    : dim_(dim), entries_(std::move(entries)) {
  if (dim_ == 0) throw std::invalid_argument("SparseVector: dim must be >= 1");
  std::set<std::size_t> seen;
  for (const auto& e : entries_) {
    if (e.index >= dim_) {
      throw std::invalid_argument("SparseVector: index " + std::to_string(e.index) +
                                  " out of range for dim " + std::to_string(dim_));
    }
    if (!seen.insert(e.index).second) {
      throw std::invalid_argument("SparseVector: duplicate index " + std::to_string(e.index));
    }
  }
}

SparseVector SparseVector::from_dense(const std::vector<double>& values) {
  std::vector<VectorEntry> entries;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] != 0.0) entries.push_back({i, values[i]});
  }
  return SparseVector(std::max<std::size_t>(values.size(), 1), std::move(entries));
}

std::size_t SparseVector::nonzero_count() const {
  return static_cast<std::size_t>(
      std::count_if(entries_.begin(), entries_.end(), [](const VectorEntry& e) { return e.value != 0.0; }));
}

std::vector<double> SparseVector::dense() const {
  std::vector<double> out(dim_, 0.0);
  for (const auto& e : entries_) out[e.index] = e.value;
  return out;
}

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols, std::vector<MatrixEntry> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows_ == 0 || cols_ == 0) throw std::invalid_argument("SparseMatrix: shape must be non-empty");
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& e : entries_) {
    if (e.row >= rows_ || e.col >= cols_) {
      throw std::invalid_argument("SparseMatrix: entry (" + std::to_string(e.row) + "," + std::to_string(e.col) +
                                  ") out of range");
    }
    if (!seen.insert({e.row, e.col}).second) {
      throw std::invalid_argument("SparseMatrix: duplicate entry (" + std::to_string(e.row) + "," +
                                  std::to_string(e.col) + ")");
    }
  }
}

SparseMatrix SparseMatrix::from_dense(const std::vector<std::vector<double>>& rows) {
  if (rows.empty() || rows.front().empty()) throw std::invalid_argument("SparseMatrix: empty dense input");
  const std::size_t cols = rows.front().size();
  std::vector<MatrixEntry> entries;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw std::invalid_argument("SparseMatrix: ragged dense input");
    for (std::size_t j = 0; j < cols; ++j) {
      if (rows[i][j] != 0.0) entries.push_back({i, j, rows[i][j]});
    }
  }
  return SparseMatrix(rows.size(), cols, std::move(entries));
}

std::size_t SparseMatrix::nonzero_count() const {
  return static_cast<std::size_t>(
      std::count_if(entries_.begin(), entries_.end(), [](const MatrixEntry& e) { return e.value != 0.0; }));
}

SparseVector SparseMatrix::row(std::size_t i) const {
  if (i >= rows_) throw std::out_of_range("SparseMatrix::row: index out of range");
  std::vector<VectorEntry> entries;
  for (const auto& e : entries_) {
    if (e.row == i) entries.push_back({e.col, e.value});
  }
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.index < b.index; });
  return SparseVector(cols_, std::move(entries));
}

std::vector<std::vector<double>> SparseMatrix::dense() const {
  std::vector<std::vector<double>> out(rows_, std::vector<double>(cols_, 0.0));
  for (const auto& e : entries_) out[e.row][e.col] = e.value;
  return out;
}

SparseVector pad_to_power_of_two(const SparseVector& v) {
  return SparseVector(next_power_of_two(v.dim()), v.entries());
}

SparseMatrix pad_to_power_of_two(const SparseMatrix& m) {
  return SparseMatrix(next_power_of_two(m.rows()), next_power_of_two(m.cols()), m.entries());
}

double l2_norm_squared(const SparseVector& v) {
  double sum = 0.0;
  for (const auto& e : v.entries()) sum += e.value * e.value;
  return sum;
}

double frobenius_norm_squared(const SparseMatrix& m) {
  double sum = 0.0;
  for (const auto& e : m.entries()) sum += e.value * e.value;
  return sum;
}

BitPath::BitPath(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto b : bits_) {
    if (b > 1) throw std::invalid_argument("BitPath: bits must be 0 or 1");
  }
}

BitPath BitPath::from_index(std::uint64_t value, unsigned depth) {
  if (depth < 64 && (value >> depth) != 0) {
    throw std::invalid_argument("BitPath::from_index: value does not fit in depth bits");
  }
  std::vector<std::uint8_t> bits(depth);
  for (unsigned i = 0; i < depth; ++i) bits[i] = static_cast<std::uint8_t>((value >> (depth - 1 - i)) & 1u);
  return BitPath(std::move(bits));
}

BitPath BitPath::parse(std::string_view text) {
  std::vector<std::uint8_t> bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument("BitPath::parse: malformed bit string '" + std::string(text) + "'");
    }
    bits.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return BitPath(std::move(bits));
}

std::uint64_t BitPath::to_index() const {
  std::uint64_t value = 0;
  for (auto b : bits_) value = (value << 1) | b;
  return value;
}

std::string BitPath::to_string() const {
  std::string s;
  s.reserve(bits_.size());
  for (auto b : bits_) s.push_back(static_cast<char>('0' + b));
  return s;
}

BitPath BitPath::prefix(unsigned length) const {
  if (length > bits_.size()) throw std::out_of_range("BitPath::prefix: length exceeds depth");
  return BitPath(std::vector<std::uint8_t>(bits_.begin(), bits_.begin() + length));
}

BitPath BitPath::appended(std::uint8_t bit) const {
  auto bits = bits_;
  bits.push_back(bit);
  return BitPath(std::move(bits));
}

BitPath BitPath::concat(const BitPath& tail) const {
  auto bits = bits_;
  bits.insert(bits.end(), tail.bits_.begin(), tail.bits_.end());
  return BitPath(std::move(bits));
}

std::string format_real(double value) {
  if (value == 0.0) return "0";  // folds -0
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw std::runtime_error("format_real: conversion failed");
  return std::string(buf.data(), end);
}

}  // namespace bbqram
