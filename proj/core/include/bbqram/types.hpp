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


#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace bbqram {

/// True when `x` is a positive power of two.
constexpr bool is_power_of_two(std::size_t x) { return x != 0 && (x & (x - 1)) == 0; }

/// Least power of two >= x (x >= 1).
std::size_t next_power_of_two(std::size_t x);

/// log2 of a power of two.
unsigned exact_log2(std::size_t power_of_two);

/// Numerical tolerances used throughout preparation and verification.
struct Tolerance {
  double eps_amp = 1e-10;   // amplitude-level threshold (residuals, dumps)
  double eps_norm = 1e-9;   // norm / fidelity threshold

  void validate() const;
};

struct VectorEntry {
  std::size_t index = 0;
  double value = 0.0;

  friend bool operator==(const VectorEntry&, const VectorEntry&) = default;
};

/// Classical real vector with explicitly listed entries; unlisted positions are zero.
class SparseVector {
 public:
  SparseVector() = default;
  /// Throws std::invalid_argument on dim == 0, duplicate or out-of-range indices.
  SparseVector(std::size_t dim, std::vector<VectorEntry> entries);

  static SparseVector from_dense(const std::vector<double>& values);

  std::size_t dim() const { return dim_; }
  const std::vector<VectorEntry>& entries() const { return entries_; }
  std::size_t nonzero_count() const;
  bool is_zero() const { return nonzero_count() == 0; }
  std::vector<double> dense() const;

  friend bool operator==(const SparseVector&, const SparseVector&) = default;

 private:
  std::size_t dim_ = 1;
  std::vector<VectorEntry> entries_;
};

struct MatrixEntry {
  std::size_t row = 0;
  std::size_t col = 0;
  double value = 0.0;

  friend bool operator==(const MatrixEntry&, const MatrixEntry&) = default;
};

class SparseMatrix {
 public:
  SparseMatrix() = default;
  /// Throws std::invalid_argument on empty shape, duplicate or out-of-range (i, j).
  SparseMatrix(std::size_t rows, std::size_t cols, std::vector<MatrixEntry> entries);

  static SparseMatrix from_dense(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const std::vector<MatrixEntry>& entries() const { return entries_; }
  /// w: number of entries with a nonzero value.
  std::size_t nonzero_count() const;
  SparseVector row(std::size_t i) const;
  std::vector<std::vector<double>> dense() const;

  friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

 private:
  std::size_t rows_ = 1;
  std::size_t cols_ = 1;
  std::vector<MatrixEntry> entries_;
};

SparseVector pad_to_power_of_two(const SparseVector& v);
/// Rows and columns are padded independently.
SparseMatrix pad_to_power_of_two(const SparseMatrix& m);

double l2_norm_squared(const SparseVector& v);
double frobenius_norm_squared(const SparseMatrix& m);

/// Sequence of routing bits, most-significant first.
class BitPath {
 public:
  BitPath() = default;
  explicit BitPath(std::vector<std::uint8_t> bits);

  static BitPath from_index(std::uint64_t value, unsigned depth);
  /// Parses a string of '0'/'1' characters; throws std::invalid_argument otherwise.
  static BitPath parse(std::string_view text);

  unsigned depth() const { return static_cast<unsigned>(bits_.size()); }
  bool empty() const { return bits_.empty(); }
  std::uint8_t operator[](std::size_t i) const { return bits_[i]; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  std::uint64_t to_index() const;
  std::string to_string() const;
  BitPath prefix(unsigned length) const;
  BitPath appended(std::uint8_t bit) const;
  BitPath concat(const BitPath& tail) const;

  friend bool operator==(const BitPath&, const BitPath&) = default;
  friend auto operator<=>(const BitPath&, const BitPath&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// Shortest round-trip decimal form of a double; used by all text outputs.
std::string format_real(double value);

}  // namespace bbqram
