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

#include <cstdint>
#include <span>
#include <vector>

namespace bbqram {

using Word = std::uint64_t;

// Maps the real numbers held in qRAM memory cells to the computational-basis
// words carried on the data bus and stored in ancilla registers.
//
// When every value is a small nonnegative integer the word is the integer
// itself, so a register holding |4> really holds the number 4. Otherwise a
// codebook is used: 0.0 is always word 0 and the remaining distinct values are
// numbered 1..K in increasing order. Either way the value 0.0 encodes to the
// all-zero word, so an unloaded register decodes to 0.
class WordCodec {
 public:
  enum class Mode { Integer, Codebook };

  WordCodec();
  /// Chooses the mode from the values; throws std::invalid_argument on NaN/inf.
  explicit WordCodec(std::span<const double> values);

  Mode mode() const { return mode_; }
  /// Register width (qubits) needed to hold any word; at least 1.
  unsigned width() const { return width_; }

  /// Throws std::out_of_range if `value` is not representable.
  Word encode(double value) const;
  double decode(Word word) const;

 private:
  Mode mode_ = Mode::Integer;
  unsigned width_ = 1;
  std::vector<double> book_;  // book_[w] = value, book_[0] = 0.0
};

}  // namespace bbqram
