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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "bbqram/word_codec.hpp"

namespace bbqram {

// Coherent model of a small bucket-brigade qRAM in which every switch is an
// explicit three-level system. The joint space is
//
//   dir (n qubits) x switches (3^(2^n - 1)) x bus (1 qubit) x data (w qubits)
//
// and each routing step is a unitary permutation of that basis, applied to the
// whole superposition at once rather than branch by branch. Limited to n <= 2,
// where the joint space stays small.
class QutritQram {
 public:
  static constexpr unsigned kMaxAddressBits = 2;

  /// Throws std::invalid_argument for n > 2 or cells.size() != 2^n.
  QutritQram(unsigned n, std::vector<double> cells, const WordCodec& codec);

  /// Loads sum_i amplitudes[i] |i>_dir |.>_switches |0>_bus |0>_data.
  /// Throws std::invalid_argument if amplitudes.size() != 2^n.
  void prepare(const std::vector<std::complex<double>>& amplitudes);

  /// Route every address bit, extract into the data register, unroute.
  void query();

  std::size_t dimension() const { return state_.size(); }
  unsigned address_width() const { return n_; }
  unsigned data_width() const { return data_width_; }
  std::size_t switch_count() const { return switches_; }

  /// Amplitude of |addr>_dir |.>_switches |0>_bus |word>_data.
  std::complex<double> amplitude(std::uint64_t addr, Word word) const;

  /// Total probability outside the "switches Empty, bus 0" subspace.
  double residual_outside_ground() const;

  /// Number of unitary steps applied by the last query().
  std::size_t steps_applied() const { return steps_; }

 private:
  struct Basis {
    std::uint64_t dir;
    std::vector<std::uint8_t> sw;  // 0 = Empty, 1 = Zero, 2 = One
    std::uint8_t bus;
    Word data;
  };

  std::size_t index_of(const Basis& b) const;
  Basis decode(std::size_t index) const;

  // Applies the basis permutation `f` (checked to be a bijection).
  template <typename F>
  void apply_permutation(F&& f);

  void bus_copy(unsigned address_bit);  // bus ^= dir bit (MSB-first position)
  void store_at_level(unsigned level);   // swap bus into the Empty switch at `level` on the active path
  void extract();                        // data ^= word(cell at routed address)

  unsigned n_;
  std::vector<double> cells_;
  std::vector<Word> words_;
  unsigned data_width_;
  std::size_t switches_;
  std::vector<std::complex<double>> state_;
  std::size_t steps_ = 0;
};

}  // namespace bbqram
