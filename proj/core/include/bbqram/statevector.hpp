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
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bbqram/types.hpp"
#include "bbqram/word_codec.hpp"

namespace bbqram {

using Amplitude = std::complex<double>;

/// A named block of qubits. Bit b of the register value lives on global qubit offset + b.
struct Register {
  std::string name;
  unsigned offset = 0;
  unsigned width = 0;

  std::uint64_t mask() const { return ((std::uint64_t{1} << width) - 1) << offset; }
  std::uint64_t value_in(std::uint64_t index) const { return (index >> offset) & ((std::uint64_t{1} << width) - 1); }
  /// Global qubit holding bit `b` (0 = least significant).
  unsigned qubit(unsigned b) const { return offset + b; }
  /// Global qubit holding the k-th most significant bit (k = 0 is the top bit).
  unsigned qubit_from_top(unsigned k) const { return offset + width - 1 - k; }

  friend bool operator==(const Register&, const Register&) = default;
};

class RegisterLayout {
 public:
  static constexpr unsigned kDefaultQubitCap = 24;

  explicit RegisterLayout(unsigned qubit_cap = kDefaultQubitCap) : cap_(qubit_cap) {}

  /// Appends a register above the existing ones. Throws std::invalid_argument on
  /// a duplicate name or zero width, std::length_error past the qubit cap.
  const Register& add(const std::string& name, unsigned width);

  const Register& operator[](const std::string& name) const;
  bool contains(const std::string& name) const;
  const std::vector<Register>& registers() const { return registers_; }
  unsigned qubit_count() const { return qubits_; }
  std::size_t dimension() const { return std::size_t{1} << qubits_; }

  std::uint64_t pack(const std::map<std::string, std::uint64_t>& assignment) const;

  friend bool operator==(const RegisterLayout&, const RegisterLayout&) = default;

 private:
  unsigned cap_;
  unsigned qubits_ = 0;
  std::vector<Register> registers_;
};

/// A slice of a key: the top `bits` bits of a register.
struct KeySlice {
  Register reg;
  unsigned bits = 0;
};

/// Dense state over a RegisterLayout. Gates mutate in place.
class StateVector {
 public:
  /// Throws std::out_of_range if an assignment does not fit its register.
  static StateVector basis(const RegisterLayout& layout, const std::map<std::string, std::uint64_t>& assignment = {});
  /// Throws std::invalid_argument if amplitudes.size() != layout.dimension()
  /// or the amplitudes are not normalized to within 1e-9.
  StateVector(RegisterLayout layout, std::vector<Amplitude> amplitudes);

  const RegisterLayout& layout() const { return layout_; }
  const Register& reg(const std::string& name) const { return layout_[name]; }
  std::span<const Amplitude> amplitudes() const { return amps_; }
  Amplitude amplitude(std::uint64_t index) const { return amps_.at(index); }
  std::size_t dimension() const { return amps_.size(); }
  double norm_squared() const;

  void x(unsigned qubit);
  void z(unsigned qubit);
  void cx(unsigned control, unsigned target);
  /// diag(1, e^{i theta}) on `qubit`.
  void phase(unsigned qubit, double theta);

  /// On every branch whose top prefix.depth() bits of `control` equal `prefix`,
  /// maps |0>_target to sqrt(p)|0> + sqrt(1-p)|1> (a real Y rotation). Throws
  /// std::domain_error if p lies outside [0, 1] by more than `eps`.
  void controlled_rotation(const Register& control, const BitPath& prefix, unsigned target, double p,
                           double eps = 1e-12);
  /// Undoes controlled_rotation with the same arguments.
  void controlled_rotation_inverse(const Register& control, const BitPath& prefix, unsigned target, double p,
                                   double eps = 1e-12);

  /// Rotation whose probability is read from two word registers: on each
  /// branch, probability(word_a, word_b) gives p, or nullopt to leave the
  /// branch alone.
  using ProbabilityFn = std::function<std::optional<double>(Word, Word)>;
  void register_controlled_rotation(const Register& a, const Register& b, unsigned target,
                                    const ProbabilityFn& probability);

  /// XORs words[key] into `target` on every basis branch, where key is the
  /// concatenation (first slice most significant) of the key slices' top bits.
  /// Throws std::out_of_range if a word does not fit the target register, or
  /// std::invalid_argument if words.size() != 2^(total key bits).
  void xor_load(const std::vector<KeySlice>& key, std::span<const Word> words, const Register& target);

  /// Checks the norm stays 1 within eps_norm; throws std::logic_error otherwise.
  void check_normalized(double eps_norm) const;

  /// When on, every gate re-checks the norm and controlled_rotation verifies
  /// its target is |0> on the branches it rotates. Defaults to on in debug builds.
  void set_checks(bool on) { checks_ = on; }
  bool checks() const { return checks_; }

  /// `bits(grouped by register, first register leftmost) re im` per line,
  /// skipping amplitudes with magnitude below eps_amp.
  std::string dump(double eps_amp) const;

 private:
  void after_gate();

  RegisterLayout layout_;
  std::vector<Amplitude> amps_;
#ifdef NDEBUG
  bool checks_ = false;
#else
  bool checks_ = true;
#endif
};

/// |<target|s>|^2. Throws std::invalid_argument on a dimension mismatch.
double fidelity(const StateVector& s, std::span<const Amplitude> target);

/// True iff every amplitude with magnitude above eps_amp has `reg` = 0.
bool register_is_disentangled_zero(const StateVector& s, const Register& reg, double eps_amp);

/// Full-space vector with `values` on `reg` and every other register at 0.
std::vector<Amplitude> embed_register(const RegisterLayout& layout, const Register& reg,
                                      std::span<const Amplitude> values);

/// Amplitudes of `reg` on the branch where all other registers are 0.
std::vector<Amplitude> extract_register(const StateVector& s, const Register& reg);

}  // namespace bbqram
