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


#include "bbqram/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace bbqram {

namespace {

constexpr double kConstructNormEps = 1e-9;
constexpr double kGateNormEps = 1e-9;

bool bit_set(std::uint64_t index, unsigned qubit) { return (index >> qubit) & 1u; }

// True if the top prefix.depth() bits of `control` in `index` equal `prefix`.
bool prefix_matches(std::uint64_t index, const Register& control, std::uint64_t prefix_value, unsigned prefix_bits) {
  if (prefix_bits == 0) return true;
  return (control.value_in(index) >> (control.width - prefix_bits)) == prefix_value;
}

void check_prefix(const Register& control, const BitPath& prefix) {
  if (prefix.depth() > control.width) {
    throw std::invalid_argument("controlled_rotation: prefix longer than control register " + control.name);
  }
}

}  // namespace

const Register& RegisterLayout::add(const std::string& name, unsigned width) {
  if (width == 0) throw std::invalid_argument("RegisterLayout: register '" + name + "' has zero width");
  if (contains(name)) throw std::invalid_argument("RegisterLayout: duplicate register '" + name + "'");
  if (qubits_ + width > cap_) {
    throw std::length_error("RegisterLayout: " + std::to_string(qubits_ + width) + " qubits exceed cap of " +
                            std::to_string(cap_));
  }
  registers_.push_back({name, qubits_, width});
  qubits_ += width;
  return registers_.back();
}

const Register& RegisterLayout::operator[](const std::string& name) const {
  for (const auto& r : registers_) {
    if (r.name == name) return r;
  }
  throw std::out_of_range("RegisterLayout: no register named '" + name + "'");
}

bool RegisterLayout::contains(const std::string& name) const {
  return std::any_of(registers_.begin(), registers_.end(), [&](const Register& r) { return r.name == name; });
}

std::uint64_t RegisterLayout::pack(const std::map<std::string, std::uint64_t>& assignment) const {
  std::uint64_t index = 0;
  for (const auto& [name, value] : assignment) {
    const Register& r = (*this)[name];
    if ((value >> r.width) != 0) {
      throw std::out_of_range("RegisterLayout::pack: value " + std::to_string(value) + " overflows register '" +
                              name + "' of width " + std::to_string(r.width));
    }
    index |= value << r.offset;
  }
  return index;
}

StateVector StateVector::basis(const RegisterLayout& layout, const std::map<std::string, std::uint64_t>& assignment) {
  std::vector<Amplitude> amps(layout.dimension(), 0.0);
  amps[layout.pack(assignment)] = 1.0;
  return StateVector(layout, std::move(amps));
}

StateVector::StateVector(RegisterLayout layout, std::vector<Amplitude> amplitudes)
    : layout_(std::move(layout)), amps_(std::move(amplitudes)) {
  if (amps_.size() != layout_.dimension()) throw std::invalid_argument("StateVector: dimension mismatch");
  if (std::abs(norm_squared() - 1.0) > kConstructNormEps) {
    throw std::invalid_argument("StateVector: amplitudes are not normalized");
  }
}

double StateVector::norm_squared() const {
  double sum = 0.0;
  for (const auto& a : amps_) sum += std::norm(a);
  return sum;
}

void StateVector::check_normalized(double eps_norm) const {
  const double n = norm_squared();
  if (std::abs(n - 1.0) > eps_norm) {
    throw std::logic_error("StateVector: norm drifted to " + format_real(n));
  }
}

void StateVector::after_gate() {
  if (checks_) check_normalized(kGateNormEps);
}

void StateVector::x(unsigned qubit) {
  const std::uint64_t bit = std::uint64_t{1} << qubit;
  for (std::uint64_t i = 0; i < amps_.size(); ++i) {
    if (!(i & bit)) std::swap(amps_[i], amps_[i | bit]);
  }
  after_gate();
}

void StateVector::z(unsigned qubit) {
  for (std::uint64_t i = 0; i < amps_.size(); ++i) {
    if (bit_set(i, qubit)) amps_[i] = -amps_[i];
  }
  after_gate();
}

void StateVector::cx(unsigned control, unsigned target) {
  if (control == target) throw std::invalid_argument("cx: control equals target");
  const std::uint64_t bit = std::uint64_t{1} << target;
  for (std::uint64_t i = 0; i < amps_.size(); ++i) {
    if (bit_set(i, control) && !(i & bit)) std::swap(amps_[i], amps_[i | bit]);
  }
  after_gate();
}

void StateVector::phase(unsigned qubit, double theta) {
  const Amplitude factor = std::polar(1.0, theta);
  for (std::uint64_t i = 0; i < amps_.size(); ++i) {
    if (bit_set(i, qubit)) amps_[i] *= factor;
  }
  after_gate();
}

void StateVector::controlled_rotation(const Register& control, const BitPath& prefix, unsigned target, double p,
                                      double eps) {
  check_prefix(control, prefix);
  if (p < -eps || p > 1.0 + eps) throw std::domain_error("controlled_rotation: p outside [0, 1]");
  p = std::clamp(p, 0.0, 1.0);
  const double c = std::sqrt(p);
  const double s = std::sqrt(1.0 - p);
  const std::uint64_t bit = std::uint64_t{1} << target;
  const std::uint64_t pv = prefix.to_index();
  for (std::uint64_t i = 0; i < amps_.size(); ++i) {
    if ((i & bit) || !prefix_matches(i, control, pv, prefix.depth())) continue;
    const Amplitude a0 = amps_[i];
    const Amplitude a1 = amps_[i | bit];
    if (checks_ && s != 0.0 && std::abs(a1) > 1e-12) {
      throw std::logic_error("controlled_rotation: target qubit not in |0> on a controlled branch");
    }
    amps_[i] = c * a0 - s * a1;
    amps_[i | bit] = s * a0 + c * a1;
  }
  after_gate();
}

void StateVector::controlled_rotation_inverse(const Register& control, const BitPath& prefix, unsigned target,
                                              double p, double eps) {
  check_prefix(control, prefix);
  if (p < -eps || p > 1.0 + eps) throw std::domain_error("controlled_rotation_inverse: p outside [0, 1]");
  p = std::clamp(p, 0.0, 1.0);
  const double c = std::sqrt(p);
  const double s = std::sqrt(1.0 - p);
  const std::uint64_t bit = std::uint64_t{1} << target;
  const std::uint64_t pv = prefix.to_index();
  for (std::uint64_t i = 0; i < amps_.size(); ++i) {
    if ((i & bit) || !prefix_matches(i, control, pv, prefix.depth())) continue;
    const Amplitude a0 = amps_[i];
    const Amplitude a1 = amps_[i | bit];
    amps_[i] = c * a0 + s * a1;
    amps_[i | bit] = -s * a0 + c * a1;
  }
  after_gate();
}

void StateVector::register_controlled_rotation(const Register& a, const Register& b, unsigned target,
                                               const ProbabilityFn& probability) {
  const std::uint64_t bit = std::uint64_t{1} << target;
  if ((a.mask() | b.mask()) & bit) throw std::invalid_argument("register_controlled_rotation: target inside a/b");
  for (std::uint64_t i = 0; i < amps_.size(); ++i) {
    if (i & bit) continue;
    const Amplitude a0 = amps_[i];
    const Amplitude a1 = amps_[i | bit];
    if (a0 == 0.0 && a1 == 0.0) continue;
    const auto p = probability(a.value_in(i), b.value_in(i));
    if (!p) continue;
    if (checks_ && std::abs(a1) > 1e-12) {
      throw std::logic_error("register_controlled_rotation: target qubit not in |0> on a live branch");
    }
    const double c = std::sqrt(*p);
    const double s = std::sqrt(1.0 - *p);
    amps_[i] = c * a0 - s * a1;
    amps_[i | bit] = s * a0 + c * a1;
  }
  after_gate();
}

void StateVector::xor_load(const std::vector<KeySlice>& key, std::span<const Word> words, const Register& target) {
  unsigned key_bits = 0;
  for (const auto& slice : key) {
    if (slice.bits > slice.reg.width) throw std::invalid_argument("xor_load: key slice wider than its register");
    if (slice.reg.mask() & target.mask()) throw std::invalid_argument("xor_load: key overlaps target register");
    key_bits += slice.bits;
  }
  if (words.size() != (std::size_t{1} << key_bits)) {
    throw std::invalid_argument("xor_load: expected 2^" + std::to_string(key_bits) + " words");
  }
  for (Word w : words) {
    if (target.width < 64 && (w >> target.width) != 0) {
      throw std::out_of_range("xor_load: word " + std::to_string(w) + " exceeds register '" + target.name + "'");
    }
  }
  // XOR by a key-dependent word is an involution that keeps the key, so it is a set of swaps.
  for (std::uint64_t i = 0; i < amps_.size(); ++i) {
    std::uint64_t k = 0;
    for (const auto& slice : key) {
      k = (k << slice.bits) | (slice.bits == 0 ? 0 : slice.reg.value_in(i) >> (slice.reg.width - slice.bits));
    }
    const std::uint64_t j = i ^ (words[k] << target.offset);
    if (j > i) std::swap(amps_[i], amps_[j]);
  }
  after_gate();
}

std::string StateVector::dump(double eps_amp) const {
  std::ostringstream out;
  for (std::uint64_t i = 0; i < amps_.size(); ++i) {
    if (std::abs(amps_[i]) < eps_amp) continue;
    bool first = true;
    for (const auto& r : layout_.registers()) {
      if (!first) out << '|';
      first = false;
      out << BitPath::from_index(r.value_in(i), r.width).to_string();
    }
    out << ' ' << format_real(amps_[i].real()) << ' ' << format_real(amps_[i].imag()) << '\n';
  }
  return out.str();
}

double fidelity(const StateVector& s, std::span<const Amplitude> target) {
  if (target.size() != s.dimension()) throw std::invalid_argument("fidelity: dimension mismatch");
  Amplitude overlap = 0.0;
  const auto amps = s.amplitudes();
  for (std::size_t i = 0; i < target.size(); ++i) overlap += std::conj(target[i]) * amps[i];
  return std::min(1.0, std::norm(overlap));
}

bool register_is_disentangled_zero(const StateVector& s, const Register& reg, double eps_amp) {
  const auto amps = s.amplitudes();
  for (std::uint64_t i = 0; i < amps.size(); ++i) {
    if (reg.value_in(i) != 0 && std::norm(amps[i]) > eps_amp * eps_amp) return false;
  }
  return true;
}

std::vector<Amplitude> embed_register(const RegisterLayout& layout, const Register& reg,
                                      std::span<const Amplitude> values) {
  if (values.size() != (std::size_t{1} << reg.width)) throw std::invalid_argument("embed_register: size mismatch");
  std::vector<Amplitude> out(layout.dimension(), 0.0);
  for (std::uint64_t v = 0; v < values.size(); ++v) out[v << reg.offset] = values[v];
  return out;
}

std::vector<Amplitude> extract_register(const StateVector& s, const Register& reg) {
  std::vector<Amplitude> out(std::size_t{1} << reg.width);
  for (std::uint64_t v = 0; v < out.size(); ++v) out[v] = s.amplitude(v << reg.offset);
  return out;
}

}  // namespace bbqram
