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


#include "bbqram/qutrit_qram.hpp"

#include <stdexcept>

namespace bbqram {

namespace {

constexpr std::uint8_t kEmpty = 0;

std::size_t pow3(std::size_t k) {
  std::size_t r = 1;
  while (k-- > 0) r *= 3;
  return r;
}

}  // namespace

QutritQram::QutritQram(unsigned n, std::vector<double> cells, const WordCodec& codec)
    : n_(n), cells_(std::move(cells)), data_width_(codec.width()), switches_((std::size_t{1} << n) - 1) {
  if (n_ > kMaxAddressBits) throw std::invalid_argument("QutritQram: at most 2 address bits");
  if (cells_.size() != (std::size_t{1} << n_)) throw std::invalid_argument("QutritQram: expected 2^n cells");
  for (double c : cells_) words_.push_back(codec.encode(c));
  state_.assign((std::size_t{1} << n_) * pow3(switches_) * 2 * (std::size_t{1} << data_width_), 0.0);
}

std::size_t QutritQram::index_of(const Basis& b) const {
  std::size_t sw = 0;
  for (std::size_t k = switches_; k-- > 0;) sw = sw * 3 + b.sw[k];
  std::size_t index = b.data;
  index = index * 2 + b.bus;
  index = index * pow3(switches_) + sw;
  index = index * (std::size_t{1} << n_) + b.dir;
  return index;
}

QutritQram::Basis QutritQram::decode(std::size_t index) const {
  Basis b;
  b.dir = index % (std::size_t{1} << n_);
  index /= (std::size_t{1} << n_);
  std::size_t sw = index % pow3(switches_);
  index /= pow3(switches_);
  b.bus = static_cast<std::uint8_t>(index % 2);
  b.data = index / 2;
  b.sw.resize(switches_);
  for (std::size_t k = 0; k < switches_; ++k) {
    b.sw[k] = static_cast<std::uint8_t>(sw % 3);
    sw /= 3;
  }
  return b;
}

template <typename F>
void QutritQram::apply_permutation(F&& f) {
  std::vector<std::complex<double>> next(state_.size(), 0.0);
  std::vector<bool> hit(state_.size(), false);
  for (std::size_t i = 0; i < state_.size(); ++i) {
    Basis b = decode(i);
    f(b);
    const std::size_t j = index_of(b);
    if (hit[j]) throw std::logic_error("QutritQram: routing step is not a permutation");
    hit[j] = true;
    next[j] = state_[i];
  }
  state_ = std::move(next);
  ++steps_;
}

void QutritQram::prepare(const std::vector<std::complex<double>>& amplitudes) {
  if (amplitudes.size() != (std::size_t{1} << n_)) throw std::invalid_argument("QutritQram::prepare: size mismatch");
  std::fill(state_.begin(), state_.end(), 0.0);
  for (std::uint64_t a = 0; a < amplitudes.size(); ++a) {
    Basis b{a, std::vector<std::uint8_t>(switches_, kEmpty), 0, 0};
    state_[index_of(b)] = amplitudes[a];
  }
  steps_ = 0;
}

void QutritQram::bus_copy(unsigned address_bit) {
  const unsigned shift = n_ - 1 - address_bit;
  apply_permutation([shift](Basis& b) { b.bus ^= static_cast<std::uint8_t>((b.dir >> shift) & 1u); });
}

void QutritQram::store_at_level(unsigned level) {
  apply_permutation([level](Basis& b) {
    std::size_t node = 0;
    for (unsigned d = 0; d < level; ++d) {
      if (b.sw[node] == kEmpty) return;  // no active path reaches this level
      node = 2 * node + b.sw[node];      // Zero (1) -> child 1, One (2) -> child 2
    }
    auto& s = b.sw[node];
    if (s == kEmpty) {
      s = static_cast<std::uint8_t>(1 + b.bus);
      b.bus = 0;
    } else if (b.bus == 0) {
      b.bus = static_cast<std::uint8_t>(s - 1);
      s = kEmpty;
    }
  });
}

void QutritQram::extract() {
  apply_permutation([this](Basis& b) {
    std::size_t node = 0;
    std::uint64_t addr = 0;
    for (unsigned d = 0; d < n_; ++d) {
      if (b.sw[node] == kEmpty) return;
      const unsigned bit = b.sw[node] - 1u;
      addr = (addr << 1) | bit;
      node = 2 * node + 1 + bit;
    }
    b.data ^= words_[addr];
  });
}

void QutritQram::query() {
  steps_ = 0;
  for (unsigned k = 0; k < n_; ++k) {
    bus_copy(k);
    store_at_level(k);
  }
  extract();
  for (unsigned k = n_; k-- > 0;) {
    store_at_level(k);
    bus_copy(k);
  }
}

std::complex<double> QutritQram::amplitude(std::uint64_t addr, Word word) const {
  Basis b{addr, std::vector<std::uint8_t>(switches_, kEmpty), 0, word};
  return state_.at(index_of(b));
}

double QutritQram::residual_outside_ground() const {
  double total = 0.0;
  for (std::size_t i = 0; i < state_.size(); ++i) {
    const Basis b = decode(i);
    bool ground = b.bus == 0;
    for (auto s : b.sw) ground = ground && s == kEmpty;
    if (!ground) total += std::norm(state_[i]);
  }
  return total;
}

}  // namespace bbqram
