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


#include "bbqram/word_codec.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace bbqram {

namespace {

constexpr double kMaxIntegerWord = 1 << 20;

unsigned bits_for(Word max_word) { return std::max(1u, static_cast<unsigned>(std::bit_width(max_word))); }

}  // namespace

WordCodec::WordCodec() : book_{0.0} {}

WordCodec::WordCodec(std::span<const double> values) : book_{0.0} {
  bool integral = true;
  double max_value = 0.0;
  for (double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument("WordCodec: non-finite cell value");
    if (v < 0.0 || v != std::floor(v) || v > kMaxIntegerWord) integral = false;
    max_value = std::max(max_value, v);
  }
  if (integral) {
    mode_ = Mode::Integer;
    width_ = bits_for(static_cast<Word>(max_value));
    return;
  }
  mode_ = Mode::Codebook;
  for (double v : values) {
    if (v != 0.0) book_.push_back(v);
  }
  std::sort(book_.begin() + 1, book_.end());
  book_.erase(std::unique(book_.begin() + 1, book_.end()), book_.end());
  width_ = bits_for(book_.size() - 1);
}

Word WordCodec::encode(double value) const {
  if (mode_ == Mode::Integer) {
    if (value < 0.0 || value != std::floor(value) || value >= std::ldexp(1.0, static_cast<int>(width_))) {
      throw std::out_of_range("WordCodec::encode: value not representable as an integer word");
    }
    return static_cast<Word>(value);
  }
  if (value == 0.0) return 0;
  auto it = std::lower_bound(book_.begin() + 1, book_.end(), value);
  if (it == book_.end() || *it != value) throw std::out_of_range("WordCodec::encode: value not in codebook");
  return static_cast<Word>(it - book_.begin());
}

double WordCodec::decode(Word word) const {
  if (mode_ == Mode::Integer) {
    if (width_ < 64 && (word >> width_) != 0) throw std::out_of_range("WordCodec::decode: word exceeds width");
    return static_cast<double>(word);
  }
  if (word >= book_.size()) throw std::out_of_range("WordCodec::decode: word not in codebook");
  return book_[word];
}

}  // namespace bbqram
