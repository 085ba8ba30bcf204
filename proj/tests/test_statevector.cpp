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

#include <cmath>
#include <random>

#include "gtest/gtest.h"

using namespace bbqram;

namespace {

RegisterLayout example_layout() {
  RegisterLayout layout;
  layout.add("dir", 3);
  layout.add("a", 4);
  layout.add("b", 4);
  layout.add("c", 1);
  return layout;
}

std::uint64_t index_of(const RegisterLayout& layout, std::uint64_t dir, std::uint64_t a = 0, std::uint64_t b = 0,
                       std::uint64_t c = 0) {
  return layout.pack({{"dir", dir}, {"a", a}, {"b", b}, {"c", c}});
}

// Uniform superposition over dir with a few random signs, ancillas at 0.
StateVector random_dir_state(const RegisterLayout& layout, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<Amplitude> amps(layout.dimension(), 0.0);
  double norm = 0.0;
  for (std::uint64_t d = 0; d < 8; ++d) {
    const Amplitude a(g(rng), g(rng));
    amps[index_of(layout, d)] = a;
    norm += std::norm(a);
  }
  for (auto& a : amps) a /= std::sqrt(norm);
  return StateVector(layout, amps);
}

}  // namespace

TEST(statevector, layout_packs_registers_in_order) {
  auto layout = example_layout();
  EXPECT_EQ(layout.qubit_count(), 12u);
  EXPECT_EQ(layout["a"].offset, 3u);
  EXPECT_EQ(layout["c"].offset, 11u);
  EXPECT_EQ(index_of(layout, 6, 1, 2), 6u | (1u << 3) | (2u << 7));
  EXPECT_THROW(layout.add("a", 2), std::invalid_argument);
  EXPECT_THROW(layout.add("z", 0), std::invalid_argument);
  EXPECT_THROW(layout.add("huge", 13), std::length_error);
  EXPECT_THROW(layout.pack({{"a", 16}}), std::out_of_range);
}

TEST(statevector, basis_states) {
  auto layout = example_layout();
  auto s = StateVector::basis(layout);
  EXPECT_EQ(s.amplitude(0), Amplitude(1.0));
  EXPECT_EQ(s.norm_squared(), 1.0);
  auto t = StateVector::basis(layout, {{"dir", 6}, {"a", 1}, {"b", 2}});
  EXPECT_EQ(t.amplitude(index_of(layout, 6, 1, 2)), Amplitude(1.0));
  EXPECT_THROW(StateVector::basis(layout, {{"dir", 8}}), std::out_of_range);
}

TEST(statevector, rejects_unnormalized_amplitudes) {
  auto layout = example_layout();
  EXPECT_THROW(StateVector(layout, std::vector<Amplitude>(layout.dimension(), 0.0)), std::invalid_argument);
  EXPECT_THROW(StateVector(layout, std::vector<Amplitude>(3, 1.0)), std::invalid_argument);
}

TEST(statevector, first_rotation_of_the_worked_example) {
  auto layout = example_layout();
  auto s = StateVector::basis(layout);
  const auto& dir = layout["dir"];
  s.controlled_rotation(dir, BitPath{}, dir.qubit_from_top(0), 0.8);
  EXPECT_NEAR(s.amplitude(index_of(layout, 0b000)).real(), std::sqrt(0.8), 1e-15);
  EXPECT_NEAR(s.amplitude(index_of(layout, 0b100)).real(), std::sqrt(0.2), 1e-15);
}

TEST(statevector, rotation_with_p_one_is_identity) {
  auto layout = example_layout();
  auto s = StateVector::basis(layout, {{"dir", 2}});
  const auto before = std::vector<Amplitude>(s.amplitudes().begin(), s.amplitudes().end());
  s.controlled_rotation(layout["dir"], BitPath::parse("0"), layout["dir"].qubit_from_top(2), 1.0);
  EXPECT_TRUE(std::equal(before.begin(), before.end(), s.amplitudes().begin()));
}

TEST(statevector, rotation_on_prefix_11) {
  auto layout = example_layout();
  auto s = StateVector::basis(layout, {{"dir", 0b110}});
  const auto& dir = layout["dir"];
  s.controlled_rotation(dir, BitPath::parse("11"), dir.qubit_from_top(2), 0.5);
  EXPECT_NEAR(s.amplitude(index_of(layout, 0b110)).real(), std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(s.amplitude(index_of(layout, 0b111)).real(), std::sqrt(0.5), 1e-15);
  // A non-matching branch is untouched.
  auto t = StateVector::basis(layout, {{"dir", 0b010}});
  t.controlled_rotation(dir, BitPath::parse("11"), dir.qubit_from_top(2), 0.5);
  EXPECT_EQ(t.amplitude(index_of(layout, 0b010)), Amplitude(1.0));
}

TEST(statevector, rotation_rejects_bad_probability_and_dirty_target) {
  auto layout = example_layout();
  auto s = StateVector::basis(layout, {{"dir", 1}});
  const auto& dir = layout["dir"];
  EXPECT_THROW(s.controlled_rotation(dir, BitPath{}, 0, 1.5), std::domain_error);
  EXPECT_THROW(s.controlled_rotation(dir, BitPath{}, 0, -0.1), std::domain_error);
  s.set_checks(true);
  EXPECT_THROW(s.controlled_rotation(dir, BitPath{}, dir.qubit(0), 0.5), std::logic_error);
}

TEST(statevector, rotation_round_trip) {
  auto layout = example_layout();
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> p(0.0, 1.0);
  const auto& dir = layout["dir"];
  for (int trial = 0; trial < 20; ++trial) {
    auto s = random_dir_state(layout, rng);
    const std::vector<Amplitude> before(s.amplitudes().begin(), s.amplitudes().end());
    const double prob = p(rng);
    // Rotate an ancilla qubit so the |0> precondition holds everywhere.
    s.controlled_rotation(dir, BitPath::parse("1"), layout["c"].qubit(0), prob);
    s.controlled_rotation_inverse(dir, BitPath::parse("1"), layout["c"].qubit(0), prob);
    for (std::size_t i = 0; i < before.size(); ++i) EXPECT_NEAR(std::abs(s.amplitudes()[i] - before[i]), 0.0, 1e-10);
  }
}

TEST(statevector, xor_load_reproduces_the_pre_rotation_block) {
  auto layout = example_layout();
  std::vector<Amplitude> amps(layout.dimension(), 0.0);
  amps[index_of(layout, 0b000)] = std::sqrt(0.4);
  amps[index_of(layout, 0b010)] = std::sqrt(0.4);
  amps[index_of(layout, 0b110)] = std::sqrt(0.2);
  StateVector s(layout, amps);
  const auto& dir = layout["dir"];
  const std::vector<Word> a_words{4, 4, 0, 1};  // keyed on the top two dir bits
  const std::vector<Word> b_words{4, 4, 0, 2};
  s.xor_load({{dir, 2}}, a_words, layout["a"]);
  s.xor_load({{dir, 2}}, b_words, layout["b"]);
  EXPECT_NEAR(s.amplitude(index_of(layout, 0b000, 4, 4)).real(), std::sqrt(0.4), 1e-15);
  EXPECT_NEAR(s.amplitude(index_of(layout, 0b010, 4, 4)).real(), std::sqrt(0.4), 1e-15);
  EXPECT_NEAR(s.amplitude(index_of(layout, 0b110, 1, 2)).real(), std::sqrt(0.2), 1e-15);
  EXPECT_NEAR(s.norm_squared(), 1.0, 1e-15);

  s.xor_load({{dir, 2}}, a_words, layout["a"]);
  s.xor_load({{dir, 2}}, b_words, layout["b"]);
  for (std::size_t i = 0; i < amps.size(); ++i) EXPECT_EQ(s.amplitudes()[i], amps[i]);
}

TEST(statevector, xor_load_validates_inputs) {
  auto layout = example_layout();
  auto s = StateVector::basis(layout);
  const auto& dir = layout["dir"];
  EXPECT_THROW(s.xor_load({{dir, 1}}, std::vector<Word>{1, 2, 3}, layout["a"]), std::invalid_argument);
  EXPECT_THROW(s.xor_load({{dir, 1}}, std::vector<Word>{16, 0}, layout["a"]), std::out_of_range);
  EXPECT_THROW(s.xor_load({{layout["a"], 1}}, std::vector<Word>{1, 0}, layout["a"]), std::invalid_argument);
}

TEST(statevector, xor_load_commutes_with_disjoint_amplitude_gates) {
  auto layout = example_layout();
  std::mt19937_64 rng(8);
  const auto& dir = layout["dir"];
  const std::vector<Word> words{3, 0, 7, 1};
  for (int trial = 0; trial < 10; ++trial) {
    auto s1 = random_dir_state(layout, rng);
    auto s2 = s1;
    s1.xor_load({{dir, 2}}, words, layout["a"]);
    s1.z(dir.qubit(0));
    s1.phase(dir.qubit(1), 0.3);
    s2.z(dir.qubit(0));
    s2.phase(dir.qubit(1), 0.3);
    s2.xor_load({{dir, 2}}, words, layout["a"]);
    for (std::size_t i = 0; i < s1.dimension(); ++i) EXPECT_EQ(s1.amplitudes()[i], s2.amplitudes()[i]);
  }
}

TEST(statevector, z_x_cx) {
  auto layout = example_layout();
  std::vector<Amplitude> amps(layout.dimension(), 0.0);
  amps[index_of(layout, 0b000, 0, 0, 1)] = 2.0 / std::sqrt(10.0);
  amps[index_of(layout, 0b010, 0, 0, 0)] = 2.0 / std::sqrt(10.0);
  amps[index_of(layout, 0b110, 0, 0, 0)] = 1.0 / std::sqrt(10.0);
  amps[index_of(layout, 0b111, 0, 0, 1)] = 1.0 / std::sqrt(10.0);
  StateVector s(layout, amps);
  s.z(layout["c"].qubit(0));
  EXPECT_EQ(s.amplitude(index_of(layout, 0b000, 0, 0, 1)), -amps[index_of(layout, 0b000, 0, 0, 1)]);
  EXPECT_EQ(s.amplitude(index_of(layout, 0b111, 0, 0, 1)), -amps[index_of(layout, 0b111, 0, 0, 1)]);
  EXPECT_EQ(s.amplitude(index_of(layout, 0b010)), amps[index_of(layout, 0b010)]);
  s.z(layout["c"].qubit(0));
  for (std::size_t i = 0; i < amps.size(); ++i) EXPECT_EQ(s.amplitudes()[i], amps[i]);

  auto b = StateVector::basis(layout);
  b.x(0);
  EXPECT_EQ(b.amplitude(1), Amplitude(1.0));
  b.cx(0, 5);
  EXPECT_EQ(b.amplitude(1 | (1 << 5)), Amplitude(1.0));
  EXPECT_THROW(b.cx(2, 2), std::invalid_argument);
}

TEST(statevector, register_controlled_rotation_reads_words) {
  auto layout = example_layout();
  auto s = StateVector::basis(layout, {{"dir", 0b110}, {"a", 1}, {"b", 2}});
  s.register_controlled_rotation(layout["a"], layout["b"], layout["dir"].qubit_from_top(2),
                                 [](Word a, Word b) -> std::optional<double> {
                                   return static_cast<double>(a) / static_cast<double>(b);
                                 });
  EXPECT_NEAR(s.amplitude(index_of(layout, 0b110, 1, 2)).real(), std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(s.amplitude(index_of(layout, 0b111, 1, 2)).real(), std::sqrt(0.5), 1e-15);
}

TEST(statevector, fidelity) {
  auto layout = example_layout();
  auto s = StateVector::basis(layout, {{"dir", 3}});
  std::vector<Amplitude> self(s.amplitudes().begin(), s.amplitudes().end());
  EXPECT_EQ(fidelity(s, self), 1.0);
  auto other = StateVector::basis(layout, {{"dir", 4}});
  std::vector<Amplitude> orth(other.amplitudes().begin(), other.amplitudes().end());
  EXPECT_EQ(fidelity(s, orth), 0.0);
  EXPECT_THROW(fidelity(s, std::vector<Amplitude>(4, 0.5)), std::invalid_argument);
}

TEST(statevector, disentangled_zero_check) {
  auto layout = example_layout();
  auto s = StateVector::basis(layout, {{"dir", 5}});
  EXPECT_TRUE(register_is_disentangled_zero(s, layout["a"], 1e-10));
  auto t = StateVector::basis(layout, {{"a", 1}});
  EXPECT_FALSE(register_is_disentangled_zero(t, layout["a"], 1e-10));

  std::vector<Amplitude> amps(layout.dimension(), 0.0);
  amps[0] = std::sqrt(1.0 - 1e-16);
  amps[index_of(layout, 0, 3)] = 1e-8;
  StateVector residual(layout, amps);
  EXPECT_FALSE(register_is_disentangled_zero(residual, layout["a"], 1e-10));
  EXPECT_TRUE(register_is_disentangled_zero(residual, layout["a"], 1e-7));
}

TEST(statevector, gates_preserve_norm) {
  auto layout = example_layout();
  std::mt19937_64 rng(4);
  auto s = random_dir_state(layout, rng);
  s.set_checks(true);
  const auto& dir = layout["dir"];
  s.xor_load({{dir, 3}}, std::vector<Word>{1, 2, 3, 4, 5, 6, 7, 8}, layout["b"]);
  s.z(dir.qubit(1));
  s.x(layout["c"].qubit(0));
  s.cx(layout["c"].qubit(0), layout["a"].qubit(2));
  s.phase(dir.qubit(2), 1.1);
  EXPECT_NEAR(s.norm_squared(), 1.0, 1e-12);
}

TEST(statevector, dump_groups_bits_by_register) {
  RegisterLayout layout;
  layout.add("dir", 2);
  layout.add("c", 1);
  std::vector<Amplitude> amps(8, 0.0);
  amps[0b001] = -std::sqrt(0.5);
  amps[0b110] = std::sqrt(0.5);
  amps[0b010] = 1e-12;
  StateVector s(layout, amps);
  EXPECT_EQ(s.dump(1e-10), "01|0 -0.7071067811865476 0\n10|1 0.7071067811865476 0\n");
}

TEST(statevector, embed_and_extract) {
  auto layout = example_layout();
  const std::vector<Amplitude> v{0.6, 0, 0, 0, 0, 0, 0, -0.8};
  auto full = embed_register(layout, layout["dir"], v);
  StateVector s(layout, full);
  EXPECT_EQ(extract_register(s, layout["dir"]), v);
}
