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


#include "bbqram/qram.hpp"

#include <random>

#include "gtest/gtest.h"
#include "oracles.hpp"

using namespace bbqram;

namespace {

std::vector<double> zero_cells(unsigned n) { return std::vector<double>(std::size_t{1} << n, 0.0); }

const std::vector<double> kLevel3Cells{4, 0, 4, 0, 0, 0, 1, 1};

}  // namespace

TEST(qram, fresh_instance_is_empty) {
  QramInstance q(3, zero_cells(3));
  EXPECT_EQ(q.switch_count(), 7u);
  EXPECT_TRUE(q.all_empty());
  EXPECT_EQ(q.stored_bits(), 0u);
}

TEST(qram, first_bit_is_stored_at_the_root) {
  QramInstance q(3, zero_cells(3));
  RoutingLog log;
  q.route_bit(1, log);
  EXPECT_EQ(q.switches()[0], SwitchState::One);
  EXPECT_EQ(log.counters().routing_ops, 0u);
  EXPECT_EQ(log.counters().stores, 1u);
}

TEST(qram, second_bit_is_forwarded_by_the_root) {
  QramInstance q(3, zero_cells(3));
  RoutingLog log;
  q.route_bit(1, log);
  q.route_bit(0, log);
  // Root holds One, so the bit goes to child 1 (node 2) and is stored there.
  EXPECT_EQ(q.switches()[2], SwitchState::Zero);
  EXPECT_EQ(q.switches()[1], SwitchState::Empty);
  EXPECT_EQ(log.counters().routing_ops, 1u);
}

TEST(qram, full_route_of_110) {
  QramInstance q(3, zero_cells(3));
  RoutingLog log;
  q.route_address(BitPath::parse("110"), log);
  // Hand trace over the 7-switch tree: root(0)=1 -> node 2 = 1 -> node 6 = 0.
  const std::vector<SwitchState> expected{SwitchState::One,   SwitchState::Empty, SwitchState::One,
                                          SwitchState::Empty, SwitchState::Empty, SwitchState::Empty,
                                          SwitchState::Zero};
  EXPECT_EQ(q.switches(), expected);
  EXPECT_EQ(log.counters().routing_ops, 3u);
  EXPECT_EQ(log.counters().stores, 3u);
  EXPECT_EQ(log.counters().entangled_switches, 3u);
  EXPECT_EQ(q.routed_address(), BitPath::parse("110"));
  EXPECT_THROW(q.route_bit(0, log), std::logic_error);
}

TEST(qram, route_000_takes_the_leftmost_path) {
  QramInstance q(3, zero_cells(3));
  RoutingLog log;
  q.route_address(BitPath::parse("000"), log);
  EXPECT_EQ(q.switches()[0], SwitchState::Zero);
  EXPECT_EQ(q.switches()[1], SwitchState::Zero);
  EXPECT_EQ(q.switches()[3], SwitchState::Zero);
  EXPECT_EQ(q.active_switches(), 3u);
}

TEST(qram, route_address_rejects_wrong_width_and_dirty_tree) {
  QramInstance q(3, zero_cells(3));
  RoutingLog log;
  EXPECT_THROW(q.route_address(BitPath::parse("11"), log), std::invalid_argument);
  q.route_bit(1, log);
  EXPECT_THROW(q.route_address(BitPath::parse("110"), log), std::invalid_argument);
}

TEST(qram, routing_matches_closed_forms_for_all_addresses) {
  for (unsigned n = 1; n <= 8; ++n) {
    for (std::uint64_t addr = 0; addr < (1u << n); ++addr) {
      QramInstance q(n, zero_cells(n));
      RoutingLog log;
      q.route_address(BitPath::from_index(addr, n), log);
      ASSERT_EQ(log.counters().routing_ops, n * (n - 1) / 2);
      ASSERT_EQ(q.active_switches(), n);
      ASSERT_EQ(q.routed_address().to_index(), addr);
      for (unsigned k = 0; k < n; ++k) {
        const auto bit = (addr >> (n - 1 - k)) & 1u;
        ASSERT_EQ(q.switches()[oracle::path_switch(n, addr, k)], bit ? SwitchState::One : SwitchState::Zero);
      }
    }
  }
}

TEST(qram, retrieve_xors_the_cell_word) {
  QramInstance q(3, kLevel3Cells);
  RoutingLog log;
  q.route_address(BitPath::parse("110"), log);
  Word reg = q.retrieve(0, log);
  EXPECT_EQ(reg, 1u);
  reg = q.retrieve(reg, log);
  EXPECT_EQ(reg, 0u);
  EXPECT_EQ(log.counters().extractions, 2u);

  QramInstance top(1, {8, 2});
  RoutingLog top_log;
  top.route_address(BitPath::parse("1"), top_log);
  EXPECT_EQ(top.retrieve(0, top_log), 2u);
  EXPECT_EQ(top.routed_value(), 2.0);
}

TEST(qram, retrieve_requires_complete_route) {
  QramInstance q(2, {1, 2, 3, 0});
  RoutingLog log;
  q.route_bit(0, log);
  EXPECT_THROW(q.retrieve(0, log), std::logic_error);
}

TEST(qram, unroute_restores_a_fresh_instance_at_equal_cost) {
  std::mt19937_64 rng(41);
  for (unsigned n = 0; n <= 7; ++n) {
    for (int trial = 0; trial < 10; ++trial) {
      const std::uint64_t addr = n == 0 ? 0 : std::uniform_int_distribution<std::uint64_t>(0, (1u << n) - 1)(rng);
      const QramInstance fresh(n, zero_cells(n));
      QramInstance q = fresh;
      RoutingLog log;
      q.route_address(BitPath::from_index(addr, n), log);
      Word reg = q.retrieve(0, log);
      reg = q.retrieve(reg, log);
      q.unroute(log);
      EXPECT_EQ(reg, 0u);
      EXPECT_EQ(q, fresh);
      EXPECT_TRUE(q.all_empty());
      const auto& c = log.counters();
      EXPECT_EQ(c.unroute_ops, c.routing_ops);
      EXPECT_EQ(c.clears, c.stores);
      EXPECT_EQ(c.bus_unloads, c.bus_loads);
      EXPECT_EQ(unroute_time_steps(log), time_steps(log));
    }
  }
}

TEST(qram, unroute_is_the_exact_reverse_of_the_route) {
  QramInstance q(3, zero_cells(3));
  RoutingLog log;
  q.route_address(BitPath::parse("110"), log);
  const auto forward = log.events();
  q.unroute(log);
  std::vector<RoutingEvent> backward(log.events().begin() + static_cast<long>(forward.size()), log.events().end());
  ASSERT_EQ(backward.size(), forward.size());
  for (std::size_t i = 0; i < forward.size(); ++i) {
    const auto& f = forward[forward.size() - 1 - i];
    const auto& b = backward[i];
    EXPECT_EQ(b.node, f.node);
    EXPECT_EQ(b.dir, f.dir);
    EXPECT_TRUE(b.reverse);
  }
}

TEST(qram, time_steps) {
  auto route = [](unsigned n, std::uint64_t addr) {
    QramInstance q(n, zero_cells(n));
    RoutingLog log;
    q.route_address(BitPath::from_index(addr, n), log);
    return time_steps(log);
  };
  EXPECT_EQ(route(1, 0), 1u);
  // Three panels of the 3-bit load: 1 (store) + 2+1 (one level, store) + 4+1.
  EXPECT_EQ(route(3, 6), 9u);
  for (unsigned n = 1; n <= 8; ++n) EXPECT_EQ(route(n, (1u << n) - 1), std::size_t{n} * n);
}

TEST(qram, fanout_comparison) {
  EXPECT_EQ(fanout_switch_activations(1), 1u);
  EXPECT_EQ(fanout_switch_activations(10), 1023u);
}

TEST(qram, trace_text_is_stable) {
  QramInstance q(2, {0, 1, 2, 3});
  RoutingLog log;
  q.route_address(BitPath::parse("10"), log);
  q.retrieve(0, log);
  q.unroute(log);
  EXPECT_EQ(log.to_text(),
            "STEP 1 BUS_LOAD node=0\n"
            "STEP 2 STORE node=0\n"
            "STEP 3 BUS_LOAD node=0\n"
            "STEP 4 PASS node=0 dir=1\n"
            "STEP 5 STORE node=2\n"
            "STEP 6 BUS_EXTRACT node=2\n"
            "STEP 7 CLEAR node=2\n"
            "STEP 8 PASS node=0 dir=1\n"
            "STEP 9 BUS_UNLOAD node=0\n"
            "STEP 10 CLEAR node=0\n"
            "STEP 11 BUS_UNLOAD node=0\n");
}

TEST(qram, superposed_query_on_level_three_cells) {
  QramInstance q(3, kLevel3Cells);
  const std::vector<std::pair<BitPath, std::complex<double>>> branches{
      {BitPath::parse("000"), std::sqrt(0.4)}, {BitPath::parse("010"), std::sqrt(0.4)},
      {BitPath::parse("110"), std::sqrt(0.2)}};
  auto result = query_superposed(q, branches);
  ASSERT_EQ(result.branches.size(), 3u);
  EXPECT_EQ(result.branches[0].word, 4u);
  EXPECT_EQ(result.branches[1].word, 4u);
  EXPECT_EQ(result.branches[2].word, 1u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(result.branches[i].amplitude, branches[i].second);
  EXPECT_EQ(result.routing_ops_per_branch, 3u);
  EXPECT_EQ(result.entangled_switches_per_branch, 3u);
  EXPECT_TRUE(q.all_empty());
}

TEST(qram, single_branch_query_equals_route_and_retrieve) {
  QramInstance q(2, {3, 1, 0, 2});
  auto result = query_superposed(q, {{BitPath::parse("11"), 1.0}});
  QramInstance manual = q;
  RoutingLog log;
  manual.route_address(BitPath::parse("11"), log);
  EXPECT_EQ(result.branches[0].word, manual.retrieve(0, log));
}

TEST(qram, exhaustive_query_returns_every_cell) {
  for (unsigned n = 0; n <= 5; ++n) {
    std::vector<double> cells;
    for (std::size_t i = 0; i < (std::size_t{1} << n); ++i) cells.push_back(static_cast<double>(i));
    QramInstance q(n, cells);
    std::vector<std::pair<BitPath, std::complex<double>>> branches;
    const double amp = 1.0 / std::sqrt(static_cast<double>(cells.size()));
    for (std::uint64_t i = 0; i < cells.size(); ++i) branches.emplace_back(BitPath::from_index(i, n), amp);
    auto result = query_superposed(q, branches);
    for (std::uint64_t i = 0; i < cells.size(); ++i) {
      EXPECT_EQ(result.branches[i].word, i);
      EXPECT_EQ(result.branches[i].amplitude, branches[i].second);
    }
  }
}

TEST(qram, superposed_query_rejects_duplicates) {
  QramInstance q(2, {0, 1, 2, 3});
  EXPECT_THROW(query_superposed(q, {{BitPath::parse("01"), 0.5}, {BitPath::parse("01"), 0.5}}),
               std::invalid_argument);
  EXPECT_THROW(query_superposed(q, {{BitPath::parse("1"), 1.0}}), std::invalid_argument);
}

TEST(qram, cells_must_match_width_and_codec) {
  EXPECT_THROW(QramInstance(2, {1, 2, 3}), std::invalid_argument);
  auto codec = std::make_shared<const WordCodec>(std::vector<double>{0.0, 1.0});
  EXPECT_THROW(QramInstance(1, {0.0, 2.0}, codec), std::out_of_range);
}
