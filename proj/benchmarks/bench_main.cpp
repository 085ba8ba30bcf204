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


#include <benchmark/benchmark.h>

#include <random>

#include "bbqram/kptree.hpp"
#include "bbqram/qram.hpp"
#include "bbqram/stateprep.hpp"

namespace {

std::vector<double> random_vector(std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  std::vector<double> v(dim);
  for (auto& x : v) x = value(rng);
  return v;
}

void BM_BuildTree(benchmark::State& state) {
  const auto v = bbqram::SparseVector::from_dense(random_vector(state.range(0), 1));
  for (auto _ : state) benchmark::DoNotOptimize(bbqram::build_tree(v));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BuildTree)->RangeMultiplier(4)->Range(16, 1 << 14)->Complexity();

void BM_UpdateEntry(benchmark::State& state) {
  auto tree = bbqram::build_tree(bbqram::SparseVector::from_dense(random_vector(state.range(0), 2)));
  std::size_t j = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bbqram::update_entry(tree, j, 0.5));
    j = (j + 7) % tree.leaf_count();
  }
}
BENCHMARK(BM_UpdateEntry)->RangeMultiplier(4)->Range(16, 1 << 14);

void BM_RouteAndUnroute(benchmark::State& state) {
  const unsigned n = static_cast<unsigned>(state.range(0));
  bbqram::QramInstance q(n, std::vector<double>(std::size_t{1} << n, 1.0));
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::uint64_t> pick(0, (std::uint64_t{1} << n) - 1);
  for (auto _ : state) {
    bbqram::RoutingLog log;
    q.route_address(bbqram::BitPath::from_index(pick(rng), n), log);
    benchmark::DoNotOptimize(q.retrieve(0, log));
    q.unroute(log);
  }
}
BENCHMARK(BM_RouteAndUnroute)->DenseRange(2, 14, 4);

void BM_PrepareVector(benchmark::State& state) {
  const auto tree = bbqram::build_tree(bbqram::SparseVector::from_dense(random_vector(state.range(0), 4)));
  for (auto _ : state) benchmark::DoNotOptimize(bbqram::prepare_vector(tree).fidelity);
}
BENCHMARK(BM_PrepareVector)->RangeMultiplier(2)->Range(2, 32)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
