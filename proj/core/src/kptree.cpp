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


#include "bbqram/kptree.hpp"

#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace bbqram {

KPTree::KPTree(unsigned depth) : depth_(depth), signs_(std::size_t{1} << depth, 0) {
  if (depth >= 40) throw std::invalid_argument("KPTree: depth too large for dense storage");
  levels_.reserve(depth + 1);
  for (unsigned d = 0; d <= depth; ++d) levels_.emplace_back(std::size_t{1} << d, 0.0);
}

const std::vector<double>& KPTree::level(unsigned d) const {
  if (d > depth_) throw std::out_of_range("KPTree::level: level " + std::to_string(d) + " beyond depth");
  return levels_[d];
}

double KPTree::signed_leaf_root(std::size_t j) const {
  const double magnitude = std::sqrt(levels_[depth_].at(j));
  return signs_[j] ? -magnitude : magnitude;
}

std::size_t KPTree::refresh(unsigned d, std::size_t l) {
  levels_[d][l] = levels_[d + 1][2 * l] + levels_[d + 1][2 * l + 1];
  return 1;
}

std::size_t KPTree::refresh_ancestors(std::set<std::size_t> frontier) {
  std::size_t touched = 0;
  for (unsigned d = depth_; d-- > 0;) {
    std::set<std::size_t> parents;
    for (auto l : frontier) parents.insert(l / 2);
    for (auto p : parents) touched += refresh(d, p);
    frontier = std::move(parents);
  }
  return touched;
}

KPTree build_tree(const SparseVector& v, std::size_t* nodes_touched) {
  KPTree tree(exact_log2(v.dim()));
  std::set<std::size_t> leaves;
  std::vector<double> values(v.dim(), 0.0);
  for (const auto& e : v.entries()) {
    if (e.value == 0.0) continue;
    leaves.insert(e.index);
    values[e.index] = e.value;
  }
  auto& leaf_level = tree.levels_[tree.depth_];
  for (auto j : leaves) {
    leaf_level[j] = values[j] * values[j];
    tree.signs_[j] = values[j] < 0.0 ? 1 : 0;
  }
  const std::size_t touched = leaves.size() + tree.refresh_ancestors(leaves);
  if (nodes_touched) *nodes_touched = touched;
  return tree;
}

KPTree build_tree_from_weights(const std::vector<double>& weights, std::size_t* nodes_touched) {
  KPTree tree(exact_log2(weights.size()));
  std::set<std::size_t> leaves;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (!(weights[j] >= 0.0)) throw std::invalid_argument("build_tree_from_weights: weights must be nonnegative");
    if (weights[j] != 0.0) leaves.insert(j);
  }
  auto& leaf_level = tree.levels_[tree.depth_];
  for (auto j : leaves) leaf_level[j] = weights[j];
  const std::size_t touched = leaves.size() + tree.refresh_ancestors(leaves);
  if (nodes_touched) *nodes_touched = touched;
  return tree;
}

std::size_t update_entry(KPTree& tree, std::size_t index, double value) {
  if (index >= tree.leaf_count()) {
    throw std::out_of_range("update_entry: index " + std::to_string(index) + " out of range");
  }
  tree.levels_[tree.depth_][index] = value * value;
  tree.signs_[index] = value < 0.0 ? 1 : 0;
  std::size_t touched = 1;
  std::size_t l = index;
  for (unsigned d = tree.depth_; d-- > 0;) {
    l /= 2;
    touched += tree.refresh(d, l);
  }
  return touched;
}

double node_value(const KPTree& tree, const BitPath& path) {
  return tree.at(path.depth(), static_cast<std::size_t>(path.to_index()));
}

std::vector<double> level_cells(const KPTree& tree, unsigned d) {
  if (d == 0) throw std::out_of_range("level_cells: level 0 is the root, not a qRAM level");
  return tree.level(d);
}

std::vector<std::uint8_t> sign_cells(const KPTree& tree) { return tree.leaf_signs(); }

KPForest build_forest(const SparseMatrix& m, std::size_t* nodes_touched) {
  if (!is_power_of_two(m.rows()) || !is_power_of_two(m.cols())) {
    throw std::invalid_argument("build_forest: matrix must be padded to powers of two");
  }
  KPForest forest;
  forest.row_trees.reserve(m.rows());
  std::vector<double> row_weights(m.rows(), 0.0);
  std::size_t total = 0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::size_t touched = 0;
    forest.row_trees.push_back(build_tree(m.row(i), &touched));
    row_weights[i] = forest.row_trees.back().root();
    total += touched;
  }
  std::size_t touched = 0;
  forest.norm_tree = build_tree_from_weights(row_weights, &touched);
  total += touched;
  if (nodes_touched) *nodes_touched = total;
  return forest;
}

}  // namespace bbqram
