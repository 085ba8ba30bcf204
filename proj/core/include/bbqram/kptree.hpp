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

#include <cstddef>
#include <cstdint>
#include <set>
#include <vector>

#include "bbqram/types.hpp"

namespace bbqram {

// Binary tree of squared-amplitude partial sums over a 2^depth vector.
//
// Level d holds 2^d nonnegative values; node (d, l) is the sum of v_j^2 over
// every leaf j whose top d bits equal l. Leaves additionally carry a sign flag
// (1 for negative, 0 otherwise, including zero entries). Storage is dense per
// level so that any level can be handed to a qRAM as its memory cells.
class KPTree {
 public:
  KPTree() : KPTree(0) {}
  /// Zero tree over 2^depth leaves.
  explicit KPTree(unsigned depth);

  unsigned depth() const { return depth_; }
  std::size_t leaf_count() const { return std::size_t{1} << depth_; }
  double root() const { return levels_[0][0]; }

  const std::vector<double>& level(unsigned d) const;
  const std::vector<std::uint8_t>& leaf_signs() const { return signs_; }
  double at(unsigned d, std::size_t l) const { return level(d).at(l); }

  /// Signed leaf value reconstructed from the stored square: sign * sqrt(leaf).
  double signed_leaf_root(std::size_t j) const;

  friend bool operator==(const KPTree&, const KPTree&) = default;

 private:
  friend KPTree build_tree(const SparseVector&, std::size_t*);
  friend KPTree build_tree_from_weights(const std::vector<double>&, std::size_t*);
  friend std::size_t update_entry(KPTree&, std::size_t, double);

  // Recomputes (d, l) from its children; returns 1 (one node written).
  std::size_t refresh(unsigned d, std::size_t l);
  // Recomputes every ancestor of the given leaves bottom-up; returns nodes written.
  std::size_t refresh_ancestors(std::set<std::size_t> leaves);

  unsigned depth_ = 0;
  std::vector<std::vector<double>> levels_;
  std::vector<std::uint8_t> signs_;
};

/// Builds the tree for a vector whose dim is a power of two. If `nodes_touched`
/// is non-null it receives the number of node writes, at most w * (depth + 1).
KPTree build_tree(const SparseVector& v, std::size_t* nodes_touched = nullptr);

/// Tree whose leaves are the given nonnegative weights with all signs positive.
/// Used for the row-norm tree, where leaves are already squared norms.
KPTree build_tree_from_weights(const std::vector<double>& weights, std::size_t* nodes_touched = nullptr);

/// Stores v[index] = value in place and restores every partial sum on the
/// root-to-leaf path. Returns the number of nodes written (always depth + 1).
/// Throws std::out_of_range when index >= 2^depth.
std::size_t update_entry(KPTree& tree, std::size_t index, double value);

/// Partial sum at the node addressed by `path`; the empty path is the root.
double node_value(const KPTree& tree, const BitPath& path);

/// The 2^d values of level d (0 < d <= depth) in index order.
std::vector<double> level_cells(const KPTree& tree, unsigned d);

std::vector<std::uint8_t> sign_cells(const KPTree& tree);

/// One tree per row plus a tree over the squared row norms.
struct KPForest {
  std::vector<KPTree> row_trees;
  KPTree norm_tree;

  std::size_t rows() const { return row_trees.size(); }
  /// Address bits of the row register.
  unsigned row_depth() const { return norm_tree.depth(); }
  /// Address bits of the column register.
  unsigned col_depth() const { return row_trees.empty() ? 0 : row_trees.front().depth(); }
  double frobenius_squared() const { return norm_tree.root(); }
};

/// Matrix rows and cols must be powers of two.
KPForest build_forest(const SparseMatrix& m, std::size_t* nodes_touched = nullptr);

}  // namespace bbqram
