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
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "bbqram/kptree.hpp"
#include "bbqram/qram.hpp"
#include "bbqram/statevector.hpp"
#include "bbqram/types.hpp"
#include "bbqram/word_codec.hpp"

namespace bbqram {

/// The input cannot be prepared (zero vector, zero row, zero matrix).
class DegenerateInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An ancilla register failed to return to |0> (a keying or sign-cell bug).
class AncillaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SignMethod {
  PhaseKickback,  // load sign into c, Z on c, unload
  FlipUncompute,  // load sign into c, controlled pi-phase on c, unload
};

/// Probability that the rotated qubit lands in |0>: a / b clamped to [0, 1].
/// Throws std::domain_error when b <= 0 (a dead branch, which must be skipped)
/// or a exceeds b by more than a relative `eps`.
double rotation_probability(double a, double b, double eps = 1e-12);

// Everything one amplitude-encoding cascade needs: the qRAM for every tree
// level, the sign qRAM, and the register layout.
//
// The cascade prepares the `target` register. An optional `key` register
// (the row index for matrix rows) is prepended to every qRAM address, so a
// single qRAM per level serves all rows at once.
struct PrepPlan {
  unsigned n = 0;         // target register width
  unsigned key_bits = 0;  // 0 when there is no key register
  std::string target_register = "dir";
  std::string key_register;
  RegisterLayout layout;
  std::shared_ptr<const WordCodec> codec;          // words for a / b
  std::vector<QramInstance> level_qrams;           // [0, n]; level l has 2^(key_bits + l) cells
  QramInstance sign_qram{0, {0.0}};               // 2^(key_bits + n) cells of 0/1

  const Register& target() const { return layout[target_register]; }
  const Register& a() const { return layout["a"]; }
  const Register& b() const { return layout["b"]; }
  const Register& c() const { return layout["c"]; }
};

/// Plan for a single vector tree: layout dir | a | b | c.
PrepPlan make_plan(const KPTree& tree, unsigned qubit_cap = RegisterLayout::kDefaultQubitCap);

/// Plans for a forest over the shared layout i | dir | a | b | c: the norm
/// plan prepares `i` from the norm tree, the row plan prepares `dir` keyed on `i`.
struct MatrixPlans {
  PrepPlan norms;
  PrepPlan rows;
};
MatrixPlans make_matrix_plans(const KPForest& forest, unsigned qubit_cap = RegisterLayout::kDefaultQubitCap);

/// One superposed qRAM query issued by the cascade.
struct QueryRecord {
  std::string stage;  // LOAD_B, LOAD_A, UNLOAD_B, UNLOAD_A, SIGN_LOAD, SIGN_UNLOAD
  unsigned level = 0; // 0 for the sign stage
  unsigned address_width = 0;
  std::size_t branches = 0;
  std::size_t routing_ops_per_branch = 0;
  std::size_t stores_per_branch = 0;
  std::size_t entangled_switches = 0;
  std::size_t time_steps = 0;  // max over branches
  std::vector<RoutingLog> logs;  // one per branch
};

struct LevelMetrics {
  unsigned level = 0;
  std::size_t queries = 0;
  std::size_t branches = 0;
  std::size_t routing_ops_per_branch = 0;  // summed over this level's queries
  std::size_t entangled_switches = 0;      // widest query at this level
  std::size_t time_steps = 0;              // summed over this level's queries
};

/// Ordered text trace plus structured counters for a preparation.
struct PrepLog {
  std::vector<std::string> lines;
  std::vector<QueryRecord> queries;
  std::size_t rotations = 0;    // prefix-controlled rotation layers applied
  std::size_t sign_stages = 0;

  std::size_t query_count() const { return queries.size(); }
  std::vector<LevelMetrics> level_metrics() const;
  std::string to_text() const;
};

struct PrepOptions {
  Tolerance tolerance{};
  SignMethod sign_method = SignMethod::PhaseKickback;
  bool gate_checks = false;  // per-gate norm and precondition checks
};

struct PrepResult {
  StateVector state;
  double fidelity = 0.0;
  bool ancilla_clean = false;
  PrepLog log;
};

/// |0> on every register, with the key register (if any) set to `key`.
StateVector initial_state(const PrepPlan& plan, std::uint64_t key = 0);

/// XORs b := value of the target prefix node (level l-1) and a := value of its
/// child-0 node (level l) into the ancillas, via superposed qRAM queries keyed
/// on the key register and the top l-1 target bits. Throws AncillaError if a
/// or b is not clean beforehand, std::out_of_range for l outside [1, n].
void load_ab_for_level(StateVector& s, const PrepPlan& plan, unsigned l, PrepLog* log = nullptr);

/// Rotates target qubit l by sqrt(a/b) on every live branch.
void rotate_level(StateVector& s, const PrepPlan& plan, unsigned l, const Tolerance& tol, PrepLog* log = nullptr);

/// Repeats the queries of load_ab_for_level; throws AncillaError if a or b is
/// left dirty above eps_amp.
void unload_ab_for_level(StateVector& s, const PrepPlan& plan, unsigned l, const Tolerance& tol,
                         PrepLog* log = nullptr);

/// load, rotate, unload for levels first..last.
void run_levels(StateVector& s, const PrepPlan& plan, unsigned first, unsigned last, const Tolerance& tol,
                PrepLog* log = nullptr);

/// Negates every branch whose sign cell is 1, via the sign qRAM and register c.
/// Throws AncillaError if c is not clean before or after.
void apply_signs(StateVector& s, const PrepPlan& plan, SignMethod method, const Tolerance& tol,
                 PrepLog* log = nullptr);

/// Normalized signed amplitudes stored in a tree: sign_j * sqrt(leaf_j / root).
std::vector<Amplitude> tree_amplitudes(const KPTree& tree);

/// Throws DegenerateInputError on a zero tree.
PrepResult prepare_vector(const KPTree& tree, const PrepOptions& options = {});
PrepResult prepare_vector(const PrepPlan& plan, const KPTree& tree, const PrepOptions& options = {});

/// |i>|0> -> |i> M_i. / ||M_i.||. Throws DegenerateInputError on a zero row,
/// std::out_of_range on a bad row index.
PrepResult prepare_row(const KPForest& forest, std::size_t row, const PrepOptions& options = {});

/// |0>|0> -> sum_i ||M_i.|| / ||M||_F |i>|0>. Throws DegenerateInputError on a zero matrix.
PrepResult prepare_norms(const KPForest& forest, const PrepOptions& options = {});

/// Norm cascade on `i` followed by the row cascade on `dir` keyed on `i`:
/// sum_ij M_ij / ||M||_F |i>|j>.
PrepResult prepare_matrix(const KPForest& forest, const PrepOptions& options = {});

}  // namespace bbqram
