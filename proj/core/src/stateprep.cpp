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


#include "bbqram/stateprep.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

namespace bbqram {

namespace {

constexpr const char* kKeyRegister = "i";
constexpr const char* kDirRegister = "dir";

std::string join_reals(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_real(values[i]);
  }
  return out;
}

std::string join_words(const std::vector<Word>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(values[i]);
  }
  return out;
}

// Address bits as text; the key part (if any) is separated by ':'.
std::string address_text(std::uint64_t address, unsigned key_bits, unsigned rest_bits) {
  const std::string key = BitPath::from_index(address >> rest_bits, key_bits).to_string();
  const std::string rest = BitPath::from_index(address & ((std::uint64_t{1} << rest_bits) - 1), rest_bits).to_string();
  if (key.empty() && rest.empty()) return "-";
  if (key.empty()) return rest;
  return key + ":" + (rest.empty() ? "-" : rest);
}

// Distinct (key ++ top prefix_bits of target) values over live branches, with
// the total probability carried by each.
std::map<std::uint64_t, double> live_keys(const StateVector& s, const PrepPlan& plan, unsigned prefix_bits) {
  const Register& target = plan.target();
  const bool keyed = plan.key_bits > 0;
  const Register* key = keyed ? &plan.layout[plan.key_register] : nullptr;
  std::map<std::uint64_t, double> keys;
  const auto amps = s.amplitudes();
  for (std::uint64_t i = 0; i < amps.size(); ++i) {
    if (amps[i] == 0.0) continue;
    const std::uint64_t prefix = prefix_bits == 0 ? 0 : target.value_in(i) >> (target.width - prefix_bits);
    const std::uint64_t k = ((keyed ? key->value_in(i) : 0) << prefix_bits) | prefix;
    keys[k] += std::norm(amps[i]);
  }
  return keys;
}

std::vector<KeySlice> key_slices(const PrepPlan& plan, unsigned prefix_bits) {
  std::vector<KeySlice> slices;
  if (plan.key_bits > 0) slices.push_back({plan.layout[plan.key_register], plan.key_bits});
  slices.push_back({plan.target(), prefix_bits});
  return slices;
}

// One superposed qRAM query: every live key is routed through `qram` (with an
// optional trailing 0 address bit) and the retrieved words are XORed into
// `dest`. Words for keys without a live branch stay 0.
void superposed_xor(StateVector& s, const PrepPlan& plan, const QramInstance& qram, unsigned prefix_bits,
                    bool trailing_zero, const Register& dest, const std::string& stage, unsigned level,
                    PrepLog* log) {
  const unsigned key_width = plan.key_bits + prefix_bits;
  const auto keys = live_keys(s, plan, prefix_bits);
  std::vector<std::pair<BitPath, std::complex<double>>> branches;
  branches.reserve(keys.size());
  for (const auto& [k, weight] : keys) {
    BitPath addr = BitPath::from_index(k, key_width);
    if (trailing_zero) addr = addr.appended(0);
    branches.emplace_back(std::move(addr), std::sqrt(weight));
  }
  BranchedQuery query = query_superposed(qram, branches);

  std::vector<Word> words(std::size_t{1} << key_width, 0);
  std::vector<std::string> key_text;
  std::vector<Word> live_words;
  std::size_t bi = 0;
  for (const auto& [k, weight] : keys) {
    words[k] = query.branches[bi++].word;
    key_text.push_back(address_text(k, plan.key_bits, prefix_bits));
    live_words.push_back(words[k]);
  }
  s.xor_load(key_slices(plan, prefix_bits), words, dest);

  if (!log) return;
  QueryRecord record;
  record.stage = stage;
  record.level = level;
  record.address_width = qram.address_width();
  record.branches = query.branches.size();
  record.routing_ops_per_branch = query.routing_ops_per_branch;
  record.stores_per_branch = query.stores_per_branch;
  record.entangled_switches = query.entangled_switches_per_branch;
  record.time_steps = query.max_time_steps;
  for (auto& b : query.branches) record.logs.push_back(std::move(b.log));
  log->queries.push_back(std::move(record));

  std::ostringstream line;
  if (level > 0) {
    line << "LEVEL " << level << ' ' << stage;
  } else {
    line << "SIGN " << (stage == "SIGN_LOAD" ? "LOAD" : "UNLOAD");
  }
  std::string keys_joined;
  for (std::size_t i = 0; i < key_text.size(); ++i) keys_joined += (i ? "," : "") + key_text[i];
  line << " cells=" << join_reals(qram.cells()) << " keys=" << (keys_joined.empty() ? "-" : keys_joined)
       << " words=" << (live_words.empty() ? "-" : join_words(live_words));
  log->lines.push_back(line.str());
}

void require_level(const PrepPlan& plan, unsigned l) {
  if (l < 1 || l > plan.n) throw std::out_of_range("level " + std::to_string(l) + " outside [1, n]");
}

void require_clean(const StateVector& s, const Register& reg, double eps, const std::string& what) {
  if (!register_is_disentangled_zero(s, reg, eps)) {
    throw AncillaError(what + ": register " + reg.name + " is not clean");
  }
}

std::shared_ptr<const WordCodec> codec_for(const std::vector<const KPTree*>& trees) {
  std::vector<double> values;
  for (const KPTree* t : trees) {
    for (unsigned d = 0; d <= t->depth(); ++d) {
      const auto& level = t->level(d);
      values.insert(values.end(), level.begin(), level.end());
    }
  }
  return std::make_shared<const WordCodec>(values);
}

// Level-l cells of every tree laid end to end (tree index is the high address part).
std::vector<double> stacked_level(const std::vector<KPTree>& trees, unsigned d) {
  std::vector<double> cells;
  for (const auto& t : trees) cells.insert(cells.end(), t.level(d).begin(), t.level(d).end());
  return cells;
}

std::vector<double> stacked_signs(const std::vector<KPTree>& trees) {
  std::vector<double> cells;
  for (const auto& t : trees) {
    for (auto s : t.leaf_signs()) cells.push_back(static_cast<double>(s));
  }
  return cells;
}

std::shared_ptr<const WordCodec> sign_codec() {
  const std::vector<double> bits{0.0, 1.0};
  return std::make_shared<const WordCodec>(bits);
}

void fill_cascade(PrepPlan& plan, const std::vector<KPTree>& trees) {
  plan.level_qrams.clear();
  for (unsigned d = 0; d <= plan.n; ++d) {
    plan.level_qrams.emplace_back(plan.key_bits + d, stacked_level(trees, d), plan.codec);
  }
  plan.sign_qram = QramInstance(plan.key_bits + plan.n, stacked_signs(trees), sign_codec());
}

PrepResult finish(StateVector state, const PrepPlan& plan, const std::vector<Amplitude>& target, PrepLog log,
                  const Tolerance& tol) {
  const double f = fidelity(state, target);
  const double eps = tol.eps_amp;
  const bool clean = register_is_disentangled_zero(state, plan.a(), eps) &&
                     register_is_disentangled_zero(state, plan.b(), eps) &&
                     register_is_disentangled_zero(state, plan.c(), eps);
  return PrepResult{std::move(state), f, clean, std::move(log)};
}

void run_cascade(StateVector& s, const PrepPlan& plan, const PrepOptions& options, PrepLog& log) {
  run_levels(s, plan, 1, plan.n, options.tolerance, &log);
  apply_signs(s, plan, options.sign_method, options.tolerance, &log);
}

}  // namespace

double rotation_probability(double a, double b, double eps) {
  if (!(b > 0.0)) throw std::domain_error("rotation_probability: b must be positive (dead branch)");
  if (a < 0.0 || a > b * (1.0 + eps)) throw std::domain_error("rotation_probability: require 0 <= a <= b");
  return std::clamp(a / b, 0.0, 1.0);
}

PrepPlan make_plan(const KPTree& tree, unsigned qubit_cap) {
  PrepPlan plan;
  plan.n = tree.depth();
  plan.key_bits = 0;
  plan.target_register = kDirRegister;
  plan.codec = codec_for({&tree});
  plan.layout = RegisterLayout(qubit_cap);
  // A 1-leaf tree still gets a one-qubit target so the register exists.
  plan.layout.add(kDirRegister, std::max(1u, plan.n));
  plan.layout.add("a", plan.codec->width());
  plan.layout.add("b", plan.codec->width());
  plan.layout.add("c", 1);
  fill_cascade(plan, {tree});
  return plan;
}

MatrixPlans make_matrix_plans(const KPForest& forest, unsigned qubit_cap) {
  if (forest.row_trees.empty()) throw std::invalid_argument("make_matrix_plans: empty forest");
  std::vector<const KPTree*> all{&forest.norm_tree};
  for (const auto& t : forest.row_trees) all.push_back(&t);
  auto codec = codec_for(all);

  RegisterLayout layout(qubit_cap);
  layout.add(kKeyRegister, std::max(1u, forest.row_depth()));
  layout.add(kDirRegister, std::max(1u, forest.col_depth()));
  layout.add("a", codec->width());
  layout.add("b", codec->width());
  layout.add("c", 1);

  MatrixPlans plans;
  plans.norms.n = forest.row_depth();
  plans.norms.target_register = kKeyRegister;
  plans.norms.layout = layout;
  plans.norms.codec = codec;
  fill_cascade(plans.norms, {forest.norm_tree});

  plans.rows.n = forest.col_depth();
  plans.rows.key_bits = forest.row_depth();
  plans.rows.key_register = kKeyRegister;
  plans.rows.target_register = kDirRegister;
  plans.rows.layout = layout;
  plans.rows.codec = codec;
  fill_cascade(plans.rows, forest.row_trees);
  return plans;
}

std::vector<LevelMetrics> PrepLog::level_metrics() const {
  std::map<unsigned, LevelMetrics> by_level;
  for (const auto& q : queries) {
    auto& m = by_level[q.level];
    m.level = q.level;
    ++m.queries;
    m.branches = std::max(m.branches, q.branches);
    m.routing_ops_per_branch += q.routing_ops_per_branch;
    m.entangled_switches = std::max(m.entangled_switches, q.entangled_switches);
    m.time_steps += q.time_steps;
  }
  std::vector<LevelMetrics> out;
  for (auto& [level, m] : by_level) out.push_back(m);
  return out;
}

std::string PrepLog::to_text() const {
  std::string out;
  for (const auto& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

StateVector initial_state(const PrepPlan& plan, std::uint64_t key) {
  std::map<std::string, std::uint64_t> assignment;
  if (plan.key_bits > 0) assignment[plan.key_register] = key;
  return StateVector::basis(plan.layout, assignment);
}

void load_ab_for_level(StateVector& s, const PrepPlan& plan, unsigned l, PrepLog* log) {
  require_level(plan, l);
  // Loads must start clean exactly; a stale word would be XORed, not replaced.
  require_clean(s, plan.a(), 0.0, "load_ab_for_level");
  require_clean(s, plan.b(), 0.0, "load_ab_for_level");
  superposed_xor(s, plan, plan.level_qrams[l - 1], l - 1, false, plan.b(), "LOAD_B", l, log);
  superposed_xor(s, plan, plan.level_qrams[l], l - 1, true, plan.a(), "LOAD_A", l, log);
}

void rotate_level(StateVector& s, const PrepPlan& plan, unsigned l, const Tolerance& tol, PrepLog* log) {
  require_level(plan, l);
  (void)tol;
  const WordCodec& codec = *plan.codec;
  const Register& target = plan.target();
  const unsigned qubit = target.qubit_from_top(l - 1);

  if (log) {
    // Report the probability each live prefix will see, read back from the a/b registers.
    std::map<std::uint64_t, double> seen;
    const bool keyed = plan.key_bits > 0;
    const auto amps = s.amplitudes();
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
      if (amps[i] == 0.0) continue;
      const std::uint64_t prefix = l == 1 ? 0 : target.value_in(i) >> (target.width - (l - 1));
      const std::uint64_t k = ((keyed ? s.reg(plan.key_register).value_in(i) : 0) << (l - 1)) | prefix;
      const double bv = codec.decode(plan.b().value_in(i));
      if (bv > 0.0) seen.emplace(k, rotation_probability(codec.decode(plan.a().value_in(i)), bv));
    }
    for (const auto& [k, p] : seen) {
      log->lines.push_back("ROTATE prefix=" + address_text(k, plan.key_bits, l - 1) + " p=" + format_real(p));
    }
  }

  s.register_controlled_rotation(plan.a(), plan.b(), qubit, [&codec](Word aw, Word bw) -> std::optional<double> {
    const double bv = codec.decode(bw);
    if (bv == 0.0) return std::nullopt;  // dead subtree: no live amplitude can sit here
    return rotation_probability(codec.decode(aw), bv);
  });
  if (log) ++log->rotations;
}

void unload_ab_for_level(StateVector& s, const PrepPlan& plan, unsigned l, const Tolerance& tol, PrepLog* log) {
  require_level(plan, l);
  // The rotation touched only qubit l, so the keys (top l-1 bits) are the same
  // as at load time and the same words are XORed back out.
  superposed_xor(s, plan, plan.level_qrams[l - 1], l - 1, false, plan.b(), "UNLOAD_B", l, log);
  superposed_xor(s, plan, plan.level_qrams[l], l - 1, true, plan.a(), "UNLOAD_A", l, log);
  require_clean(s, plan.a(), tol.eps_amp, "unload_ab_for_level");
  require_clean(s, plan.b(), tol.eps_amp, "unload_ab_for_level");
}

void run_levels(StateVector& s, const PrepPlan& plan, unsigned first, unsigned last, const Tolerance& tol,
                PrepLog* log) {
  for (unsigned l = first; l <= last; ++l) {
    load_ab_for_level(s, plan, l, log);
    rotate_level(s, plan, l, tol, log);
    unload_ab_for_level(s, plan, l, tol, log);
  }
}

void apply_signs(StateVector& s, const PrepPlan& plan, SignMethod method, const Tolerance& tol, PrepLog* log) {
  const Register& c = plan.c();
  require_clean(s, c, 0.0, "apply_signs");
  superposed_xor(s, plan, plan.sign_qram, plan.n, false, c, "SIGN_LOAD", 0, log);
  if (method == SignMethod::PhaseKickback) {
    s.z(c.qubit(0));
    if (log) log->lines.push_back("SIGN Z qubit=c");
  } else {
    s.phase(c.qubit(0), std::numbers::pi);
    if (log) log->lines.push_back("SIGN PHASE theta=pi qubit=c");
  }
  superposed_xor(s, plan, plan.sign_qram, plan.n, false, c, "SIGN_UNLOAD", 0, log);
  require_clean(s, c, tol.eps_amp, "apply_signs");
  if (log) ++log->sign_stages;
}

std::vector<Amplitude> tree_amplitudes(const KPTree& tree) {
  if (!(tree.root() > 0.0)) throw DegenerateInputError("tree_amplitudes: zero vector");
  const double norm = std::sqrt(tree.root());
  std::vector<Amplitude> out(tree.leaf_count());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = tree.signed_leaf_root(j) / norm;
  return out;
}

PrepResult prepare_vector(const KPTree& tree, const PrepOptions& options) {
  if (!(tree.root() > 0.0)) throw DegenerateInputError("prepare_vector: zero vector cannot be normalized");
  return prepare_vector(make_plan(tree), tree, options);
}

PrepResult prepare_vector(const PrepPlan& plan, const KPTree& tree, const PrepOptions& options) {
  options.tolerance.validate();
  if (!(tree.root() > 0.0)) throw DegenerateInputError("prepare_vector: zero vector cannot be normalized");
  StateVector s = initial_state(plan);
  s.set_checks(options.gate_checks);
  PrepLog log;
  run_cascade(s, plan, options, log);
  auto amps = tree_amplitudes(tree);
  if (amps.size() == 1) amps.push_back(0.0);  // one-leaf tree on a one-qubit register
  const auto target = embed_register(plan.layout, plan.target(), amps);
  return finish(std::move(s), plan, target, std::move(log), options.tolerance);
}

PrepResult prepare_row(const KPForest& forest, std::size_t row, const PrepOptions& options) {
  options.tolerance.validate();
  if (row >= forest.rows()) throw std::out_of_range("prepare_row: row index out of range");
  const KPTree& tree = forest.row_trees[row];
  if (!(tree.root() > 0.0)) throw DegenerateInputError("prepare_row: row " + std::to_string(row) + " is zero");
  const MatrixPlans plans = make_matrix_plans(forest);
  const PrepPlan& plan = plans.rows;
  StateVector s = initial_state(plan, row);
  s.set_checks(options.gate_checks);
  PrepLog log;
  run_cascade(s, plan, options, log);

  auto row_amps = tree_amplitudes(tree);
  if (row_amps.size() == 1) row_amps.push_back(0.0);
  std::vector<Amplitude> target(plan.layout.dimension(), 0.0);
  const Register& key = plan.layout[plan.key_register];
  for (std::uint64_t j = 0; j < row_amps.size(); ++j) {
    target[(std::uint64_t{row} << key.offset) | (j << plan.target().offset)] = row_amps[j];
  }
  return finish(std::move(s), plan, target, std::move(log), options.tolerance);
}

PrepResult prepare_norms(const KPForest& forest, const PrepOptions& options) {
  options.tolerance.validate();
  if (!(forest.frobenius_squared() > 0.0)) throw DegenerateInputError("prepare_norms: zero matrix");
  const MatrixPlans plans = make_matrix_plans(forest);
  const PrepPlan& plan = plans.norms;
  StateVector s = initial_state(plan);
  s.set_checks(options.gate_checks);
  PrepLog log;
  run_cascade(s, plan, options, log);
  auto amps = tree_amplitudes(forest.norm_tree);
  if (amps.size() == 1) amps.push_back(0.0);
  const auto target = embed_register(plan.layout, plan.target(), amps);
  return finish(std::move(s), plan, target, std::move(log), options.tolerance);
}

PrepResult prepare_matrix(const KPForest& forest, const PrepOptions& options) {
  options.tolerance.validate();
  if (!(forest.frobenius_squared() > 0.0)) throw DegenerateInputError("prepare_matrix: zero matrix");
  const MatrixPlans plans = make_matrix_plans(forest);
  StateVector s = initial_state(plans.norms);
  s.set_checks(options.gate_checks);
  PrepLog log;
  run_cascade(s, plans.norms, options, log);
  run_cascade(s, plans.rows, options, log);

  const PrepPlan& plan = plans.rows;
  const Register& key = plan.layout[plan.key_register];
  const double frob = std::sqrt(forest.frobenius_squared());
  std::vector<Amplitude> target(plan.layout.dimension(), 0.0);
  for (std::uint64_t i = 0; i < forest.rows(); ++i) {
    const KPTree& t = forest.row_trees[i];
    for (std::uint64_t j = 0; j < t.leaf_count(); ++j) {
      target[(i << key.offset) | (j << plan.target().offset)] = t.signed_leaf_root(j) / frob;
    }
  }
  return finish(std::move(s), plan, target, std::move(log), options.tolerance);
}

}  // namespace bbqram
