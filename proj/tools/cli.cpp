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


#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "bbqram/qram.hpp"
#include "bbqram/stateprep.hpp"
#include "bbqram/statevector.hpp"

namespace bbqram::cli {

using nlohmann::json;

namespace {

std::uint64_t as_index(const json& j, const char* what) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0) {
    throw InputError(std::string(what) + " must be a nonnegative integer");
  }
  return j.get<std::uint64_t>();
}

double as_value(const json& j) {
  if (!j.is_number()) throw InputError("entry value must be a number");
  return j.get<double>();
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  return j.at(key);
}

// Sends trace text to the trace file if one is named, stderr otherwise.
void emit_trace(const std::string& text, const std::string& trace_file, std::ostream& err) {
  if (trace_file.empty()) {
    err << text;
    return;
  }
  std::ofstream f(trace_file);
  if (!f) throw InputError("cannot write trace file " + trace_file);
  f << text;
}

json metrics_json(const PrepLog& log) {
  json levels = json::array();
  std::size_t routing = 0, time = 0;
  for (const auto& m : log.level_metrics()) {
    levels.push_back({{"level", m.level},
                      {"stage", m.level == 0 ? "sign" : "amplitude"},
                      {"queries", m.queries},
                      {"branches", m.branches},
                      {"routing_ops", m.routing_ops_per_branch},
                      {"entangled_switches", m.entangled_switches},
                      {"time_steps", m.time_steps}});
    routing += m.routing_ops_per_branch;
    time += m.time_steps;
  }
  return {{"levels", levels},
          {"total", {{"queries", log.query_count()}, {"routing_ops", routing}, {"time_steps", time}}}};
}

// Target amplitudes computed straight from the input document, over the
// full register layout of the prepared state.
std::vector<Amplitude> direct_target(const InputDocument& doc, const RegisterLayout& layout, const PrepFlags& flags) {
  std::vector<Amplitude> target(layout.dimension(), 0.0);
  if (doc.is_vector()) {
    const auto dense = doc.vector->dense();
    double sq = 0.0;
    for (double x : dense) sq += x * x;
    for (std::uint64_t j = 0; j < dense.size(); ++j) target[layout.pack({{"dir", j}})] = dense[j] / std::sqrt(sq);
    return target;
  }
  const auto dense = doc.matrix->dense();
  std::vector<double> row_sq(dense.size(), 0.0);
  double frob = 0.0;
  for (std::size_t i = 0; i < dense.size(); ++i) {
    for (double x : dense[i]) row_sq[i] += x * x;
    frob += row_sq[i];
  }
  if (flags.norms) {
    for (std::uint64_t i = 0; i < dense.size(); ++i) target[layout.pack({{"i", i}})] = std::sqrt(row_sq[i] / frob);
  } else if (flags.row) {
    const std::uint64_t i = *flags.row;
    for (std::uint64_t j = 0; j < dense[i].size(); ++j) {
      target[layout.pack({{"i", i}, {"dir", j}})] = dense[i][j] / std::sqrt(row_sq[i]);
    }
  } else {
    for (std::uint64_t i = 0; i < dense.size(); ++i) {
      for (std::uint64_t j = 0; j < dense[i].size(); ++j) {
        target[layout.pack({{"i", i}, {"dir", j}})] = dense[i][j] / std::sqrt(frob);
      }
    }
  }
  return target;
}

json target_check_json(const StateVector& s, const std::vector<Amplitude>& target, double eps_norm, bool& ok) {
  double max_err = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) max_err = std::max(max_err, std::abs(s.amplitudes()[i] - target[i]));
  const double f = fidelity(s, target);
  ok = f >= 1.0 - eps_norm;
  return {{"fidelity", f}, {"max_amplitude_error", max_err}, {"pass", ok}};
}

}  // namespace

InputDocument parse_document(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
  const json& kind = field(j, "kind");
  const json& entries = field(j, "entries");
  if (!entries.is_array()) throw InputError("'entries' must be an array");
  InputDocument doc;
  try {
    if (kind == "vector") {
      std::vector<VectorEntry> out;
      for (const auto& e : entries) out.push_back({as_index(field(e, "index"), "index"), as_value(field(e, "value"))});
      doc.vector = SparseVector(as_index(field(j, "dim"), "dim"), std::move(out));
    } else if (kind == "matrix") {
      std::vector<MatrixEntry> out;
      for (const auto& e : entries) {
        const json& ix = field(e, "index");
        if (!ix.is_array() || ix.size() != 2) throw InputError("matrix entry index must be [i, j]");
        out.push_back({as_index(ix[0], "row index"), as_index(ix[1], "column index"), as_value(field(e, "value"))});
      }
      doc.matrix = SparseMatrix(as_index(field(j, "rows"), "rows"), as_index(field(j, "cols"), "cols"), std::move(out));
    } else {
      throw InputError("'kind' must be \"vector\" or \"matrix\"");
    }
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  return doc;
}

InputDocument load_document(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_document(buf.str());
}

json number(double v) {
  if (std::isfinite(v) && v == std::trunc(v) && std::abs(v) < 9007199254740992.0) {
    return static_cast<std::int64_t>(v);
  }
  return v;
}

json tree_summary(const KPTree& tree) {
  json levels = json::array();
  for (unsigned d = 0; d <= tree.depth(); ++d) {
    json row = json::array();
    for (double x : tree.level(d)) row.push_back(number(x));
    levels.push_back(row);
  }
  json signs = json::array();
  for (auto s : tree.leaf_signs()) signs.push_back(static_cast<int>(s));
  return {{"depth", tree.depth()}, {"levels", levels}, {"signs", signs}};
}

int cmd_build(const std::string& path, std::ostream& out, std::ostream& err) {
  try {
    const InputDocument doc = load_document(path);
    json report;
    if (doc.is_vector()) {
      const auto v = pad_to_power_of_two(*doc.vector);
      if (v.is_zero()) err << "warning: zero vector, nothing to prepare\n";
      report = tree_summary(build_tree(v));
      report["kind"] = "vector";
      report["dim"] = v.dim();
    } else {
      const auto m = pad_to_power_of_two(*doc.matrix);
      const auto forest = build_forest(m);
      if (!(forest.frobenius_squared() > 0.0)) err << "warning: zero matrix, nothing to prepare\n";
      json rows = json::array();
      for (const auto& t : forest.row_trees) rows.push_back(tree_summary(t));
      report = {{"kind", "matrix"},
                {"rows", m.rows()},
                {"cols", m.cols()},
                {"norm_tree", tree_summary(forest.norm_tree)},
                {"row_trees", rows}};
    }
    out << report.dump() << '\n';
    return kSuccess;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
}

int cmd_prep(const std::string& path, const PrepFlags& flags, std::ostream& out, std::ostream& err) {
  try {
    InputDocument doc = load_document(path);
    PrepOptions options;
    if (flags.eps) options.tolerance.eps_norm = *flags.eps;
    if (flags.eps_amp) options.tolerance.eps_amp = *flags.eps_amp;
    try {
      options.tolerance.validate();
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
    if (flags.flip_uncompute) options.sign_method = SignMethod::FlipUncompute;

    json report;
    std::optional<PrepResult> result;
    if (doc.is_vector()) {
      if (flags.row || flags.norms) throw InputError("--row and --norms apply to matrices only");
      doc.vector = pad_to_power_of_two(*doc.vector);
      const auto tree = build_tree(*doc.vector);
      result = prepare_vector(tree, options);
      report = {{"kind", "vector"}, {"dim", doc.vector->dim()}, {"tree", tree_summary(tree)}};
    } else {
      if (flags.row && flags.norms) throw InputError("--row and --norms are exclusive");
      doc.matrix = pad_to_power_of_two(*doc.matrix);
      const auto forest = build_forest(*doc.matrix);
      report = {{"kind", "matrix"}, {"rows", doc.matrix->rows()}, {"cols", doc.matrix->cols()}};
      if (flags.row) {
        if (*flags.row >= forest.rows()) throw InputError("--row out of range");
        result = prepare_row(forest, *flags.row, options);
        report["mode"] = "row";
        report["row"] = *flags.row;
        report["tree"] = tree_summary(forest.row_trees[*flags.row]);
      } else if (flags.norms) {
        result = prepare_norms(forest, options);
        report["mode"] = "norms";
        report["tree"] = tree_summary(forest.norm_tree);
      } else {
        result = prepare_matrix(forest, options);
        report["mode"] = "matrix";
        report["tree"] = tree_summary(forest.norm_tree);
      }
    }

    bool ok = result->fidelity >= 1.0 - options.tolerance.eps_norm && result->ancilla_clean;
    report["fidelity"] = result->fidelity;
    report["ancilla_clean"] = result->ancilla_clean;
    report["queries"] = result->log.query_count();
    report["rotations"] = result->log.rotations;
    report["qubits"] = result->state.layout().qubit_count();
    if (flags.metrics) report["metrics"] = metrics_json(result->log);
    if (flags.target_check) {
      bool target_ok = false;
      const auto target = direct_target(doc, result->state.layout(), flags);
      report["target_check"] = target_check_json(result->state, target, options.tolerance.eps_norm, target_ok);
      ok = ok && target_ok;
    }
    if (flags.trace || !flags.trace_file.empty()) emit_trace(result->log.to_text(), flags.trace_file, err);
    out << report.dump() << '\n';
    if (!ok) {
      err << "error: verification failed\n";
      return kVerificationFailure;
    }
    return kSuccess;
  } catch (const DegenerateInputError& e) {
    err << "error: " << e.what() << '\n';
    return kDegenerateInput;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::length_error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const AncillaError& e) {
    err << "error: " << e.what() << '\n';
    return kVerificationFailure;
  }
}

int cmd_route(unsigned n, const std::string& address, bool trace, const std::string& trace_file, std::ostream& out,
              std::ostream& err) {
  try {
    if (n < 1 || n > 20) throw InputError("--n must be in [1, 20]");
    BitPath addr;
    try {
      addr = BitPath::parse(address);
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
    if (addr.depth() != n) throw InputError("address has " + std::to_string(addr.depth()) + " bits, expected " + std::to_string(n));

    // Cell j holds j, so the retrieved word is the address itself.
    std::vector<double> cells(std::size_t{1} << n);
    for (std::size_t j = 0; j < cells.size(); ++j) cells[j] = static_cast<double>(j);
    QramInstance q(n, std::move(cells));
    RoutingLog log;
    q.route_address(addr, log);
    const std::size_t active = q.active_switches();
    const std::size_t forward_time = time_steps(log);
    const Word word = q.retrieve(0, log);
    q.unroute(log);

    const auto& c = log.counters();
    const std::size_t closed_passes = std::size_t{n} * (n - 1) / 2;
    const bool ok = c.routing_ops == closed_passes && c.stores == n && active == n && forward_time == n * n &&
                    word == addr.to_index() && q.all_empty();
    json report = {{"n", n},
                   {"address", addr.to_string()},
                   {"pass_throughs", c.routing_ops},
                   {"stores", c.stores},
                   {"bus_loads", c.bus_loads},
                   {"extractions", c.extractions},
                   {"unroute_pass_throughs", c.unroute_ops},
                   {"clears", c.clears},
                   {"bus_unloads", c.bus_unloads},
                   {"entangled_switches", active},
                   {"time_steps", forward_time},
                   {"unroute_time_steps", unroute_time_steps(log)},
                   {"fanout_switch_activations", fanout_switch_activations(n)},
                   {"retrieved", word},
                   {"closed_form", {{"pass_throughs", closed_passes}, {"stores", n}, {"time_steps", n * n}}},
                   {"matches_closed_form", ok}};
    if (trace || !trace_file.empty()) emit_trace(log.to_text(), trace_file, err);
    out << report.dump() << '\n';
    return ok ? kSuccess : kVerificationFailure;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
}

int cmd_selftest(std::uint64_t seed, std::size_t count, std::ostream& out, std::ostream& err) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  std::bernoulli_distribution zero(0.25);
  json failures = json::array();
  double worst = 1.0;
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t dim = std::size_t{2} << (k % 5);
    std::vector<double> v(dim);
    for (auto& x : v) x = zero(rng) ? 0.0 : value(rng);
    v[k % dim] = value(rng) + 2.0;

    const auto r = prepare_vector(build_tree(SparseVector::from_dense(v)));
    double sq = 0.0;
    for (double x : v) sq += x * x;
    std::vector<Amplitude> target(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) target[j] = v[j] / std::sqrt(sq);
    const double f = fidelity(r.state, embed_register(r.state.layout(), r.state.reg("dir"), target));
    worst = std::min(worst, f);
    if (f < 1.0 - 1e-9 || !r.ancilla_clean) failures.push_back({{"case", k}, {"kind", "prep"}, {"dim", dim}});

    const unsigned n = 1 + static_cast<unsigned>(k % 10);
    const auto addr = BitPath::from_index(std::uniform_int_distribution<std::uint64_t>(0, (1u << n) - 1)(rng), n);
    std::ostringstream sink;
    if (cmd_route(n, addr.to_string(), false, "", sink, err) != kSuccess) {
      failures.push_back({{"case", k}, {"kind", "route"}, {"n", n}});
    }
  }
  const bool ok = failures.empty();
  out << json{{"seed", seed}, {"count", count}, {"min_fidelity", worst}, {"failures", failures}, {"passed", ok}}.dump()
      << '\n';
  return ok ? kSuccess : kVerificationFailure;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bucket-brigade qRAM state preparation simulator", "bbqram"};
  app.require_subcommand(1);

  std::string input;
  auto* build = app.add_subcommand("build", "Build the tree structure for an input document");
  build->add_option("input", input, "Input JSON document")->required();

  PrepFlags flags;
  std::size_t row = 0;
  auto* prep = app.add_subcommand("prep", "Prepare the amplitude-encoded state and verify it");
  prep->add_option("input", input, "Input JSON document")->required();
  prep->add_flag("--trace", flags.trace, "Write the cascade trace to stderr");
  prep->add_option("--trace-file", flags.trace_file, "Write the cascade trace to a file");
  prep->add_flag("--metrics", flags.metrics, "Include per-level qRAM metrics");
  prep->add_flag("--target-check", flags.target_check, "Compare against amplitudes computed from the input directly");
  auto* row_opt = prep->add_option("--row", row, "Prepare a single matrix row");
  prep->add_flag("--norms", flags.norms, "Prepare the row-norm state of a matrix");
  prep->add_option("--eps", flags.eps, "Fidelity tolerance (1 - fidelity)");
  prep->add_option("--eps-amp", flags.eps_amp, "Ancilla residual tolerance");
  prep->add_flag("--flip-uncompute", flags.flip_uncompute, "Use the controlled-phase sign stage");

  unsigned n = 0;
  std::string address;
  bool route_trace = false;
  std::string route_trace_file;
  auto* route = app.add_subcommand("route", "Route one address through an n-level tree");
  route->add_option("--n", n, "Address width")->required();
  route->add_option("--address", address, "Address bits, most significant first")->required();
  route->add_flag("--trace", route_trace, "Write the routing event log to stderr");
  route->add_option("--trace-file", route_trace_file, "Write the routing event log to a file");

  std::uint64_t seed = 1;
  std::size_t count = 20;
  auto* selftest = app.add_subcommand("selftest", "Random preparation and routing checks");
  selftest->add_option("--seed", seed, "RNG seed");
  selftest->add_option("--count", count, "Number of random cases");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kSuccess;
    }
    err << "error: " << e.what() << '\n' << app.help();
    return kInputError;
  }

  if (*build) return cmd_build(input, out, err);
  if (*prep) {
    if (*row_opt) flags.row = row;
    return cmd_prep(input, flags, out, err);
  }
  if (*route) return cmd_route(n, address, route_trace, route_trace_file, out, err);
  return cmd_selftest(seed, count, out, err);
}

}  // namespace bbqram::cli
