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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "bbqram/kptree.hpp"
#include "bbqram/types.hpp"
#include "json.hpp"

namespace bbqram::cli {

enum ExitCode : int {
  kSuccess = 0,
  kInputError = 2,
  kDegenerateInput = 3,
  kVerificationFailure = 4,
};

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A parsed input file. Exactly one of vector / matrix is set.
struct InputDocument {
  std::optional<SparseVector> vector;
  std::optional<SparseMatrix> matrix;

  bool is_vector() const { return vector.has_value(); }
};

/// Throws InputError on malformed JSON or an invalid document.
InputDocument parse_document(const std::string& text);
InputDocument load_document(const std::string& path);

/// Writes integral values as JSON integers, everything else as reals.
nlohmann::json number(double v);

/// {"depth": d, "levels": [[root], ...], "signs": [...]}
nlohmann::json tree_summary(const KPTree& tree);

struct PrepFlags {
  bool trace = false;
  std::string trace_file;
  bool metrics = false;
  bool target_check = false;
  std::optional<std::size_t> row;
  bool norms = false;
  std::optional<double> eps;      // overrides eps_norm
  std::optional<double> eps_amp;  // overrides eps_amp
  bool flip_uncompute = false;
};

int cmd_build(const std::string& path, std::ostream& out, std::ostream& err);
int cmd_prep(const std::string& path, const PrepFlags& flags, std::ostream& out, std::ostream& err);
int cmd_route(unsigned n, const std::string& address, bool trace, const std::string& trace_file, std::ostream& out,
              std::ostream& err);
int cmd_selftest(std::uint64_t seed, std::size_t count, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bbqram::cli
