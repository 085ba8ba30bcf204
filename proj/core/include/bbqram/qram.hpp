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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "bbqram/types.hpp"
#include "bbqram/word_codec.hpp"

namespace bbqram {

/// Qutrit switch state: Empty is the waiting state, Zero/One a stored routing bit.
enum class SwitchState : std::uint8_t { Empty, Zero, One };

char switch_symbol(SwitchState s);

enum class RoutingEventKind : std::uint8_t {
  BusLoad,     // an address bit is placed on the bus at the root
  PassThrough, // a stored switch forwards the bus to child `dir`
  StoreBitAt,  // an Empty switch absorbs the bus bit
  BusExtract,  // the data word is XORed out of cell `node`
  ClearBitAt,  // reverse of StoreBitAt
  BusUnload,   // reverse of BusLoad
};

struct RoutingEvent {
  RoutingEventKind kind;
  std::size_t node = 0;   // switch index in level order, or cell index for BusExtract
  std::uint8_t dir = 0;   // forwarding direction (PassThrough) / bit moved (Store, Clear)
  bool reverse = false;   // emitted while unrouting

  friend bool operator==(const RoutingEvent&, const RoutingEvent&) = default;
};

struct RoutingCounters {
  std::size_t routing_ops = 0;  // forward pass-throughs
  std::size_t stores = 0;
  std::size_t bus_loads = 0;
  std::size_t extractions = 0;
  std::size_t unroute_ops = 0;  // reverse pass-throughs
  std::size_t clears = 0;
  std::size_t bus_unloads = 0;
  std::size_t entangled_switches = 0;  // peak number of non-Empty switches

  friend bool operator==(const RoutingCounters&, const RoutingCounters&) = default;
};

/// Ordered record of everything a qRAM did during one query.
class RoutingLog {
 public:
  void record(const RoutingEvent& e);
  void note_active_switches(std::size_t active);

  const std::vector<RoutingEvent>& events() const { return events_; }
  const RoutingCounters& counters() const { return counters_; }

  /// One event per line: `STEP <k> <EVENT> node=<index> [dir=<0|1>]`, k from 1.
  std::string to_text() const;

 private:
  std::vector<RoutingEvent> events_;
  RoutingCounters counters_;
};

/// Parallel time of the forward route in `log`. A store costs one step; each
/// level a bit is forwarded through costs two (the gate controlled on |0> and
/// the one controlled on |1>, each applied to the whole level at once).
std::size_t time_steps(const RoutingLog& log);

/// Same accounting for the reverse replay recorded by unroute().
std::size_t unroute_time_steps(const RoutingLog& log);

/// Switches that an n-bit fanout qRAM must drive per query (every switch of
/// the tree), the contrast case for bucket-brigade's n.
std::size_t fanout_switch_activations(unsigned n);

// Bucket-brigade qRAM over 2^n classical memory cells.
//
// Switches are stored in level order; node k has children 2k+1 (bit 0) and
// 2k+2 (bit 1). Cells hold real numbers and are put on the bus as words via
// the attached codec; retrieval XORs the word into the caller's register so a
// second retrieval restores it.
class QramInstance {
 public:
  /// n may be 0 (a single cell, no switches). cells.size() must equal 2^n.
  QramInstance(unsigned n, std::vector<double> cells, std::shared_ptr<const WordCodec> codec = nullptr);

  unsigned address_width() const { return n_; }
  std::size_t switch_count() const { return switches_.size(); }
  const std::vector<SwitchState>& switches() const { return switches_; }
  const std::vector<double>& cells() const { return cells_; }
  const WordCodec& codec() const { return *codec_; }
  std::shared_ptr<const WordCodec> codec_ptr() const { return codec_; }

  /// Number of address bits currently stored in the tree.
  unsigned stored_bits() const { return stored_; }
  bool route_complete() const { return stored_ == n_; }
  bool all_empty() const;
  std::size_t active_switches() const;

  /// Sends one bit down from the root. Throws std::logic_error if the route is complete.
  void route_bit(std::uint8_t bit, RoutingLog& log);
  /// Throws std::invalid_argument if the tree is not Empty or addr.depth() != n.
  void route_address(const BitPath& addr, RoutingLog& log);
  /// Decodes the stored path. Throws std::logic_error if incomplete.
  BitPath routed_address() const;
  /// Returns register ^ word(cells[routed address]). Throws std::logic_error if incomplete.
  Word retrieve(Word reg, RoutingLog& log) const;
  /// The real value at the routed cell, without touching the bus.
  double routed_value() const;
  /// Replays the forward route in reverse; afterwards every switch is Empty.
  void unroute(RoutingLog& log);

  friend bool operator==(const QramInstance& a, const QramInstance& b) {
    return a.n_ == b.n_ && a.switches_ == b.switches_ && a.cells_ == b.cells_ && a.stored_ == b.stored_;
  }

 private:
  unsigned n_;
  std::vector<double> cells_;
  std::shared_ptr<const WordCodec> codec_;
  std::vector<SwitchState> switches_;
  unsigned stored_ = 0;
};

struct QueryBranch {
  BitPath address;
  std::complex<double> amplitude;
  Word word = 0;
  RoutingLog log;
};

/// Result of a superposed query evaluated branch by branch. Metrics are per
/// branch (every branch costs the same) and max-over-branches for time.
struct BranchedQuery {
  std::vector<QueryBranch> branches;
  std::size_t routing_ops_per_branch = 0;
  std::size_t stores_per_branch = 0;
  std::size_t entangled_switches_per_branch = 0;
  std::size_t max_time_steps = 0;
};

/// Routes, retrieves into a zero register, and unroutes every branch on its
/// own copy of `q` (which must be all Empty). Amplitudes are copied through
/// untouched. Throws std::invalid_argument on duplicate or wrong-width addresses.
BranchedQuery query_superposed(const QramInstance& q,
                               const std::vector<std::pair<BitPath, std::complex<double>>>& branches);

}  // namespace bbqram
