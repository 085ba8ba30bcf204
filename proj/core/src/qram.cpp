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

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace bbqram {

char switch_symbol(SwitchState s) {
  switch (s) {
    case SwitchState::Empty: return '.';
    case SwitchState::Zero: return '0';
    case SwitchState::One: return '1';
  }
  return '?';
}

namespace {

const char* event_name(RoutingEventKind k) {
  switch (k) {
    case RoutingEventKind::BusLoad: return "BUS_LOAD";
    case RoutingEventKind::PassThrough: return "PASS";
    case RoutingEventKind::StoreBitAt: return "STORE";
    case RoutingEventKind::BusExtract: return "BUS_EXTRACT";
    case RoutingEventKind::ClearBitAt: return "CLEAR";
    case RoutingEventKind::BusUnload: return "BUS_UNLOAD";
  }
  return "?";
}

SwitchState state_for_bit(std::uint8_t bit) { return bit ? SwitchState::One : SwitchState::Zero; }

}  // namespace

void RoutingLog::record(const RoutingEvent& e) {
  events_.push_back(e);
  switch (e.kind) {
    case RoutingEventKind::BusLoad: ++counters_.bus_loads; break;
    case RoutingEventKind::PassThrough:
      if (e.reverse) {
        ++counters_.unroute_ops;
      } else {
        ++counters_.routing_ops;
      }
      break;
    case RoutingEventKind::StoreBitAt: ++counters_.stores; break;
    case RoutingEventKind::BusExtract: ++counters_.extractions; break;
    case RoutingEventKind::ClearBitAt: ++counters_.clears; break;
    case RoutingEventKind::BusUnload: ++counters_.bus_unloads; break;
  }
}

void RoutingLog::note_active_switches(std::size_t active) {
  counters_.entangled_switches = std::max(counters_.entangled_switches, active);
}

std::string RoutingLog::to_text() const {
  std::ostringstream out;
  std::size_t step = 0;
  for (const auto& e : events_) {
    out << "STEP " << ++step << ' ' << event_name(e.kind) << " node=" << e.node;
    if (e.kind == RoutingEventKind::PassThrough) out << " dir=" << static_cast<int>(e.dir);
    out << '\n';
  }
  return out.str();
}

std::size_t time_steps(const RoutingLog& log) {
  return log.counters().stores + 2 * log.counters().routing_ops;
}

std::size_t unroute_time_steps(const RoutingLog& log) {
  return log.counters().clears + 2 * log.counters().unroute_ops;
}

std::size_t fanout_switch_activations(unsigned n) { return (std::size_t{1} << n) - 1; }

QramInstance::QramInstance(unsigned n, std::vector<double> cells, std::shared_ptr<const WordCodec> codec)
    : n_(n), cells_(std::move(cells)), codec_(std::move(codec)) {
  if (n_ >= 32) throw std::invalid_argument("QramInstance: address width too large");
  if (cells_.size() != (std::size_t{1} << n_)) {
    throw std::invalid_argument("QramInstance: expected 2^n memory cells");
  }
  if (!codec_) codec_ = std::make_shared<const WordCodec>(cells_);
  for (double c : cells_) codec_->encode(c);  // every cell must be representable on the bus
  switches_.assign((std::size_t{1} << n_) - 1, SwitchState::Empty);
}

bool QramInstance::all_empty() const {
  return std::all_of(switches_.begin(), switches_.end(), [](SwitchState s) { return s == SwitchState::Empty; });
}

std::size_t QramInstance::active_switches() const {
  return switches_.size() -
         static_cast<std::size_t>(std::count(switches_.begin(), switches_.end(), SwitchState::Empty));
}

void QramInstance::route_bit(std::uint8_t bit, RoutingLog& log) {
  if (bit > 1) throw std::invalid_argument("route_bit: bit must be 0 or 1");
  if (route_complete()) throw std::logic_error("route_bit: route already complete");
  log.record({RoutingEventKind::BusLoad, 0, bit, false});
  std::size_t node = 0;
  while (switches_[node] != SwitchState::Empty) {
    const std::uint8_t dir = switches_[node] == SwitchState::One ? 1 : 0;
    log.record({RoutingEventKind::PassThrough, node, dir, false});
    node = 2 * node + 1 + dir;
  }
  switches_[node] = state_for_bit(bit);
  log.record({RoutingEventKind::StoreBitAt, node, bit, false});
  ++stored_;
  log.note_active_switches(active_switches());
}

void QramInstance::route_address(const BitPath& addr, RoutingLog& log) {
  if (addr.depth() != n_) {
    throw std::invalid_argument("route_address: address width " + std::to_string(addr.depth()) +
                                " != qRAM width " + std::to_string(n_));
  }
  if (stored_ != 0) throw std::invalid_argument("route_address: tree is not empty");
  for (auto bit : addr.bits()) route_bit(bit, log);
}

BitPath QramInstance::routed_address() const {
  if (!route_complete()) throw std::logic_error("routed_address: incomplete route");
  std::vector<std::uint8_t> bits;
  std::size_t node = 0;
  for (unsigned level = 0; level < n_; ++level) {
    const std::uint8_t bit = switches_[node] == SwitchState::One ? 1 : 0;
    bits.push_back(bit);
    node = 2 * node + 1 + bit;
  }
  return BitPath(std::move(bits));
}

Word QramInstance::retrieve(Word reg, RoutingLog& log) const {
  if (!route_complete()) throw std::logic_error("retrieve: incomplete route");
  const auto cell = static_cast<std::size_t>(routed_address().to_index());
  log.record({RoutingEventKind::BusExtract, cell, 0, false});
  return reg ^ codec_->encode(cells_[cell]);
}

double QramInstance::routed_value() const {
  return cells_[static_cast<std::size_t>(routed_address().to_index())];
}

void QramInstance::unroute(RoutingLog& log) {
  // Reverse replay: the last bit stored is the first cleared, and its bus
  // travels back up through the same switches it passed on the way down.
  while (stored_ > 0) {
    const unsigned level = stored_ - 1;
    std::vector<std::size_t> path;
    std::size_t node = 0;
    for (unsigned d = 0; d < level; ++d) {
      path.push_back(node);
      node = 2 * node + 1 + (switches_[node] == SwitchState::One ? 1 : 0);
    }
    const std::uint8_t bit = switches_[node] == SwitchState::One ? 1 : 0;
    switches_[node] = SwitchState::Empty;
    log.record({RoutingEventKind::ClearBitAt, node, bit, true});
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
      const std::uint8_t dir = switches_[*it] == SwitchState::One ? 1 : 0;
      log.record({RoutingEventKind::PassThrough, *it, dir, true});
    }
    log.record({RoutingEventKind::BusUnload, 0, bit, true});
    --stored_;
  }
}

BranchedQuery query_superposed(const QramInstance& q,
                               const std::vector<std::pair<BitPath, std::complex<double>>>& branches) {
  if (!q.all_empty()) throw std::invalid_argument("query_superposed: qRAM must start Empty");
  std::set<BitPath> seen;
  for (const auto& [addr, amp] : branches) {
    if (addr.depth() != q.address_width()) throw std::invalid_argument("query_superposed: address width mismatch");
    if (!seen.insert(addr).second) {
      throw std::invalid_argument("query_superposed: duplicate address " + addr.to_string());
    }
  }
  BranchedQuery result;
  result.branches.reserve(branches.size());
  for (const auto& [addr, amp] : branches) {
    QramInstance snapshot = q;
    QueryBranch branch{addr, amp, 0, {}};
    snapshot.route_address(addr, branch.log);
    branch.word = snapshot.retrieve(0, branch.log);
    snapshot.unroute(branch.log);
    const auto& c = branch.log.counters();
    result.routing_ops_per_branch = std::max(result.routing_ops_per_branch, c.routing_ops);
    result.stores_per_branch = std::max(result.stores_per_branch, c.stores);
    result.entangled_switches_per_branch = std::max(result.entangled_switches_per_branch, c.entangled_switches);
    result.max_time_steps = std::max(result.max_time_steps, time_steps(branch.log));
    result.branches.push_back(std::move(branch));
  }
  return result;
}

}  // namespace bbqram
