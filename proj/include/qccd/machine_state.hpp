#pragma once

#include <algorithm>
#include <array>
#include <cstdlib>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qccd/circuit.hpp"
#include "qccd/device_graph.hpp"
#include "qccd/errors.hpp"

namespace qccd {

/// Motional heating per shuttle: k1 for the split/merge pair plus k2 per
/// segment travelled. `destination_fraction` of k1 lands on the receiving
/// chain, the rest on the source chain; segment heat always lands on the
/// receiving chain.
struct HeatParams {
  double k1 = 0.1;
  double k2 = 0.01;
  double destination_fraction = 1.0;
};

/// Result of one generic swap on the machine state.
struct SwapRecord {
  SwapKind kind = SwapKind::Invalid;
  int u = -1;
  int v = -1;
  int edge = -1;
  double weight = 0;
  int trap = -1;         // trap of the interchange; receiving trap for shuttles
  int source_trap = -1;  // shuttles only
  int segments = 0;
  std::vector<int> junctions;
  std::array<QubitId, 2> moved{-1, -1};  // qubits whose slot changed
  int chain_length = 0;   // ions in `trap` before the interchange
  int ion_distance = 0;   // ions strictly between the two swapped qubits (swap gates)
};

/// Dynamic placement of logical qubits on the device slots.
///
/// Keeps the qubit->slot mapping, the slot contents, the per-trap set of free
/// positions and the accumulated motional quanta of every trap consistent
/// with each other. References the graph it was built on; the graph must
/// outlive the state.
class MachineState {
 public:
  MachineState() = default;

  MachineState(const DeviceGraph& graph, int n_qubits)
      : graph_(&graph),
        slot_of_(static_cast<std::size_t>(n_qubits), -1),
        content_(static_cast<std::size_t>(graph.node_count()), kSpace),
        spaces_(static_cast<std::size_t>(graph.trap_count())),
        nbar_(static_cast<std::size_t>(graph.trap_count()), 0.0) {
    for (int t = 0; t < graph.trap_count(); ++t) {
      for (int p = 0; p < graph.capacity(t); ++p) spaces_[t].insert(p);
    }
  }

  /// State with qubit q on slot `slots[q]` (-1 leaves it unplaced).
  static MachineState from_mapping(const DeviceGraph& graph, std::span<const int> slots) {
    MachineState s(graph, static_cast<int>(slots.size()));
    for (std::size_t q = 0; q < slots.size(); ++q) {
      if (slots[q] >= 0) s.place(static_cast<QubitId>(q), slots[q]);
    }
    return s;
  }

  const DeviceGraph& graph() const { return *graph_; }
  int n_qubits() const noexcept { return static_cast<int>(slot_of_.size()); }

  void place(QubitId q, int node) {
    check_qubit(q);
    if (node < 0 || node >= graph_->node_count()) throw InvalidArgument("slot out of range");
    if (slot_of_[q] >= 0) throw InvalidArgument("qubit " + std::to_string(q) + " already placed");
    if (content_[node] != kSpace) throw InvalidArgument("slot " + std::to_string(node) + " already occupied");
    slot_of_[q] = node;
    content_[node] = q;
    const auto& s = graph_->slot(node);
    spaces_[s.trap].erase(s.position);
  }

  int slot_of(QubitId q) const {
    check_qubit(q);
    return slot_of_[q];
  }
  bool placed(QubitId q) const { return slot_of(q) >= 0; }
  int trap_of(QubitId q) const {
    int s = slot_of(q);
    if (s < 0) throw InvalidArgument("qubit " + std::to_string(q) + " is not placed");
    return graph_->trap_of(s);
  }
  int content(int node) const { return content_.at(static_cast<std::size_t>(node)); }
  std::span<const int> occupancy() const noexcept { return content_; }
  std::span<const int> mapping() const noexcept { return slot_of_; }

  /// Free positions within a trap.
  const std::set<int>& spaces(int trap) const { return spaces_.at(static_cast<std::size_t>(trap)); }
  int space_count(int trap) const { return static_cast<int>(spaces(trap).size()); }
  int full_trap_count() const {
    int n = 0;
    for (const auto& s : spaces_) n += s.empty() ? 1 : 0;
    return n;
  }
  /// Slots a free space must move to reach the nearest trap end; -1 if full.
  int space_gap(int trap) const {
    const auto& s = spaces(trap);
    if (s.empty()) return -1;
    return std::min(*s.begin(), graph_->capacity(trap) - 1 - *s.rbegin());
  }

  double nbar(int trap) const { return nbar_.at(static_cast<std::size_t>(trap)); }
  const std::vector<double>& heat() const noexcept { return nbar_; }

  int chain_length(int trap) const { return graph_->capacity(trap) - space_count(trap); }

  /// Occupied slots strictly between two co-trapped qubits.
  int ion_distance(QubitId a, QubitId b) const {
    int sa = slot_of(a), sb = slot_of(b);
    if (sa < 0 || sb < 0) throw InvalidArgument("ion_distance on unplaced qubit");
    if (graph_->trap_of(sa) != graph_->trap_of(sb)) {
      throw InvalidArgument("ion_distance: qubits " + std::to_string(a) + " and " +
                            std::to_string(b) + " are in different traps");
    }
    return ions_between(sa, sb);
  }

  SwapKind classify(int u, int v, EdgeIntent intent = EdgeIntent::Interchange) const {
    return classify_edge(*graph_, u, v, content_, intent);
  }

  /// Exchanges the contents of u and v. The edge must classify as a
  /// QubitSwap, SpaceShift or Shuttle; shuttles heat the receiving chain.
  SwapRecord apply_generic_swap(int u, int v, const HeatParams& heat = {}) {
    const SwapKind kind = classify(u, v);
    if (kind != SwapKind::QubitSwap && kind != SwapKind::SpaceShift && kind != SwapKind::Shuttle) {
      throw InvalidArgument("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                            ") is not a valid generic swap (" + to_string(kind) + ")");
    }
    const int edge = *graph_->find_edge(u, v);
    const DeviceEdge& e = graph_->edge(edge);
    SwapRecord rec;
    rec.kind = kind;
    rec.u = u;
    rec.v = v;
    rec.edge = edge;
    rec.weight = e.weight;
    rec.moved = {content_[u], content_[v]};
    if (kind == SwapKind::Shuttle) {
      const int from = content_[u] != kSpace ? u : v;
      const int to = from == u ? v : u;
      rec.source_trap = graph_->trap_of(from);
      rec.trap = graph_->trap_of(to);
      const auto& path = graph_->topology().paths[static_cast<std::size_t>(e.path)];
      rec.segments = path.segments;
      rec.junctions = path.junctions;
      rec.chain_length = chain_length(rec.trap);
    } else {
      rec.trap = graph_->trap_of(u);
      rec.chain_length = chain_length(rec.trap);
      if (kind == SwapKind::QubitSwap) rec.ion_distance = ions_between(u, v);
    }

    exchange(u, v);

    if (kind == SwapKind::Shuttle) {
      const double split = heat.k1 * heat.destination_fraction;
      nbar_[rec.trap] += split + heat.k2 * rec.segments;
      nbar_[rec.source_trap] += heat.k1 - split;
    }
    return rec;
  }

  /// Cross-checks mapping, occupancy and the space recorder.
  bool consistent() const {
    std::vector<std::set<int>> spaces(spaces_.size());
    for (int n = 0; n < graph_->node_count(); ++n) {
      const int c = content_[n];
      const auto& s = graph_->slot(n);
      if (c == kSpace) {
        spaces[s.trap].insert(s.position);
      } else if (c < 0 || c >= n_qubits() || slot_of_[c] != n) {
        return false;
      }
    }
    for (int q = 0; q < n_qubits(); ++q) {
      if (slot_of_[q] >= 0 && content_[slot_of_[q]] != q) return false;
    }
    return spaces == spaces_;
  }

  /// Debug snapshot of mapping, per-trap chains and heat.
  nlohmann::json snapshot() const {
    nlohmann::json j;
    j["mapping"] = slot_of_;
    nlohmann::json traps = nlohmann::json::array();
    for (int t = 0; t < graph_->trap_count(); ++t) {
      std::vector<int> chain;
      for (int p = 0; p < graph_->capacity(t); ++p) chain.push_back(content_[graph_->node_of(t, p)]);
      traps.push_back({{"id", t}, {"slots", chain}, {"nbar", nbar_[t]}});
    }
    j["traps"] = traps;
    return j;
  }

 private:
  void check_qubit(QubitId q) const {
    if (q < 0 || q >= n_qubits()) throw InvalidArgument("qubit " + std::to_string(q) + " out of range");
  }

  int ions_between(int a, int b) const {
    const auto& sa = graph_->slot(a);
    const auto& sb = graph_->slot(b);
    int lo = std::min(sa.position, sb.position), hi = std::max(sa.position, sb.position);
    int n = 0;
    for (int p = lo + 1; p < hi; ++p) n += content_[graph_->node_of(sa.trap, p)] != kSpace ? 1 : 0;
    return n;
  }

  void exchange(int u, int v) {
    const int cu = content_[u], cv = content_[v];
    content_[u] = cv;
    content_[v] = cu;
    if (cu != kSpace) slot_of_[cu] = v;
    if (cv != kSpace) slot_of_[cv] = u;
    update_space(u);
    update_space(v);
  }

  void update_space(int node) {
    const auto& s = graph_->slot(node);
    if (content_[node] == kSpace) {
      spaces_[s.trap].insert(s.position);
    } else {
      spaces_[s.trap].erase(s.position);
    }
  }

  const DeviceGraph* graph_ = nullptr;
  std::vector<int> slot_of_;
  std::vector<int> content_;
  std::vector<std::set<int>> spaces_;
  std::vector<double> nbar_;
};

}  // namespace qccd
