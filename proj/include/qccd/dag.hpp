#pragma once

#include <algorithm>
#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qccd/circuit.hpp"
#include "qccd/errors.hpp"

namespace qccd {

/// Gate dependency DAG. Edge (a, b) means b acts on a qubit whose most recent
/// earlier gate is a. The frontier holds unexecuted gates with no pending
/// predecessors; pop() is the only mutation.
class DepGraph {
 public:
  DepGraph() = default;

  explicit DepGraph(const Circuit& circuit)
      : succ_(circuit.size()), pred_(circuit.size()), in_degree_(circuit.size(), 0),
        executed_(circuit.size(), false), remaining_(circuit.size()) {
    std::vector<GateId> last(static_cast<std::size_t>(circuit.n_qubits()), -1);
    for (const auto& g : circuit.gates()) {
      for (QubitId q : g.operands()) {
        GateId prev = last[static_cast<std::size_t>(q)];
        if (prev >= 0 && (pred_[g.id].empty() || pred_[g.id].back() != prev)) {
          succ_[prev].push_back(g.id);
          pred_[g.id].push_back(prev);
          ++in_degree_[g.id];
        }
        last[static_cast<std::size_t>(q)] = g.id;
      }
    }
    for (std::size_t i = 0; i < in_degree_.size(); ++i) {
      if (in_degree_[i] == 0) frontier_.insert(static_cast<GateId>(i));
    }
  }

  std::size_t size() const noexcept { return succ_.size(); }
  std::size_t remaining() const noexcept { return remaining_; }
  bool done() const noexcept { return remaining_ == 0; }

  const std::set<GateId>& frontier() const noexcept { return frontier_; }
  bool in_frontier(GateId g) const { return frontier_.count(g) != 0; }
  bool executed(GateId g) const { return executed_.at(static_cast<std::size_t>(g)); }
  int in_degree(GateId g) const { return in_degree_.at(static_cast<std::size_t>(g)); }
  const std::vector<GateId>& successors(GateId g) const { return succ_.at(static_cast<std::size_t>(g)); }
  const std::vector<GateId>& predecessors(GateId g) const { return pred_.at(static_cast<std::size_t>(g)); }

  std::vector<std::pair<GateId, GateId>> edges() const {
    std::vector<std::pair<GateId, GateId>> out;
    for (std::size_t a = 0; a < succ_.size(); ++a) {
      for (GateId b : succ_[a]) out.emplace_back(static_cast<GateId>(a), b);
    }
    return out;
  }

  /// Marks a frontier gate executed and releases its successors.
  void pop(GateId g) {
    if (!in_frontier(g)) {
      throw InvalidArgument("gate " + std::to_string(g) + " is not in the frontier");
    }
    frontier_.erase(g);
    executed_[static_cast<std::size_t>(g)] = true;
    --remaining_;
    for (GateId s : succ_[static_cast<std::size_t>(g)]) {
      if (--in_degree_[static_cast<std::size_t>(s)] == 0) frontier_.insert(s);
    }
  }

 private:
  std::vector<std::vector<GateId>> succ_;
  std::vector<std::vector<GateId>> pred_;
  std::vector<int> in_degree_;
  std::vector<bool> executed_;
  std::set<GateId> frontier_;
  std::size_t remaining_ = 0;
};

inline DepGraph build_dag(const Circuit& circuit) { return DepGraph(circuit); }

inline void pop_gate(DepGraph& dag, GateId g) { dag.pop(g); }

/// As-soon-as-possible layer index of every gate. With `two_qubit_only`,
/// single-qubit gates neither occupy a layer nor delay anything; their
/// entry is the layer of the qubit's next two-qubit gate slot.
inline std::vector<int> asap_layers(const Circuit& circuit, bool two_qubit_only = true) {
  std::vector<int> depth(static_cast<std::size_t>(circuit.n_qubits()), 0);
  std::vector<int> layer(circuit.size(), 0);
  for (const auto& g : circuit.gates()) {
    if (two_qubit_only && !g.two_qubit()) {
      layer[g.id] = depth[g.qubits[0]];
      continue;
    }
    int l = 0;
    for (QubitId q : g.operands()) l = std::max(l, depth[q]);
    layer[g.id] = l;
    for (QubitId q : g.operands()) depth[q] = l + 1;
  }
  return layer;
}

}  // namespace qccd
