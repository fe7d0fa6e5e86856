#pragma once

// Independent replay checker for schedules. Rebuilds the dependency state and
// the ion placement from scratch and reports every event that breaks
// precedence, co-location, capacity, conservation or heat monotonicity.

#include <string>
#include <vector>

#include "qccd/circuit.hpp"
#include "qccd/dag.hpp"
#include "qccd/machine_state.hpp"
#include "qccd/schedule.hpp"

namespace qccd {

struct Violation {
  int event = -1;  // -1: end-of-schedule check
  std::string message;
};

inline std::vector<Violation> validate_schedule(const Circuit& circuit, const Schedule& schedule,
                                                MachineState state, const HeatParams& heat = {}) {
  std::vector<Violation> out;
  auto report = [&](int i, std::string msg) { out.push_back({i, std::move(msg)}); };
  const DeviceGraph& graph = state.graph();
  DepGraph dag(circuit);

  auto placed_count = [&] {
    int n = 0;
    for (QubitId q = 0; q < state.n_qubits(); ++q) n += state.placed(q) ? 1 : 0;
    return n;
  };
  const int initial_placed = placed_count();
  if (initial_placed != circuit.n_qubits()) report(-1, "initial mapping leaves qubits unplaced");

  for (std::size_t i = 0; i < schedule.events.size(); ++i) {
    const int idx = static_cast<int>(i);
    const Event& e = schedule.events[i];
    if (e.kind == EventKind::GateExec) {
      if (e.gate < 0 || static_cast<std::size_t>(e.gate) >= circuit.size()) {
        report(idx, "unknown gate id");
        continue;
      }
      const Gate& g = circuit[e.gate];
      if (!dag.in_frontier(g.id)) {
        report(idx, "gate " + std::to_string(g.id) + " executed before its predecessors");
        continue;
      }
      if (g.two_qubit() && state.trap_of(g.qubits[0]) != state.trap_of(g.qubits[1])) {
        report(idx, "gate " + std::to_string(g.id) + " operands are in different traps");
      }
      if (state.trap_of(g.qubits[0]) != e.trap) report(idx, "gate recorded on the wrong trap");
      dag.pop(g.id);
      continue;
    }

    if (!graph.find_edge(e.u, e.v)) {
      report(idx, "interchange on a non-edge");
      continue;
    }
    const SwapKind kind = state.classify(e.u, e.v);
    const SwapKind expected = e.kind == EventKind::SwapGate     ? SwapKind::QubitSwap
                              : e.kind == EventKind::SpaceShift ? SwapKind::SpaceShift
                                                                : SwapKind::Shuttle;
    if (kind != expected) {
      report(idx, std::string("recorded ") + to_string(e.kind) + " but edge classifies as " + to_string(kind));
      continue;
    }
    const std::vector<double> before = state.heat();
    state.apply_generic_swap(e.u, e.v, heat);
    for (int t = 0; t < graph.trap_count(); ++t) {
      if (state.nbar(t) < before[static_cast<std::size_t>(t)]) report(idx, "trap heat decreased");
    }
    if (!state.consistent()) report(idx, "placement bookkeeping inconsistent");
    for (int t = 0; t < graph.trap_count(); ++t) {
      if (state.chain_length(t) > graph.capacity(t)) report(idx, "trap over capacity");
    }
    if (placed_count() != initial_placed) report(idx, "qubit count changed");
  }
  if (!dag.done()) {
    report(-1, std::to_string(dag.remaining()) + " gates never executed");
  }
  return out;
}

}  // namespace qccd
