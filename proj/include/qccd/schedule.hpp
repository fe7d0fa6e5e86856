#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qccd/circuit.hpp"
#include "qccd/machine_state.hpp"

namespace qccd {

enum class EventKind { GateExec, SwapGate, SpaceShift, Shuttle };

inline const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::GateExec: return "gate";
    case EventKind::SwapGate: return "swap_gate";
    case EventKind::SpaceShift: return "space_shift";
    case EventKind::Shuttle: return "shuttle";
  }
  return "?";
}

/// One entry of a schedule. Structural quantities (chain length, ion
/// distance, path) are captured from the machine state when the event is
/// recorded so that timing and fidelity can be evaluated from the event list
/// alone.
struct Event {
  EventKind kind = EventKind::GateExec;
  GateId gate = -1;          // GateExec
  bool two_qubit = false;    // GateExec
  int u = -1;                // generic swaps: the interchanged slots
  int v = -1;
  double weight = 0;         // generic swaps: edge weight
  int trap = -1;             // executing trap; receiving trap for shuttles
  int source_trap = -1;      // shuttles
  int chain_length = 0;      // ions in `trap` when the event starts
  int ion_distance = 0;      // two-qubit gates and swap gates
  int segments = 0;          // shuttles
  std::vector<int> junctions;
  std::vector<int> junction_degrees;

  friend bool operator==(const Event&, const Event&) = default;
};

struct ScheduleCounts {
  int shuttles = 0;
  int swap_gates = 0;
  int space_shifts = 0;
  int two_qubit_gates = 0;  // circuit gates only
  int one_qubit_gates = 0;

  friend bool operator==(const ScheduleCounts&, const ScheduleCounts&) = default;
};

struct Schedule {
  int trap_count = 0;
  int junction_count = 0;
  std::vector<Event> events;
  ScheduleCounts counts;

  /// Total edge weight of the inserted generic swaps.
  double inserted_weight() const {
    double w = 0;
    for (const auto& e : events) {
      if (e.kind != EventKind::GateExec) w += e.weight;
    }
    return w;
  }
  int inserted_operations() const { return counts.shuttles + counts.swap_gates + counts.space_shifts; }

  friend bool operator==(const Schedule&, const Schedule&) = default;
};

/// Appends events to a schedule from the live machine state.
class ScheduleRecorder {
 public:
  explicit ScheduleRecorder(const DeviceGraph& graph) {
    schedule_.trap_count = graph.trap_count();
    schedule_.junction_count = static_cast<int>(graph.topology().junctions.size());
  }

  void gate(const MachineState& state, const Gate& g) {
    Event e;
    e.kind = EventKind::GateExec;
    e.gate = g.id;
    e.two_qubit = g.two_qubit();
    e.trap = state.trap_of(g.qubits[0]);
    e.chain_length = state.chain_length(e.trap);
    if (g.two_qubit()) {
      e.ion_distance = state.ion_distance(g.qubits[0], g.qubits[1]);
      ++schedule_.counts.two_qubit_gates;
    } else {
      ++schedule_.counts.one_qubit_gates;
    }
    schedule_.events.push_back(std::move(e));
  }

  void swap(const MachineState& after, const SwapRecord& rec) {
    Event e;
    e.u = rec.u;
    e.v = rec.v;
    e.weight = rec.weight;
    e.trap = rec.trap;
    e.chain_length = rec.chain_length;
    switch (rec.kind) {
      case SwapKind::QubitSwap:
        e.kind = EventKind::SwapGate;
        e.ion_distance = rec.ion_distance;
        ++schedule_.counts.swap_gates;
        break;
      case SwapKind::SpaceShift:
        e.kind = EventKind::SpaceShift;
        ++schedule_.counts.space_shifts;
        break;
      case SwapKind::Shuttle:
        e.kind = EventKind::Shuttle;
        e.source_trap = rec.source_trap;
        e.segments = rec.segments;
        e.junctions = rec.junctions;
        e.junction_degrees = after.graph().topology().junction_degrees(
            after.graph().topology().paths[static_cast<std::size_t>(
                after.graph().edge(rec.edge).path)]);
        ++schedule_.counts.shuttles;
        break;
      default:
        throw InvalidArgument("cannot record a non-swap interchange");
    }
    schedule_.events.push_back(std::move(e));
  }

  const Schedule& schedule() const noexcept { return schedule_; }
  Schedule take() { return std::move(schedule_); }

 private:
  Schedule schedule_;
};

}  // namespace qccd
