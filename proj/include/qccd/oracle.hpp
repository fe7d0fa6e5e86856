#pragma once

// Exhaustive optimal scheduler for tiny instances.
//
// Uniform-cost search over (slot occupancy, executed-gate set). Executing a
// ready co-trapped gate never changes the occupancy and costs nothing, so
// after every interchange all executable gates are run to a fixed point; the
// search branches only on generic swaps. Costs are compared on an integer
// grid (weights in units of inner_weight / 1024) so that ties are exact.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "qccd/circuit.hpp"
#include "qccd/cost_model.hpp"
#include "qccd/dag.hpp"
#include "qccd/device_graph.hpp"
#include "qccd/errors.hpp"
#include "qccd/machine_state.hpp"
#include "qccd/schedule.hpp"
#include "qccd/topology.hpp"

namespace qccd {

struct OracleLimits {
  int max_depth = 8;   // generic swaps
  int max_nodes = 12;  // device slots
  int max_gates = 5;
};

struct OracleResult {
  bool feasible = false;
  Schedule schedule;
  std::int64_t cost = 0;  // quantized inserted weight
  int shuttles = 0;
  int swaps = 0;
  long expanded = 0;
};

inline std::int64_t quantize_weight(const DeviceGraph& graph, double w) {
  return std::llround(w / graph.weights().inner_weight * 1024.0);
}

inline std::int64_t quantized_cost(const DeviceGraph& graph, const Schedule& s) {
  std::int64_t c = 0;
  for (const auto& e : s.events) {
    if (e.kind != EventKind::GateExec) c += quantize_weight(graph, e.weight);
  }
  return c;
}

namespace oracle_detail {

struct Label {
  std::int64_t cost = 0;
  int shuttles = 0;
  int swaps = 0;
  int depth = 0;
  int parent = -1;  // label index
  int edge = -1;    // interchange leading here
  std::vector<int> occupancy;
  std::uint32_t done = 0;
};

inline auto rank(const Label& l) { return std::tuple(l.cost, l.shuttles, l.swaps, l.depth); }

// Runs every executable gate until none is left; returns the new done mask.
inline std::uint32_t close_gates(const Circuit& circuit, std::span<const int> occupancy,
                                 const DeviceGraph& graph, std::uint32_t done) {
  std::vector<int> slot_of(static_cast<std::size_t>(circuit.n_qubits()), -1);
  for (std::size_t n = 0; n < occupancy.size(); ++n) {
    if (occupancy[n] != kSpace) slot_of[static_cast<std::size_t>(occupancy[n])] = static_cast<int>(n);
  }
  for (bool progress = true; progress;) {
    progress = false;
    std::vector<bool> blocked(static_cast<std::size_t>(circuit.n_qubits()), false);
    for (const Gate& g : circuit.gates()) {
      if (done >> g.id & 1u) continue;
      bool ready = true;
      for (QubitId q : g.operands()) ready = ready && !blocked[static_cast<std::size_t>(q)];
      bool co = true;
      if (g.two_qubit()) {
        co = graph.trap_of(slot_of[static_cast<std::size_t>(g.qubits[0])]) ==
             graph.trap_of(slot_of[static_cast<std::size_t>(g.qubits[1])]);
      }
      if (ready && co) {
        done |= 1u << g.id;
        progress = true;
      } else {
        for (QubitId q : g.operands()) blocked[static_cast<std::size_t>(q)] = true;
      }
    }
  }
  return done;
}

inline std::string key(const Label& l) {
  std::string k;
  k.reserve(l.occupancy.size() + 4);
  for (int c : l.occupancy) k.push_back(static_cast<char>(c + 1));
  for (int i = 0; i < 4; ++i) k.push_back(static_cast<char>(l.done >> (8 * i) & 0xff));
  return k;
}

}  // namespace oracle_detail

/// Minimum inserted-weight schedule (ties: fewer shuttles, then fewer swap
/// gates) using at most `limits.max_depth` generic swaps. Infeasible within
/// the depth limit yields `feasible == false`.
inline OracleResult exact_schedule(const Circuit& circuit, const MachineState& initial,
                                   const OracleLimits& limits = {}) {
  using namespace oracle_detail;
  const DeviceGraph& graph = initial.graph();
  if (graph.node_count() > limits.max_nodes) {
    throw LimitError("device has " + std::to_string(graph.node_count()) + " slots, oracle limit is " +
                     std::to_string(limits.max_nodes));
  }
  if (static_cast<int>(circuit.size()) > limits.max_gates || circuit.size() > 31) {
    throw LimitError("circuit has " + std::to_string(circuit.size()) + " gates, oracle limit is " +
                     std::to_string(limits.max_gates));
  }
  const std::uint32_t all = circuit.size() == 0 ? 0u : (1u << circuit.size()) - 1u;

  std::vector<Label> labels;
  std::map<std::string, std::vector<int>> front;  // non-dominated labels per state
  auto cmp = [&](int a, int b) {
    return std::tuple(rank(labels[a]), a) > std::tuple(rank(labels[b]), b);
  };
  std::priority_queue<int, std::vector<int>, decltype(cmp)> open(cmp);

  auto dominated = [&](const std::vector<int>& set, const Label& l) {
    for (int i : set) {
      if (rank(labels[i]) <= std::tuple(l.cost, l.shuttles, l.swaps, l.depth) && labels[i].depth <= l.depth) {
        return true;
      }
    }
    return false;
  };

  Label root;
  root.occupancy.assign(initial.occupancy().begin(), initial.occupancy().end());
  root.done = close_gates(circuit, root.occupancy, graph, 0);
  labels.push_back(root);
  front[key(root)].push_back(0);
  open.push(0);

  OracleResult result;
  int goal = -1;
  while (!open.empty()) {
    const int li = open.top();
    open.pop();
    ++result.expanded;
    if (labels[li].done == all) {
      goal = li;
      break;
    }
    if (labels[li].depth >= limits.max_depth) continue;
    const std::vector<int> occ = labels[li].occupancy;
    for (std::size_t ei = 0; ei < graph.edges().size(); ++ei) {
      const auto& e = graph.edge(static_cast<int>(ei));
      const SwapKind kind = classify_edge(graph, e.u, e.v, occ);
      if (kind != SwapKind::QubitSwap && kind != SwapKind::SpaceShift && kind != SwapKind::Shuttle) continue;
      Label next;
      next.occupancy = occ;
      std::swap(next.occupancy[static_cast<std::size_t>(e.u)], next.occupancy[static_cast<std::size_t>(e.v)]);
      next.done = close_gates(circuit, next.occupancy, graph, labels[li].done);
      next.cost = labels[li].cost + quantize_weight(graph, e.weight);
      next.shuttles = labels[li].shuttles + (kind == SwapKind::Shuttle ? 1 : 0);
      next.swaps = labels[li].swaps + (kind == SwapKind::QubitSwap ? 1 : 0);
      next.depth = labels[li].depth + 1;
      next.parent = li;
      next.edge = static_cast<int>(ei);
      auto& set = front[key(next)];
      if (dominated(set, next)) continue;
      const int ni = static_cast<int>(labels.size());
      labels.push_back(std::move(next));
      std::erase_if(set, [&](int i) {
        return rank(labels[ni]) <= rank(labels[i]) && labels[ni].depth <= labels[i].depth;
      });
      set.push_back(ni);
      open.push(ni);
    }
  }
  if (goal < 0) return result;

  std::vector<int> path;
  for (int i = goal; labels[i].parent >= 0; i = labels[i].parent) path.push_back(labels[i].edge);
  std::reverse(path.begin(), path.end());

  // Replay to produce a recorded schedule with the same gate-ordering rule
  // as the heuristic scheduler.
  MachineState state = initial;
  DepGraph dag(circuit);
  ScheduleRecorder recorder(graph);
  auto run_ready = [&] {
    for (bool progress = true; progress;) {
      progress = false;
      const std::vector<GateId> ready(dag.frontier().begin(), dag.frontier().end());
      for (GateId gid : ready) {
        const Gate& g = circuit[gid];
        if (!g.two_qubit() || state.trap_of(g.qubits[0]) == state.trap_of(g.qubits[1])) {
          recorder.gate(state, g);
          dag.pop(gid);
          progress = true;
        }
      }
    }
  };
  run_ready();
  for (int ei : path) {
    const auto& e = graph.edge(ei);
    SwapRecord rec = state.apply_generic_swap(e.u, e.v);
    recorder.swap(state, rec);
    run_ready();
  }
  result.feasible = true;
  result.schedule = recorder.take();
  result.cost = labels[goal].cost;
  result.shuttles = labels[goal].shuttles;
  result.swaps = labels[goal].swaps;
  return result;
}

/// A seeded random tiny instance for optimality-gap checks.
struct TinyInstance {
  Topology topology;
  Circuit circuit{2};
  std::vector<int> slots;  // qubit -> node
};

struct TinyInstanceSpec {
  int min_traps = 2;
  int max_traps = 3;
  int max_capacity = 3;
  int max_gates = 4;
};

inline TinyInstance random_tiny_instance(std::uint64_t seed, const TinyInstanceSpec& spec = {}) {
  std::mt19937_64 rng(seed);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  TinyInstance inst;
  const int traps = pick(spec.min_traps, spec.max_traps);
  const int cap = pick(2, spec.max_capacity);
  inst.topology = traps > 2 && pick(0, 1) ? make_star(traps, cap) : make_linear(traps, cap);
  const int slots = traps * cap;
  const int n = pick(2, slots - 1);
  inst.circuit = Circuit(n, "tiny" + std::to_string(seed));
  const int gates = pick(1, spec.max_gates);
  for (int i = 0; i < gates; ++i) {
    const int a = pick(0, n - 1);
    int b = pick(0, n - 2);
    if (b >= a) ++b;
    inst.circuit.add_two_qubit("cx", a, b);
  }
  std::vector<int> nodes(static_cast<std::size_t>(slots));
  std::iota(nodes.begin(), nodes.end(), 0);
  for (int i = slots - 1; i > 0; --i) std::swap(nodes[static_cast<std::size_t>(i)], nodes[static_cast<std::size_t>(pick(0, i))]);
  inst.slots.assign(nodes.begin(), nodes.begin() + n);
  return inst;
}

}  // namespace qccd
