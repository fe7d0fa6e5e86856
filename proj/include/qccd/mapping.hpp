#pragma once

// Two-level initial placement.
//
// First level assigns qubits to traps (even-divided, gathering or a
// spatio-temporal affinity ordering). Second level orders qubits inside each
// trap so that l(q) = -alpha*E(q) + beta*I(q) rises from both chain ends
// toward the centre, with free slots in the middle.

#include <algorithm>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qccd/circuit.hpp"
#include "qccd/dag.hpp"
#include "qccd/device_graph.hpp"
#include "qccd/errors.hpp"
#include "qccd/machine_state.hpp"
#include "qccd/topology.hpp"

namespace qccd {

enum class MappingStrategy { EvenDivided, Gathering, Sta };

inline std::string_view to_string(MappingStrategy s) {
  switch (s) {
    case MappingStrategy::EvenDivided: return "even";
    case MappingStrategy::Gathering: return "gather";
    case MappingStrategy::Sta: return "sta";
  }
  return "?";
}

inline MappingStrategy parse_mapping_strategy(std::string_view s) {
  if (s == "even" || s == "even-divided") return MappingStrategy::EvenDivided;
  if (s == "gather" || s == "gathering") return MappingStrategy::Gathering;
  if (s == "sta") return MappingStrategy::Sta;
  throw InvalidArgument("unknown mapping strategy '" + std::string(s) + "' (even|gather|sta)");
}

struct MappingParams {
  double alpha = 1.0;
  double beta = 1.0;
  int lookahead_k = 8;
  MappingStrategy strategy = MappingStrategy::Gathering;
};

/// E: in-window two-qubit gates with a partner in another trap.
/// I: in-window two-qubit gates with a partner in the same trap.
struct InteractionScore {
  int external = 0;
  int internal = 0;
  friend bool operator==(const InteractionScore&, const InteractionScore&) = default;
};

namespace mapping_detail {

// Fills traps in id order up to capacity - 1, following `order`.
inline std::vector<int> pack_reserving_space(std::span<const QubitId> order, int n_qubits,
                                             const Topology& topology) {
  int room = 0;
  for (const auto& t : topology.traps) room += t.capacity - 1;
  if (room < n_qubits) {
    throw CapacityError("need " + std::to_string(n_qubits) + " slots with one free per trap, have " +
                        std::to_string(room));
  }
  std::vector<int> trap_of(static_cast<std::size_t>(n_qubits), -1);
  std::size_t trap = 0;
  int load = 0;
  for (QubitId q : order) {
    while (load >= topology.traps[trap].capacity - 1) {
      ++trap;
      load = 0;
    }
    trap_of[static_cast<std::size_t>(q)] = static_cast<int>(trap);
    ++load;
  }
  return trap_of;
}

// Affinity-ordered linear arrangement: heaviest qubit first, each following
// qubit inserted next to its heaviest already-placed partner on the side
// holding fewer qubits. Pairwise weight sums 1/(1+layer) over shared gates.
inline std::vector<QubitId> sta_order(const Circuit& circuit) {
  const int n = circuit.n_qubits();
  const auto layers = asap_layers(circuit, true);
  std::vector<double> pair(static_cast<std::size_t>(n * n), 0.0);
  std::vector<double> total(static_cast<std::size_t>(n), 0.0);
  for (const auto& g : circuit.gates()) {
    if (!g.two_qubit()) continue;
    const double w = 1.0 / (1.0 + layers[g.id]);
    auto [a, b] = g.qubits;
    pair[static_cast<std::size_t>(a * n + b)] += w;
    pair[static_cast<std::size_t>(b * n + a)] += w;
    total[a] += w;
    total[b] += w;
  }
  std::vector<QubitId> by_weight(static_cast<std::size_t>(n));
  std::iota(by_weight.begin(), by_weight.end(), 0);
  std::stable_sort(by_weight.begin(), by_weight.end(),
                   [&](QubitId a, QubitId b) { return total[a] > total[b]; });

  std::vector<QubitId> seq;
  for (QubitId q : by_weight) {
    int anchor = -1;
    double anchor_w = 0;
    for (std::size_t i = 0; i < seq.size(); ++i) {
      double w = pair[static_cast<std::size_t>(q * n + seq[i])];
      if (w > anchor_w || (w == anchor_w && w > 0 && seq[i] < seq[static_cast<std::size_t>(anchor)])) {
        anchor = static_cast<int>(i);
        anchor_w = w;
      }
    }
    if (anchor < 0) {
      seq.push_back(q);
      continue;
    }
    const auto left = static_cast<std::size_t>(anchor);
    const std::size_t right = seq.size() - 1 - left;
    auto pos = seq.begin() + anchor + (left < right ? 0 : 1);
    seq.insert(pos, q);
  }
  return seq;
}

}  // namespace mapping_detail

/// Qubit -> trap assignment.
inline std::vector<int> first_level(const Circuit& circuit, const Topology& topology,
                                    const MappingParams& params) {
  const int n = circuit.n_qubits();
  switch (params.strategy) {
    case MappingStrategy::EvenDivided: {
      if (topology.total_capacity() < n) {
        throw CapacityError("need " + std::to_string(n) + " slots, device has " +
                            std::to_string(topology.total_capacity()));
      }
      std::vector<int> trap_of(static_cast<std::size_t>(n), -1);
      std::vector<int> load(topology.traps.size(), 0);
      std::size_t next = 0;
      for (QubitId q = 0; q < n; ++q) {
        while (load[next] >= topology.traps[next].capacity) next = (next + 1) % load.size();
        trap_of[q] = static_cast<int>(next);
        ++load[next];
        next = (next + 1) % load.size();
      }
      return trap_of;
    }
    case MappingStrategy::Gathering: {
      std::vector<QubitId> order(static_cast<std::size_t>(n));
      std::iota(order.begin(), order.end(), 0);
      return mapping_detail::pack_reserving_space(order, n, topology);
    }
    case MappingStrategy::Sta: {
      auto order = mapping_detail::sta_order(circuit);
      return mapping_detail::pack_reserving_space(order, n, topology);
    }
  }
  throw InvalidArgument("unknown mapping strategy");
}

/// (E, I) counts over the two-qubit gates in the first `k` ASAP layers.
inline std::vector<InteractionScore> interaction_scores(const Circuit& circuit,
                                                        std::span<const int> trap_of, int k) {
  if (k < 1) throw InvalidArgument("lookahead k must be >= 1");
  const auto layers = asap_layers(circuit, true);
  std::vector<InteractionScore> scores(static_cast<std::size_t>(circuit.n_qubits()));
  for (const auto& g : circuit.gates()) {
    if (!g.two_qubit() || layers[g.id] >= k) continue;
    auto [a, b] = g.qubits;
    if (trap_of[a] == trap_of[b]) {
      ++scores[a].internal;
      ++scores[b].internal;
    } else {
      ++scores[a].external;
      ++scores[b].external;
    }
  }
  return scores;
}

inline double location_score(const InteractionScore& s, const MappingParams& params) {
  return -params.alpha * s.external + params.beta * s.internal;
}

/// Slot-level placement (qubit -> node) with a mountain-shaped l profile in
/// every trap: the lowest scores are dealt alternately to the left and right
/// ends, free slots sit in the middle. A trap whose qubits all share one score
/// keeps qubit-id order.
inline std::vector<int> second_level(const DeviceGraph& graph, std::span<const int> trap_of,
                                     std::span<const InteractionScore> scores,
                                     const MappingParams& params) {
  const int n = static_cast<int>(trap_of.size());
  std::vector<std::vector<QubitId>> members(static_cast<std::size_t>(graph.trap_count()));
  for (QubitId q = 0; q < n; ++q) members.at(static_cast<std::size_t>(trap_of[q])).push_back(q);

  std::vector<int> slot_of(static_cast<std::size_t>(n), -1);
  for (int t = 0; t < graph.trap_count(); ++t) {
    auto& qs = members[static_cast<std::size_t>(t)];
    const int cap = graph.capacity(t);
    if (static_cast<int>(qs.size()) > cap) {
      throw CapacityError("trap " + std::to_string(t) + " assigned " + std::to_string(qs.size()) +
                          " qubits, capacity " + std::to_string(cap));
    }
    auto l = [&](QubitId q) { return location_score(scores[q], params); };
    std::vector<QubitId> left, right;
    const bool flat = std::all_of(qs.begin(), qs.end(), [&](QubitId q) { return l(q) == l(qs.front()); });
    if (flat) {
      const std::size_t half = (qs.size() + 1) / 2;
      left.assign(qs.begin(), qs.begin() + static_cast<std::ptrdiff_t>(half));
      right.assign(qs.rbegin(), qs.rend() - static_cast<std::ptrdiff_t>(half));
    } else {
      std::stable_sort(qs.begin(), qs.end(), [&](QubitId a, QubitId b) { return l(a) < l(b); });
      for (std::size_t i = 0; i < qs.size(); ++i) (i % 2 == 0 ? left : right).push_back(qs[i]);
    }
    // left fills from position 0 inward, right from the last position inward.
    for (std::size_t i = 0; i < left.size(); ++i) {
      slot_of[left[i]] = graph.node_of(t, static_cast<int>(i));
    }
    for (std::size_t i = 0; i < right.size(); ++i) {
      slot_of[right[i]] = graph.node_of(t, cap - 1 - static_cast<int>(i));
    }
  }
  return slot_of;
}

/// Full two-level placement of `circuit` on `graph`.
inline std::vector<int> initial_mapping(const Circuit& circuit, const DeviceGraph& graph,
                                        const MappingParams& params = {}) {
  auto trap_of = first_level(circuit, graph.topology(), params);
  auto scores = interaction_scores(circuit, trap_of, params.lookahead_k);
  return second_level(graph, trap_of, scores, params);
}

inline MachineState initial_state(const Circuit& circuit, const DeviceGraph& graph,
                                  const MappingParams& params = {}) {
  auto slots = initial_mapping(circuit, graph, params);
  return MachineState::from_mapping(graph, slots);
}

}  // namespace qccd
