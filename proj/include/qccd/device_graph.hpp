#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qccd/errors.hpp"
#include "qccd/topology.hpp"

namespace qccd {

/// Marker for an unoccupied slot in occupancy arrays.
inline constexpr int kSpace = -1;

struct WeightParams {
  double inner_weight = 0.001;  // cost per ion of intra-trap distance
  double shuttle_base = 1.0;    // w; a path crossing j junctions weighs w(j+1)
  double threshold = 0.5;       // separates intra-trap from shuttle edges

  WeightParams scaled(double factor) const {
    return {inner_weight * factor, shuttle_base * factor, threshold * factor};
  }
};

enum class EdgeKind { Intra, Shuttle };

struct Slot {
  int trap = 0;
  int position = 0;
};

struct DeviceEdge {
  int u = 0;  // u < v
  int v = 0;
  double weight = 0;
  EdgeKind kind = EdgeKind::Intra;
  int distance = 0;  // intra: |pos_u - pos_v|
  int path = -1;     // shuttle: index into Topology::paths
};

/// Static weighted connectivity graph over trap slots.
///
/// Slot nodes of trap t are numbered contiguously, position 0 first. Every
/// pair of slots within a trap is joined by an intra edge of weight
/// inner_weight * distance. Every path joins each end slot of one trap to each
/// end slot of the other with a shuttle edge of weight shuttle_base * (j + 1).
class DeviceGraph {
 public:
  DeviceGraph() = default;

  explicit DeviceGraph(Topology topology, WeightParams weights = {})
      : topology_(std::move(topology)), weights_(weights) {
    topology_.validate();
    if (!(weights_.inner_weight > 0) ||
        !(weights_.inner_weight * topology_.max_capacity() <= weights_.threshold) ||
        !(weights_.threshold < weights_.shuttle_base)) {
      throw InvalidArgument(
          "weight parameters must satisfy 0 < inner_weight*max_capacity <= threshold < "
          "shuttle_base");
    }
    for (const auto& trap : topology_.traps) {
      offsets_.push_back(static_cast<int>(slots_.size()));
      for (int p = 0; p < trap.capacity; ++p) slots_.push_back({trap.id, p});
    }
    const std::size_t n = slots_.size();
    edge_index_.assign(n * n, -1);
    incident_.resize(n);

    for (const auto& trap : topology_.traps) {
      for (int a = 0; a < trap.capacity; ++a) {
        for (int b = a + 1; b < trap.capacity; ++b) {
          DeviceEdge e;
          e.u = node_of(trap.id, a);
          e.v = node_of(trap.id, b);
          e.distance = b - a;
          e.weight = weights_.inner_weight * e.distance;
          e.kind = EdgeKind::Intra;
          add_edge(e);
        }
      }
    }
    for (std::size_t pi = 0; pi < topology_.paths.size(); ++pi) {
      const auto& path = topology_.paths[pi];
      const double w = weights_.shuttle_base * static_cast<double>(path.junctions.size() + 1);
      for (int ea : end_positions(path.trap_a)) {
        for (int eb : end_positions(path.trap_b)) {
          DeviceEdge e;
          e.u = std::min(node_of(path.trap_a, ea), node_of(path.trap_b, eb));
          e.v = std::max(node_of(path.trap_a, ea), node_of(path.trap_b, eb));
          e.weight = w;
          e.kind = EdgeKind::Shuttle;
          e.path = static_cast<int>(pi);
          add_edge(e);
        }
      }
    }
  }

  const Topology& topology() const noexcept { return topology_; }
  const WeightParams& weights() const noexcept { return weights_; }

  int node_count() const noexcept { return static_cast<int>(slots_.size()); }
  int trap_count() const noexcept { return topology_.trap_count(); }
  int capacity(int trap) const { return topology_.traps.at(static_cast<std::size_t>(trap)).capacity; }
  int trap_offset(int trap) const { return offsets_.at(static_cast<std::size_t>(trap)); }
  const Slot& slot(int node) const { return slots_.at(static_cast<std::size_t>(node)); }
  int trap_of(int node) const { return slot(node).trap; }
  int node_of(int trap, int position) const { return trap_offset(trap) + position; }
  bool is_end_slot(int node) const {
    const auto& s = slot(node);
    return s.position == 0 || s.position == capacity(s.trap) - 1;
  }

  const std::vector<DeviceEdge>& edges() const noexcept { return edges_; }
  const DeviceEdge& edge(int index) const { return edges_.at(static_cast<std::size_t>(index)); }
  const std::vector<int>& incident(int node) const { return incident_.at(static_cast<std::size_t>(node)); }

  /// Edge index joining u and v, if any.
  std::optional<int> find_edge(int u, int v) const {
    if (u < 0 || v < 0 || u >= node_count() || v >= node_count()) return std::nullopt;
    int idx = edge_index_[static_cast<std::size_t>(u) * slots_.size() + static_cast<std::size_t>(v)];
    if (idx < 0) return std::nullopt;
    return idx;
  }

 private:
  std::vector<int> end_positions(int trap) const {
    int cap = capacity(trap);
    return cap == 1 ? std::vector<int>{0} : std::vector<int>{0, cap - 1};
  }

  void add_edge(const DeviceEdge& e) {
    const std::size_t n = slots_.size();
    int& slot_uv = edge_index_[static_cast<std::size_t>(e.u) * n + static_cast<std::size_t>(e.v)];
    if (slot_uv >= 0) {
      // Parallel paths between the same traps: keep the cheapest.
      if (e.weight < edges_[static_cast<std::size_t>(slot_uv)].weight) {
        edges_[static_cast<std::size_t>(slot_uv)] = e;
      }
      return;
    }
    int idx = static_cast<int>(edges_.size());
    edges_.push_back(e);
    slot_uv = idx;
    edge_index_[static_cast<std::size_t>(e.v) * n + static_cast<std::size_t>(e.u)] = idx;
    incident_[static_cast<std::size_t>(e.u)].push_back(idx);
    incident_[static_cast<std::size_t>(e.v)].push_back(idx);
  }

  Topology topology_;
  WeightParams weights_;
  std::vector<Slot> slots_;
  std::vector<int> offsets_;
  std::vector<DeviceEdge> edges_;
  std::vector<int> edge_index_;
  std::vector<std::vector<int>> incident_;
};

inline DeviceGraph to_graph(const Topology& topology, const WeightParams& weights = {}) {
  return DeviceGraph(topology, weights);
}

enum class SwapKind { TwoQubitGateSite, QubitSwap, SpaceShift, Shuttle, Invalid };

inline const char* to_string(SwapKind k) {
  switch (k) {
    case SwapKind::TwoQubitGateSite: return "gate_site";
    case SwapKind::QubitSwap: return "swap_gate";
    case SwapKind::SpaceShift: return "space_shift";
    case SwapKind::Shuttle: return "shuttle";
    case SwapKind::Invalid: return "invalid";
  }
  return "?";
}

/// Whether an edge is being asked about as a gate site or as an interchange.
enum class EdgeIntent { Interchange, Execute };

/// Classifies edge (u, v) under the given occupancy (kSpace or qubit id per
/// node):
///   both qubits, intra            -> TwoQubitGateSite (Execute) / QubitSwap
///   qubit + space, intra adjacent -> SpaceShift
///   exactly one space, shuttle    -> Shuttle
///   anything else                 -> Invalid
inline SwapKind classify_edge(const DeviceGraph& graph, int u, int v, std::span<const int> occupancy,
                              EdgeIntent intent = EdgeIntent::Interchange) {
  auto idx = graph.find_edge(u, v);
  if (!idx) {
    throw InvalidArgument("(" + std::to_string(u) + ", " + std::to_string(v) + ") is not a device edge");
  }
  const DeviceEdge& e = graph.edge(*idx);
  const bool qu = occupancy[static_cast<std::size_t>(u)] != kSpace;
  const bool qv = occupancy[static_cast<std::size_t>(v)] != kSpace;
  const double threshold = graph.weights().threshold;
  if (e.weight <= threshold) {
    if (qu && qv) return intent == EdgeIntent::Execute ? SwapKind::TwoQubitGateSite : SwapKind::QubitSwap;
    if (qu != qv && e.distance == 1) return SwapKind::SpaceShift;
    return SwapKind::Invalid;
  }
  if (qu != qv) return SwapKind::Shuttle;
  return SwapKind::Invalid;
}

/// All-pairs path costs over the static graph, ignoring occupancy.
///
/// `limited(a, b)` is the cheapest path using at most `max_intermediate`
/// intermediate nodes (infinity if none); `unbounded(a, b)` drops the hop
/// limit. Positive weights make the cheapest walk a simple path, so a
/// hop-bounded Bellman-Ford gives the same value as enumerating simple paths.
class DistanceTable {
 public:
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  DistanceTable() = default;

  DistanceTable(const DeviceGraph& graph, int max_intermediate)
      : n_(static_cast<std::size_t>(graph.node_count())), max_intermediate_(max_intermediate) {
    if (max_intermediate < 0) throw InvalidArgument("max intermediate nodes must be >= 0");
    limited_.assign(n_ * n_, kInf);
    unbounded_.assign(n_ * n_, kInf);
    std::vector<double> cur(n_), next(n_);
    for (std::size_t s = 0; s < n_; ++s) {
      std::fill(cur.begin(), cur.end(), kInf);
      cur[s] = 0;
      for (int hop = 0; hop <= max_intermediate; ++hop) {
        next = cur;
        for (const auto& e : graph.edges()) {
          auto u = static_cast<std::size_t>(e.u), v = static_cast<std::size_t>(e.v);
          if (cur[u] + e.weight < next[v]) next[v] = cur[u] + e.weight;
          if (cur[v] + e.weight < next[u]) next[u] = cur[v] + e.weight;
        }
        cur.swap(next);
      }
      std::copy(cur.begin(), cur.end(), limited_.begin() + static_cast<std::ptrdiff_t>(s * n_));
      dijkstra(graph, s);
    }
  }

  int max_intermediate() const noexcept { return max_intermediate_; }
  double limited(int a, int b) const { return limited_[index(a, b)]; }
  double unbounded(int a, int b) const { return unbounded_[index(a, b)]; }
  /// Hop-limited cost, falling back to the unbounded one when no short path exists.
  double distance(int a, int b) const {
    double d = limited(a, b);
    return d < kInf ? d : unbounded(a, b);
  }

 private:
  std::size_t index(int a, int b) const {
    return static_cast<std::size_t>(a) * n_ + static_cast<std::size_t>(b);
  }

  void dijkstra(const DeviceGraph& graph, std::size_t source) {
    double* dist = unbounded_.data() + source * n_;
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[source] = 0;
    pq.emplace(0.0, static_cast<int>(source));
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (d > dist[u]) continue;
      for (int ei : graph.incident(u)) {
        const auto& e = graph.edge(ei);
        int v = e.u == u ? e.v : e.u;
        if (d + e.weight < dist[v]) {
          dist[v] = d + e.weight;
          pq.emplace(dist[v], v);
        }
      }
    }
  }

  std::size_t n_ = 0;
  int max_intermediate_ = 0;
  std::vector<double> limited_;
  std::vector<double> unbounded_;
};

}  // namespace qccd
