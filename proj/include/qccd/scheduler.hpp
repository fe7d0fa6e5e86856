#pragma once

// Generic-swap based shuttling scheduler.
//
// Each iteration executes every frontier gate whose operands share a trap.
// When nothing is executable, every valid generic swap (SWAP gate, space
// shift or shuttle) is scored by
//
//   H(swap) = min_g decay(g) * cost(g) + w(swap),   g in the blocked frontier
//
// evaluated on the state with the swap applied, and the cheapest one is
// applied.
//
// Two gate cost models are available. `Distance` is the static-graph path
// cost between the operands (at most m intermediate nodes) plus shuttle_base
// per trap without a free slot. `Transport` (default) prices a concrete plan
// for moving one operand into the other's trap: walk to a chain end, then per
// hop the shuttle weight plus the space shifts (or eviction) the entered trap
// needs; an executable gate costs nothing. Every blocked state then has a
// move whose H does not exceed the current cost, which avoids the stalls the
// distance model runs into when the partner's trap can only be entered at
// its far end or a trap fills up.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <span>
#include <tuple>
#include <queue>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qccd/circuit.hpp"
#include "qccd/dag.hpp"
#include "qccd/device_graph.hpp"
#include "qccd/errors.hpp"
#include "qccd/machine_state.hpp"
#include "qccd/schedule.hpp"

namespace qccd {

enum class GateCostModel { Transport, Distance };

struct SchedulerParams {
  double delta = 0.001;              // decay rate
  int decay_reset_window = 5;        // iterations a swapped qubit stays "recent"
  int m = 2;                         // max intermediate nodes in score paths
  long iteration_cap_per_gate = 10000;
  GateCostModel cost_model = GateCostModel::Transport;
  long escape_budget = 20000;        // expansions of the stall-escape search; 0 disables it
  HeatParams heat;

  void validate() const {
    if (delta < 0) throw InvalidArgument("delta must be >= 0");
    if (m < 1) throw InvalidArgument("m must be >= 1");
    if (decay_reset_window < 0) throw InvalidArgument("decay reset window must be >= 0");
    if (iteration_cap_per_gate < 1) throw InvalidArgument("iteration cap must be >= 1");
    if (escape_budget < 0) throw InvalidArgument("escape budget must be >= 0");
  }
};

/// Iteration at which each qubit was last moved by a generic swap.
class DecayTable {
 public:
  static constexpr long kNever = std::numeric_limits<long>::min();

  DecayTable(int n_qubits, int window)
      : last_(static_cast<std::size_t>(n_qubits), kNever), window_(window) {}

  void touch(QubitId q, long iteration) { last_.at(static_cast<std::size_t>(q)) = iteration; }

  bool recent(QubitId q, long iteration) const {
    long t = last_.at(static_cast<std::size_t>(q));
    return t != kNever && iteration - t <= window_;
  }

  double factor(const Gate& g, long iteration, double delta) const {
    for (QubitId q : g.operands()) {
      if (recent(q, iteration)) return 1.0 + delta;
    }
    return 1.0;
  }

  /// Drops entries older than the window.
  void expire(long iteration) {
    for (auto& t : last_) {
      if (t != kNever && iteration - t > window_) t = kNever;
    }
  }

  long last_touched(QubitId q) const { return last_.at(static_cast<std::size_t>(q)); }

 private:
  std::vector<long> last_;
  int window_;
};

/// Cheapest trap-to-trap routes over shuttle paths (ties: lower trap id).
class TrapRoutes {
 public:
  TrapRoutes() = default;

  explicit TrapRoutes(const DeviceGraph& graph) : n_(graph.trap_count()) {
    const auto& topo = graph.topology();
    const double inf = std::numeric_limits<double>::infinity();
    hop_.assign(static_cast<std::size_t>(n_ * n_), inf);
    for (const auto& p : topo.paths) {
      double w = graph.weights().shuttle_base * static_cast<double>(p.junctions.size() + 1);
      auto& ab = hop_[static_cast<std::size_t>(p.trap_a * n_ + p.trap_b)];
      ab = std::min(ab, w);
      hop_[static_cast<std::size_t>(p.trap_b * n_ + p.trap_a)] = ab;
    }
    neighbours_.resize(static_cast<std::size_t>(n_));
    for (int a = 0; a < n_; ++a) {
      for (int b = 0; b < n_; ++b) {
        if (!std::isinf(hop(a, b))) neighbours_[static_cast<std::size_t>(a)].push_back(b);
      }
    }
    routes_.resize(static_cast<std::size_t>(n_ * n_));
    for (int s = 0; s < n_; ++s) {
      std::vector<double> dist(static_cast<std::size_t>(n_), inf);
      std::vector<int> prev(static_cast<std::size_t>(n_), -1);
      std::vector<bool> done(static_cast<std::size_t>(n_), false);
      dist[s] = 0;
      for (int iter = 0; iter < n_; ++iter) {
        int u = -1;
        for (int t = 0; t < n_; ++t) {
          if (!done[t] && (u < 0 || dist[t] < dist[u])) u = t;
        }
        if (u < 0 || std::isinf(dist[u])) break;
        done[u] = true;
        for (int v : neighbours_[static_cast<std::size_t>(u)]) {
          if (dist[u] + hop(u, v) < dist[v]) {
            dist[v] = dist[u] + hop(u, v);
            prev[v] = u;
          }
        }
      }
      for (int t = 0; t < n_; ++t) {
        auto& r = routes_[static_cast<std::size_t>(s * n_ + t)];
        for (int x = t; x != s && x >= 0; x = prev[x]) r.push_back(x);
        std::reverse(r.begin(), r.end());
      }
    }
  }

  /// Traps entered when travelling from `from` to `to`, ending with `to`.
  const std::vector<int>& route(int from, int to) const {
    return routes_.at(static_cast<std::size_t>(from * n_ + to));
  }
  /// Weight of the cheapest direct path between two traps (infinity if none).
  double hop(int a, int b) const { return hop_[static_cast<std::size_t>(a * n_ + b)]; }
  const std::vector<int>& neighbours(int trap) const { return neighbours_.at(static_cast<std::size_t>(trap)); }

 private:
  int n_ = 0;
  std::vector<double> hop_;
  std::vector<std::vector<int>> neighbours_;
  std::vector<std::vector<int>> routes_;
};

/// Read-only view of a machine state with one interchange (u, v) applied.
/// Only the touched traps are re-derived.
class SwappedView {
 public:
  SwappedView(const MachineState& base, int u, int v) : base_(&base), u_(u), v_(v) {
    const auto& g = base.graph();
    trap_u_ = g.trap_of(u);
    trap_v_ = g.trap_of(v);
    gap_u_ = scan_gap(trap_u_);
    gap_v_ = trap_v_ == trap_u_ ? gap_u_ : scan_gap(trap_v_);
    full_ = base.full_trap_count();
    full_ -= base.space_count(trap_u_) == 0 ? 1 : 0;
    full_ += gap_u_ < 0 ? 1 : 0;
    if (trap_v_ != trap_u_) {
      full_ -= base.space_count(trap_v_) == 0 ? 1 : 0;
      full_ += gap_v_ < 0 ? 1 : 0;
    }
  }

  const DeviceGraph& graph() const { return base_->graph(); }
  int content(int node) const {
    if (node == u_) return base_->content(v_);
    if (node == v_) return base_->content(u_);
    return base_->content(node);
  }
  int slot_of(QubitId q) const {
    int s = base_->slot_of(q);
    if (s == u_) return v_;
    if (s == v_) return u_;
    return s;
  }
  int space_gap(int trap) const {
    if (trap == trap_u_) return gap_u_;
    if (trap == trap_v_) return gap_v_;
    return base_->space_gap(trap);
  }
  int full_trap_count() const noexcept { return full_; }

 private:
  int scan_gap(int trap) const {
    const auto& g = base_->graph();
    const int cap = g.capacity(trap);
    int best = -1;
    for (int p = 0; p < cap; ++p) {
      if (content(g.node_of(trap, p)) == kSpace) {
        int gap = std::min(p, cap - 1 - p);
        if (best < 0 || gap < best) best = gap;
      }
    }
    return best;
  }

  const MachineState* base_;
  int u_, v_;
  int trap_u_ = -1, trap_v_ = -1;
  int gap_u_ = -1, gap_v_ = -1;
  int full_ = 0;
};

/// Static lookup tables shared by every scoring call of one run.
struct ScoringContext {
  const DeviceGraph* graph = nullptr;
  DistanceTable distances;
  TrapRoutes routes;
  SchedulerParams params;
  double no_room_cost = 0;  // entry cost of a full trap none of whose neighbours has room

  ScoringContext(const DeviceGraph& g, const SchedulerParams& p)
      : graph(&g), distances(g, p.m), routes(g), params(p) {
    params.validate();
    double worst_hop = 0;
    for (int a = 0; a < g.trap_count(); ++a) {
      for (int b : routes.neighbours(a)) worst_hop = std::max(worst_hop, routes.hop(a, b));
    }
    no_room_cost = 2 * worst_hop * g.trap_count();
  }
};

namespace sched_detail {

inline bool approx_equal(double a, double b) {
  return std::fabs(a - b) <= 1e-9 * std::max(std::fabs(a), std::fabs(b));
}

// Cost for trap t to accept an ion at one of its ends: shift the nearest
// space out, or evict an end ion into the cheapest neighbour with room.
template <class View>
double entry_cost(const View& view, const ScoringContext& ctx, int t) {
  const double inner = ctx.graph->weights().inner_weight;
  const int gap = view.space_gap(t);
  if (gap >= 0) return inner * gap;
  double best = ctx.no_room_cost;
  for (int u : ctx.routes.neighbours(t)) {
    const int g = view.space_gap(u);
    if (g >= 0) best = std::min(best, ctx.routes.hop(t, u) + inner * g);
  }
  return best;
}

// Plan cost of carrying the qubit on `slot` into trap `to`.
template <class View>
double carry_cost(const View& view, const ScoringContext& ctx, int slot, int to) {
  const DeviceGraph& graph = *ctx.graph;
  const auto& s = graph.slot(slot);
  const int cap = graph.capacity(s.trap);
  double cost = graph.weights().inner_weight * std::min(s.position, cap - 1 - s.position);
  int prev = s.trap;
  for (int t : ctx.routes.route(s.trap, to)) {
    cost += ctx.routes.hop(prev, t) + entry_cost(view, ctx, t);
    prev = t;
  }
  return cost;
}

}  // namespace sched_detail

/// Static-graph cost between the operands of a two-qubit gate: the cheapest
/// path with at most m intermediate slots (unbounded if none), plus
/// shuttle_base for every trap without a free slot. Evaluated on `view`
/// (a MachineState or a SwappedView).
template <class View>
double score_gate(const Gate& g, const View& view, const ScoringContext& ctx) {
  if (!g.two_qubit()) throw InvalidArgument("score_gate needs a two-qubit gate");
  const int a = view.slot_of(g.qubits[0]);
  const int b = view.slot_of(g.qubits[1]);
  if (a < 0 || b < 0) throw InvalidArgument("score_gate on an unplaced qubit");
  return ctx.distances.distance(a, b) + ctx.graph->weights().shuttle_base * view.full_trap_count();
}

/// Plan cost of making a two-qubit gate executable: zero when co-trapped,
/// else the cheaper direction of carrying one operand into the other's trap,
/// plus half an inner weight per full trap as a tie-breaker against filling
/// traps.
template <class View>
double transport_cost(const Gate& g, const View& view, const ScoringContext& ctx) {
  if (!g.two_qubit()) throw InvalidArgument("transport_cost needs a two-qubit gate");
  const int a = view.slot_of(g.qubits[0]);
  const int b = view.slot_of(g.qubits[1]);
  if (a < 0 || b < 0) throw InvalidArgument("transport_cost on an unplaced qubit");
  const DeviceGraph& graph = *ctx.graph;
  const int ta = graph.trap_of(a), tb = graph.trap_of(b);
  if (ta == tb) return 0;
  const double carry = std::min(sched_detail::carry_cost(view, ctx, a, tb),
                                sched_detail::carry_cost(view, ctx, b, ta));
  return carry + 0.5 * graph.weights().inner_weight * view.full_trap_count();
}

template <class View>
double gate_cost(const Gate& g, const View& view, const ScoringContext& ctx) {
  return ctx.params.cost_model == GateCostModel::Transport ? transport_cost(g, view, ctx)
                                                           : score_gate(g, view, ctx);
}

/// Every edge that is currently a valid generic swap, as edge indices.
inline std::vector<int> candidates(const MachineState& state, const DeviceGraph& graph) {
  std::vector<int> out;
  const auto occupancy = state.occupancy();
  for (std::size_t i = 0; i < graph.edges().size(); ++i) {
    const auto& e = graph.edges()[i];
    auto kind = classify_edge(graph, e.u, e.v, occupancy);
    if (kind == SwapKind::QubitSwap || kind == SwapKind::SpaceShift || kind == SwapKind::Shuttle) {
      out.push_back(static_cast<int>(i));
    }
  }
  return out;
}

/// H for one candidate edge over the blocked frontier gates. Does not modify
/// `state`.
inline double heuristic_h(int edge, const MachineState& state, const Circuit& circuit,
                          std::span<const GateId> frontier, const ScoringContext& ctx,
                          const DecayTable& decay, long iteration) {
  const auto& e = ctx.graph->edge(edge);
  SwappedView view(state, e.u, e.v);
  double best = std::numeric_limits<double>::infinity();
  for (GateId gid : frontier) {
    const Gate& g = circuit[gid];
    if (!g.two_qubit()) continue;
    best = std::min(best, decay.factor(g, iteration, ctx.params.delta) * gate_cost(g, view, ctx));
  }
  if (std::isinf(best)) best = 0;
  return best + e.weight;
}

/// Bare occupancy array with the queries the cost models need.
class OccupancyView {
 public:
  OccupancyView(const DeviceGraph& graph, std::vector<int> content, int n_qubits)
      : graph_(&graph), content_(std::move(content)), slot_of_(static_cast<std::size_t>(n_qubits), -1),
        gap_(static_cast<std::size_t>(graph.trap_count()), -1) {
    for (std::size_t n = 0; n < content_.size(); ++n) {
      if (content_[n] != kSpace) slot_of_[static_cast<std::size_t>(content_[n])] = static_cast<int>(n);
    }
    for (int t = 0; t < graph.trap_count(); ++t) {
      const int cap = graph.capacity(t);
      int& best = gap_[static_cast<std::size_t>(t)];
      for (int p = 0; p < cap; ++p) {
        if (content_[static_cast<std::size_t>(graph.node_of(t, p))] == kSpace) {
          const int gap = std::min(p, cap - 1 - p);
          if (best < 0 || gap < best) best = gap;
        }
      }
      full_ += best < 0 ? 1 : 0;
    }
  }

  const DeviceGraph& graph() const { return *graph_; }
  int content(int node) const { return content_[static_cast<std::size_t>(node)]; }
  int slot_of(QubitId q) const { return slot_of_[static_cast<std::size_t>(q)]; }
  int space_gap(int trap) const { return gap_[static_cast<std::size_t>(trap)]; }
  int full_trap_count() const noexcept { return full_; }
  const std::vector<int>& occupancy() const noexcept { return content_; }

 private:
  const DeviceGraph* graph_;
  std::vector<int> content_;
  std::vector<int> slot_of_;
  std::vector<int> gap_;
  int full_ = 0;
};

/// Budgeted best-first search for a generic-swap sequence after which at
/// least one of `blocked` is executable, guided by the transport cost. Used
/// when no single move improves on a no-op. Empty if the budget runs out.
inline std::vector<int> escape_search(const MachineState& state, const Circuit& circuit,
                                      std::span<const GateId> blocked, const ScoringContext& ctx,
                                      long budget) {
  const DeviceGraph& graph = *ctx.graph;
  const double unit = graph.weights().inner_weight / 1024.0;
  auto quantize = [&](double w) { return std::llround(w / unit); };
  std::vector<const Gate*> gates;
  for (GateId gid : blocked) {
    if (circuit[gid].two_qubit()) gates.push_back(&circuit[gid]);
  }
  if (gates.empty()) return {};

  struct Node {
    std::vector<int> occupancy;
    long long g = 0;
    int parent = -1;
    int edge = -1;
  };
  std::vector<Node> nodes;
  std::map<std::vector<int>, long long> best_g;
  using Item = std::tuple<long long, long long, int>;  // f, g, node
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;

  auto estimate = [&](const OccupancyView& view, bool& goal) {
    double h = std::numeric_limits<double>::infinity();
    goal = false;
    for (const Gate* g : gates) {
      const double c = transport_cost(*g, view, ctx);
      if (graph.trap_of(view.slot_of(g->qubits[0])) == graph.trap_of(view.slot_of(g->qubits[1]))) goal = true;
      h = std::min(h, c);
    }
    return quantize(h);
  };

  std::vector<int> start(state.occupancy().begin(), state.occupancy().end());
  nodes.push_back({start, 0, -1, -1});
  best_g[start] = 0;
  {
    bool goal = false;
    open.emplace(estimate(OccupancyView(graph, start, state.n_qubits()), goal), 0, 0);
  }
  int found = -1;
  for (long expanded = 0; !open.empty() && expanded < budget; ++expanded) {
    auto [f, g, ni] = open.top();
    open.pop();
    if (g > best_g[nodes[static_cast<std::size_t>(ni)].occupancy]) continue;
    const std::vector<int> occ = nodes[static_cast<std::size_t>(ni)].occupancy;
    for (std::size_t ei = 0; ei < graph.edges().size(); ++ei) {
      const auto& e = graph.edges()[ei];
      const SwapKind kind = classify_edge(graph, e.u, e.v, occ);
      if (kind != SwapKind::QubitSwap && kind != SwapKind::SpaceShift && kind != SwapKind::Shuttle) continue;
      std::vector<int> next = occ;
      std::swap(next[static_cast<std::size_t>(e.u)], next[static_cast<std::size_t>(e.v)]);
      const long long ng = g + quantize(e.weight);
      auto it = best_g.find(next);
      if (it != best_g.end() && it->second <= ng) continue;
      OccupancyView view(graph, next, state.n_qubits());
      bool goal = false;
      const long long h = estimate(view, goal);
      best_g[next] = ng;
      nodes.push_back({std::move(next), ng, ni, static_cast<int>(ei)});
      const int id = static_cast<int>(nodes.size()) - 1;
      if (goal) {
        found = id;
        break;
      }
      open.emplace(ng + h, ng, id);
    }
    if (found >= 0) break;
  }
  std::vector<int> path;
  for (int i = found; i > 0; i = nodes[static_cast<std::size_t>(i)].parent) {
    path.push_back(nodes[static_cast<std::size_t>(i)].edge);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

inline bool executable(const Gate& g, const MachineState& state) {
  if (!g.two_qubit()) return true;
  return state.trap_of(g.qubits[0]) == state.trap_of(g.qubits[1]);
}

class Scheduler {
 public:
  Scheduler(const Circuit& circuit, const DeviceGraph& graph, SchedulerParams params = {})
      : circuit_(&circuit), graph_(&graph), ctx_(graph, params) {}

  const ScoringContext& context() const noexcept { return ctx_; }

  Schedule run(MachineState state) const {
    const Circuit& circuit = *circuit_;
    const DeviceGraph& graph = *graph_;
    const SchedulerParams& params = ctx_.params;
    if (&state.graph() != &graph) throw InvalidArgument("state was built on a different device graph");
    if (state.n_qubits() != circuit.n_qubits()) {
      throw InvalidArgument("state holds " + std::to_string(state.n_qubits()) +
                            " qubits, circuit needs " + std::to_string(circuit.n_qubits()));
    }
    for (QubitId q = 0; q < circuit.n_qubits(); ++q) {
      if (!state.placed(q)) throw InvalidArgument("qubit " + std::to_string(q) + " is not placed");
    }
    int free_slots = 0;
    for (int t = 0; t < graph.trap_count(); ++t) free_slots += state.space_count(t);

    DepGraph dag(circuit);
    ScheduleRecorder recorder(graph);
    DecayTable decay(circuit.n_qubits(), params.decay_reset_window);
    std::vector<GateId> blocked;
    long iteration = 0;
    long stalled = 0;
    int last_edge = -1;

    while (!dag.done()) {
      ++iteration;
      bool executed = false;
      for (bool progress = true; progress;) {
        progress = false;
        blocked.clear();
        const std::vector<GateId> ready(dag.frontier().begin(), dag.frontier().end());
        for (GateId gid : ready) {
          const Gate& g = circuit[gid];
          if (executable(g, state)) {
            recorder.gate(state, g);
            dag.pop(gid);
            progress = executed = true;
          } else {
            blocked.push_back(gid);
          }
        }
      }
      if (executed) {
        stalled = 0;
        continue;
      }
      if (free_slots == 0) {
        throw ScheduleError("no free slot on the device; cannot shuttle for " + describe(blocked));
      }
      if (++stalled > params.iteration_cap_per_gate) {
        throw ScheduleError("iteration cap exceeded; stuck frontier " + describe(blocked));
      }

      decay.expire(iteration);
      int best = -1;
      double best_h = 0;
      for (int c : candidates(state, graph)) {
        const double h = heuristic_h(c, state, circuit, blocked, ctx_, decay, iteration);
        if (best < 0 || better(h, c, best_h, best, last_edge)) {
          best = c;
          best_h = h;
        }
      }
      if (best < 0) throw ScheduleError("no generic swap available for " + describe(blocked));

      auto apply = [&](int edge) {
        const auto& e = graph.edge(edge);
        SwapRecord rec = state.apply_generic_swap(e.u, e.v, params.heat);
        recorder.swap(state, rec);
        for (QubitId q : rec.moved) {
          if (q >= 0) decay.touch(q, iteration);
        }
        last_edge = edge;
      };
      if (stuck(best_h, state, blocked, decay, iteration)) {
        const auto path = escape_search(state, circuit, blocked, ctx_, params.escape_budget);
        if (!path.empty()) {
          for (std::size_t i = 0; i < path.size(); ++i) {
            if (i > 0) ++iteration;
            apply(path[i]);
          }
          continue;
        }
      }
      apply(best);
    }
    return recorder.take();
  }

 private:
  // Lower H wins; near-equal H prefers not undoing the previous swap, then
  // the lowest (u, v).
  bool better(double h, int edge, double best_h, int best, int last_edge) const {
    if (!sched_detail::approx_equal(h, best_h)) return h < best_h;
    const bool undo = edge == last_edge, best_undo = best == last_edge;
    if (undo != best_undo) return !undo;
    const auto& a = graph_->edge(edge);
    const auto& b = graph_->edge(best);
    return std::pair(a.u, a.v) < std::pair(b.u, b.v);
  }

  // True when the best move is no better than a unit-distance no-op swap,
  // i.e. greedy selection cannot make progress on its own.
  bool stuck(double best_h, const MachineState& state, std::span<const GateId> blocked, const DecayTable& decay,
             long iteration) const {
    if (ctx_.params.cost_model != GateCostModel::Transport || ctx_.params.escape_budget == 0) return false;
    double current = std::numeric_limits<double>::infinity();
    for (GateId gid : blocked) {
      const Gate& g = (*circuit_)[gid];
      if (!g.two_qubit()) continue;
      current = std::min(current, decay.factor(g, iteration, ctx_.params.delta) * transport_cost(g, state, ctx_));
    }
    if (std::isinf(current)) return false;
    const double noop = current + graph_->weights().inner_weight;
    return best_h > noop || sched_detail::approx_equal(best_h, noop);
  }

  std::string describe(const std::vector<GateId>& gates) const {
    std::ostringstream out;
    out << '{';
    for (std::size_t i = 0; i < gates.size(); ++i) {
      const Gate& g = (*circuit_)[gates[i]];
      out << (i ? ", " : "") << 'g' << g.id << '(' << g.label << " q" << g.qubits[0];
      if (g.two_qubit()) out << ",q" << g.qubits[1];
      out << ')';
    }
    out << '}';
    return out.str();
  }

  const Circuit* circuit_;
  const DeviceGraph* graph_;
  ScoringContext ctx_;
};

inline Schedule schedule(const Circuit& circuit, const DeviceGraph& graph, const MachineState& initial,
                         const SchedulerParams& params = {}) {
  return Scheduler(circuit, graph, params).run(initial);
}

}  // namespace qccd
