#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <set>

#include "qccd/device_graph.hpp"
#include "qccd/topology.hpp"

using namespace qccd;

namespace {

// Brute-force reference: cheapest simple path between a and b with at most
// `max_mid` intermediate nodes, by DFS over every simple path.
double simple_path_min(const DeviceGraph& g, int a, int b, int max_mid) {
  const double inf = std::numeric_limits<double>::infinity();
  double best = a == b ? 0 : inf;
  std::vector<bool> seen(static_cast<std::size_t>(g.node_count()), false);
  std::function<void(int, double, int)> dfs = [&](int u, double cost, int mids) {
    for (int ei : g.incident(u)) {
      const auto& e = g.edge(ei);
      const int v = e.u == u ? e.v : e.u;
      if (seen[static_cast<std::size_t>(v)]) continue;
      if (v == b) {
        best = std::min(best, cost + e.weight);
        continue;
      }
      if (mids == max_mid) continue;
      seen[static_cast<std::size_t>(v)] = true;
      dfs(v, cost + e.weight, mids + 1);
      seen[static_cast<std::size_t>(v)] = false;
    }
  };
  seen[static_cast<std::size_t>(a)] = true;
  if (a != b) dfs(a, 0, 0);
  return best;
}

}  // namespace

TEST(Topology, FamilySizes) {
  Topology g = parse_topology_spec("G2x2:22");
  EXPECT_EQ(g.trap_count(), 4);
  EXPECT_EQ(g.paths.size(), 4u);
  EXPECT_EQ(g.total_capacity(), 88);

  Topology l = parse_topology_spec("L4:22");
  EXPECT_EQ(l.trap_count(), 4);
  ASSERT_EQ(l.paths.size(), 3u);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(l.paths[i].trap_a, i);
    EXPECT_EQ(l.paths[i].trap_b, i + 1);
  }

  Topology s = parse_topology_spec("S4");
  EXPECT_EQ(s.paths.size(), 6u);
  ASSERT_EQ(s.junctions.size(), 1u);
  EXPECT_EQ(s.junctions[0].degree, 4);
  std::set<std::pair<int, int>> pairs;
  for (const auto& p : s.paths) {
    EXPECT_EQ(p.junctions, std::vector<int>{0});
    pairs.insert({std::min(p.trap_a, p.trap_b), std::max(p.trap_a, p.trap_b)});
  }
  EXPECT_EQ(pairs.size(), 6u);
}

TEST(Topology, DefaultCapacities) {
  EXPECT_EQ(parse_topology_spec("G2x2").traps[0].capacity, 22);
  EXPECT_EQ(parse_topology_spec("G2x3").traps[0].capacity, 17);
  EXPECT_EQ(parse_topology_spec("G3x3").traps[0].capacity, 12);
  EXPECT_EQ(parse_topology_spec("L6").traps[0].capacity, 17);
  EXPECT_EQ(parse_topology_spec("G2x3:9", 5).traps[0].capacity, 5);
}

TEST(Topology, GridJunctionDegrees) {
  Topology g = make_grid(3, 3, 4);
  // The centre trap is 4, its four paths cross degree-4 junctions.
  for (const auto& p : g.paths) {
    const int deg = g.junctions[static_cast<std::size_t>(p.junctions[0])].degree;
    if (p.trap_a == 4 || p.trap_b == 4) {
      EXPECT_EQ(deg, 4);
    } else {
      EXPECT_EQ(deg, 3);
    }
  }
}

TEST(Topology, InvalidInputs) {
  EXPECT_THROW(parse_topology_spec("Q4"), InvalidArgument);
  EXPECT_THROW(parse_topology_spec("G2"), InvalidArgument);
  EXPECT_THROW(parse_topology_spec("L1"), InvalidArgument);
  EXPECT_THROW(parse_topology_spec("L4:1"), InvalidArgument);
  Topology t;
  t.traps = {{0, 3}, {1, 3}};
  EXPECT_THROW(t.validate(), InvalidArgument);  // disconnected
  t.paths = {{0, 0, 1, {}}};
  EXPECT_THROW(t.validate(), InvalidArgument);
}

TEST(Topology, JsonRoundTripAndFamilyForm) {
  Topology g = make_grid(2, 3, 5);
  Topology back = topology_from_json(to_json(g));
  EXPECT_EQ(back.traps, g.traps);
  EXPECT_EQ(back.paths, g.paths);
  EXPECT_EQ(back.junctions, g.junctions);

  auto fam = topology_from_json(nlohmann::json::parse(R"({"family":"G","rows":2,"cols":3,"capacity":17})"));
  EXPECT_EQ(fam.trap_count(), 6);
  EXPECT_EQ(fam.traps[0].capacity, 17);
  EXPECT_THROW(topology_from_json(nlohmann::json::parse(R"({"traps":[{"id":0}],"paths":[]})")), InvalidArgument);
  EXPECT_THROW(topology_from_json(nlohmann::json::parse("[1,2]")), InvalidArgument);
}

TEST(DeviceGraph, WeightLadder) {
  Topology t;
  t.traps = {{0, 3}, {1, 3}, {2, 2}};
  t.junctions = {{0, 3}, {1, 2}};
  t.paths = {{0, 1, 2, {0}}, {1, 2, 3, {0, 1}}};
  DeviceGraph g(t);
  EXPECT_DOUBLE_EQ(g.edge(*g.find_edge(0, 1)).weight, 0.001);
  EXPECT_DOUBLE_EQ(g.edge(*g.find_edge(1, 2)).weight, 0.001);
  EXPECT_DOUBLE_EQ(g.edge(*g.find_edge(0, 2)).weight, 0.002);
  EXPECT_DOUBLE_EQ(g.edge(*g.find_edge(2, 3)).weight, 2.0);
  EXPECT_DOUBLE_EQ(g.edge(*g.find_edge(5, 6)).weight, 3.0);
  EXPECT_FALSE(g.find_edge(1, 4).has_value());  // middle slots never shuttle
}

TEST(DeviceGraph, SingleTrapHasNoShuttleEdges) {
  Topology t;
  t.traps = {{0, 4}};
  DeviceGraph g(t);
  EXPECT_EQ(g.node_count(), 4);
  EXPECT_EQ(g.edges().size(), 6u);
  for (const auto& e : g.edges()) EXPECT_EQ(e.kind, EdgeKind::Intra);
}

TEST(DeviceGraph, StructuralInvariants) {
  for (const char* spec : {"L4:22", "G2x2:22", "S4:22", "G2x3:17", "G3x3:12", "L6:17"}) {
    Topology t = parse_topology_spec(spec);
    DeviceGraph g(t);
    EXPECT_EQ(g.node_count(), t.total_capacity()) << spec;
    double max_intra = 0, min_shuttle = std::numeric_limits<double>::infinity();
    std::map<int, int> per_path;
    for (const auto& e : g.edges()) {
      if (e.kind == EdgeKind::Intra) {
        max_intra = std::max(max_intra, e.weight);
        EXPECT_EQ(g.trap_of(e.u), g.trap_of(e.v));
      } else {
        min_shuttle = std::min(min_shuttle, e.weight);
        EXPECT_TRUE(g.is_end_slot(e.u) && g.is_end_slot(e.v)) << spec;
        ++per_path[e.path];
      }
    }
    EXPECT_LT(max_intra, g.weights().threshold) << spec;
    EXPECT_LT(g.weights().threshold, min_shuttle) << spec;
    EXPECT_EQ(per_path.size(), t.paths.size()) << spec;
    for (auto [p, n] : per_path) EXPECT_EQ(n, 4) << spec << " path " << p;
  }
  // 2(r(c-1) + c(r-1)) shuttle edges per end-pair count for a grid: 4 per path.
  Topology g23 = make_grid(2, 3, 17);
  EXPECT_EQ(g23.paths.size(), 7u);
}

TEST(DeviceGraph, WeightOrderingIsEnforced) {
  WeightParams w;
  w.threshold = 0.01;  // below inner * capacity for capacity 22
  EXPECT_THROW(DeviceGraph(parse_topology_spec("G2x2:22"), w), InvalidArgument);
  w = {};
  w.threshold = 1.5;
  EXPECT_THROW(DeviceGraph(parse_topology_spec("G2x2:22"), w), InvalidArgument);
}

TEST(ClassifyEdge, Rules) {
  Topology t = make_linear(2, 4);
  DeviceGraph g(t);
  // trap 0: q0 q1 _ q2 | trap 1: _ q3 _ _
  std::vector<int> occ = {0, 1, kSpace, 2, kSpace, 3, kSpace, kSpace};
  EXPECT_EQ(classify_edge(g, 0, 1, occ), SwapKind::QubitSwap);
  EXPECT_EQ(classify_edge(g, 0, 1, occ, EdgeIntent::Execute), SwapKind::TwoQubitGateSite);
  EXPECT_EQ(classify_edge(g, 1, 2, occ), SwapKind::SpaceShift);
  EXPECT_EQ(classify_edge(g, 0, 2, occ), SwapKind::Invalid);  // distance 2 to a space
  EXPECT_EQ(classify_edge(g, 3, 4, occ), SwapKind::Shuttle);
  EXPECT_EQ(classify_edge(g, 0, 4, occ), SwapKind::Shuttle);
  EXPECT_EQ(classify_edge(g, 4, 7, occ), SwapKind::Invalid);  // space to space
  std::vector<int> full = {0, 1, 4, 2, 5, 3, 6, 7};
  EXPECT_EQ(classify_edge(g, 3, 4, full), SwapKind::Invalid);  // both qubits across traps
  EXPECT_THROW(classify_edge(g, 1, 5, occ), InvalidArgument);
}

TEST(ClassifyEdge, DeterministicAndTotal) {
  DeviceGraph g(make_star(3, 3));
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int> occ(static_cast<std::size_t>(g.node_count()), kSpace);
    int q = 0;
    for (auto& c : occ) {
      if (rng() % 2) c = q++;
    }
    for (const auto& e : g.edges()) {
      const auto k = classify_edge(g, e.u, e.v, occ);
      EXPECT_EQ(k, classify_edge(g, e.u, e.v, occ));
      EXPECT_EQ(k, classify_edge(g, e.v, e.u, occ));
    }
  }
}

TEST(DistanceTable, MatchesSimplePathEnumeration) {
  for (const char* spec : {"L3:3", "S3:2", "G2x2:2"}) {
    DeviceGraph g(parse_topology_spec(spec));
    for (int m : {0, 1, 2, 3}) {
      DistanceTable d(g, m);
      for (int a = 0; a < g.node_count(); ++a) {
        for (int b = 0; b < g.node_count(); ++b) {
          const double ref = simple_path_min(g, a, b, m);
          if (std::isinf(ref)) {
            EXPECT_TRUE(std::isinf(d.limited(a, b))) << spec << " m=" << m << " " << a << "-" << b;
          } else {
            EXPECT_NEAR(d.limited(a, b), ref, 1e-12) << spec << " m=" << m << " " << a << "-" << b;
          }
          const double full = simple_path_min(g, a, b, g.node_count());
          EXPECT_NEAR(d.unbounded(a, b), full, 1e-12);
          EXPECT_NEAR(d.distance(a, b), std::isinf(ref) ? full : ref, 1e-12);
        }
      }
    }
  }
}

TEST(DistanceTable, CrossTrapExample) {
  DeviceGraph g(make_linear(2, 3));
  DistanceTable d(g, 2);
  // Middle of trap 0 to middle of trap 1: 0.001 + 2 + 0.001.
  EXPECT_NEAR(d.distance(1, 4), 2.002, 1e-12);
  EXPECT_TRUE(std::isinf(DistanceTable(g, 0).limited(1, 4)));
  EXPECT_NEAR(DistanceTable(g, 0).distance(1, 4), 2.002, 1e-12);
}
