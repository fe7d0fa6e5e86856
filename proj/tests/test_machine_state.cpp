#include <gtest/gtest.h>

#include <random>

#include "qccd/machine_state.hpp"
#include "qccd/topology.hpp"

using namespace qccd;

namespace {

std::vector<int> valid_swaps(const MachineState& s) {
  std::vector<int> out;
  const auto& g = s.graph();
  for (std::size_t i = 0; i < g.edges().size(); ++i) {
    const auto& e = g.edges()[i];
    const auto k = s.classify(e.u, e.v);
    if (k == SwapKind::QubitSwap || k == SwapKind::SpaceShift || k == SwapKind::Shuttle) {
      out.push_back(static_cast<int>(i));
    }
  }
  return out;
}

}  // namespace

TEST(MachineState, QubitSwapExchangesMapping) {
  DeviceGraph g(make_linear(2, 3));
  auto s = MachineState::from_mapping(g, std::vector<int>{0, 1});
  const double before = s.nbar(0);
  auto rec = s.apply_generic_swap(0, 1);
  EXPECT_EQ(rec.kind, SwapKind::QubitSwap);
  EXPECT_EQ(s.slot_of(0), 1);
  EXPECT_EQ(s.slot_of(1), 0);
  EXPECT_EQ(s.nbar(0), before);
  EXPECT_TRUE(s.consistent());
}

TEST(MachineState, ShuttleHeatsDestination) {
  Topology t;
  t.traps = {{0, 2}, {1, 2}};
  t.junctions = {{0, 2}};
  t.paths = {{0, 1, 2, {0}}};
  DeviceGraph g(t);
  auto s = MachineState::from_mapping(g, std::vector<int>{1});
  EXPECT_EQ(s.chain_length(1), 0);
  auto rec = s.apply_generic_swap(1, 2);
  EXPECT_EQ(rec.kind, SwapKind::Shuttle);
  EXPECT_EQ(rec.source_trap, 0);
  EXPECT_EQ(rec.trap, 1);
  EXPECT_EQ(rec.segments, 2);
  EXPECT_EQ(rec.junctions, std::vector<int>{0});
  EXPECT_DOUBLE_EQ(s.nbar(1), 0.1 + 0.01 * 2);
  EXPECT_DOUBLE_EQ(s.nbar(0), 0.0);
  EXPECT_EQ(s.chain_length(1), 1);
  EXPECT_EQ(s.chain_length(0), 0);

  auto split = MachineState::from_mapping(g, std::vector<int>{1});
  split.apply_generic_swap(1, 2, HeatParams{0.1, 0.01, 0.25});
  EXPECT_DOUBLE_EQ(split.nbar(1), 0.025 + 0.02);
  EXPECT_DOUBLE_EQ(split.nbar(0), 0.075);
}

TEST(MachineState, SpaceShift) {
  DeviceGraph g(make_linear(2, 3));
  auto s = MachineState::from_mapping(g, std::vector<int>{0});
  auto rec = s.apply_generic_swap(0, 1);
  EXPECT_EQ(rec.kind, SwapKind::SpaceShift);
  EXPECT_EQ(s.slot_of(0), 1);
  EXPECT_EQ(s.content(0), kSpace);
  EXPECT_TRUE(s.spaces(0).count(0));
  EXPECT_FALSE(s.spaces(0).count(1));
}

TEST(MachineState, InvalidInterchangeThrows) {
  DeviceGraph g(make_linear(2, 4));
  auto s = MachineState::from_mapping(g, std::vector<int>{0});
  EXPECT_THROW(s.apply_generic_swap(0, 2), InvalidArgument);  // space two slots away
  EXPECT_THROW(s.apply_generic_swap(1, 2), InvalidArgument);  // space to space
}

TEST(MachineState, ChainLengthAndIonDistance) {
  DeviceGraph g(make_linear(2, 4));
  // trap 0: q0 _ q1 q2
  auto s = MachineState::from_mapping(g, std::vector<int>{0, 2, 3});
  EXPECT_EQ(s.chain_length(0), 3);
  EXPECT_EQ(s.chain_length(1), 0);
  EXPECT_EQ(s.ion_distance(0, 2), 1);
  EXPECT_EQ(s.ion_distance(1, 2), 0);
  EXPECT_EQ(s.ion_distance(0, 1), 0);
  auto t = MachineState::from_mapping(g, std::vector<int>{0, 1, 2, 4});
  EXPECT_EQ(t.ion_distance(0, 2), 1);
  EXPECT_THROW(t.ion_distance(0, 3), InvalidArgument);
}

TEST(MachineState, SpaceGapAndFullTraps) {
  DeviceGraph g(make_linear(2, 3));
  auto s = MachineState::from_mapping(g, std::vector<int>{0, 2, 3, 4, 5});
  EXPECT_EQ(s.space_gap(0), 1);
  EXPECT_EQ(s.space_gap(1), -1);
  EXPECT_EQ(s.full_trap_count(), 1);
}

TEST(MachineState, PlacementErrors) {
  DeviceGraph g(make_linear(2, 2));
  MachineState s(g, 2);
  s.place(0, 0);
  EXPECT_THROW(s.place(1, 0), InvalidArgument);
  EXPECT_THROW(s.place(0, 1), InvalidArgument);
  EXPECT_THROW(s.place(1, 9), InvalidArgument);
  EXPECT_THROW(s.trap_of(1), InvalidArgument);
}

TEST(MachineState, RandomWalkKeepsInvariants) {
  for (const char* spec : {"G2x2:3", "S3:3", "L3:4"}) {
    DeviceGraph g(parse_topology_spec(spec));
    std::mt19937_64 rng(11);
    const int n = g.node_count() - 3;
    std::vector<int> slots(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) slots[static_cast<std::size_t>(q)] = q;
    auto s = MachineState::from_mapping(g, slots);
    for (int step = 0; step < 500; ++step) {
      auto cand = valid_swaps(s);
      ASSERT_FALSE(cand.empty());
      const auto& e = g.edge(cand[rng() % cand.size()]);
      const auto heat = s.heat();
      const auto kind = s.classify(e.u, e.v);
      const std::vector<int> occ(s.occupancy().begin(), s.occupancy().end());
      s.apply_generic_swap(e.u, e.v);
      ASSERT_TRUE(s.consistent()) << spec;
      int placed = 0;
      for (int q = 0; q < n; ++q) placed += s.placed(q) ? 1 : 0;
      ASSERT_EQ(placed, n);
      for (int t = 0; t < g.trap_count(); ++t) {
        ASSERT_GE(s.nbar(t), heat[static_cast<std::size_t>(t)]);
        ASSERT_LE(s.chain_length(t), g.capacity(t));
      }
      if (kind != SwapKind::Shuttle) {
        // Involution on placement.
        MachineState back = s;
        back.apply_generic_swap(e.u, e.v);
        EXPECT_TRUE(std::equal(occ.begin(), occ.end(), back.occupancy().begin()));
      }
    }
  }
}

TEST(MachineState, SnapshotShape) {
  DeviceGraph g(make_linear(2, 2));
  auto s = MachineState::from_mapping(g, std::vector<int>{1, 2});
  auto j = s.snapshot();
  EXPECT_EQ(j["mapping"], nlohmann::json({1, 2}));
  EXPECT_EQ(j["traps"][0]["slots"], nlohmann::json({-1, 0}));
  EXPECT_EQ(j["traps"][1]["slots"], nlohmann::json({1, -1}));
}
