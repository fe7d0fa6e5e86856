#include <gtest/gtest.h>

#include <set>

#include "qccd/benchmarks.hpp"
#include "qccd/mapping.hpp"
#include "qccd/topology.hpp"

using namespace qccd;

namespace {

std::vector<int> loads(const std::vector<int>& trap_of, int traps) {
  std::vector<int> out(static_cast<std::size_t>(traps), 0);
  for (int t : trap_of) ++out[static_cast<std::size_t>(t)];
  return out;
}

// Unimodal check on the l values of the qubits of one trap, read left to right.
bool mountain(const std::vector<double>& l) {
  std::size_t i = 1;
  while (i < l.size() && l[i - 1] <= l[i]) ++i;
  while (i < l.size() && l[i - 1] >= l[i]) ++i;
  return i >= l.size();
}

MappingParams with(MappingStrategy s) {
  MappingParams p;
  p.strategy = s;
  return p;
}

}  // namespace

TEST(FirstLevel, GatheringReservesOneSlot) {
  Topology t = make_linear(3, 4);
  EXPECT_EQ(loads(first_level(Circuit(7), t, with(MappingStrategy::Gathering)), 3), (std::vector<int>{3, 3, 1}));
  EXPECT_THROW(first_level(Circuit(10), t, with(MappingStrategy::Gathering)), CapacityError);
}

TEST(FirstLevel, EvenDivided) {
  Topology t = make_grid(2, 2, 5);
  EXPECT_EQ(loads(first_level(Circuit(8), t, with(MappingStrategy::EvenDivided)), 4),
            (std::vector<int>{2, 2, 2, 2}));
  EXPECT_EQ(loads(first_level(Circuit(20), t, with(MappingStrategy::EvenDivided)), 4),
            (std::vector<int>{5, 5, 5, 5}));
  EXPECT_THROW(first_level(Circuit(21), t, with(MappingStrategy::EvenDivided)), CapacityError);
}

TEST(FirstLevel, StaKeepsHubCentral) {
  Circuit c = gen_benchmark(Benchmark::Bv, 8);  // every gate touches qubit 8
  const auto order = mapping_detail::sta_order(c);
  ASSERT_EQ(order.size(), 9u);
  EXPECT_EQ(order[4], 8);
  Topology t = make_linear(3, 4);
  const auto trap_of = first_level(c, t, with(MappingStrategy::Sta));
  EXPECT_EQ(trap_of[8], 1);
}

TEST(FirstLevel, StaGroupsPartners) {
  // Two disjoint cliques on {0,2,4} and {1,3,5}.
  Circuit c(6);
  for (int r = 0; r < 3; ++r) {
    c.add_two_qubit("cx", 0, 2);
    c.add_two_qubit("cx", 2, 4);
    c.add_two_qubit("cx", 1, 3);
    c.add_two_qubit("cx", 3, 5);
  }
  const auto trap_of = first_level(c, make_linear(2, 4), with(MappingStrategy::Sta));
  EXPECT_EQ(trap_of[0], trap_of[2]);
  EXPECT_EQ(trap_of[2], trap_of[4]);
  EXPECT_EQ(trap_of[1], trap_of[3]);
  EXPECT_EQ(trap_of[3], trap_of[5]);
}

TEST(InteractionScores, Counts) {
  Circuit c(5);
  c.add_two_qubit("cx", 0, 2);
  c.add_two_qubit("cx", 0, 3);
  c.add_two_qubit("cx", 0, 4);
  c.add_two_qubit("cx", 0, 1);
  const std::vector<int> trap_of = {0, 0, 1, 1, 1};
  auto s = interaction_scores(c, trap_of, 8);
  EXPECT_EQ(s[0], (InteractionScore{3, 1}));
  EXPECT_EQ(s[2], (InteractionScore{1, 0}));
  // Window of two layers sees only the first two gates.
  auto w = interaction_scores(c, trap_of, 2);
  EXPECT_EQ(w[0], (InteractionScore{2, 0}));
  EXPECT_THROW(interaction_scores(c, trap_of, 0), InvalidArgument);

  auto same = interaction_scores(c, std::vector<int>{0, 0, 0, 0, 0}, 100);
  for (const auto& x : same) EXPECT_EQ(x.external, 0);
}

TEST(SecondLevel, MountainFromScores) {
  DeviceGraph g(make_linear(2, 4));
  const std::vector<int> trap_of = {0, 0, 0, 0};
  const std::vector<InteractionScore> scores = {{0, 5}, {0, 1}, {0, 3}, {0, 0}};
  const auto slots = second_level(g, trap_of, scores, {});
  // Ends hold l=0 (q3) and l=1 (q1); the centre holds 3 and 5.
  EXPECT_EQ(slots, (std::vector<int>{2, 3, 1, 0}));
}

TEST(SecondLevel, FlatScoresKeepIdOrderAndCentreSpaces) {
  DeviceGraph g(make_linear(2, 5));
  const std::vector<int> trap_of = {0, 0, 0};
  const std::vector<InteractionScore> scores(3);
  EXPECT_EQ(second_level(g, trap_of, scores, {}), (std::vector<int>{0, 1, 4}));
  EXPECT_EQ(second_level(g, std::vector<int>{1}, std::vector<InteractionScore>(1), {}), (std::vector<int>{5}));
}

TEST(InitialMapping, ValidForEveryStrategy) {
  for (const char* gen : {"qft:12", "cuccaro_adder:4", "qaoa_chain:16:layers=4", "bv:10"}) {
    Circuit c = gen_benchmark(parse_generator_spec(gen));
    for (const char* topo : {"L4:6", "G2x2:6", "S4:6"}) {
      DeviceGraph g(parse_topology_spec(topo));
      for (auto s : {MappingStrategy::EvenDivided, MappingStrategy::Gathering, MappingStrategy::Sta}) {
        const MappingParams p = with(s);
        const auto slots = initial_mapping(c, g, p);
        ASSERT_EQ(slots, initial_mapping(c, g, p));
        std::set<int> used(slots.begin(), slots.end());
        EXPECT_EQ(used.size(), slots.size()) << gen << " " << topo << " " << to_string(s);
        auto state = MachineState::from_mapping(g, slots);
        EXPECT_TRUE(state.consistent());
        const auto trap_of = first_level(c, g.topology(), p);
        const auto scores = interaction_scores(c, trap_of, p.lookahead_k);
        for (int t = 0; t < g.trap_count(); ++t) {
          if (s != MappingStrategy::EvenDivided && state.chain_length(t) > 0) {
            EXPECT_GE(state.space_count(t), 1);
          }
          std::vector<double> l;
          for (int pos = 0; pos < g.capacity(t); ++pos) {
            const int q = state.content(g.node_of(t, pos));
            if (q != kSpace) l.push_back(location_score(scores[q], p));
          }
          EXPECT_TRUE(mountain(l)) << gen << " " << topo << " trap " << t;
        }
      }
    }
  }
}

TEST(MappingStrategy, Names) {
  EXPECT_EQ(parse_mapping_strategy("even"), MappingStrategy::EvenDivided);
  EXPECT_EQ(parse_mapping_strategy("gather"), MappingStrategy::Gathering);
  EXPECT_EQ(parse_mapping_strategy("sta"), MappingStrategy::Sta);
  EXPECT_THROW(parse_mapping_strategy("random"), InvalidArgument);
}
