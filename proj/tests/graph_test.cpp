#include <gtest/gtest.h>

#include <sstream>

#include "currsim/graph.hpp"
#include "support.hpp"

namespace currsim {
namespace {

using testing::bridged_triangles;
using testing::complete_graph;

void expect_simple_symmetric(const Graph& g) {
  std::size_t half_degrees = 0;
  for (AgentId i = 0; i < g.size(); ++i) {
    const auto nb = g.neighbors(i);
    half_degrees += nb.size();
    EXPECT_TRUE(std::is_sorted(nb.begin(), nb.end()));
    EXPECT_EQ(std::adjacent_find(nb.begin(), nb.end()), nb.end()) << "duplicate neighbour of " << i;
    for (AgentId j : nb) {
      EXPECT_NE(i, j) << "self-loop";
      const auto back = g.neighbors(j);
      EXPECT_TRUE(std::binary_search(back.begin(), back.end(), i)) << i << "-" << j << " not symmetric";
    }
  }
  EXPECT_EQ(half_degrees, 2 * g.edge_count());
}

TEST(GenEr, ZeroDensityIsEmpty) {
  const Graph g = gen_er(4, 0.0, 123);
  EXPECT_EQ(g.size(), 4u);
  EXPECT_EQ(g.edge_count(), 0u);
  EXPECT_FALSE(g.has_communities());
}

TEST(GenEr, FullDensityIsComplete) {
  const Graph g = gen_er(4, 1.0, 99);
  EXPECT_EQ(g.edge_count(), 6u);
  EXPECT_EQ(g, complete_graph(4));
}

TEST(GenEr, RejectsBadArguments) {
  EXPECT_THROW(gen_er(0, 0.5, 1), std::invalid_argument);
  EXPECT_THROW(gen_er(10, -0.1, 1), std::invalid_argument);
  EXPECT_THROW(gen_er(10, 1.5, 1), std::invalid_argument);
}

TEST(GenEr, SingleAgent) {
  const Graph g = gen_er(1, 1.0, 5);
  EXPECT_EQ(g.size(), 1u);
  EXPECT_EQ(g.edge_count(), 0u);
}

TEST(GenEr, DeterministicPerSeed) {
  EXPECT_EQ(gen_er(60, 0.1, 7), gen_er(60, 0.1, 7));
  EXPECT_NE(gen_er(60, 0.1, 7), gen_er(60, 0.1, 8));
}

TEST(GenEr, InvariantsHoldAcrossSeeds) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    expect_simple_symmetric(gen_er(40, 0.2, seed));
    expect_simple_symmetric(gen_two_community(41, 0.4, 0.1, seed));
  }
}

// C(100,2) Bernoulli(0.05) trials: mean 247.5, variance 4950 * 0.05 * 0.95.
TEST(GenEr, MeanEdgeCountMatchesBinomial) {
  constexpr int runs = 1000;
  double sum = 0.0;
  for (int s = 0; s < runs; ++s) sum += static_cast<double>(gen_er(100, 0.05, 10'000 + s).edge_count());
  const double sigma = std::sqrt(4950.0 * 0.05 * 0.95);
  EXPECT_NEAR(sum / runs, 247.5, 3.0 * sigma / std::sqrt(runs));
}

TEST(GenTwoCommunity, BlockLabels) {
  const Graph g = gen_two_community(7, 0.5, 0.5, 3);
  ASSERT_TRUE(g.has_communities());
  const std::vector<int> expected{0, 0, 0, 0, 1, 1, 1};
  for (AgentId i = 0; i < 7; ++i) EXPECT_EQ(g.community(i), expected[i]);
}

TEST(GenTwoCommunity, NoCrossEdgesWithoutInterLinks) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Graph g = gen_two_community(10, 0.5, 0.0, seed);
    for (auto [i, j] : g.edges()) EXPECT_EQ(g.community(i), g.community(j));
  }
}

TEST(GenTwoCommunity, RejectsBadArguments) {
  EXPECT_THROW(gen_two_community(1, 0.5, 0.1, 1), std::invalid_argument);
  EXPECT_THROW(gen_two_community(10, 1.2, 0.1, 1), std::invalid_argument);
  EXPECT_THROW(gen_two_community(10, 0.3, -0.5, 1), std::invalid_argument);
}

// Intra pairs: 2 * C(50,2) = 2450 at 0.3 -> 735. Cross pairs: 2500 at 0.1 -> 250.
TEST(GenTwoCommunity, MeanEdgeCountsPerPairClass) {
  constexpr int runs = 1000;
  double intra = 0.0;
  double inter = 0.0;
  for (int s = 0; s < runs; ++s) {
    const Graph g = gen_two_community(100, 0.3, 0.1, 50'000 + s);
    for (auto [i, j] : g.edges()) (g.community(i) == g.community(j) ? intra : inter) += 1.0;
  }
  EXPECT_NEAR(intra / runs, 735.0, 3.0 * std::sqrt(2450.0 * 0.3 * 0.7 / runs));
  EXPECT_NEAR(inter / runs, 250.0, 3.0 * std::sqrt(2500.0 * 0.1 * 0.9 / runs));
}

TEST(GenTwoCommunity, EqualProbabilitiesMatchErdosRenyi) {
  constexpr int runs = 1000;
  std::vector<double> two;
  std::vector<double> er;
  for (int s = 0; s < runs; ++s) {
    two.push_back(static_cast<double>(gen_two_community(100, 0.08, 0.08, 1'000 + s).edge_count()));
    er.push_back(static_cast<double>(gen_er(100, 0.08, 900'000 + s).edge_count()));
  }
  EXPECT_LT(testing::ks_statistic(two, er), testing::ks_critical_01(runs, runs));
  const auto a = testing::moments(two);
  const auto b = testing::moments(er);
  const double z = (a.mean - b.mean) / std::sqrt(a.se() * a.se() + b.se() * b.se());
  EXPECT_LT(std::abs(z), testing::kZTwoSided01);
}

TEST(FromEdges, RejectsMalformedInput) {
  const std::vector<Edge> loop{{1, 1}};
  const std::vector<Edge> dup{{0, 1}, {1, 0}};
  const std::vector<Edge> range{{0, 5}};
  EXPECT_THROW(Graph::from_edges(3, loop), std::invalid_argument);
  EXPECT_THROW(Graph::from_edges(3, dup), std::invalid_argument);
  EXPECT_THROW(Graph::from_edges(3, range), std::invalid_argument);
  EXPECT_THROW(Graph::from_edges(0, {}), std::invalid_argument);
  EXPECT_THROW(Graph::from_edges(4, {}, {0, 1, 1, 1}), std::invalid_argument);
  EXPECT_THROW(Graph::from_edges(3, {}, {0, 2, 1}), std::invalid_argument);
}

TEST(ConnectedComponents, TrivialCases) {
  EXPECT_EQ(connected_components(gen_er(5, 0.0, 1)).count, 5u);
  EXPECT_EQ(connected_components(complete_graph(5)).count, 1u);
  EXPECT_EQ(connected_components(gen_er(30, 1.0, 1)).count, 1u);
  EXPECT_EQ(connected_components(gen_er(30, 0.0, 1)).count, 30u);
}

TEST(ConnectedComponents, TwoTrianglesThenBridge) {
  const std::vector<Edge> tri{{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}};
  const auto split = connected_components(Graph::from_edges(6, tri));
  EXPECT_EQ(split.count, 2u);
  EXPECT_EQ(split.label[0], split.label[2]);
  EXPECT_NE(split.label[0], split.label[3]);
  EXPECT_EQ(connected_components(bridged_triangles()).count, 1u);
}

TEST(MeanDensity, Values) {
  EXPECT_DOUBLE_EQ(mean_density(0.3, 0.3), 0.3);
  EXPECT_DOUBLE_EQ(mean_density(0.3, 0.0), 0.15);
  EXPECT_DOUBLE_EQ(mean_density(0.3, 0.1), 0.2);
}

TEST(EdgeList, RoundTripPreservesGraph) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = seed % 2 ? gen_er(25, 0.2, seed) : gen_two_community(25, 0.3, 0.05, seed);
    std::stringstream buf;
    write_edge_list(buf, g);
    EXPECT_EQ(read_edge_list(buf), g);
  }
}

TEST(EdgeList, ExactLayout) {
  std::stringstream buf;
  write_edge_list(buf, gen_two_community(4, 1.0, 0.0, 1));
  EXPECT_EQ(buf.str(), "n 4\ncommunities 0 0 1 1\n0 1\n2 3\n");
}

TEST(EdgeList, RejectsMalformedFiles) {
  for (const char* text : {"", "x 3\n", "n 3\n0 0\n", "n 3\n1 0\n", "n 3\n0 7\n", "n 3\n0 1 2\n",
                           "n 2\ncommunities 0\n", "n 3\n0 1\n0 1\n", "n 3\n0 1\ncommunities 0 0 1\n"}) {
    std::istringstream in(text);
    EXPECT_THROW(read_edge_list(in), FormatError) << "input: " << text;
  }
}

}  // namespace
}  // namespace currsim
