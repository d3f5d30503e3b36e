#include "issnet/gain_graph.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "issnet/small_gain.hpp"

namespace issnet {
namespace {

GainGraph chain(std::size_t nodes, double w) {
  std::vector<GraphEdge> edges;
  for (std::size_t i = 0; i + 1 < nodes; ++i) edges.push_back({i, i + 1, w});
  return GainGraph(nodes, edges);
}

GainGraph random_graph(std::mt19937_64& rng, std::size_t nodes, double density, double wmax) {
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<GraphEdge> edges;
  for (std::size_t i = 0; i < nodes; ++i)
    for (std::size_t j = 0; j < nodes; ++j)
      if (u(rng) < density) edges.push_back({i, j, wmax * (0.05 + 0.95 * u(rng))});
  return GainGraph(nodes, edges);
}

GainOperator banded(AggregationSpec agg) {
  GainRow even({{-1, 0.2}, {1, 0.3}, {2, 0.1}}, agg);
  GainRow odd({{1, 0.25}, {2, 0.15}}, agg);
  return GainOperator::periodic({}, {even, odd});
}

TEST(BuildGraph, Examples) {
  const auto g = build_graph(GainOperator::from_matrix({{0, 0.5}, {0.5, 0}}, AggregationSpec::sum()));
  EXPECT_EQ(g.node_count(), 2u);
  const std::vector<GraphEdge> expect{{0, 1, 0.5}, {1, 0, 0.5}};
  EXPECT_EQ(g.edges(), expect);

  EXPECT_TRUE(build_graph(GainOperator::finite({GainRow(), GainRow()})).edges().empty());
}

TEST(BuildGraph, PeriodicWindowShowsEveryPatternTwice) {
  const auto g = build_graph(banded(AggregationSpec::sum()));
  EXPECT_TRUE(g.is_periodic());
  EXPECT_GE(g.node_count(), 2u * (2 + 2));
  std::size_t back = 0, fwd_even = 0;
  for (const auto& e : g.edges()) {
    if (e.to + 1 == e.from) ++back;
    if (e.from % 2 == 0 && e.to == e.from + 1) ++fwd_even;
  }
  EXPECT_GE(back, 2u);
  EXPECT_GE(fwd_even, 2u);
  // no edge into index -1
  for (const auto& e : g.edges()) EXPECT_FALSE(e.from == 0 && e.weight == 0.2);
}

TEST(MaxPathProduct, Examples) {
  EXPECT_DOUBLE_EQ(max_path_product(chain(9, 0.9), 7), std::pow(0.9, 7));
  EXPECT_DOUBLE_EQ(max_path_product(GainGraph(2, {{0, 1, 1.2}, {1, 0, 0.5}}), 2), 0.6);
  EXPECT_EQ(max_path_product(GainGraph(3, {}), 1), 0.0);
  EXPECT_EQ(max_path_product(chain(3, 0.9), 3), 0.0);  // no walk of length 3
}

TEST(SumPathProducts, Examples) {
  EXPECT_DOUBLE_EQ(sum_path_products(GainGraph(5, {{0, 1, 0.2}, {0, 2, 0.2}, {0, 3, 0.2}, {0, 4, 0.2}}), 1), 0.8);
  EXPECT_DOUBLE_EQ(sum_path_products(GainGraph(2, {{0, 1, 0.5}, {1, 0, 0.5}}), 3), 0.125);
  EXPECT_EQ(sum_path_products(GainGraph(4, {}), 2), 0.0);
}

TEST(WalkOracle, Examples) {
  EXPECT_DOUBLE_EQ(enumerate_walks_oracle(GainGraph(2, {{0, 1, 0.9}, {1, 0, 0.4}}), 4).max_product, 0.1296);
  const auto loop = enumerate_walks_oracle(GainGraph(1, {{0, 0, 0.7}}), 3);
  EXPECT_DOUBLE_EQ(loop.max_product, 0.343);
  EXPECT_DOUBLE_EQ(loop.per_node_sums[0], 0.343);
}

TEST(WalkOracle, Caps) {
  EXPECT_THROW(enumerate_walks_oracle(chain(11, 0.5), 2), std::length_error);
  EXPECT_THROW(enumerate_walks_oracle(chain(3, 0.5), 9), std::length_error);
}

TEST(WalkOracle, AgreesWithDynamicProgramming) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<std::size_t> nodes(1, 6), len(1, 6);
  for (int t = 0; t < 300; ++t) {
    const auto g = random_graph(rng, nodes(rng), 0.4, 1.5);
    const std::size_t n = len(rng);
    const auto oracle = enumerate_walks_oracle(g, n);
    EXPECT_DOUBLE_EQ(max_path_product(g, n), oracle.max_product);
    EXPECT_NEAR(sum_path_products(g, n), oracle.max_node_sum(), 1e-12 * oracle.max_node_sum());
  }
}

TEST(OperatorIdentity, FiniteOperators) {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 100; ++t) {
    std::vector<std::vector<double>> m(6, std::vector<double>(6));
    for (auto& row : m)
      for (double& x : row) x = u(rng) < 0.5 ? 0.0 : 0.4 * u(rng);
    const auto sum_op = GainOperator::from_matrix(m, AggregationSpec::sum());
    const auto max_op = GainOperator::from_matrix(m, AggregationSpec::max());
    const auto sum_norms = iterate_ones(sum_op, 8).norms;
    const auto max_norms = iterate_ones(max_op, 8).norms;
    for (std::size_t n = 1; n <= 8; ++n) {
      EXPECT_NEAR(sum_path_products(build_graph(sum_op), n), sum_norms[n - 1], 1e-12 * sum_norms[n - 1]);
      EXPECT_NEAR(max_path_product(build_graph(max_op), n), max_norms[n - 1], 1e-12 * max_norms[n - 1]);
    }
  }
}

TEST(OperatorIdentity, PeriodicOperators) {
  for (const auto agg : {AggregationSpec::sum(), AggregationSpec::max()}) {
    const auto op = banded(agg);
    const auto g = build_graph(op);
    const auto norms = iterate_ones(op, 6).norms;
    for (std::size_t n = 1; n <= 6; ++n) {
      const double stat = agg.kind() == AggregationSpec::Kind::Sum ? sum_path_products(g, n) : max_path_product(g, n);
      EXPECT_NEAR(stat, norms[n - 1], 1e-12 * norms[n - 1]) << agg.name() << " n=" << n;
    }
  }
}

TEST(Monotonicity, LoweringAWeightNeverIncreasesStatistics) {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 200; ++t) {
    const auto g = random_graph(rng, 5, 0.5, 1.2);
    if (g.edges().empty()) continue;
    auto edges = g.edges();
    edges[static_cast<std::size_t>(u(rng) * static_cast<double>(edges.size()))].weight *= 0.5;
    const GainGraph lower(g.node_count(), edges);
    for (std::size_t n = 1; n <= 5; ++n) {
      EXPECT_LE(max_path_product(lower, n), max_path_product(g, n));
      EXPECT_LE(sum_path_products(lower, n), sum_path_products(g, n) * (1 + 1e-15));
    }
  }
}

TEST(EdgeList, Format) {
  std::ostringstream os;
  write_edge_list(os, GainGraph(3, {{0, 1, 0.5}, {2, 0, 0.25}}));
  EXPECT_EQ(os.str(), "0 1 0.5\n2 0 0.25\n");
}

TEST(GainGraph, RejectsBadEdges) {
  EXPECT_THROW(GainGraph(2, {{0, 2, 0.5}}), std::invalid_argument);
  EXPECT_THROW(GainGraph(2, {{0, 1, 0.0}}), std::invalid_argument);
}

}  // namespace
}  // namespace issnet
