#pragma once

// Weighted digraph of a gain matrix and the walk statistics behind the
// path-product (max) and path-sum (sum) small-gain conditions.
//
// Statistics range over walks (index sequences with repetitions allowed),
// which is what the operator-norm identities ||Gamma^n(1)|| require.

#include <cstddef>
#include <optional>
#include <ostream>
#include <vector>

#include "issnet/gain_operator.hpp"

namespace issnet {

struct GraphEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  double weight = 0.0;

  friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
};

class GainGraph {
 public:
  /// Finite graph; edges with nonpositive weight are rejected.
  GainGraph(std::size_t node_count, std::vector<GraphEdge> edges);

  std::size_t node_count() const { return node_count_; }
  const std::vector<GraphEdge>& edges() const { return edges_; }

  /// Periodic graphs keep their generating operator; node_count/edges then
  /// describe a materialized window.
  bool is_periodic() const { return source_.has_value(); }
  const GainOperator& source() const { return *source_; }

 private:
  friend GainGraph build_graph(const GainOperator& op);

  std::size_t node_count_ = 0;
  std::vector<GraphEdge> edges_;
  std::optional<GainOperator> source_;
};

/// Edge (i, j, gamma_ij) for every positive entry. Periodic operators are
/// materialized over prefix + 2 * (period + max |offset|) nodes.
GainGraph build_graph(const GainOperator& op);

/// Window of a periodic operator: first `nodes` indices, edges whose target
/// falls inside the window.
GainGraph materialize_window(const GainOperator& op, std::size_t nodes);

/// sup over walks of length n of the product of edge weights.
double max_path_product(const GainGraph& g, std::size_t n);

/// sup_i of the sum over walks of length n starting at i of the weight
/// products.
double sum_path_products(const GainGraph& g, std::size_t n);

struct WalkStatistics {
  double max_product = 0.0;
  std::vector<double> per_node_sums;
  double max_node_sum() const;
};

/// Explicit enumeration of every walk of length n. Limited to node_cap nodes
/// and n <= 8; throws std::length_error beyond that.
WalkStatistics enumerate_walks_oracle(const GainGraph& g, std::size_t n, std::size_t node_cap = 10);

/// One "from to weight" line per edge.
void write_edge_list(std::ostream& os, const GainGraph& g);

}  // namespace issnet
