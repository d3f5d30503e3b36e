#include "issnet/gain_graph.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace issnet {

GainGraph::GainGraph(std::size_t node_count, std::vector<GraphEdge> edges)
    : node_count_(node_count), edges_(std::move(edges)) {
  for (const GraphEdge& e : edges_) {
    if (e.from >= node_count_ || e.to >= node_count_) throw std::invalid_argument("GainGraph: edge endpoint out of range");
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) throw std::invalid_argument("GainGraph: edge weights must be positive");
  }
}

GainGraph materialize_window(const GainOperator& op, std::size_t nodes) {
  std::vector<GraphEdge> edges;
  for (std::size_t i = 0; i < nodes; ++i) {
    for (const GainEntry& e : op.row(i).entries()) {
      const std::int64_t j = op.column(i, e);
      if (j < 0 || static_cast<std::size_t>(j) >= nodes) continue;
      edges.push_back({i, static_cast<std::size_t>(j), e.weight});
    }
  }
  return GainGraph(nodes, std::move(edges));
}

GainGraph build_graph(const GainOperator& op) {
  if (op.is_finite()) return materialize_window(op, op.dimension());
  const auto reach = static_cast<std::size_t>(std::max(-op.min_offset(), op.max_offset()));
  GainGraph g = materialize_window(op, op.dimension() + 2 * (op.period() + reach));
  g.source_ = op;
  return g;
}

namespace {

enum class Semiring { MaxTimes, SumTimes };

// labels[i] after n rounds = statistic over walks of length n starting at i
std::vector<double> relax(const GainGraph& g, std::size_t n, Semiring ring) {
  std::vector<double> labels(g.node_count(), 1.0), next(g.node_count());
  for (std::size_t round = 0; round < n; ++round) {
    std::fill(next.begin(), next.end(), 0.0);
    for (const GraphEdge& e : g.edges()) {
      const double v = e.weight * labels[e.to];
      if (ring == Semiring::MaxTimes) {
        next[e.from] = std::max(next[e.from], v);
      } else {
        next[e.from] += v;
      }
    }
    labels.swap(next);
  }
  return labels;
}

double sup_over(const std::vector<double>& labels, std::size_t count) {
  double best = 0.0;
  for (std::size_t i = 0; i < std::min(count, labels.size()); ++i) best = std::max(best, labels[i]);
  return best;
}

// For a periodic operator, a walk of length n from i stays inside
// [i - n*back, i + n*fwd]. Starts below prefix + n*back + period cover every
// distinct value of the statistic; the window adds n*fwd nodes of headroom.
double periodic_statistic(const GainOperator& op, std::size_t n, Semiring ring) {
  const auto back = static_cast<std::size_t>(std::max<std::int64_t>(0, -op.min_offset()));
  const auto fwd = static_cast<std::size_t>(std::max<std::int64_t>(0, op.max_offset()));
  const std::size_t starts = op.dimension() + n * back + op.period();
  const std::size_t window = starts + n * fwd;

  const double value = sup_over(relax(materialize_window(op, window), n, ring), starts);
  const double doubled = sup_over(relax(materialize_window(op, 2 * window), n, ring), 2 * starts);
  if (value != doubled) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "periodic walk statistic not window-stable: " << value << " vs " << doubled;
    throw std::logic_error(msg.str());
  }
  return value;
}

double statistic(const GainGraph& g, std::size_t n, Semiring ring) {
  if (n == 0) throw std::invalid_argument("walk length must be >= 1");
  if (g.is_periodic()) return periodic_statistic(g.source(), n, ring);
  return sup_over(relax(g, n, ring), g.node_count());
}

}  // namespace

double max_path_product(const GainGraph& g, std::size_t n) { return statistic(g, n, Semiring::MaxTimes); }

double sum_path_products(const GainGraph& g, std::size_t n) { return statistic(g, n, Semiring::SumTimes); }

double WalkStatistics::max_node_sum() const {
  return per_node_sums.empty() ? 0.0 : *std::max_element(per_node_sums.begin(), per_node_sums.end());
}

WalkStatistics enumerate_walks_oracle(const GainGraph& g, std::size_t n, std::size_t node_cap) {
  if (g.node_count() > node_cap || n > 8) throw std::length_error("enumerate_walks_oracle: graph or walk length exceeds cap");
  if (n == 0) throw std::invalid_argument("enumerate_walks_oracle: walk length must be >= 1");

  std::vector<std::vector<const GraphEdge*>> out(g.node_count());
  for (const GraphEdge& e : g.edges()) out[e.from].push_back(&e);

  WalkStatistics stats;
  stats.per_node_sums.assign(g.node_count(), 0.0);
  std::vector<double> weights;
  weights.reserve(n);

  std::function<void(std::size_t, std::size_t)> walk = [&](std::size_t start, std::size_t at) {
    if (weights.size() == n) {
      double product = 1.0;
      for (double w : weights) product *= w;
      stats.per_node_sums[start] += product;
      stats.max_product = std::max(stats.max_product, product);
      return;
    }
    for (const GraphEdge* e : out[at]) {
      weights.push_back(e->weight);
      walk(start, e->to);
      weights.pop_back();
    }
  };
  for (std::size_t i = 0; i < g.node_count(); ++i) walk(i, i);
  return stats;
}

void write_edge_list(std::ostream& os, const GainGraph& g) {
  const auto old = os.precision(17);
  for (const GraphEdge& e : g.edges()) os << e.from << ' ' << e.to << ' ' << e.weight << '\n';
  os.precision(old);
}

}  // namespace issnet
