#pragma once

// Key-value configuration for the command-line front end. Schema:
// docs/config.md.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "issnet/gain_operator.hpp"
#include "issnet/network_sim.hpp"

namespace issnet {

/// All schema problems found in one document, each prefixed "line N: ".
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

struct AnalysisOptions {
  std::size_t n_max = 60;
  std::optional<double> lambda;  // default (1 + upper bound) / 2
  double tol = 1e-9;             // certificate residual tolerance
  std::size_t k_max = 100000;    // synthesis series cap
  double tail_tol = 1e-10;
  std::size_t uges_steps = 50;
  std::size_t decay_steps = 20;  // Gamma^k(s0) <= lambda^k s0 checked for k <= this
  std::size_t graph_depth = 12;  // longest walk length for graph-check
};

struct ExampleConfig {
  ExampleParams params;
  std::vector<std::size_t> sizes{50, 100, 200};
  double horizon = 10.0;
  double dt = 1e-3;
  double input_norm = 1.0;  // constant input for the ISS run; 0 skips it
};

struct ReportConfig {
  std::optional<std::string> directory;  // used when --out is not given
  bool trajectories = true;
  std::size_t stride = 100;
};

struct AnalysisConfig {
  /// From [operator]; form = example leaves this empty and sets operator_from_example.
  std::optional<GainOperator> op;
  bool operator_from_example = false;
  AnalysisOptions analysis;
  std::optional<ExampleConfig> example;
  ReportConfig report;

  /// Operator for analyze/certify/graph-check: [operator], else the example's
  /// derived gains. Throws ConfigError when neither is available.
  GainOperator resolve_operator() const;
};

/// Throws ConfigError listing every problem found.
AnalysisConfig parse_config(const std::string& text);
AnalysisConfig load_config(const std::string& path);

}  // namespace issnet
