#pragma once

// Finite truncations of (possibly infinite) networks of ODE subsystems, the
// banded period-2 example family and its gain derivation.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "issnet/gain_operator.hpp"
#include "issnet/lyapunov.hpp"
#include "issnet/small_gain.hpp"
#include "issnet/trajectory.hpp"

namespace issnet {

using SubsystemRhs = std::function<void(std::span<const double> own, std::span<const double> neighbors,
                                        std::span<const double> input, std::span<double> out)>;

struct SubsystemDynamics {
  std::size_t state_dim = 1;
  std::size_t input_dim = 1;
  /// Neighbor j = i + offset; their states are concatenated in this order.
  std::vector<std::int64_t> neighbor_offsets;
  SubsystemRhs rhs;
};

enum class Boundary { ZeroClamp };

class TruncatedNetwork {
 public:
  explicit TruncatedNetwork(std::vector<SubsystemDynamics> nodes, Boundary boundary = Boundary::ZeroClamp);

  std::size_t size() const { return nodes_.size(); }
  const SubsystemDynamics& node(std::size_t i) const { return nodes_[i]; }
  const BlockLayout& layout() const { return layout_; }
  const BlockLayout& input_layout() const { return input_layout_; }
  Boundary boundary() const { return boundary_; }

  /// dx/dt at time t.
  void derivative(double t, std::span<const double> x, const InputSignal& u, std::span<double> out) const;

 private:
  std::vector<SubsystemDynamics> nodes_;
  Boundary boundary_;
  BlockLayout layout_;
  BlockLayout input_layout_;
};

class BlowUpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fixed-step classical RK4 on [0, T] with round(T / dt) steps; the input is
/// held at its value at the start of each step. Throws BlowUpError on the
/// first non-finite state.
Trajectory integrate(const TruncatedNetwork& net, const std::vector<double>& x0, const InputSignal& u, double T,
                     double dt);

/// Terminal states at dt and dt / 2; the sup-norm difference estimates the
/// error of the coarse run.
struct StepHalvingEstimate {
  std::vector<double> coarse;
  std::vector<double> fine;
  double difference = 0.0;
};
StepHalvingEstimate step_halving_error(const TruncatedNetwork& net, const std::vector<double>& x0,
                                       const InputSignal& u, double T, double dt);

/// "t,x1,...,xN" with every stride-th sample (the last sample is always kept).
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, std::size_t stride = 1);

double state_sup_norm(std::span<const double> x, const BlockLayout& layout);

// ---------------------------------------------------------------------------
// Example family: scalar subsystems on the index line. Rows with a back
// neighbour (odd in 1-based numbering, even 0-based) read
//   x_i' = -b_diag x_i + b_back x_{i-1} + g(b_fwd1 x_{i+1}, b_fwd2 x_{i+2}) + b_input u_i
// and the other rows drop the b_back term. g is a sum or a max.

enum class Coupling { Sum, Max };

/// Whether rows without a back neighbour keep the eps share in their decay
/// estimate. Keep gives uniform w (resp. q) across rows; Drop uses
/// b_diag - delta - delta' (resp. b_diag - delta) on those rows.
enum class BackFreeEpsilon { Keep, Drop };

std::string to_string(Coupling c);
std::string to_string(BackFreeEpsilon e);

struct ExampleParams {
  double b_diag = 1.0;
  double b_back = 0.1;
  double b_fwd1 = 0.1;
  double b_fwd2 = 0.1;
  double eps = 0.1;
  double delta = 0.1;
  double delta_prime = 0.1;  // unused by the max coupling, which takes delta' = delta
  Coupling coupling = Coupling::Sum;
  BackFreeEpsilon back_free_epsilon = BackFreeEpsilon::Keep;
  double b_input = 0.25;

  /// Throws std::invalid_argument naming the violated constraint.
  void validate() const;
  /// Copy with b_back, b_fwd1, b_fwd2 multiplied by factor.
  ExampleParams scaled_coupling(double factor) const;
  /// Decay share a_i of a row (w_i for sum, q_i for max).
  double row_rate(bool has_back) const;
};

TruncatedNetwork build_example_network(const ExampleParams& p, std::size_t N);

/// Period-2 gain operator. Row 0 (with back neighbour) has offsets
/// {-1, +1, +2}; row 1 has {+1, +2}. Zero couplings drop their entries.
GainOperator derive_example_gains(const ExampleParams& p);

struct GainProductTerm {
  std::string walk;  // e.g. "j -> j+1 -> j"
  double value = 0.0;
};

struct ExampleSmallGainReport {
  Coupling coupling = Coupling::Sum;
  /// Length-2 walks from a node without a back neighbour, and from one with.
  std::vector<GainProductTerm> back_free_terms;
  std::vector<GainProductTerm> back_terms;
  double back_free_value = 0.0;  // sum (Sum coupling) or max (Max coupling) of the terms
  double back_value = 0.0;
  double worst = 0.0;
  bool pass = false;
  double margin = 0.0;           // 1 - worst
  double operator_norm2 = 0.0;   // ||Gamma^2(1)||, must equal worst
  SmallGainVerdict verdict;      // small_gain_check with the given n_max
  std::string note;
};

class PatternMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Length-2 small-gain conditions of the example for both row types. Throws
/// PatternMismatchError unless `op` has the derive_example_gains layout.
ExampleSmallGainReport check_example_small_gain(const GainOperator& op, std::size_t n_max = 60);

/// Composite Lyapunov data of the example: V_i = x_i^2 / 2, gamma_iu(r) = r^2
/// and decay rate a_i - sqrt(2) b_input. Throws NoCertificateError for an
/// invalid certificate.
CompositeLyapunov example_composite(const ExampleParams& p, const GainOperator& op, const DecayCertificate& cert,
                                    const CompositeOptions& options = {});

struct IssBoundReport {
  std::size_t samples = 0;
  double worst_margin = 0.0;           // min over t of rhs - lhs
  double worst_time = 0.0;
  double worst_relative_margin = 0.0;  // margin / rhs at the worst sample
  bool pass = false;
};

/// psi1(||x(t)||) / s0_max <= max(v(t), gamma(||u||)) where v' = -alpha(v),
/// v(0) = V(x0), is integrated on the trajectory grid.
IssBoundReport iss_bound_check(const Trajectory& traj, const CompositeLyapunov& cl, const InputSignal& u);

}  // namespace issnet
