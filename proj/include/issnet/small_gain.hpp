#pragma once

// Spectral-radius certificates for gain operators and the discrete-time
// system x(k+1) = Gamma(x(k)) they induce.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "issnet/gain_operator.hpp"
#include "issnet/sequence_space.hpp"

namespace issnet {

using SquareMatrix = std::vector<std::vector<double>>;

/// Iterates of Gamma on the all-ones vector.
///
/// `root_bound` is min_k ||Gamma^k(1)||^(1/k). `ratio_bound` is
/// min over k, m of (max_i x_{k+m,i} / x_{k,i})^(1/m) with x_k = Gamma^k(1);
/// since Gamma^m(x_k) <= c^m x_k implies r(Gamma) <= c for monotone
/// homogeneous operators, both are upper bounds on the spectral radius.
struct SpectralEstimate {
  std::vector<double> norms;          // norms[k-1] = ||Gamma^k(1)||, k = 1..n_max
  std::vector<double> root_sequence;  // norms[k-1]^(1/k)
  double root_bound = 0.0;
  double ratio_bound = 0.0;
  double upper_bound = 0.0;           // min(root_bound, ratio_bound)
  std::optional<std::size_t> certified_n;  // smallest k with norm < 1
};

class OverflowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotInteriorError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NonConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws OverflowError once a norm exceeds 1e100.
SpectralEstimate iterate_ones(const GainOperator& op, std::size_t n_max);

struct SmallGainVerdict {
  enum class Status { Satisfied, Unknown };
  Status status = Status::Unknown;
  std::size_t n = 0;         // meaningful when Satisfied
  double upper_bound = 0.0;  // best available bound on r(Gamma)
  bool satisfied() const { return status == Status::Satisfied; }
};

/// Satisfied(n) when ||Gamma^n(1)|| < 1 for some n <= n_max. Failure is
/// reported as Unknown; the check never claims instability.
SmallGainVerdict small_gain_check(const GainOperator& op, std::size_t n_max);

/// A candidate point of strict decay: Gamma(s0) <= lambda * s0 with s0
/// interior.
struct DecayCertificate {
  LinfVector s0;
  double lambda = 0.0;
  double residual = 0.0;     // sup_i (Gamma(s0)_i - lambda * s0_i)
  double interiority = 0.0;  // inf_i s0_i over the operator's index set
  double tolerance = 0.0;
  double margin = 0.0;       // inf_i y_i of the synthesis seed (0 if verified directly)
  std::size_t terms = 0;     // series terms summed during synthesis
  bool converged = true;

  bool valid() const { return interiority > 0.0 && residual <= tolerance; }
};

/// inf of s0 over the index set of `op`. Finite vectors read as zero past
/// their end, so they are never interior for periodic operators.
double interiority(const GainOperator& op, const LinfVector& s0);

DecayCertificate verify_decay_point(const GainOperator& op, const LinfVector& s0, double lambda, double tol);

/// Partial sums of z = sum_k Gamma^k(y) / lambda^(k+1), stopping before the
/// first term whose sup norm is below `tail_tol`. Throws NotInteriorError if
/// y is not interior and DivergenceError if, past their running peak, a term
/// norm is not below the largest of the previous W terms (or overflows), with
/// W = max(5, dimension + 2 * period).
DecayCertificate synthesize_decay_point(const GainOperator& op, double lambda, const LinfVector& y,
                                        std::size_t k_max, double tail_tol, double tol = 1e-9);

/// lambda = (1 + upper_bound) / 2, y = 1.
DecayCertificate synthesize_from_verdict(const GainOperator& op, const SmallGainVerdict& verdict,
                                         std::size_t k_max = 100000, double tail_tol = 1e-10,
                                         double tol = 1e-9);

/// First k in 1..k_count where Gamma^k(s0) <= lambda^k * s0 * (1 + rel_slack)
/// fails, or nullopt if it holds throughout.
std::optional<std::size_t> first_decay_failure(const GainOperator& op, const DecayCertificate& cert,
                                               std::size_t k_count, double rel_slack);

struct UgesFit {
  double M = 0.0;
  double a = 0.0;
  std::vector<double> norms;  // ||Gamma^k(s)|| / ||s||, k = 0..k_max
  bool uges() const { return a < 1.0; }
};

/// Least-squares fit of log ||Gamma^k(s)|| ~ log M + k log a.
UgesFit uges_fit(const GainOperator& op, const LinfVector& s, std::size_t k_max);

/// Perron root of a nonnegative matrix by power iteration on G + I with
/// Collatz-Wielandt bracketing.
double perron_oracle(const SquareMatrix& g, std::size_t iters, double tol);

/// Maximum geometric-mean cycle weight by exhaustive simple-cycle
/// enumeration (dimension <= 12). 0 for acyclic graphs.
double max_cycle_mean_oracle(const SquareMatrix& g);

}  // namespace issnet
