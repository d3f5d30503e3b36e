#pragma once

// Gain operators built from linear internal gains and per-row aggregation
// functions: Gamma(s)_i = mu_i((gamma_ij * s_j)_j).

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "issnet/sequence_space.hpp"

namespace issnet {

/// Monotone, subadditive, degree-one homogeneous aggregation of finitely many
/// weighted terms.
class AggregationSpec {
 public:
  enum class Kind { Sum, Max, Mixed };

  static AggregationSpec sum() { return AggregationSpec(Kind::Sum, 0); }
  static AggregationSpec max() { return AggregationSpec(Kind::Max, 0); }
  /// Max over the first `split_index` terms plus the sum of the rest.
  static AggregationSpec mixed(std::size_t split_index);

  Kind kind() const { return kind_; }
  std::size_t split_index() const { return split_; }

  double aggregate(std::span<const double> terms) const;

  std::string name() const;

  friend bool operator==(const AggregationSpec&, const AggregationSpec&) = default;

 private:
  AggregationSpec(Kind kind, std::size_t split) : kind_(kind), split_(split) {}

  Kind kind_;
  std::size_t split_;
};

struct GainEntry {
  /// Absolute column for finite operators, offset j - i for periodic ones.
  std::int64_t target = 0;
  double weight = 0.0;
};

/// One row of the gain matrix together with its aggregation. Zero weights are
/// dropped on construction; the position of an entry is its position among
/// the remaining ones (this matters for Mixed aggregation).
class GainRow {
 public:
  GainRow() : aggregation_(AggregationSpec::sum()) {}
  GainRow(std::vector<GainEntry> entries, AggregationSpec aggregation);

  const std::vector<GainEntry>& entries() const { return entries_; }
  const AggregationSpec& aggregation() const { return aggregation_; }
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<GainEntry> entries_;
  AggregationSpec aggregation_;
};

class GainOperator {
 public:
  enum class Form { Finite, Periodic };

  /// Rows with absolute target columns in [0, rows.size()).
  static GainOperator finite(std::vector<GainRow> rows);
  /// Row i >= prefix_rows.size() uses period_rows[(i - prefix) mod p] with
  /// target i + offset. Targets below 0 are absent.
  static GainOperator periodic(std::vector<GainRow> prefix_rows, std::vector<GainRow> period_rows);
  /// Finite operator from a square matrix; zero entries carry no edge.
  static GainOperator from_matrix(const std::vector<std::vector<double>>& matrix,
                                  AggregationSpec aggregation);

  Form form() const { return form_; }
  bool is_finite() const { return form_ == Form::Finite; }
  bool is_periodic() const { return form_ == Form::Periodic; }

  /// Finite: number of rows. Periodic: prefix_rows().size() (the infinite
  /// index set has no dimension).
  std::size_t dimension() const { return prefix_rows_.size(); }
  const std::vector<GainRow>& prefix_rows() const { return prefix_rows_; }
  const std::vector<GainRow>& period_rows() const { return period_rows_; }
  std::size_t period() const { return period_rows_.size(); }

  /// Row pattern used at index i.
  const GainRow& row(std::size_t i) const;
  /// Column hit by `entry` of row i, or -1 when the target is absent.
  std::int64_t column(std::size_t i, const GainEntry& entry) const;

  /// Smallest and largest target offset j - i over all entries (0 if none).
  std::int64_t min_offset() const { return min_offset_; }
  std::int64_t max_offset() const { return max_offset_; }

  /// Every row aggregates with the given kind.
  bool uniform_kind(AggregationSpec::Kind kind) const;

  /// Entry gamma_ij for i, j on the index set (0 where there is no edge; the
  /// Max/Sum rule is used to combine duplicate entries).
  double gain(std::size_t i, std::size_t j) const;

 private:
  GainOperator(Form form, std::vector<GainRow> prefix_rows, std::vector<GainRow> period_rows);

  Form form_;
  std::vector<GainRow> prefix_rows_;
  std::vector<GainRow> period_rows_;
  std::int64_t min_offset_ = 0;
  std::int64_t max_offset_ = 0;
};

/// Gamma(s). Finite vectors are zero-extended. For a periodic operator the
/// result is eventually periodic with period dividing lcm(op period, s period).
LinfVector apply(const GainOperator& op, const LinfVector& s);

/// ||Gamma(1)||. Must be finite for the operator to be well-defined.
double well_definedness_bound(const GainOperator& op);

/// Closed-form bound for pure Sum (sup_i sum_j gamma_ij) or pure Max
/// (sup_ij gamma_ij) operators. Throws std::invalid_argument for mixed rows.
double row_gain_bound(const GainOperator& op);

// ---------------------------------------------------------------------------
// Axiom checks

enum class Axiom { Homogeneity, Monotonicity, Subadditivity };

std::string to_string(Axiom axiom);

struct AxiomViolation {
  Axiom axiom;
  std::size_t trial;
  double defect;            // amount by which the inequality / equality fails
  double scale;             // c for homogeneity, 0 otherwise
  std::vector<double> sample;
  std::string detail;
};

struct AxiomReport {
  std::size_t trials = 0;
  std::size_t checks = 0;
  std::vector<AxiomViolation> violations;
  bool ok() const { return violations.empty(); }
};

using AggregationFunction = std::function<double(std::span<const double>)>;

/// Randomized check of homogeneity, monotonicity and subadditivity of
/// s -> agg((w_j s_j)_j). A fixed probe at s = 1, c = 2 runs before the
/// random trials. Relative tolerance 1e-12.
AxiomReport check_mhaf_axioms(const AggregationSpec& agg, std::span<const double> weights,
                              std::size_t trials, std::uint64_t seed);

/// Same check for an arbitrary aggregation function (used to exercise the
/// checker against functions that are not aggregation functions).
AxiomReport check_mhaf_axioms(const AggregationFunction& agg, std::span<const double> weights,
                              std::size_t trials, std::uint64_t seed);

/// Operator-level axioms on random (finite or eventually periodic) vectors.
AxiomReport check_operator_axioms(const GainOperator& op, std::size_t trials, std::uint64_t seed);

}  // namespace issnet
