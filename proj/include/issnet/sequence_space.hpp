#pragma once

// Nonnegative bounded sequences with finite representations.
//
// A LinfVector is either a finite list of values (read as zero beyond its
// length when compared or combined with infinite sequences) or an eventually
// periodic sequence given by a prefix and a repeating block. Every operation
// works on the finitely many stored values, so norms, infima and the order
// relation are computed exactly.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace issnet {

class LinfVector {
 public:
  enum class Form { Finite, Periodic };

  /// Empty finite vector.
  LinfVector() = default;

  static LinfVector finite(std::vector<double> values);
  static LinfVector periodic(std::vector<double> prefix, std::vector<double> block);
  static LinfVector constant(double value);
  static LinfVector ones() { return constant(1.0); }
  static LinfVector zeros() { return constant(0.0); }

  Form form() const { return form_; }
  bool is_finite() const { return form_ == Form::Finite; }
  bool is_periodic() const { return form_ == Form::Periodic; }

  /// Finite: all stored values. Periodic: the non-repeating head.
  std::span<const double> prefix() const { return prefix_; }
  /// Repeating block; empty for finite vectors.
  std::span<const double> block() const { return block_; }
  std::size_t period() const { return block_.size(); }
  /// Number of stored values (prefix plus block).
  std::size_t stored_size() const { return prefix_.size() + block_.size(); }

  /// Component i; finite vectors read as zero past their end.
  double at(std::size_t i) const;

  /// Minimal block, then minimal prefix. Finite vectors are returned as-is
  /// because their length defines the index set used for interiority.
  LinfVector canonical() const;

  LinfVector scaled(double factor) const;

  std::string to_string() const;

  /// Componentwise equality (zero extension for finite operands).
  friend bool operator==(const LinfVector& u, const LinfVector& v);

 private:
  LinfVector(Form form, std::vector<double> prefix, std::vector<double> block);

  Form form_ = Form::Finite;
  std::vector<double> prefix_;
  std::vector<double> block_;
};

/// Index range [0, size) on which two vectors determine every componentwise
/// relation between them. Past `size` both sequences repeat with `period`.
struct Alignment {
  std::size_t head = 0;
  std::size_t period = 0;  // 0 when both operands are finite
  std::size_t size() const { return head + period; }
};

Alignment align(const LinfVector& u, const LinfVector& v);

double sup_norm(const LinfVector& v);

/// Minimum over the stored components; 0 for an empty finite vector.
double inf_component(const LinfVector& v);

/// u_i <= v_i + slack for every index i.
bool partial_leq(const LinfVector& u, const LinfVector& v, double slack = 0.0);

/// a*u + b*v componentwise. Both coefficients must be nonnegative.
LinfVector affine_combine(double a, const LinfVector& u, double b, const LinfVector& v);

/// sup_i (u_i - v_i). May be negative.
double max_excess(const LinfVector& u, const LinfVector& v);

}  // namespace issnet
