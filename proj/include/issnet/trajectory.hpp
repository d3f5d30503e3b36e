#pragma once

// Network states, input signals and sampled trajectories shared by the
// simulator and the Lyapunov checks.

#include <cstddef>
#include <span>
#include <vector>

namespace issnet {

/// Partition of a flat state vector into per-subsystem blocks.
class BlockLayout {
 public:
  BlockLayout() : offsets_{0} {}
  explicit BlockLayout(const std::vector<std::size_t>& dims);
  static BlockLayout uniform(std::size_t blocks, std::size_t dim);

  std::size_t blocks() const { return offsets_.size() - 1; }
  std::size_t dim(std::size_t i) const { return offsets_[i + 1] - offsets_[i]; }
  std::size_t begin(std::size_t i) const { return offsets_[i]; }
  std::size_t total() const { return offsets_.back(); }

  std::span<const double> block(std::span<const double> x, std::size_t i) const { return x.subspan(begin(i), dim(i)); }
  std::span<double> block(std::span<double> x, std::size_t i) const { return x.subspan(begin(i), dim(i)); }

  friend bool operator==(const BlockLayout&, const BlockLayout&) = default;

 private:
  std::vector<std::size_t> offsets_;
};

/// Piecewise right-continuous input u(t). Channel k of a network is the k-th
/// scalar input component, counted across subsystems.
class InputSignal {
 public:
  enum class Kind { Zero, ConstantPerChannel, PiecewiseConstant };

  static InputSignal zero();
  /// Channel k reads values[k mod values.size()].
  static InputSignal constant_per_channel(std::vector<double> values);
  /// levels[j] applies on [breakpoints[j], breakpoints[j+1]); breakpoints
  /// start at 0 and increase strictly. Each level is broadcast like
  /// constant_per_channel.
  static InputSignal piecewise_constant(std::vector<double> breakpoints, std::vector<std::vector<double>> levels);

  Kind kind() const { return kind_; }
  double value(double t, std::size_t channel) const;
  /// sup over time and channels of |u|.
  double sup_norm() const { return sup_norm_; }

 private:
  Kind kind_ = Kind::Zero;
  std::vector<double> breakpoints_;
  std::vector<std::vector<double>> levels_;
  double sup_norm_ = 0.0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  std::vector<std::vector<double>> inputs;  // per sample, one value per channel
  BlockLayout layout;

  std::size_t size() const { return times.size(); }
};

}  // namespace issnet
