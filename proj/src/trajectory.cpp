#include "issnet/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace issnet {

BlockLayout::BlockLayout(const std::vector<std::size_t>& dims) : offsets_{0} {
  offsets_.reserve(dims.size() + 1);
  for (std::size_t d : dims) offsets_.push_back(offsets_.back() + d);
}

BlockLayout BlockLayout::uniform(std::size_t blocks, std::size_t dim) {
  return BlockLayout(std::vector<std::size_t>(blocks, dim));
}

namespace {

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) {
    if (!std::isfinite(x)) throw std::invalid_argument("InputSignal: values must be finite");
    m = std::max(m, std::abs(x));
  }
  return m;
}

}  // namespace

InputSignal InputSignal::zero() { return InputSignal(); }

InputSignal InputSignal::constant_per_channel(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("InputSignal: no channel values");
  InputSignal u;
  u.kind_ = Kind::ConstantPerChannel;
  u.sup_norm_ = max_abs(values);
  u.breakpoints_ = {0.0};
  u.levels_ = {std::move(values)};
  return u;
}

InputSignal InputSignal::piecewise_constant(std::vector<double> breakpoints, std::vector<std::vector<double>> levels) {
  if (breakpoints.empty() || breakpoints.size() != levels.size())
    throw std::invalid_argument("InputSignal: need one level per breakpoint");
  if (breakpoints.front() != 0.0) throw std::invalid_argument("InputSignal: first breakpoint must be 0");
  if (std::adjacent_find(breakpoints.begin(), breakpoints.end(), std::greater_equal<>()) != breakpoints.end())
    throw std::invalid_argument("InputSignal: breakpoints must increase strictly");
  InputSignal u;
  u.kind_ = Kind::PiecewiseConstant;
  for (const auto& level : levels) {
    if (level.empty()) throw std::invalid_argument("InputSignal: empty level");
    u.sup_norm_ = std::max(u.sup_norm_, max_abs(level));
  }
  u.breakpoints_ = std::move(breakpoints);
  u.levels_ = std::move(levels);
  return u;
}

double InputSignal::value(double t, std::size_t channel) const {
  if (kind_ == Kind::Zero) return 0.0;
  // last breakpoint <= t; times before 0 use the first level
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
  const std::size_t piece = it == breakpoints_.begin() ? 0 : static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
  const auto& level = levels_[piece];
  return level[channel % level.size()];
}

}  // namespace issnet
