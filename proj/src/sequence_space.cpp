#include "issnet/sequence_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace issnet {

namespace {

void validate(const std::vector<double>& values, const char* what) {
  for (double x : values) {
    if (!std::isfinite(x) || x < 0.0) {
      std::ostringstream msg;
      msg << "LinfVector: " << what << " component " << x << " is not a finite nonnegative number";
      throw std::invalid_argument(msg.str());
    }
  }
}

// Prefix length and period of v when finite vectors are read as a zero tail.
std::size_t head_of(const LinfVector& v) { return v.prefix().size(); }
std::size_t period_of(const LinfVector& v) { return v.is_finite() ? 1 : v.period(); }

}  // namespace

LinfVector::LinfVector(Form form, std::vector<double> prefix, std::vector<double> block)
    : form_(form), prefix_(std::move(prefix)), block_(std::move(block)) {}

LinfVector LinfVector::finite(std::vector<double> values) {
  validate(values, "finite");
  return LinfVector(Form::Finite, std::move(values), {});
}

LinfVector LinfVector::periodic(std::vector<double> prefix, std::vector<double> block) {
  if (block.empty()) throw std::invalid_argument("LinfVector: periodic block must be nonempty");
  validate(prefix, "prefix");
  validate(block, "block");
  return LinfVector(Form::Periodic, std::move(prefix), std::move(block));
}

LinfVector LinfVector::constant(double value) { return periodic({}, {value}); }

double LinfVector::at(std::size_t i) const {
  if (i < prefix_.size()) return prefix_[i];
  if (block_.empty()) return 0.0;
  return block_[(i - prefix_.size()) % block_.size()];
}

LinfVector LinfVector::canonical() const {
  if (is_finite()) return *this;

  // smallest d dividing the block length such that the block is d-periodic
  std::vector<double> block = block_;
  const std::size_t n = block.size();
  for (std::size_t d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    bool repeats = true;
    for (std::size_t i = d; i < n && repeats; ++i) repeats = block[i] == block[i - d];
    if (repeats) {
      block.resize(d);
      break;
    }
  }

  // absorb prefix entries that already continue the periodic pattern
  std::vector<double> prefix = prefix_;
  while (!prefix.empty() && prefix.back() == block.back()) {
    prefix.pop_back();
    std::rotate(block.rbegin(), block.rbegin() + 1, block.rend());
  }
  return LinfVector(Form::Periodic, std::move(prefix), std::move(block));
}

LinfVector LinfVector::scaled(double factor) const {
  if (!(factor >= 0.0) || !std::isfinite(factor)) {
    throw std::invalid_argument("LinfVector::scaled: factor must be finite and nonnegative");
  }
  LinfVector out = *this;
  for (double& x : out.prefix_) x *= factor;
  for (double& x : out.block_) x *= factor;
  return out;
}

std::string LinfVector::to_string() const {
  std::ostringstream os;
  os.precision(17);
  auto list = [&os](const std::vector<double>& xs) {
    os << '[';
    for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? ", " : "") << xs[i];
    os << ']';
  };
  if (is_finite()) {
    os << "Finite";
    list(prefix_);
  } else {
    os << "Periodic(";
    list(prefix_);
    os << ", ";
    list(block_);
    os << ')';
  }
  return os.str();
}

Alignment align(const LinfVector& u, const LinfVector& v) {
  if (u.is_finite() && v.is_finite()) {
    return {std::max(u.stored_size(), v.stored_size()), 0};
  }
  return {std::max(head_of(u), head_of(v)), std::lcm(period_of(u), period_of(v))};
}

bool operator==(const LinfVector& u, const LinfVector& v) {
  const Alignment a = align(u, v);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (u.at(i) != v.at(i)) return false;
  }
  return true;
}

double sup_norm(const LinfVector& v) {
  double best = 0.0;
  for (double x : v.prefix()) best = std::max(best, x);
  for (double x : v.block()) best = std::max(best, x);
  return best;
}

double inf_component(const LinfVector& v) {
  if (v.stored_size() == 0) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (double x : v.prefix()) best = std::min(best, x);
  for (double x : v.block()) best = std::min(best, x);
  return best;
}

bool partial_leq(const LinfVector& u, const LinfVector& v, double slack) {
  const Alignment a = align(u, v);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (u.at(i) > v.at(i) + slack) return false;
  }
  return true;
}

LinfVector affine_combine(double a, const LinfVector& u, double b, const LinfVector& v) {
  if (!(a >= 0.0) || !(b >= 0.0)) {
    throw std::invalid_argument("affine_combine: coefficients must be nonnegative");
  }
  const Alignment al = align(u, v);
  std::vector<double> head(al.head);
  for (std::size_t i = 0; i < al.head; ++i) head[i] = a * u.at(i) + b * v.at(i);
  if (al.period == 0) return LinfVector::finite(std::move(head));

  std::vector<double> block(al.period);
  for (std::size_t i = 0; i < al.period; ++i) {
    block[i] = a * u.at(al.head + i) + b * v.at(al.head + i);
  }
  return LinfVector::periodic(std::move(head), std::move(block)).canonical();
}

double max_excess(const LinfVector& u, const LinfVector& v) {
  const Alignment a = align(u, v);
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.size(); ++i) best = std::max(best, u.at(i) - v.at(i));
  return a.size() == 0 ? 0.0 : best;
}

}  // namespace issnet
