#include "issnet/network_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace issnet {

namespace {

std::vector<std::size_t> dims_of(const std::vector<SubsystemDynamics>& nodes, bool input) {
  std::vector<std::size_t> dims;
  dims.reserve(nodes.size());
  for (const auto& n : nodes) dims.push_back(input ? n.input_dim : n.state_dim);
  return dims;
}

}  // namespace

TruncatedNetwork::TruncatedNetwork(std::vector<SubsystemDynamics> nodes, Boundary boundary)
    : nodes_(std::move(nodes)), boundary_(boundary) {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!nodes_[i].rhs) throw std::invalid_argument("TruncatedNetwork: subsystem " + std::to_string(i) + " has no rhs");
    if (nodes_[i].state_dim == 0) throw std::invalid_argument("TruncatedNetwork: zero state dimension");
  }
  layout_ = BlockLayout(dims_of(nodes_, false));
  input_layout_ = BlockLayout(dims_of(nodes_, true));
}

void TruncatedNetwork::derivative(double t, std::span<const double> x, const InputSignal& u,
                                  std::span<double> out) const {
  std::vector<double> neighbors, input;
  const auto n = static_cast<std::int64_t>(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const SubsystemDynamics& node = nodes_[i];
    neighbors.clear();
    for (std::int64_t off : node.neighbor_offsets) {
      const std::int64_t j = static_cast<std::int64_t>(i) + off;
      if (j >= 0 && j < n) {
        const auto b = layout_.block(x, static_cast<std::size_t>(j));
        neighbors.insert(neighbors.end(), b.begin(), b.end());
      } else {
        // ZeroClamp: absent neighbours read as the zero state of this node's width
        neighbors.insert(neighbors.end(), node.state_dim, 0.0);
      }
    }
    input.assign(node.input_dim, 0.0);
    if (node.input_dim > 0) {
      const std::size_t base = input_layout_.begin(i);
      for (std::size_t c = 0; c < node.input_dim; ++c) input[c] = u.value(t, base + c);
    }
    node.rhs(layout_.block(x, i), neighbors, input, layout_.block(out, i));
  }
}

Trajectory integrate(const TruncatedNetwork& net, const std::vector<double>& x0, const InputSignal& u, double T,
                     double dt) {
  if (!(dt > 0.0) || !(T >= dt)) throw std::invalid_argument("integrate: need dt > 0 and T >= dt");
  if (x0.size() != net.layout().total()) throw std::invalid_argument("integrate: initial state has the wrong dimension");
  const auto steps = static_cast<std::size_t>(std::llround(T / dt));

  Trajectory traj;
  traj.layout = net.layout();
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  traj.inputs.reserve(steps + 1);

  const std::size_t channels = net.input_layout().total();
  auto record = [&](double t, const std::vector<double>& x) {
    traj.times.push_back(t);
    traj.states.push_back(x);
    std::vector<double> in(channels);
    for (std::size_t c = 0; c < channels; ++c) in[c] = u.value(t, c);
    traj.inputs.push_back(std::move(in));
  };

  const std::size_t n = x0.size();
  std::vector<double> x = x0, k1(n), k2(n), k3(n), k4(n), tmp(n);
  record(0.0, x);
  for (std::size_t s = 0; s < steps; ++s) {
    const double t = static_cast<double>(s) * dt;
    // zero-order hold: the input is read at the start of the step
    net.derivative(t, x, u, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k1[i];
    net.derivative(t, tmp, u, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k2[i];
    net.derivative(t, tmp, u, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + dt * k3[i];
    net.derivative(t, tmp, u, k4);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      if (!std::isfinite(x[i])) {
        std::ostringstream msg;
        msg << "integrate: state component " << i << " is not finite at t = " << t + dt;
        throw BlowUpError(msg.str());
      }
    }
    record(static_cast<double>(s + 1) * dt, x);
  }
  return traj;
}

StepHalvingEstimate step_halving_error(const TruncatedNetwork& net, const std::vector<double>& x0,
                                       const InputSignal& u, double T, double dt) {
  StepHalvingEstimate est;
  est.coarse = integrate(net, x0, u, T, dt).states.back();
  est.fine = integrate(net, x0, u, T, 0.5 * dt).states.back();
  for (std::size_t i = 0; i < est.coarse.size(); ++i)
    est.difference = std::max(est.difference, std::abs(est.coarse[i] - est.fine[i]));
  return est;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, std::size_t stride) {
  if (stride == 0) throw std::invalid_argument("write_trajectory_csv: stride must be positive");
  const auto old = os.precision(17);
  os << 't';
  for (std::size_t c = 0; c < traj.layout.total(); ++c) os << ",x" << c + 1;
  os << '\n';
  for (std::size_t k = 0; k < traj.size(); ++k) {
    if (k % stride != 0 && k + 1 != traj.size()) continue;
    os << traj.times[k];
    for (double v : traj.states[k]) os << ',' << v;
    os << '\n';
  }
  os.precision(old);
}

double state_sup_norm(std::span<const double> x, const BlockLayout& layout) {
  double best = 0.0;
  for (std::size_t i = 0; i < layout.blocks(); ++i) {
    double s = 0.0;
    for (double v : layout.block(x, i)) s += v * v;
    best = std::max(best, std::sqrt(s));
  }
  return best;
}

// ---------------------------------------------------------------------------

std::string to_string(Coupling c) { return c == Coupling::Sum ? "sum" : "max"; }

std::string to_string(BackFreeEpsilon e) { return e == BackFreeEpsilon::Keep ? "keep" : "drop"; }

void ExampleParams::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("ExampleParams: ") + what);
  };
  for (double v : {b_diag, b_back, b_fwd1, b_fwd2, eps, delta, delta_prime, b_input})
    require(std::isfinite(v), "parameters must be finite");
  require(b_diag > 0.0, "b_diag must be positive");
  require(b_back >= 0.0 && b_fwd1 >= 0.0 && b_fwd2 >= 0.0, "couplings must be nonnegative");
  require(eps > 0.0 && delta > 0.0, "eps and delta must be positive");
  require(coupling == Coupling::Max || delta_prime > 0.0, "delta_prime must be positive");
  require(b_input >= 0.0, "b_input must be nonnegative");
  if (coupling == Coupling::Sum) {
    require(b_diag - eps - delta - delta_prime > 0.0, "b_diag - eps - delta - delta_prime must be positive");
  } else {
    require(b_diag - eps - delta > 0.0, "b_diag - eps - delta must be positive");
  }
}

ExampleParams ExampleParams::scaled_coupling(double factor) const {
  ExampleParams p = *this;
  p.b_back *= factor;
  p.b_fwd1 *= factor;
  p.b_fwd2 *= factor;
  return p;
}

double ExampleParams::row_rate(bool has_back) const {
  const double e = (has_back || back_free_epsilon == BackFreeEpsilon::Keep) ? eps : 0.0;
  return coupling == Coupling::Sum ? b_diag - e - delta - delta_prime : b_diag - e - delta;
}

TruncatedNetwork build_example_network(const ExampleParams& p, std::size_t N) {
  p.validate();
  if (N == 0) throw std::invalid_argument("build_example_network: N must be positive");
  const bool sum = p.coupling == Coupling::Sum;
  std::vector<SubsystemDynamics> nodes;
  nodes.reserve(N);
  for (std::size_t i = 0; i < N; ++i) {
    SubsystemDynamics d;
    const bool has_back = i % 2 == 0;
    if (has_back) {
      d.neighbor_offsets = {-1, 1, 2};
    } else {
      d.neighbor_offsets = {1, 2};
    }
    d.rhs = [p, has_back, sum](std::span<const double> own, std::span<const double> nb, std::span<const double> u,
                               std::span<double> out) {
      const std::size_t f = has_back ? 1 : 0;
      const double a = p.b_fwd1 * nb[f], b = p.b_fwd2 * nb[f + 1];
      double v = -p.b_diag * own[0] + (sum ? a + b : std::max(a, b)) + p.b_input * u[0];
      if (has_back) v += p.b_back * nb[0];
      out[0] = v;
    };
    nodes.push_back(std::move(d));
  }
  return TruncatedNetwork(std::move(nodes));
}

GainOperator derive_example_gains(const ExampleParams& p) {
  p.validate();
  const bool sum = p.coupling == Coupling::Sum;
  const AggregationSpec agg = sum ? AggregationSpec::sum() : AggregationSpec::max();
  auto row = [&](bool has_back) {
    const double w = p.row_rate(has_back);
    if (!(w > 0.0)) throw std::invalid_argument("derive_example_gains: nonpositive decay share");
    // sum: b^2 / (2 c w); max: b^2 / (c q) with delta' = delta
    auto gain = [&](double b, double c) { return sum ? b * b / (2.0 * c * w) : b * b / (c * w); };
    std::vector<GainEntry> entries;
    if (has_back) entries.push_back({-1, gain(p.b_back, p.eps)});
    entries.push_back({1, gain(p.b_fwd1, p.delta)});
    entries.push_back({2, gain(p.b_fwd2, sum ? p.delta_prime : p.delta)});
    return GainRow(std::move(entries), agg);
  };
  return GainOperator::periodic({}, {row(true), row(false)});
}

namespace {

double weight_at(const GainRow& row, std::int64_t offset) {
  for (const auto& e : row.entries())
    if (e.target == offset) return e.weight;
  return 0.0;
}

void require_pattern(const GainOperator& op) {
  auto fail = [](const std::string& why) { throw PatternMismatchError("check_example_small_gain: " + why); };
  if (!op.is_periodic() || !op.prefix_rows().empty() || op.period() != 2)
    fail("operator is not period-2 without prefix rows");
  const auto kind = op.period_rows()[0].aggregation().kind();
  if (kind == AggregationSpec::Kind::Mixed || op.period_rows()[1].aggregation().kind() != kind)
    fail("rows must share a pure sum or max aggregation");
  const std::vector<std::vector<std::int64_t>> allowed{{-1, 1, 2}, {1, 2}};
  for (std::size_t r = 0; r < 2; ++r) {
    std::vector<std::int64_t> seen;
    for (const auto& e : op.period_rows()[r].entries()) {
      if (std::find(allowed[r].begin(), allowed[r].end(), e.target) == allowed[r].end())
        fail("row " + std::to_string(r) + " has an entry at offset " + std::to_string(e.target));
      if (std::find(seen.begin(), seen.end(), e.target) != seen.end()) fail("duplicate offset");
      seen.push_back(e.target);
    }
  }
}

}  // namespace

ExampleSmallGainReport check_example_small_gain(const GainOperator& op, std::size_t n_max) {
  require_pattern(op);
  const GainRow& r0 = op.period_rows()[0];  // with back neighbour
  const GainRow& r1 = op.period_rows()[1];
  const double b0 = weight_at(r0, -1), f0 = weight_at(r0, 1), g0 = weight_at(r0, 2);
  const double f1 = weight_at(r1, 1), g1 = weight_at(r1, 2);

  ExampleSmallGainReport rep;
  rep.coupling = r0.aggregation().kind() == AggregationSpec::Kind::Sum ? Coupling::Sum : Coupling::Max;
  rep.back_free_terms = {
      {"j -> j+1 -> j", f1 * b0},   {"j -> j+1 -> j+2", f1 * f0}, {"j -> j+1 -> j+3", f1 * g0},
      {"j -> j+2 -> j+3", g1 * f1}, {"j -> j+2 -> j+4", g1 * g1},
  };
  rep.back_terms = {
      {"j -> j-1 -> j", b0 * f1},   {"j -> j-1 -> j+1", b0 * g1}, {"j -> j+1 -> j+2", f0 * f1},
      {"j -> j+1 -> j+3", f0 * g1}, {"j -> j+2 -> j+1", g0 * b0}, {"j -> j+2 -> j+3", g0 * f0},
      {"j -> j+2 -> j+4", g0 * g0},
  };
  auto combine = [&](const std::vector<GainProductTerm>& terms) {
    double acc = 0.0;
    for (const auto& t : terms) acc = rep.coupling == Coupling::Sum ? acc + t.value : std::max(acc, t.value);
    return acc;
  };
  rep.back_free_value = combine(rep.back_free_terms);
  rep.back_value = combine(rep.back_terms);
  rep.worst = std::max(rep.back_free_value, rep.back_value);
  rep.pass = rep.worst < 1.0;
  rep.margin = 1.0 - rep.worst;

  rep.operator_norm2 = iterate_ones(op, 2).norms[1];
  if (std::abs(rep.operator_norm2 - rep.worst) > 1e-12 * std::max(1.0, rep.worst)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "check_example_small_gain: closed-form value " << rep.worst << " disagrees with ||Gamma^2(1)|| = "
        << rep.operator_norm2;
    throw std::logic_error(msg.str());
  }
  rep.verdict = small_gain_check(op, n_max);
  if (!rep.pass) {
    std::ostringstream note;
    note << "length-2 condition fails; longer walks may still satisfy the condition: small_gain_check(n_max = "
         << n_max << ") is " << (rep.verdict.satisfied() ? "Satisfied" : "Unknown");
    rep.note = note.str();
  }
  return rep;
}

CompositeLyapunov example_composite(const ExampleParams& p, const GainOperator& op, const DecayCertificate& cert,
                                    const CompositeOptions& options) {
  p.validate();
  // |u| <= |x| / sqrt(2) under the antecedent V_i >= u^2, so the input term
  // costs sqrt(2) b_input of decay rate
  const double penalty = std::sqrt(2.0) * p.b_input;
  const double rate_back = p.row_rate(true) - penalty, rate_free = p.row_rate(false) - penalty;
  if (!(rate_back > 0.0 && rate_free > 0.0))
    throw std::invalid_argument("example_composite: b_input leaves no decay rate");

  SubsystemFamily family;
  family.period = {quadratic_subsystem(rate_back), quadratic_subsystem(rate_free)};
  const double rate = std::min(rate_back, rate_free);
  LyapunovEnvelopes env;
  env.psi1 = [](double r) { return 0.5 * r * r; };
  env.psi2 = env.psi1;
  env.gamma_u_max = [](double r) { return r * r; };
  env.alpha_tilde = [rate](double r) { return rate * r; };
  return make_composite(std::move(family), std::move(env), op, cert, options);
}

IssBoundReport iss_bound_check(const Trajectory& traj, const CompositeLyapunov& cl, const InputSignal& u) {
  IssBoundReport rep;
  rep.samples = traj.size();
  if (traj.size() == 0) {
    rep.pass = true;
    return rep;
  }
  const double floor = composite_external_gain(cl, u.sup_norm());
  auto alpha = [&](double v) { return composite_decay_rate(cl, std::max(v, 0.0)); };

  double v = evaluate_composite(cl, traj.states[0], traj.layout);
  rep.worst_margin = std::numeric_limits<double>::infinity();
  bool ok = true;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    if (k > 0) {
      const double h = traj.times[k] - traj.times[k - 1];
      const double a1 = alpha(v), a2 = alpha(v - 0.5 * h * a1), a3 = alpha(v - 0.5 * h * a2), a4 = alpha(v - h * a3);
      v = std::max(0.0, v - h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4));
    }
    const double lhs = cl.envelopes().psi1(state_sup_norm(traj.states[k], traj.layout)) / cl.s0_max();
    const double rhs = std::max(v, floor);
    const double margin = rhs - lhs;
    if (margin < -1e-12 * std::max(1.0, rhs)) ok = false;
    if (margin < rep.worst_margin) {
      rep.worst_margin = margin;
      rep.worst_time = traj.times[k];
      rep.worst_relative_margin = rhs > 0.0 ? margin / rhs : 0.0;
    }
  }
  rep.pass = ok;
  return rep;
}

}  // namespace issnet
