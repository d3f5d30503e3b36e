#include "issnet/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <string>

namespace issnet {

namespace {

double euclidean(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

bool leq_rel(double a, double b) { return a <= b + 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}); }

[[noreturn]] void envelope_failure(const std::string& what, std::size_t subsystem, double r) {
  std::ostringstream msg;
  msg.precision(17);
  msg << "make_composite: " << what << " fails for subsystem pattern " << subsystem << " at r = " << r;
  throw std::invalid_argument(msg.str());
}

void check_subsystem(const SubsystemLyapunov& s, std::size_t index, const LyapunovEnvelopes& env,
                     const CompositeOptions& opt, std::mt19937_64& rng) {
  if (!s.evaluate || !s.psi1 || !s.psi2 || !s.alpha || !s.gamma_u)
    throw std::invalid_argument("make_composite: subsystem " + std::to_string(index) + " is incomplete");

  std::vector<double> x(s.state_dim, 0.0);
  if (s.evaluate(x) != 0.0) envelope_failure("V_i(0) = 0", index, 0.0);

  std::normal_distribution<double> gauss(0.0, 1.0);
  const std::size_t n = std::max<std::size_t>(opt.envelope_samples, 2);
  for (std::size_t k = 0; k < n; ++k) {
    // geometric grid from 1e-3 R to R
    const double r = opt.sample_radius * std::pow(1e-3, 1.0 - static_cast<double>(k) / static_cast<double>(n - 1));
    if (!leq_rel(env.psi1(r), s.psi1(r))) envelope_failure("psi1 <= psi_i1", index, r);
    if (!leq_rel(s.psi2(r), env.psi2(r))) envelope_failure("psi_i2 <= psi2", index, r);
    if (!leq_rel(s.gamma_u(r), env.gamma_u_max(r))) envelope_failure("gamma_iu <= gamma_u_max", index, r);
    if (!leq_rel(env.alpha_tilde(r), s.alpha(r))) envelope_failure("alpha_tilde <= alpha_i", index, r);

    double norm = 0.0;
    while (norm == 0.0) {
      for (double& v : x) v = gauss(rng);
      norm = euclidean(x);
    }
    for (double& v : x) v *= r / norm;
    const double V = s.evaluate(x);
    if (!leq_rel(s.psi1(r), V) || !leq_rel(V, s.psi2(r))) envelope_failure("psi_i1(|x|) <= V_i(x) <= psi_i2(|x|)", index, r);
  }
}

}  // namespace

SubsystemLyapunov quadratic_subsystem(double rate, double input_gain, std::size_t state_dim) {
  if (!(rate > 0.0)) throw std::invalid_argument("quadratic_subsystem: decay rate must be positive");
  if (!(input_gain >= 0.0)) throw std::invalid_argument("quadratic_subsystem: input gain must be nonnegative");
  SubsystemLyapunov s;
  s.state_dim = state_dim;
  s.evaluate = [](std::span<const double> x) {
    double acc = 0.0;
    for (double v : x) acc += v * v;
    return 0.5 * acc;
  };
  s.psi1 = [](double r) { return 0.5 * r * r; };
  s.psi2 = s.psi1;
  s.alpha = [rate](double r) { return rate * r; };
  s.gamma_u = [input_gain](double r) { return input_gain * r * r; };
  return s;
}

const SubsystemLyapunov& SubsystemFamily::at(std::size_t i) const {
  if (i < prefix.size()) return prefix[i];
  if (period.empty()) throw std::out_of_range("SubsystemFamily: index beyond finite family");
  return period[(i - prefix.size()) % period.size()];
}

CompositeLyapunov make_composite(SubsystemFamily family, LyapunovEnvelopes envelopes, const GainOperator& op,
                                 const DecayCertificate& cert, const CompositeOptions& options) {
  if (!cert.valid()) throw NoCertificateError("make_composite: decay certificate is not valid");
  const DecayCertificate check = verify_decay_point(op, cert.s0, cert.lambda, cert.tolerance);
  if (!check.valid()) throw NoCertificateError("make_composite: certificate is not a decay point of this operator");

  if (op.is_finite() != family.is_finite()) throw std::invalid_argument("make_composite: family and operator index sets differ");
  if (op.is_finite() && family.prefix.size() != op.dimension())
    throw std::invalid_argument("make_composite: family size differs from operator dimension");
  if (!envelopes.psi1 || !envelopes.psi2 || !envelopes.gamma_u_max || !envelopes.alpha_tilde)
    throw std::invalid_argument("make_composite: missing envelope");

  CompositeLyapunov cl;
  cl.mu_ = options.mu == 0.0 ? 0.5 * (1.0 + 1.0 / cert.lambda) : options.mu;
  if (!(cl.mu_ > 1.0 && cl.mu_ < 1.0 / cert.lambda)) throw std::invalid_argument("make_composite: mu must lie in (1, 1/lambda)");
  if (options.zeta_grid < 2) throw std::invalid_argument("make_composite: zeta grid needs at least 2 points");

  std::mt19937_64 rng(options.seed);
  for (std::size_t i = 0; i < family.prefix.size(); ++i) check_subsystem(family.prefix[i], i, envelopes, options, rng);
  for (std::size_t i = 0; i < family.period.size(); ++i)
    check_subsystem(family.period[i], family.prefix.size() + i, envelopes, options, rng);

  cl.s0_min_ = check.interiority;
  if (op.is_finite()) {
    for (std::size_t i = 0; i < op.dimension(); ++i) cl.s0_max_ = std::max(cl.s0_max_, cert.s0.at(i));
  } else {
    cl.s0_max_ = sup_norm(cert.s0);
  }
  cl.family_ = std::move(family);
  cl.env_ = std::move(envelopes);
  cl.cert_ = check;
  cl.cert_.margin = cert.margin;
  cl.cert_.terms = cert.terms;
  cl.cert_.converged = cert.converged;
  cl.zeta_grid_ = options.zeta_grid;
  return cl;
}

namespace {

void check_layout(const CompositeLyapunov& cl, const BlockLayout& layout, std::size_t size) {
  if (layout.total() != size) throw std::invalid_argument("evaluate_composite: state size does not match layout");
  if (cl.family().is_finite() && layout.blocks() > cl.family().prefix.size())
    throw std::invalid_argument("evaluate_composite: more blocks than subsystems");
  for (std::size_t i = 0; i < layout.blocks(); ++i) {
    if (layout.dim(i) != cl.subsystem(i).state_dim) {
      throw std::invalid_argument("evaluate_composite: block-dimension mismatch at block " + std::to_string(i));
    }
  }
}

std::vector<double> scaled_blocks(const CompositeLyapunov& cl, std::span<const double> x, const BlockLayout& layout) {
  std::vector<double> v(layout.blocks());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = cl.subsystem(i).evaluate(layout.block(x, i)) / cl.s0().at(i);
  return v;
}

}  // namespace

double evaluate_composite(const CompositeLyapunov& cl, std::span<const double> x, const BlockLayout& layout) {
  check_layout(cl, layout, x.size());
  double best = 0.0;
  for (std::size_t i = 0; i < layout.blocks(); ++i)
    best = std::max(best, cl.subsystem(i).evaluate(layout.block(x, i)) / cl.s0().at(i));
  return best;
}

std::vector<std::size_t> active_blocks(const CompositeLyapunov& cl, std::span<const double> x,
                                       const BlockLayout& layout, double rel_tol) {
  check_layout(cl, layout, x.size());
  const auto v = scaled_blocks(cl, x, layout);
  const double top = v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] >= top * (1.0 - rel_tol)) out.push_back(i);
  return out;
}

std::pair<double, double> coercivity_envelope(const CompositeLyapunov& cl, double x_norm) {
  if (!(x_norm >= 0.0)) throw std::invalid_argument("coercivity_envelope: norm must be nonnegative");
  return {cl.envelopes().psi1(x_norm) / cl.s0_max(), cl.envelopes().psi2(x_norm) / cl.s0_min()};
}

double composite_external_gain(const CompositeLyapunov& cl, double u_norm) {
  if (!(u_norm >= 0.0)) throw std::invalid_argument("composite_external_gain: norm must be nonnegative");
  return cl.envelopes().gamma_u_max(u_norm) / (cl.s0_min() * cl.lambda());
}

double composite_decay_rate(const CompositeLyapunov& cl, double r) {
  if (r <= 0.0) return 0.0;
  const auto& a = cl.envelopes().alpha_tilde;
  const double lo = cl.s0_min() / cl.mu(), hi = cl.s0_max();
  const std::size_t n = cl.zeta_grid();
  const double step = (hi - lo) / static_cast<double>(n - 1);

  std::size_t arg = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    const double v = a((lo + step * static_cast<double>(k)) * r);
    if (v < best) {
      best = v;
      arg = k;
    }
  }
  // a grid minimum can overshoot the true one, so refine between neighbours
  if (step > 0.0) {
    double x0 = lo + step * static_cast<double>(arg == 0 ? 0 : arg - 1);
    double x3 = lo + step * static_cast<double>(std::min(arg + 1, n - 1));
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = x3 - kInvPhi * (x3 - x0), x2 = x0 + kInvPhi * (x3 - x0);
    double f1 = a(x1 * r), f2 = a(x2 * r);
    for (int it = 0; it < 60; ++it) {
      if (f1 <= f2) {
        x3 = x2;
        x2 = x1;
        f2 = f1;
        x1 = x3 - kInvPhi * (x3 - x0);
        f1 = a(x1 * r);
      } else {
        x0 = x1;
        x1 = x2;
        f1 = f2;
        x2 = x0 + kInvPhi * (x3 - x0);
        f2 = a(x2 * r);
      }
    }
    best = std::min({best, f1, f2});
  }
  return best / hi;
}

ImplicationReport check_implication_along_trajectory(const CompositeLyapunov& cl, const Trajectory& traj,
                                                     const InputSignal& u) {
  if (traj.size() < 2) throw std::invalid_argument("check_implication_along_trajectory: empty trajectory");
  ImplicationReport rep;
  rep.step = traj.times[1] - traj.times[0];
  if (!(rep.step > 0.0)) throw std::invalid_argument("check_implication_along_trajectory: times must increase");
  for (std::size_t k = 1; k < traj.size(); ++k) {
    const double h = traj.times[k] - traj.times[k - 1];
    if (std::abs(h - rep.step) > 1e-9 * rep.step)
      throw std::invalid_argument("check_implication_along_trajectory: trajectory is not uniformly sampled");
  }

  std::vector<std::vector<double>> blocks(traj.size());
  std::vector<double> V(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    check_layout(cl, traj.layout, traj.states[k].size());
    blocks[k] = scaled_blocks(cl, traj.states[k], traj.layout);
    V[k] = blocks[k].empty() ? 0.0 : *std::max_element(blocks[k].begin(), blocks[k].end());
  }

  const double h = rep.step;
  double second = 0.0;
  for (std::size_t k = 1; k + 1 < traj.size(); ++k)
    for (std::size_t i = 0; i < blocks[k].size(); ++i)
      second = std::max(second, std::abs(blocks[k + 1][i] - 2.0 * blocks[k][i] + blocks[k - 1][i]));
  rep.curvature = 0.5 * second / (h * h);
  rep.slack = rep.curvature * h;

  const double threshold = composite_external_gain(cl, u.sup_norm());
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
    ++rep.samples;
    if (!(V[k] > threshold)) continue;
    ++rep.active;
    if (V[k + 1] >= V[k]) ++rep.non_decreasing;
    const double diff = (V[k + 1] - V[k]) / h;
    const double bound = -composite_decay_rate(cl, V[k]) + rep.slack;
    const double margin = bound - diff;
    rep.worst_margin = std::min(rep.worst_margin, margin);
    if (margin < 0.0) rep.violations.push_back({traj.times[k], V[k], bound, margin});
  }
  if (rep.active == 0) rep.worst_margin = 0.0;
  return rep;
}

void write_implication_csv(std::ostream& os, const ImplicationReport& report) {
  const auto old = os.precision(17);
  os << "t,V,bound,margin\n";
  for (const auto& r : report.violations) os << r.t << ',' << r.V << ',' << r.bound << ',' << r.margin << '\n';
  os.precision(old);
}

SublevelReport check_sublevel(const CompositeLyapunov& cl, const Trajectory& traj, double level) {
  SublevelReport rep;
  rep.level = level;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const double v = evaluate_composite(cl, traj.states[k], traj.layout);
    rep.terminal_value = v;
    if (!rep.entered && v <= level) {
      rep.entered = true;
      rep.stays = true;
      rep.entry_time = traj.times[k];
    }
    if (rep.entered) {
      rep.max_after_entry = std::max(rep.max_after_entry, v);
      if (v > level) rep.stays = false;
    }
  }
  return rep;
}

}  // namespace issnet
