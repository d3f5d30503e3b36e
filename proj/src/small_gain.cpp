#include "issnet/small_gain.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace issnet {

namespace {

constexpr double kOverflowNorm = 1e100;
constexpr std::size_t kDivergenceWindow = 5;

LinfVector ones_for(const GainOperator& op) {
  if (op.is_finite()) return LinfVector::finite(std::vector<double>(op.dimension(), 1.0));
  return LinfVector::ones();
}

// Restriction of v to the index set of a finite operator.
LinfVector restrict_to(const GainOperator& op, const LinfVector& v) {
  if (!op.is_finite()) return v;
  std::vector<double> out(op.dimension());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = v.at(i);
  return LinfVector::finite(std::move(out));
}

// (max_i next_i / prev_i)^(1/m); 0/0 entries are skipped.
double ratio_root(const LinfVector& next, const LinfVector& prev, std::size_t m) {
  const Alignment a = align(next, prev);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double num = next.at(i);
    if (num == 0.0) continue;
    const double den = prev.at(i);
    if (den == 0.0) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, num / den);
  }
  return std::pow(worst, 1.0 / static_cast<double>(m));
}

}  // namespace

SpectralEstimate iterate_ones(const GainOperator& op, std::size_t n_max) {
  if (n_max == 0) throw std::invalid_argument("iterate_ones: n_max must be >= 1");
  SpectralEstimate est;
  std::vector<LinfVector> iterates;
  iterates.reserve(n_max + 1);
  iterates.push_back(ones_for(op));

  for (std::size_t k = 1; k <= n_max; ++k) {
    iterates.push_back(apply(op, iterates.back()));
    const double norm = sup_norm(iterates.back());
    if (!(norm <= kOverflowNorm)) {
      std::ostringstream msg;
      msg << "iterate_ones: ||Gamma^" << k << "(1)|| = " << norm << " exceeds " << kOverflowNorm;
      throw OverflowError(msg.str());
    }
    est.norms.push_back(norm);
    est.root_sequence.push_back(std::pow(norm, 1.0 / static_cast<double>(k)));
    if (!est.certified_n && norm < 1.0) est.certified_n = k;
  }
  est.root_bound = *std::min_element(est.root_sequence.begin(), est.root_sequence.end());

  est.ratio_bound = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n_max; ++k) {
    for (std::size_t m = 1; k + m <= n_max; ++m) {
      est.ratio_bound = std::min(est.ratio_bound, ratio_root(iterates[k + m], iterates[k], m));
    }
  }
  est.upper_bound = std::min(est.root_bound, est.ratio_bound);
  return est;
}

SmallGainVerdict small_gain_check(const GainOperator& op, std::size_t n_max) {
  const SpectralEstimate est = iterate_ones(op, n_max);
  SmallGainVerdict v;
  v.upper_bound = est.upper_bound;
  if (est.certified_n) {
    v.status = SmallGainVerdict::Status::Satisfied;
    v.n = *est.certified_n;
  }
  return v;
}

double interiority(const GainOperator& op, const LinfVector& s0) {
  if (op.is_finite()) {
    if (op.dimension() == 0) return inf_component(s0);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < op.dimension(); ++i) best = std::min(best, s0.at(i));
    return best;
  }
  return s0.is_finite() ? 0.0 : inf_component(s0);
}

DecayCertificate verify_decay_point(const GainOperator& op, const LinfVector& s0, double lambda, double tol) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument("verify_decay_point: lambda must lie in (0, 1)");
  DecayCertificate cert;
  cert.s0 = s0;
  cert.lambda = lambda;
  cert.tolerance = tol;
  cert.interiority = interiority(op, s0);

  const LinfVector image = apply(op, s0);
  if (op.is_finite()) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < op.dimension(); ++i) worst = std::max(worst, image.at(i) - lambda * s0.at(i));
    cert.residual = op.dimension() == 0 ? 0.0 : worst;
  } else {
    cert.residual = max_excess(image, s0.scaled(lambda));
  }
  return cert;
}

DecayCertificate synthesize_decay_point(const GainOperator& op, double lambda, const LinfVector& y,
                                        std::size_t k_max, double tail_tol, double tol) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument("synthesize_decay_point: lambda must lie in (0, 1)");
  const double margin = interiority(op, y);
  if (!(margin > 0.0)) throw NotInteriorError("synthesize_decay_point: seed vector y is not interior");

  LinfVector power = restrict_to(op, y);  // Gamma^k(y)
  double scale = 1.0 / lambda;            // lambda^-(k+1)
  LinfVector z = power.scaled(scale);
  std::vector<double> term_norms{sup_norm(z)};
  std::size_t peak = 0;  // first index of the largest term so far
  // cycle lengths of a finite operator are at most its dimension
  const std::size_t window = std::max(kDivergenceWindow, op.dimension() + 2 * op.period());
  bool converged = false;
  for (std::size_t k = 1; k <= k_max; ++k) {
    power = apply(op, power);
    scale /= lambda;
    const double norm = sup_norm(power) * scale;
    if (norm < tail_tol) {
      converged = true;
      break;
    }
    // Non-normal operators can make the terms grow for a while even when
    // lambda exceeds the radius, so the test only starts at the peak. The
    // norms of Gamma^k(y) also oscillate with the length of the dominant
    // cycles, hence the comparison against a window maximum.
    if (k >= peak + window) {
      const double recent = *std::max_element(term_norms.end() - static_cast<std::ptrdiff_t>(window), term_norms.end());
      if (!(norm < recent)) {
        std::ostringstream msg;
        msg << "synthesize_decay_point: term " << k << " has norm " << norm << ", not below the largest of the last "
            << window << " terms (" << recent << "); lambda must exceed the spectral radius";
        throw DivergenceError(msg.str());
      }
    }
    if (!(norm <= kOverflowNorm)) {
      std::ostringstream msg;
      msg << "synthesize_decay_point: term " << k << " has norm " << norm << "; lambda must exceed the spectral radius";
      throw DivergenceError(msg.str());
    }
    if (norm > term_norms[peak]) peak = k;
    term_norms.push_back(norm);
    z = affine_combine(1.0, z, scale, power);
  }

  DecayCertificate cert = verify_decay_point(op, z, lambda, tol);
  cert.margin = margin;
  cert.terms = term_norms.size();
  cert.converged = converged;
  return cert;
}

DecayCertificate synthesize_from_verdict(const GainOperator& op, const SmallGainVerdict& verdict,
                                         std::size_t k_max, double tail_tol, double tol) {
  if (!verdict.satisfied()) throw std::invalid_argument("synthesize_from_verdict: small-gain check not satisfied");
  const double lambda = std::max(0.5 * (1.0 + verdict.upper_bound), std::numeric_limits<double>::min());
  return synthesize_decay_point(op, lambda, LinfVector::ones(), k_max, tail_tol, tol);
}

std::optional<std::size_t> first_decay_failure(const GainOperator& op, const DecayCertificate& cert,
                                               std::size_t k_count, double rel_slack) {
  LinfVector x = restrict_to(op, cert.s0);
  const LinfVector base = x;
  double lk = 1.0;
  for (std::size_t k = 1; k <= k_count; ++k) {
    x = apply(op, x);
    lk *= cert.lambda;
    if (!partial_leq(x, base.scaled(lk * (1.0 + rel_slack)))) return k;
  }
  return std::nullopt;
}

UgesFit uges_fit(const GainOperator& op, const LinfVector& s, std::size_t k_max) {
  if (k_max < 3) throw std::invalid_argument("uges_fit: k_max must be >= 3");
  const double s_norm = sup_norm(s);
  if (!(s_norm > 0.0)) throw std::invalid_argument("uges_fit: s must be nonzero");

  UgesFit fit;
  LinfVector x = restrict_to(op, s);
  fit.norms.push_back(sup_norm(x) / s_norm);
  for (std::size_t k = 1; k <= k_max; ++k) {
    x = apply(op, x);
    const double norm = sup_norm(x);
    if (!(norm <= kOverflowNorm)) throw OverflowError("uges_fit: iterates overflow");
    fit.norms.push_back(norm / s_norm);
  }

  const auto first_zero = std::find(fit.norms.begin(), fit.norms.end(), 0.0);
  if (first_zero != fit.norms.end()) {
    fit.a = 0.0;
    fit.M = first_zero == fit.norms.begin() ? 0.0 : *std::max_element(fit.norms.begin(), first_zero);
    return fit;
  }

  double sk = 0.0, sy = 0.0, skk = 0.0, sky = 0.0;
  const double n = static_cast<double>(fit.norms.size());
  for (std::size_t k = 0; k < fit.norms.size(); ++k) {
    const double kk = static_cast<double>(k);
    const double ly = std::log(fit.norms[k]);
    sk += kk;
    sy += ly;
    skk += kk * kk;
    sky += kk * ly;
  }
  const double slope = (n * sky - sk * sy) / (n * skk - sk * sk);
  const double intercept = (sy - slope * sk) / n;
  fit.a = std::exp(slope);
  fit.M = std::exp(intercept);
  return fit;
}

namespace {

void validate_matrix(const SquareMatrix& g, const char* who) {
  for (const auto& row : g) {
    if (row.size() != g.size()) throw std::invalid_argument(std::string(who) + ": matrix is not square");
    for (double x : row) {
      if (!std::isfinite(x) || x < 0.0) throw std::invalid_argument(std::string(who) + ": entries must be finite and nonnegative");
    }
  }
}

}  // namespace

double perron_oracle(const SquareMatrix& g, std::size_t iters, double tol) {
  validate_matrix(g, "perron_oracle");
  if (iters == 0) throw std::invalid_argument("perron_oracle: iters must be >= 1");
  const std::size_t n = g.size();
  if (n == 0) return 0.0;

  // G + I is primitive whenever G is irreducible, so the iteration cannot
  // cycle the way plain power iteration does on periodic matrices.
  std::vector<double> x(n, 1.0), y(n);
  for (std::size_t it = 0; it < iters; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      double acc = x[i];
      for (std::size_t j = 0; j < n; ++j) acc += g[i][j] * x[j];
      y[i] = acc;
    }
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    bool bracket = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (x[i] > 0.0) {
        const double r = y[i] / x[i];
        lo = std::min(lo, r);
        hi = std::max(hi, r);
      } else {
        bracket = false;
      }
    }
    if (bracket && hi - lo <= tol * hi) return std::max(0.0, 0.5 * (lo + hi) - 1.0);

    const double growth = *std::max_element(y.begin(), y.end());
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / growth;
  }
  // Reducible matrices: the bracket need not close. Fall back to the growth
  // rate ||G^k 1||^(1/k) of G itself at k = iters.
  std::vector<double> v(n, 1.0), w(n);
  double log_norm = 0.0, root = 0.0, prev_root = 0.0;
  for (std::size_t k = 1; k <= iters; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += g[i][j] * v[j];
      w[i] = acc;
    }
    const double m = *std::max_element(w.begin(), w.end());
    prev_root = root;
    if (m == 0.0) return 0.0;
    log_norm += std::log(m);
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / m;
    root = std::exp(log_norm / static_cast<double>(k));
  }
  if (iters == 1 || std::abs(root - prev_root) <= tol * std::max(root, 1.0)) return root;
  std::ostringstream msg;
  msg.precision(17);
  msg << "perron_oracle: no convergence after " << iters << " iterations (" << prev_root << " -> " << root << ")";
  throw NonConvergenceError(msg.str());
}

double max_cycle_mean_oracle(const SquareMatrix& g) {
  validate_matrix(g, "max_cycle_mean_oracle");
  const std::size_t n = g.size();
  if (n > 12) throw std::invalid_argument("max_cycle_mean_oracle: dimension exceeds 12");

  double best = 0.0;
  std::vector<bool> on_path(n, false);
  // cycles are enumerated once, from their smallest node
  std::function<void(std::size_t, std::size_t, double, std::size_t)> extend =
      [&](std::size_t start, std::size_t v, double product, std::size_t length) {
        for (std::size_t w = start; w < n; ++w) {
          const double weight = g[v][w];
          if (weight <= 0.0) continue;
          if (w == start) {
            best = std::max(best, std::pow(product * weight, 1.0 / static_cast<double>(length + 1)));
          } else if (!on_path[w]) {
            on_path[w] = true;
            extend(start, w, product * weight, length + 1);
            on_path[w] = false;
          }
        }
      };
  for (std::size_t s = 0; s < n; ++s) {
    on_path[s] = true;
    extend(s, s, 1.0, 0);
    on_path[s] = false;
  }
  return best;
}

}  // namespace issnet
