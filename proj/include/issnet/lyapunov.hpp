#pragma once

// Composite Lyapunov function V(x) = sup_i V_i(x_i) / s0_i built from a
// point of strict decay, plus trajectory-level checks of its decay property.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "issnet/gain_operator.hpp"
#include "issnet/small_gain.hpp"
#include "issnet/trajectory.hpp"

namespace issnet {

using ScalarFunction = std::function<double(double)>;

struct SubsystemLyapunov {
  std::size_t state_dim = 1;
  std::function<double(std::span<const double>)> evaluate;
  ScalarFunction psi1;     // psi1(|x|) <= V(x)
  ScalarFunction psi2;     // V(x) <= psi2(|x|)
  ScalarFunction alpha;    // decay rate under the implication
  ScalarFunction gamma_u;  // external gain
};

/// V(x) = |x|^2 / 2 with psi1 = psi2 = r^2 / 2, alpha(r) = rate * r and
/// gamma_u(r) = input_gain * r^2.
SubsystemLyapunov quadratic_subsystem(double rate, double input_gain = 1.0, std::size_t state_dim = 1);

/// Finite family (period empty) or eventually periodic family of subsystem
/// data, indexed like the gain operator.
struct SubsystemFamily {
  std::vector<SubsystemLyapunov> prefix;
  std::vector<SubsystemLyapunov> period;

  bool is_finite() const { return period.empty(); }
  const SubsystemLyapunov& at(std::size_t i) const;
};

/// Uniform envelopes over the family.
struct LyapunovEnvelopes {
  ScalarFunction psi1;
  ScalarFunction psi2;
  ScalarFunction gamma_u_max;
  ScalarFunction alpha_tilde;
};

struct CompositeOptions {
  double mu = 0.0;                // 0 selects (1 + 1/lambda) / 2
  std::size_t zeta_grid = 64;
  std::size_t envelope_samples = 64;
  double sample_radius = 10.0;
  std::uint64_t seed = 0;
};

class NoCertificateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CompositeLyapunov {
 public:
  const SubsystemLyapunov& subsystem(std::size_t i) const { return family_.at(i); }
  const SubsystemFamily& family() const { return family_; }
  const LyapunovEnvelopes& envelopes() const { return env_; }
  const DecayCertificate& certificate() const { return cert_; }
  const LinfVector& s0() const { return cert_.s0; }
  double lambda() const { return cert_.lambda; }
  double s0_min() const { return s0_min_; }
  double s0_max() const { return s0_max_; }
  double mu() const { return mu_; }
  std::size_t zeta_grid() const { return zeta_grid_; }

 private:
  friend CompositeLyapunov make_composite(SubsystemFamily, LyapunovEnvelopes, const GainOperator&,
                                          const DecayCertificate&, const CompositeOptions&);
  CompositeLyapunov() = default;

  SubsystemFamily family_;
  LyapunovEnvelopes env_;
  DecayCertificate cert_;
  double s0_min_ = 0.0;
  double s0_max_ = 0.0;
  double mu_ = 0.0;
  std::size_t zeta_grid_ = 64;
};

/// Throws NoCertificateError unless `cert` is a valid decay point of `op`.
/// Envelope domination and the coercivity sandwich of every distinct
/// subsystem are sampled; failures throw std::invalid_argument.
CompositeLyapunov make_composite(SubsystemFamily family, LyapunovEnvelopes envelopes, const GainOperator& op,
                                 const DecayCertificate& cert, const CompositeOptions& options = {});

/// sup_i V_i(x_i) / s0_i over the blocks of x.
double evaluate_composite(const CompositeLyapunov& cl, std::span<const double> x, const BlockLayout& layout);

/// Blocks attaining the sup, within rel_tol of it.
std::vector<std::size_t> active_blocks(const CompositeLyapunov& cl, std::span<const double> x,
                                       const BlockLayout& layout, double rel_tol = 1e-12);

/// (psi1(r) / s0_max, psi2(r) / s0_min).
std::pair<double, double> coercivity_envelope(const CompositeLyapunov& cl, double x_norm);

/// gamma_u_max(r) / (s0_min * lambda).
double composite_external_gain(const CompositeLyapunov& cl, double u_norm);

/// (1 / s0_max) * min over zeta in [s0_min / mu, s0_max] of alpha_tilde(zeta r),
/// grid minimum followed by one golden-section refinement around it.
double composite_decay_rate(const CompositeLyapunov& cl, double r);

struct ImplicationRecord {
  double t = 0.0;
  double V = 0.0;
  double bound = 0.0;   // -alpha(V) + slack
  double margin = 0.0;  // bound - forward difference; negative is a violation
};

struct ImplicationReport {
  std::size_t samples = 0;        // forward differences examined
  std::size_t active = 0;         // samples with V > gamma(||u||)
  std::size_t non_decreasing = 0; // active samples with V(t+h) >= V(t)
  double step = 0.0;
  double curvature = 0.0;         // C in slack = C * h
  double slack = 0.0;
  double worst_margin = 0.0;
  std::vector<ImplicationRecord> violations;

  bool ok() const { return violations.empty(); }
};

/// Forward-difference check of V > gamma(||u||) => D+V <= -alpha(V). The
/// slack constant is half the largest second difference of the smooth
/// blocks V_i / s0_i (the sup itself has kinks).
ImplicationReport check_implication_along_trajectory(const CompositeLyapunov& cl, const Trajectory& traj,
                                                     const InputSignal& u);

/// "t,V,bound,margin" records.
void write_implication_csv(std::ostream& os, const ImplicationReport& report);

struct SublevelReport {
  bool entered = false;
  double entry_time = 0.0;
  bool stays = false;
  double level = 0.0;
  double max_after_entry = 0.0;
  double terminal_value = 0.0;
};

/// First sample with V <= level and whether V stays <= level afterwards.
SublevelReport check_sublevel(const CompositeLyapunov& cl, const Trajectory& traj, double level);

}  // namespace issnet
