#include "issnet/lyapunov.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "issnet/network_sim.hpp"

namespace issnet {
namespace {

// Periodic sum operator with Gamma(1) = 0.5 * 1.
GainOperator half_shift() { return GainOperator::periodic({}, {GainRow({{1, 0.5}}, AggregationSpec::sum())}); }

LyapunovEnvelopes quadratic_envelopes(double rate, ScalarFunction gamma_u_max = [](double r) { return r * r; },
                                      ScalarFunction psi2 = [](double r) { return 0.5 * r * r; }) {
  LyapunovEnvelopes env;
  env.psi1 = [](double r) { return 0.5 * r * r; };
  env.psi2 = std::move(psi2);
  env.gamma_u_max = std::move(gamma_u_max);
  env.alpha_tilde = [rate](double r) { return rate * r; };
  return env;
}

CompositeLyapunov periodic_composite(double s0_value, double lambda) {
  SubsystemFamily family;
  family.period = {quadratic_subsystem(1.0)};
  const auto cert = verify_decay_point(half_shift(), LinfVector::constant(s0_value), lambda, 1e-9);
  return make_composite(family, quadratic_envelopes(1.0), half_shift(), cert);
}

TEST(EvaluateComposite, Examples) {
  const auto cl = periodic_composite(1.0, 0.75);
  const auto layout = BlockLayout::uniform(3, 1);
  EXPECT_DOUBLE_EQ(evaluate_composite(cl, std::vector<double>{1, 2, 0}, layout), 2.0);
  EXPECT_EQ(evaluate_composite(cl, std::vector<double>{0, 0, 0}, layout), 0.0);

  const auto cl4 = periodic_composite(4.0, 0.75);
  EXPECT_DOUBLE_EQ(evaluate_composite(cl4, std::vector<double>{2, 0}, BlockLayout::uniform(2, 1)), 0.5);
}

TEST(EvaluateComposite, BlockDimensionMismatch) {
  const auto cl = periodic_composite(1.0, 0.75);
  EXPECT_THROW(evaluate_composite(cl, std::vector<double>{1, 2, 3, 4}, BlockLayout::uniform(2, 2)), std::invalid_argument);
  EXPECT_THROW(evaluate_composite(cl, std::vector<double>{1, 2, 3}, BlockLayout::uniform(2, 1)), std::invalid_argument);
}

TEST(Coercivity, Examples) {
  const auto cl = periodic_composite(1.0, 0.75);
  EXPECT_EQ(coercivity_envelope(cl, 2.0), std::make_pair(2.0, 2.0));
  EXPECT_EQ(coercivity_envelope(cl, 0.0), std::make_pair(0.0, 0.0));

  // s0 in [1, 4], psi2 = r^2
  const auto op = GainOperator::from_matrix({{0.5, 0}, {0, 0.5}}, AggregationSpec::max());
  SubsystemFamily family;
  family.prefix = {quadratic_subsystem(1.0), quadratic_subsystem(1.0)};
  const auto cert = verify_decay_point(op, LinfVector::finite({1, 4}), 0.75, 1e-9);
  const auto wide = make_composite(family, quadratic_envelopes(1.0, [](double r) { return r * r; },
                                                              [](double r) { return r * r; }),
                                   op, cert);
  EXPECT_EQ(wide.s0_min(), 1.0);
  EXPECT_EQ(wide.s0_max(), 4.0);
  EXPECT_EQ(coercivity_envelope(wide, 1.0), std::make_pair(0.125, 1.0));
}

TEST(ExternalGain, Examples) {
  SubsystemFamily family;
  auto linear_input = quadratic_subsystem(1.0);
  linear_input.gamma_u = [](double r) { return r; };
  family.period = {linear_input};
  const auto op = GainOperator::periodic({}, {GainRow({{0, 0.25}}, AggregationSpec::sum())});
  const auto cl = make_composite(family, quadratic_envelopes(1.0, [](double r) { return r; }), op,
                                 verify_decay_point(op, LinfVector::ones(), 0.5, 1e-9));
  EXPECT_DOUBLE_EQ(composite_external_gain(cl, 1.0), 2.0);
  EXPECT_EQ(composite_external_gain(cl, 0.0), 0.0);

  const auto cl2 = periodic_composite(2.0, 0.8);
  EXPECT_DOUBLE_EQ(composite_external_gain(cl2, 2.0), 2.5);
}

TEST(MakeComposite, RefusesInvalidCertificates) {
  SubsystemFamily family;
  family.period = {quadratic_subsystem(1.0)};
  const auto bad = verify_decay_point(half_shift(), LinfVector::ones(), 0.4, 1e-9);  // residual 0.1
  EXPECT_THROW(make_composite(family, quadratic_envelopes(1.0), half_shift(), bad), NoCertificateError);

  // valid for another operator only
  const auto other = GainOperator::periodic({}, {GainRow({{1, 0.9}}, AggregationSpec::sum())});
  const auto cert = verify_decay_point(half_shift(), LinfVector::ones(), 0.75, 1e-9);
  EXPECT_THROW(make_composite(family, quadratic_envelopes(1.0), other, cert), NoCertificateError);
}

TEST(MakeComposite, ChecksEnvelopes) {
  const auto cert = verify_decay_point(half_shift(), LinfVector::ones(), 0.75, 1e-9);
  SubsystemFamily family;
  family.period = {quadratic_subsystem(1.0, 2.0)};  // gamma_u = 2 r^2 exceeds r^2
  EXPECT_THROW(make_composite(family, quadratic_envelopes(1.0), half_shift(), cert), std::invalid_argument);

  family.period = {quadratic_subsystem(0.5)};  // alpha_i below alpha_tilde
  EXPECT_THROW(make_composite(family, quadratic_envelopes(1.0), half_shift(), cert), std::invalid_argument);

  auto broken = quadratic_subsystem(1.0);
  broken.evaluate = [](std::span<const double> x) { return x[0] * x[0]; };  // above psi2 = r^2 / 2
  family.period = {broken};
  EXPECT_THROW(make_composite(family, quadratic_envelopes(1.0), half_shift(), cert), std::invalid_argument);

  family.period = {quadratic_subsystem(1.0)};
  CompositeOptions opt;
  opt.mu = 1.5;  // 1/lambda = 4/3
  EXPECT_THROW(make_composite(family, quadratic_envelopes(1.0), half_shift(), cert, opt), std::invalid_argument);
}

TEST(Properties, Sandwich) {
  const auto op = GainOperator::periodic({}, {GainRow({{1, 0.3}}, AggregationSpec::sum()),
                                              GainRow({{-1, 0.2}}, AggregationSpec::sum())});
  SubsystemFamily family;
  family.period = {quadratic_subsystem(1.0), quadratic_subsystem(1.0)};
  const auto cert = verify_decay_point(op, LinfVector::periodic({}, {1.0, 3.0}), 0.9, 1e-9);
  ASSERT_TRUE(cert.valid());
  const auto cl = make_composite(family, quadratic_envelopes(1.0), op, cert);

  std::mt19937_64 rng(4);
  std::normal_distribution<double> g(0, 2);
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> x(7);
    for (double& v : x) v = g(rng);
    const auto layout = BlockLayout::uniform(7, 1);
    const auto [lo, hi] = coercivity_envelope(cl, state_sup_norm(x, layout));
    const double V = evaluate_composite(cl, x, layout);
    EXPECT_LE(lo, V * (1 + 1e-12));
    EXPECT_LE(V, hi * (1 + 1e-12));
  }
}

TEST(Properties, ScalingCovariance) {
  const auto cl1 = periodic_composite(1.0, 0.75);
  const auto cl3 = periodic_composite(3.0, 0.75);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> level(-3, 3);
  const auto layout = BlockLayout::uniform(6, 1);
  for (int t = 0; t < 500; ++t) {
    std::vector<double> x(6);
    for (double& v : x) v = 0.5 * level(rng);
    EXPECT_DOUBLE_EQ(evaluate_composite(cl3, x, layout), evaluate_composite(cl1, x, layout) / 3.0);
    EXPECT_EQ(active_blocks(cl3, x, layout), active_blocks(cl1, x, layout));
  }
}

TEST(Properties, Lipschitz) {
  const auto cl = periodic_composite(2.0, 0.75);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1, 1);
  const auto layout = BlockLayout::uniform(5, 1);
  for (double R : {0.5, 1.0, 4.0}) {
    for (int t = 0; t < 300; ++t) {
      std::vector<double> x(5), y(5), d(5);
      for (std::size_t i = 0; i < 5; ++i) {
        x[i] = R * u(rng);
        y[i] = R * u(rng);
        d[i] = x[i] - y[i];
      }
      const double lhs = std::abs(evaluate_composite(cl, x, layout) - evaluate_composite(cl, y, layout));
      EXPECT_LE(lhs, R * state_sup_norm(d, layout) / cl.s0_min() * (1 + 1e-12));
    }
  }
}

TEST(DecayRate, LinearAlpha) {
  const auto cl = periodic_composite(2.0, 0.75);
  // alpha(r) = (1 / s0_max) * (s0_min / mu) * r, mu = (1 + 4/3) / 2
  const double mu = 0.5 * (1 + 1 / 0.75);
  EXPECT_DOUBLE_EQ(cl.mu(), mu);
  EXPECT_NEAR(composite_decay_rate(cl, 3.0), 3.0 / mu, 1e-12);
  EXPECT_EQ(composite_decay_rate(cl, 0.0), 0.0);
}

TEST(DecayRate, NonMonotoneAlphaMatchesDenseSearch) {
  const auto op = GainOperator::periodic({}, {GainRow({{1, 0.3}}, AggregationSpec::sum()),
                                              GainRow({{-1, 0.2}}, AggregationSpec::sum())});
  SubsystemFamily family;
  // alpha_i(r) = r (2 + sin 3r) dominates r (1.5 + sin 3r) >= alpha_tilde
  auto wavy = quadratic_subsystem(1.0);
  wavy.alpha = [](double r) { return r * (2.0 + std::sin(3.0 * r)); };
  family.period = {wavy, wavy};
  LyapunovEnvelopes env = quadratic_envelopes(1.0);
  env.alpha_tilde = [](double r) { return r * (1.5 + std::sin(3.0 * r)); };
  const auto cert = verify_decay_point(op, LinfVector::periodic({}, {1.0, 3.0}), 0.9, 1e-9);
  const auto cl = make_composite(family, env, op, cert);

  for (double r : {0.3, 1.0, 2.0, 5.0}) {
    const double lo = cl.s0_min() / cl.mu(), hi = cl.s0_max();
    double dense = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 200000; ++k) dense = std::min(dense, env.alpha_tilde((lo + (hi - lo) * k / 200000.0) * r));
    const double got = composite_decay_rate(cl, r);
    EXPECT_LE(got, dense / hi + 1e-12) << "r=" << r;
    EXPECT_NEAR(got, dense / hi, 1e-8) << "r=" << r;
  }
}

TEST(Implication, EquilibriumIsVacuous) {
  const auto cl = periodic_composite(1.0, 0.75);
  Trajectory traj;
  traj.layout = BlockLayout::uniform(3, 1);
  for (int k = 0; k < 10; ++k) {
    traj.times.push_back(0.1 * k);
    traj.states.push_back({0, 0, 0});
  }
  const auto rep = check_implication_along_trajectory(cl, traj, InputSignal::zero());
  EXPECT_TRUE(rep.ok());
  EXPECT_EQ(rep.active, 0u);
  EXPECT_EQ(rep.samples, 9u);
}

TEST(Implication, EmptyTrajectory) {
  const auto cl = periodic_composite(1.0, 0.75);
  Trajectory traj;
  EXPECT_THROW(check_implication_along_trajectory(cl, traj, InputSignal::zero()), std::invalid_argument);
}

TEST(Implication, ExampleNetworkAndBrokenGains) {
  const ExampleParams p;
  const auto op = derive_example_gains(p);
  const auto cert = synthesize_from_verdict(op, small_gain_check(op, 60));
  const auto cl = example_composite(p, op, cert);

  const auto net = build_example_network(p, 20);
  const auto traj = integrate(net, std::vector<double>(20, 1.0), InputSignal::zero(), 3.0, 1e-2);
  const auto rep = check_implication_along_trajectory(cl, traj, InputSignal::zero());
  EXPECT_TRUE(rep.ok()) << rep.violations.size() << " violations, worst " << rep.worst_margin;
  EXPECT_EQ(rep.active, rep.samples);
  EXPECT_EQ(rep.non_decreasing, 0u);
  // the verdict is stable when h is halved
  const auto half = integrate(net, std::vector<double>(20, 1.0), InputSignal::zero(), 3.0, 5e-3);
  const auto rep_half = check_implication_along_trajectory(cl, half, InputSignal::zero());
  EXPECT_TRUE(rep_half.ok());
  EXPECT_NEAR(rep_half.slack, rep.slack / 2, 0.05 * rep.slack);

  // same Lyapunov data, dynamics with 10x couplings (100x gains)
  const auto wild = build_example_network(p.scaled_coupling(10.0), 20);
  const auto wild_traj = integrate(wild, std::vector<double>(20, 1.0), InputSignal::zero(), 3.0, 1e-2);
  const auto bad = check_implication_along_trajectory(cl, wild_traj, InputSignal::zero());
  EXPECT_FALSE(bad.ok());
  const auto wild_half = integrate(wild, std::vector<double>(20, 1.0), InputSignal::zero(), 3.0, 5e-3);
  const auto bad_half = check_implication_along_trajectory(cl, wild_half, InputSignal::zero());
  EXPECT_FALSE(bad_half.ok());
  // a smaller step shrinks the slack, so halving may add violations but must keep the old ones
  std::size_t kept = 0;
  for (const auto& v : bad.violations)
    kept += std::any_of(bad_half.violations.begin(), bad_half.violations.end(),
                        [&](const ImplicationRecord& w) { return std::abs(w.t - v.t) < 1e-9; });
  EXPECT_EQ(kept, bad.violations.size());
  EXPECT_GE(bad_half.violations.size(), bad.violations.size());
  std::ostringstream csv;
  write_implication_csv(csv, bad);
  EXPECT_EQ(csv.str().rfind("t,V,bound,margin\n", 0), 0u);
}

TEST(Sublevel, EntersAndStays) {
  const auto cl = periodic_composite(1.0, 0.75);
  Trajectory traj;
  traj.layout = BlockLayout::uniform(1, 1);
  for (int k = 0; k < 50; ++k) {
    traj.times.push_back(0.1 * k);
    traj.states.push_back({2.0 * std::exp(-0.1 * k)});
  }
  const auto rep = check_sublevel(cl, traj, 0.5);
  EXPECT_TRUE(rep.entered);
  EXPECT_TRUE(rep.stays);
  EXPECT_LE(rep.max_after_entry, 0.5);
}

}  // namespace
}  // namespace issnet
