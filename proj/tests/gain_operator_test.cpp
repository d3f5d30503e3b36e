#include "issnet/gain_operator.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

namespace issnet {
namespace {

GainOperator two_by_two(AggregationSpec agg, double g) { return GainOperator::from_matrix({{0, g}, {g, 0}}, agg); }

// Two-row periodic operator with a back edge on even rows and two forward
// edges everywhere.
GainOperator banded(AggregationSpec agg) {
  GainRow even({{-1, 0.2}, {1, 0.3}, {2, 0.1}}, agg);
  GainRow odd({{1, 0.25}, {2, 0.15}}, agg);
  return GainOperator::periodic({}, {even, odd});
}

TEST(Apply, Examples) {
  EXPECT_EQ(apply(two_by_two(AggregationSpec::sum(), 0.5), LinfVector::finite({1, 1})), LinfVector::finite({0.5, 0.5}));
  EXPECT_EQ(apply(two_by_two(AggregationSpec::max(), 0.9), LinfVector::finite({1, 2})), LinfVector::finite({1.8, 0.9}));
  EXPECT_EQ(apply(banded(AggregationSpec::sum()), LinfVector::zeros()), LinfVector::zeros());
  EXPECT_EQ(apply(two_by_two(AggregationSpec::max(), 0.9), LinfVector::finite({0, 0})), LinfVector::finite({0, 0}));
}

TEST(Apply, PeriodicMatchesDirectEvaluation) {
  for (const auto agg : {AggregationSpec::sum(), AggregationSpec::max(), AggregationSpec::mixed(1)}) {
    const auto op = banded(agg);
    const auto s = LinfVector::periodic({3, 0.5}, {1, 2, 4});
    const auto out = apply(op, s);
    ASSERT_TRUE(out.is_periodic());
    for (std::size_t i = 0; i < 60; ++i) {
      const GainRow& row = op.row(i);
      std::vector<double> terms;
      for (const auto& e : row.entries()) {
        const auto j = static_cast<std::int64_t>(i) + e.target;
        terms.push_back(j < 0 ? 0.0 : e.weight * s.at(static_cast<std::size_t>(j)));
      }
      double expect = 0.0;
      if (agg.kind() == AggregationSpec::Kind::Sum) {
        for (double x : terms) expect += x;
      } else if (agg.kind() == AggregationSpec::Kind::Max) {
        for (double x : terms) expect = std::max(expect, x);
      } else {
        expect = terms[0];
        for (std::size_t k = 1; k < terms.size(); ++k) expect += terms[k];
      }
      EXPECT_DOUBLE_EQ(out.at(i), expect) << agg.name() << " i=" << i;
    }
  }
}

TEST(Apply, PeriodicOnFiniteInput) {
  const auto op = banded(AggregationSpec::sum());
  const auto out = apply(op, LinfVector::finite({1, 1, 1}));
  // row 3 (odd) reaches indices 4 and 5; row 2 reaches 1, 3, 4
  EXPECT_DOUBLE_EQ(out.at(0), 0.3 + 0.1);
  EXPECT_DOUBLE_EQ(out.at(1), 0.25);
  EXPECT_DOUBLE_EQ(out.at(2), 0.2);
  EXPECT_DOUBLE_EQ(out.at(3), 0.0);
  EXPECT_DOUBLE_EQ(out.at(100), 0.0);
}

TEST(Apply, PrefixRows) {
  GainRow head({{1, 2.0}}, AggregationSpec::sum());
  GainRow tail({{-1, 0.5}}, AggregationSpec::sum());
  const auto op = GainOperator::periodic({head}, {tail});
  const auto out = apply(op, LinfVector::periodic({1}, {3}));
  EXPECT_DOUBLE_EQ(out.at(0), 6.0);
  EXPECT_DOUBLE_EQ(out.at(1), 0.5);
  EXPECT_DOUBLE_EQ(out.at(2), 1.5);
  EXPECT_DOUBLE_EQ(out.at(7), 1.5);
}

TEST(Operator, RejectsBadInput) {
  EXPECT_THROW(GainOperator::finite({GainRow({{2, 1.0}}, AggregationSpec::sum())}), std::invalid_argument);
  EXPECT_THROW(GainRow({{0, -1.0}}, AggregationSpec::sum()), std::invalid_argument);
  EXPECT_THROW(AggregationSpec::mixed(0), std::invalid_argument);
  EXPECT_THROW(GainOperator::periodic({}, {}), std::invalid_argument);
}

TEST(Operator, ZeroWeightsAreDropped) {
  GainRow row({{0, 0.0}, {1, 0.4}}, AggregationSpec::sum());
  ASSERT_EQ(row.entries().size(), 1u);
  EXPECT_EQ(row.entries()[0].target, 1);
}

TEST(WellDefinedness, Examples) {
  const auto sum_op = GainOperator::periodic({}, {GainRow({{1, 0.2}, {2, 0.3}}, AggregationSpec::sum())});
  EXPECT_DOUBLE_EQ(well_definedness_bound(sum_op), 0.5);
  EXPECT_EQ(well_definedness_bound(sum_op), row_gain_bound(sum_op));

  const auto max_op = GainOperator::from_matrix({{0.3, 0.9}, {0.9, 0.1}}, AggregationSpec::max());
  EXPECT_EQ(well_definedness_bound(max_op), 0.9);

  const auto empty = GainOperator::finite({GainRow(), GainRow()});
  EXPECT_EQ(well_definedness_bound(empty), 0.0);
}

TEST(WellDefinedness, BackEdgesBeforeIndexZeroAreAbsent) {
  // the only row with its back edge clipped is row 0, so the sup is still
  // the full row sum
  const auto op = banded(AggregationSpec::sum());
  EXPECT_DOUBLE_EQ(well_definedness_bound(op), 0.6);
}

TEST(WellDefinedness, RemarkOneAgreementOnRandomOperators) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> w(0, 1);
  std::uniform_int_distribution<int> dim(1, 8);
  for (int t = 0; t < 200; ++t) {
    const int n = dim(rng);
    std::vector<std::vector<double>> m(n, std::vector<double>(n));
    for (auto& row : m)
      for (double& x : row) x = w(rng) < 0.4 ? 0.0 : w(rng);
    double row_sum = 0.0, entry_max = 0.0;
    for (const auto& row : m) {
      double s = 0.0;
      for (double x : row) {
        s += x;
        entry_max = std::max(entry_max, x);
      }
      row_sum = std::max(row_sum, s);
    }
    EXPECT_DOUBLE_EQ(well_definedness_bound(GainOperator::from_matrix(m, AggregationSpec::sum())), row_sum);
    EXPECT_EQ(well_definedness_bound(GainOperator::from_matrix(m, AggregationSpec::max())), entry_max);
  }
}

TEST(RowGainBound, RejectsMixed) {
  EXPECT_THROW(row_gain_bound(banded(AggregationSpec::mixed(1))), std::invalid_argument);
}

TEST(Mhaf, StandardAggregationsHaveNoViolations) {
  const std::vector<double> weights{0.1, 0.5, 2.0, 0.0, 1.3};
  for (const auto agg : {AggregationSpec::sum(), AggregationSpec::max(), AggregationSpec::mixed(2)}) {
    const AxiomReport r = check_mhaf_axioms(agg, weights, 1000, 99);
    EXPECT_TRUE(r.ok()) << agg.name();
    EXPECT_EQ(r.trials, 1000u);
  }
}

TEST(Mhaf, SquareIsCaughtAtTheProbe) {
  const AggregationFunction square = [](std::span<const double> s) { return s[0] * s[0]; };
  const std::vector<double> weights{1.0};
  const AxiomReport r = check_mhaf_axioms(square, weights, 10, 1);
  ASSERT_FALSE(r.ok());
  const auto& v = r.violations.front();
  EXPECT_EQ(v.axiom, Axiom::Homogeneity);
  EXPECT_EQ(v.scale, 2.0);
  ASSERT_EQ(v.sample.size(), 1u);
  EXPECT_EQ(v.sample[0], 1.0);
  EXPECT_DOUBLE_EQ(v.defect, 2.0);
}

TEST(Mhaf, NonMonotoneIsCaught) {
  const AggregationFunction neg = [](std::span<const double> s) { return std::abs(1.0 * s[0] - 2.0 * s[1]); };
  const std::vector<double> weights{1.0, 1.0};
  const AxiomReport r = check_mhaf_axioms(neg, weights, 200, 3);
  EXPECT_TRUE(std::any_of(r.violations.begin(), r.violations.end(),
                          [](const AxiomViolation& v) { return v.axiom == Axiom::Monotonicity; }));
}

TEST(Mhaf, SuperadditiveIsCaught) {
  const std::vector<double> weights{1.0, 1.0};
  const AggregationFunction l2 = [](std::span<const double> s) { return std::sqrt(s[0] * s[0] + s[1] * s[1]); };
  EXPECT_TRUE(check_mhaf_axioms(l2, weights, 300, 4).ok());  // any monotone norm qualifies

  // (sqrt a + sqrt b)^2 is homogeneous and monotone but not subadditive
  const AggregationFunction sq_sum = [](std::span<const double> s) {
    const double a = std::sqrt(s[0]) + std::sqrt(s[1]);
    return a * a;
  };
  const AxiomReport r = check_mhaf_axioms(sq_sum, weights, 300, 4);
  EXPECT_TRUE(std::any_of(r.violations.begin(), r.violations.end(),
                          [](const AxiomViolation& v) { return v.axiom == Axiom::Subadditivity; }));
}

TEST(OperatorAxioms, HoldForAllKinds) {
  for (const auto agg : {AggregationSpec::sum(), AggregationSpec::max(), AggregationSpec::mixed(1)}) {
    EXPECT_TRUE(check_operator_axioms(banded(agg), 300, 17).ok()) << agg.name();
    EXPECT_TRUE(check_operator_axioms(two_by_two(agg, 0.7), 300, 18).ok()) << agg.name();
  }
}

TEST(OperatorAxioms, HeterogeneousRows) {
  GainRow a({{0, 0.5}, {1, 0.5}}, AggregationSpec::sum());
  GainRow b({{0, 0.5}, {1, 0.5}, {2, 0.1}}, AggregationSpec::max());
  GainRow c({{0, 1.0}, {2, 0.5}}, AggregationSpec::mixed(1));
  EXPECT_TRUE(check_operator_axioms(GainOperator::finite({a, b, c}), 300, 19).ok());
}

TEST(Periodicity, OutputPeriodDividesLcm) {
  const auto op = banded(AggregationSpec::max());
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> w(0, 2);
  std::uniform_int_distribution<int> plen(0, 3), blen(1, 5);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> prefix(plen(rng)), block(blen(rng));
    for (double& x : prefix) x = w(rng);
    for (double& x : block) x = w(rng);
    const auto s = LinfVector::periodic(prefix, block);
    const auto out = apply(op, s);
    ASSERT_TRUE(out.is_periodic());
    EXPECT_EQ(std::lcm<std::size_t>(2, block.size()) % out.period(), 0u);
    EXPECT_LE(out.prefix().size(), prefix.size() + 2);
  }
}

}  // namespace
}  // namespace issnet
