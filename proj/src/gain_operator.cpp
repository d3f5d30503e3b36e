#include "issnet/gain_operator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace issnet {

AggregationSpec AggregationSpec::mixed(std::size_t split_index) {
  if (split_index == 0) throw std::invalid_argument("AggregationSpec::mixed: split index must be positive");
  return AggregationSpec(Kind::Mixed, split_index);
}

double AggregationSpec::aggregate(std::span<const double> terms) const {
  switch (kind_) {
    case Kind::Sum:
      return std::accumulate(terms.begin(), terms.end(), 0.0);
    case Kind::Max: {
      double best = 0.0;
      for (double t : terms) best = std::max(best, t);
      return best;
    }
    case Kind::Mixed: {
      const std::size_t split = std::min(split_, terms.size());
      double head = 0.0;
      for (std::size_t k = 0; k < split; ++k) head = std::max(head, terms[k]);
      double tail = 0.0;
      for (std::size_t k = split; k < terms.size(); ++k) tail += terms[k];
      return head + tail;
    }
  }
  return 0.0;
}

std::string AggregationSpec::name() const {
  switch (kind_) {
    case Kind::Sum: return "sum";
    case Kind::Max: return "max";
    case Kind::Mixed: return "mixed(" + std::to_string(split_) + ")";
  }
  return "?";
}

GainRow::GainRow(std::vector<GainEntry> entries, AggregationSpec aggregation)
    : aggregation_(aggregation) {
  entries_.reserve(entries.size());
  for (const GainEntry& e : entries) {
    if (!std::isfinite(e.weight) || e.weight < 0.0) {
      std::ostringstream msg;
      msg << "GainRow: weight " << e.weight << " for target " << e.target << " is not finite and nonnegative";
      throw std::invalid_argument(msg.str());
    }
    if (e.weight > 0.0) entries_.push_back(e);
  }
}

GainOperator::GainOperator(Form form, std::vector<GainRow> prefix_rows, std::vector<GainRow> period_rows)
    : form_(form), prefix_rows_(std::move(prefix_rows)), period_rows_(std::move(period_rows)) {
  bool first = true;
  auto scan = [&](const std::vector<GainRow>& rows, std::size_t base, bool absolute) {
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (const GainEntry& e : rows[r].entries()) {
        const std::int64_t off = absolute ? e.target - static_cast<std::int64_t>(base + r) : e.target;
        if (first) {
          min_offset_ = max_offset_ = off;
          first = false;
        } else {
          min_offset_ = std::min(min_offset_, off);
          max_offset_ = std::max(max_offset_, off);
        }
      }
    }
  };
  if (form_ == Form::Finite) {
    scan(prefix_rows_, 0, true);
  } else {
    scan(prefix_rows_, 0, false);
    scan(period_rows_, 0, false);
  }
}

GainOperator GainOperator::finite(std::vector<GainRow> rows) {
  const auto n = static_cast<std::int64_t>(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (const GainEntry& e : rows[i].entries()) {
      if (e.target < 0 || e.target >= n) {
        std::ostringstream msg;
        msg << "GainOperator: row " << i << " targets column " << e.target << " outside [0, " << n << ")";
        throw std::invalid_argument(msg.str());
      }
    }
  }
  return GainOperator(Form::Finite, std::move(rows), {});
}

GainOperator GainOperator::periodic(std::vector<GainRow> prefix_rows, std::vector<GainRow> period_rows) {
  if (period_rows.empty()) throw std::invalid_argument("GainOperator: periodic operator needs at least one period row");
  return GainOperator(Form::Periodic, std::move(prefix_rows), std::move(period_rows));
}

GainOperator GainOperator::from_matrix(const std::vector<std::vector<double>>& matrix,
                                       AggregationSpec aggregation) {
  std::vector<GainRow> rows;
  rows.reserve(matrix.size());
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    if (matrix[i].size() != matrix.size()) throw std::invalid_argument("GainOperator::from_matrix: matrix is not square");
    std::vector<GainEntry> entries;
    for (std::size_t j = 0; j < matrix[i].size(); ++j) {
      entries.push_back({static_cast<std::int64_t>(j), matrix[i][j]});
    }
    rows.emplace_back(std::move(entries), aggregation);
  }
  return finite(std::move(rows));
}

const GainRow& GainOperator::row(std::size_t i) const {
  if (i < prefix_rows_.size()) return prefix_rows_[i];
  if (form_ == Form::Finite) throw std::out_of_range("GainOperator::row: index outside finite operator");
  return period_rows_[(i - prefix_rows_.size()) % period_rows_.size()];
}

std::int64_t GainOperator::column(std::size_t i, const GainEntry& entry) const {
  if (form_ == Form::Finite) return entry.target;
  const std::int64_t j = static_cast<std::int64_t>(i) + entry.target;
  return j < 0 ? -1 : j;
}

bool GainOperator::uniform_kind(AggregationSpec::Kind kind) const {
  auto same = [kind](const GainRow& r) { return r.aggregation().kind() == kind; };
  return std::all_of(prefix_rows_.begin(), prefix_rows_.end(), same) &&
         std::all_of(period_rows_.begin(), period_rows_.end(), same);
}

double GainOperator::gain(std::size_t i, std::size_t j) const {
  const GainRow& r = row(i);
  double total = 0.0;
  for (const GainEntry& e : r.entries()) {
    if (column(i, e) != static_cast<std::int64_t>(j)) continue;
    if (r.aggregation().kind() == AggregationSpec::Kind::Max) {
      total = std::max(total, e.weight);
    } else {
      total += e.weight;
    }
  }
  return total;
}

namespace {

double evaluate_row(const GainOperator& op, std::size_t i, const LinfVector& s, std::vector<double>& terms) {
  const GainRow& r = op.row(i);
  terms.clear();
  for (const GainEntry& e : r.entries()) {
    const std::int64_t j = op.column(i, e);
    terms.push_back(j < 0 ? 0.0 : e.weight * s.at(static_cast<std::size_t>(j)));
  }
  return r.aggregation().aggregate(terms);
}

}  // namespace

LinfVector apply(const GainOperator& op, const LinfVector& s) {
  std::vector<double> terms;
  if (op.is_finite()) {
    std::vector<double> out(op.dimension());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = evaluate_row(op, i, s, terms);
    return LinfVector::finite(std::move(out));
  }

  // From index `start` on, every row is a period row and every target lies in
  // the periodic part of s, so the output repeats with period lcm(p, q).
  const std::size_t s_head = s.prefix().size();
  const std::size_t s_period = s.is_finite() ? 1 : s.period();
  const auto shifted = static_cast<std::int64_t>(s_head) - op.min_offset();
  const std::size_t start = std::max(op.dimension(), static_cast<std::size_t>(std::max<std::int64_t>(0, shifted)));
  const std::size_t period = std::lcm(op.period(), s_period);

  std::vector<double> head(start);
  for (std::size_t i = 0; i < start; ++i) head[i] = evaluate_row(op, i, s, terms);
  std::vector<double> block(period);
  for (std::size_t k = 0; k < period; ++k) block[k] = evaluate_row(op, start + k, s, terms);
  return LinfVector::periodic(std::move(head), std::move(block)).canonical();
}

double row_gain_bound(const GainOperator& op) {
  const bool all_sum = op.uniform_kind(AggregationSpec::Kind::Sum);
  const bool all_max = op.uniform_kind(AggregationSpec::Kind::Max);
  if (!all_sum && !all_max) throw std::invalid_argument("row_gain_bound: operator mixes aggregation kinds");

  // Period rows far from index 0 keep all of their entries, so the sup over
  // the infinite index set is attained by the stored patterns.
  double best = 0.0;
  auto visit = [&](const GainRow& r) {
    double v = 0.0;
    for (const GainEntry& e : r.entries()) v = all_sum ? v + e.weight : std::max(v, e.weight);
    best = std::max(best, v);
  };
  if (op.is_finite()) {
    for (const GainRow& r : op.prefix_rows()) visit(r);
  } else {
    // prefix rows may lose entries that point below index 0
    std::vector<double> terms;
    for (std::size_t i = 0; i < op.dimension(); ++i) best = std::max(best, evaluate_row(op, i, LinfVector::ones(), terms));
    for (const GainRow& r : op.period_rows()) visit(r);
  }
  return best;
}

double well_definedness_bound(const GainOperator& op) {
  const double generic = sup_norm(apply(op, LinfVector::ones()));
  if (op.uniform_kind(AggregationSpec::Kind::Sum) || op.uniform_kind(AggregationSpec::Kind::Max)) {
    const double closed_form = row_gain_bound(op);
    if (closed_form != generic) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "well_definedness_bound: generic value " << generic << " disagrees with row bound " << closed_form;
      throw std::logic_error(msg.str());
    }
  }
  return generic;
}

// ---------------------------------------------------------------------------

std::string to_string(Axiom axiom) {
  switch (axiom) {
    case Axiom::Homogeneity: return "homogeneity";
    case Axiom::Monotonicity: return "monotonicity";
    case Axiom::Subadditivity: return "subadditivity";
  }
  return "?";
}

namespace {

constexpr double kAxiomRelTol = 1e-12;

double tolerance_for(double magnitude) { return kAxiomRelTol * std::max(1.0, std::abs(magnitude)); }

struct MhafProbe {
  const AggregationFunction& agg;
  std::span<const double> weights;

  double operator()(std::span<const double> s) const {
    std::vector<double> terms(weights.size());
    for (std::size_t j = 0; j < weights.size(); ++j) terms[j] = weights[j] * s[j];
    return agg(terms);
  }
};

void check_mhaf_sample(const MhafProbe& mu, std::span<const double> s, std::span<const double> r_scale,
                       std::span<const double> t, double c, std::size_t trial, AxiomReport& report) {
  const std::size_t m = s.size();
  std::vector<double> cs(m), r(m), st(m);
  for (std::size_t j = 0; j < m; ++j) {
    cs[j] = c * s[j];
    r[j] = r_scale[j] * s[j];
    st[j] = s[j] + t[j];
  }
  const double mu_s = mu(s);

  const double lhs_h = mu(cs);
  const double rhs_h = c * mu_s;
  const double defect_h = std::abs(lhs_h - rhs_h);
  if (defect_h > tolerance_for(rhs_h)) {
    std::ostringstream d;
    d << "mu(c*s) = " << lhs_h << " but c*mu(s) = " << rhs_h;
    report.violations.push_back({Axiom::Homogeneity, trial, defect_h, c, {s.begin(), s.end()}, d.str()});
  }

  const double mu_r = mu(r);
  if (mu_r > mu_s + tolerance_for(mu_s)) {
    std::ostringstream d;
    d << "r <= s but mu(r) = " << mu_r << " > mu(s) = " << mu_s;
    report.violations.push_back({Axiom::Monotonicity, trial, mu_r - mu_s, 0.0, {s.begin(), s.end()}, d.str()});
  }

  const double mu_st = mu(st);
  const double bound = mu_s + mu(t);
  if (mu_st > bound + tolerance_for(bound)) {
    std::ostringstream d;
    d << "mu(s+t) = " << mu_st << " > mu(s)+mu(t) = " << bound;
    report.violations.push_back({Axiom::Subadditivity, trial, mu_st - bound, 0.0, {s.begin(), s.end()}, d.str()});
  }
  report.checks += 3;
}

}  // namespace

AxiomReport check_mhaf_axioms(const AggregationFunction& agg, std::span<const double> weights,
                              std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw std::invalid_argument("check_mhaf_axioms: trials must be >= 1");
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) throw std::invalid_argument("check_mhaf_axioms: weights must be nonnegative");
  }
  const MhafProbe mu{agg, weights};
  const std::size_t m = weights.size();
  AxiomReport report;
  report.trials = trials;

  // deterministic probe: s = 1, r = s/2, t = s, c = 2
  {
    std::vector<double> ones(m, 1.0), half(m, 0.5);
    check_mhaf_sample(mu, ones, half, ones, 2.0, 0, report);
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> value(0.0, 10.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> scale(0.0, 10.0);
  std::bernoulli_distribution zero(0.15);
  std::vector<double> s(m), r(m), t(m);
  for (std::size_t trial = 1; trial <= trials; ++trial) {
    for (std::size_t j = 0; j < m; ++j) {
      s[j] = zero(rng) ? 0.0 : value(rng);
      r[j] = unit(rng);
      t[j] = zero(rng) ? 0.0 : value(rng);
    }
    check_mhaf_sample(mu, s, r, t, scale(rng), trial, report);
  }
  return report;
}

AxiomReport check_mhaf_axioms(const AggregationSpec& agg, std::span<const double> weights,
                              std::size_t trials, std::uint64_t seed) {
  const AggregationFunction f = [agg](std::span<const double> terms) { return agg.aggregate(terms); };
  return check_mhaf_axioms(f, weights, trials, seed);
}

namespace {

// Random vector shaped for `op` and a companion r <= s with the same layout.
struct SamplePair {
  LinfVector s;
  LinfVector r;
};

SamplePair random_pair(const GainOperator& op, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> value(0.0, 10.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::bernoulli_distribution zero(0.1);
  auto draw = [&](std::size_t n, std::vector<double>& s, std::vector<double>& r) {
    s.resize(n);
    r.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      s[k] = zero(rng) ? 0.0 : value(rng);
      r[k] = unit(rng) * s[k];
    }
  };
  std::vector<double> sp, rp, sb, rb;
  if (op.is_finite()) {
    draw(op.dimension(), sp, rp);
    return {LinfVector::finite(sp), LinfVector::finite(rp)};
  }
  std::uniform_int_distribution<std::size_t> head_len(0, 4), block_len(1, 4);
  draw(head_len(rng), sp, rp);
  draw(block_len(rng), sb, rb);
  return {LinfVector::periodic(sp, sb), LinfVector::periodic(rp, rb)};
}

}  // namespace

AxiomReport check_operator_axioms(const GainOperator& op, std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw std::invalid_argument("check_operator_axioms: trials must be >= 1");
  AxiomReport report;
  report.trials = trials;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> scale(0.0, 10.0);

  auto sample_of = [](const LinfVector& v) {
    std::vector<double> out;
    for (std::size_t i = 0; i < v.stored_size(); ++i) out.push_back(v.at(i));
    return out;
  };

  for (std::size_t trial = 0; trial < trials; ++trial) {
    const SamplePair p = random_pair(op, rng);
    const SamplePair q = random_pair(op, rng);
    const double c = scale(rng);
    const LinfVector gs = apply(op, p.s);

    // homogeneity
    const LinfVector lhs = apply(op, p.s.scaled(c));
    const LinfVector rhs = gs.scaled(c);
    const double mag = sup_norm(rhs);
    const double defect_h = std::max(max_excess(lhs, rhs), max_excess(rhs, lhs));
    if (defect_h > tolerance_for(mag)) {
      report.violations.push_back({Axiom::Homogeneity, trial, defect_h, c, sample_of(p.s), "Gamma(c s) != c Gamma(s)"});
    }

    // monotonicity: exact
    const LinfVector gr = apply(op, p.r);
    if (!partial_leq(gr, gs)) {
      report.violations.push_back({Axiom::Monotonicity, trial, max_excess(gr, gs), 0.0, sample_of(p.s),
                                   "r <= s but Gamma(r) not <= Gamma(s)"});
    }

    // subadditivity
    const LinfVector sum_in = affine_combine(1.0, p.s, 1.0, q.s);
    const LinfVector sum_out = affine_combine(1.0, gs, 1.0, apply(op, q.s));
    const LinfVector g_sum = apply(op, sum_in);
    const double defect_s = max_excess(g_sum, sum_out);
    if (defect_s > tolerance_for(sup_norm(sum_out))) {
      report.violations.push_back({Axiom::Subadditivity, trial, defect_s, 0.0, sample_of(p.s),
                                   "Gamma(s+t) not <= Gamma(s)+Gamma(t)"});
    }
    report.checks += 3;
  }
  return report;
}

}  // namespace issnet
