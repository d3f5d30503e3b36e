#include "issnet/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <span>
#include <sstream>

#include "issnet/gain_graph.hpp"
#include "issnet/lyapunov.hpp"
#include "issnet/network_sim.hpp"
#include "issnet/small_gain.hpp"

namespace issnet {

namespace fs = std::filesystem;

namespace {

// Round-trip precision for records, short form for text.
std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string shortnum(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string join(std::span<const double> v) {
  std::string out;
  for (double x : v) out += (out.empty() ? "" : " ") + num(x);
  return out;
}

class Report {
 public:
  void line(const std::string& s = {}) { text_ << s << '\n'; }

  void record(const std::string& section, const std::string& key, const std::string& value) {
    records_ << section << '\t' << key << '\t' << value << '\n';
  }
  void record(const std::string& section, const std::string& key, double v) { record(section, key, num(v)); }
  void record(const std::string& section, const std::string& key, std::size_t v) {
    record(section, key, std::to_string(v));
  }
  void record(const std::string& section, const std::string& key, bool v) {
    record(section, key, std::string(v ? "true" : "false"));
  }
  void record(const std::string& section, const std::string& key, const char* v) {
    record(section, key, std::string(v));
  }

  void verdict(const std::string& section, bool pass, std::vector<std::string>& summary) {
    record(section, "result", pass ? "PASS" : "FAIL");
    line(std::string("result: ") + (pass ? "PASS" : "FAIL"));
    line();
    summary.push_back(section + ": " + (pass ? "PASS" : "FAIL"));
  }

  std::string text() const { return text_.str(); }
  std::string records() const { return "section\tkey\tvalue\n" + records_.str(); }

 private:
  std::ostringstream text_;
  std::ostringstream records_;
};

struct Context {
  const AnalysisConfig& cfg;
  AnalysisOptions analysis;
  const RunOptions& opts;
  Report report;
  std::vector<std::string> summary;
  std::vector<fs::path> files;
};

std::string aggregation_name(const GainOperator& op) {
  for (auto kind : {AggregationSpec::Kind::Sum, AggregationSpec::Kind::Max})
    if (op.uniform_kind(kind)) return kind == AggregationSpec::Kind::Sum ? "sum" : "max";
  return "mixed";
}

void describe_operator(Context& c, const std::string& sec, const GainOperator& op) {
  auto& r = c.report;
  r.record(sec, "form", op.is_finite() ? "finite" : "periodic");
  if (op.is_finite()) {
    r.record(sec, "dimension", op.dimension());
    r.line("operator: finite, dimension " + std::to_string(op.dimension()) + ", " + aggregation_name(op));
  } else {
    r.record(sec, "prefix_rows", op.prefix_rows().size());
    r.record(sec, "period", op.period());
    r.line("operator: periodic, " + std::to_string(op.prefix_rows().size()) + " prefix rows, period " +
           std::to_string(op.period()) + ", " + aggregation_name(op));
  }
  r.record(sec, "aggregation", aggregation_name(op));
  r.record(sec, "row_gain_bound", row_gain_bound(op));
}

// ---------------------------------------------------------------------------

struct AnalyzeResult {
  SmallGainVerdict verdict;
  bool ok = false;
};

AnalyzeResult analyze(Context& c, const GainOperator& op) {
  const std::string sec = "analyze";
  auto& r = c.report;
  r.line("== analyze ==");
  describe_operator(c, sec, op);
  const std::size_t n_max = c.analysis.n_max;
  r.record(sec, "n_max", n_max);
  AnalyzeResult out;
  try {
    const SpectralEstimate est = iterate_ones(op, n_max);
    out.verdict = small_gain_check(op, n_max);
    for (std::size_t k = 1; k <= est.norms.size(); ++k) r.record(sec, "norm." + std::to_string(k), est.norms[k - 1]);
    r.record(sec, "root_bound", est.root_bound);
    r.record(sec, "ratio_bound", est.ratio_bound);
    r.record(sec, "upper_bound", est.upper_bound);
    r.record(sec, "certified_n", est.certified_n ? std::to_string(*est.certified_n) : std::string("none"));
    r.line("||Gamma^k(1)||, k = 1..3: " + shortnum(est.norms[0]) +
           (est.norms.size() > 1 ? ", " + shortnum(est.norms[1]) : "") +
           (est.norms.size() > 2 ? ", " + shortnum(est.norms[2]) : ""));
    r.line("spectral radius upper bound: " + shortnum(est.upper_bound) + " (root " + shortnum(est.root_bound) +
           ", ratio " + shortnum(est.ratio_bound) + ")");
  } catch (const OverflowError& e) {
    r.record(sec, "overflow", e.what());
    r.line(std::string("iteration overflowed: ") + e.what());
    out.verdict = SmallGainVerdict{};
    out.verdict.upper_bound = std::numeric_limits<double>::infinity();
  }
  const bool sat = out.verdict.satisfied();
  r.record(sec, "status", sat ? "Satisfied" : "Unknown");
  r.record(sec, "verdict_n", sat ? std::to_string(out.verdict.n) : std::string("none"));
  r.line(sat ? "small-gain condition: Satisfied at n = " + std::to_string(out.verdict.n)
             : "small-gain condition: Unknown (upper bound " + shortnum(out.verdict.upper_bound) + ")");

  try {
    const UgesFit fit = uges_fit(op, LinfVector::ones(), c.analysis.uges_steps);
    r.record(sec, "uges.M", fit.M);
    r.record(sec, "uges.a", fit.a);
    r.record(sec, "uges", fit.uges());
    r.line("UGES fit ||Gamma^k(1)|| ~ M a^k: M = " + shortnum(fit.M) + ", a = " + shortnum(fit.a) +
           (fit.uges() ? " (decaying)" : " (not decaying)"));
  } catch (const std::runtime_error& e) {
    r.record(sec, "uges", std::string("error: ") + e.what());
    r.line(std::string("UGES fit failed: ") + e.what());
  }
  out.ok = sat;
  r.verdict(sec, out.ok, c.summary);
  return out;
}

// ---------------------------------------------------------------------------

bool certify(Context& c, const GainOperator& op, const SmallGainVerdict& verdict) {
  const std::string sec = "certify";
  auto& r = c.report;
  const auto& a = c.analysis;
  r.line("== certify ==");
  auto no_certificate = [&](const std::string& why) {
    r.record(sec, "status", "NONE");
    r.record(sec, "reason", why);
    r.line("no certificate: " + why);
    r.verdict(sec, false, c.summary);
    return false;
  };

  double lambda = 0.0;
  if (a.lambda) {
    lambda = *a.lambda;
  } else if (verdict.satisfied() && verdict.upper_bound < 1.0) {
    lambda = 0.5 * (1.0 + verdict.upper_bound);
  } else {
    return no_certificate("small-gain condition not established, no contraction factor available");
  }
  r.record(sec, "lambda", lambda);

  DecayCertificate cert;
  try {
    cert = synthesize_decay_point(op, lambda, LinfVector::ones(), a.k_max, a.tail_tol, a.tol);
  } catch (const std::runtime_error& e) {
    return no_certificate(std::string("synthesis failed: ") + e.what());
  } catch (const std::invalid_argument& e) {
    return no_certificate(std::string("synthesis failed: ") + e.what());
  }
  r.record(sec, "terms", cert.terms);
  r.record(sec, "converged", cert.converged);
  r.record(sec, "s0.prefix", join(cert.s0.prefix()));
  r.record(sec, "s0.block", join(cert.s0.block()));

  // independent re-verification of the synthesized point
  const DecayCertificate check = verify_decay_point(op, cert.s0, lambda, a.tol);
  r.record(sec, "residual", check.residual);
  r.record(sec, "interiority", check.interiority);
  r.record(sec, "tolerance", check.tolerance);
  r.record(sec, "status", check.valid() ? "VALID" : "INVALID");
  r.line("decay point s0 = " + cert.s0.to_string() + ", lambda = " + shortnum(lambda));
  r.line("residual sup(Gamma(s0) - lambda s0) = " + shortnum(check.residual) + ", inf s0 = " +
         shortnum(check.interiority) + " -> " + (check.valid() ? "VALID" : "INVALID"));

  std::optional<std::size_t> failure;
  if (check.valid()) failure = first_decay_failure(op, check, a.decay_steps, 1e-9);
  r.record(sec, "witness_steps", a.decay_steps);
  r.record(sec, "witness_failure", failure ? std::to_string(*failure) : std::string("none"));
  if (check.valid())
    r.line("Gamma^k(s0) <= lambda^k s0 for k <= " + std::to_string(a.decay_steps) + ": " +
           (failure ? "fails at k = " + std::to_string(*failure) : std::string("holds")));
  const bool pass = check.valid() && !failure;
  r.verdict(sec, pass, c.summary);
  return pass;
}

// ---------------------------------------------------------------------------

bool graph_check(Context& c, const GainOperator& op) {
  const std::string sec = "graph";
  auto& r = c.report;
  const bool is_max = op.uniform_kind(AggregationSpec::Kind::Max);
  if (!is_max && !op.uniform_kind(AggregationSpec::Kind::Sum))
    throw ConfigError({"graph-check needs an operator whose rows all use sum or all use max aggregation"});
  r.line("== graph-check ==");
  const GainGraph g = build_graph(op);
  r.record(sec, "statistic", is_max ? "max_path_product" : "sum_path_products");
  r.record(sec, "nodes", g.node_count());
  r.record(sec, "edges", g.edges().size());
  r.record(sec, "periodic", g.is_periodic());
  r.line(std::string(is_max ? "max path product" : "path sum") + " over walks of length n; graph with " +
         std::to_string(g.node_count()) + " nodes, " + std::to_string(g.edges().size()) + " edges" +
         (g.is_periodic() ? " (periodic window)" : ""));

  const std::size_t depth = c.analysis.graph_depth;
  std::vector<double> norms;
  try {
    norms = iterate_ones(op, depth).norms;
  } catch (const OverflowError& e) {
    r.record(sec, "overflow", e.what());
    r.line(std::string("operator iteration overflowed: ") + e.what());
    r.verdict(sec, false, c.summary);
    return false;
  }

  const bool oracle_ok_size = !g.is_periodic() && g.node_count() <= 10;
  bool identities = true;
  std::optional<std::size_t> holds_at;
  for (std::size_t n = 1; n <= depth; ++n) {
    const double stat = is_max ? max_path_product(g, n) : sum_path_products(g, n);
    const double norm = norms[n - 1];
    const double rel = std::abs(stat - norm) / std::max(std::abs(norm), 1e-300);
    const bool agree = stat == norm || rel <= 1e-12;
    identities = identities && agree;
    const std::string k = "n." + std::to_string(n);
    r.record(sec, k + ".statistic", stat);
    r.record(sec, k + ".operator_norm", norm);
    r.record(sec, k + ".agree", agree);
    std::string oracle_note;
    if (oracle_ok_size && n <= 8) {
      const auto w = enumerate_walks_oracle(g, n);
      const double o = is_max ? w.max_product : w.max_node_sum();
      const bool ok = o == stat || std::abs(o - stat) <= 1e-12 * std::max(std::abs(stat), 1e-300);
      identities = identities && ok;
      r.record(sec, k + ".walk_oracle", o);
      oracle_note = std::string(", walk enumeration ") + (ok ? "agrees" : "DISAGREES");
    }
    if (!holds_at && stat < 1.0) holds_at = n;
    r.line("n = " + std::to_string(n) + ": " + shortnum(stat) + " vs ||Gamma^n(1)|| = " + shortnum(norm) +
           (agree ? "" : " MISMATCH") + oracle_note);
  }
  r.record(sec, "identities", identities);
  r.record(sec, "condition_n", holds_at ? std::to_string(*holds_at) : std::string("none"));
  r.line(holds_at ? "condition < 1 first holds at n = " + std::to_string(*holds_at)
                  : "condition < 1 not reached for n <= " + std::to_string(depth));

  std::ostringstream edges;
  write_edge_list(edges, g);
  const fs::path edge_file = c.opts.out_dir / "graph.edges";
  write_file_atomic(edge_file, edges.str());
  c.files.push_back(edge_file);

  const bool pass = identities && holds_at.has_value();
  r.verdict(sec, pass, c.summary);
  return pass;
}

// ---------------------------------------------------------------------------

const ExampleConfig& require_example(const AnalysisConfig& cfg, Command cmd) {
  if (!cfg.example) throw ConfigError({to_string(cmd) + " needs an [example] section"});
  return *cfg.example;
}

bool example_small_gain(Context& c, const ExampleConfig& ex) {
  const std::string sec = "example";
  auto& r = c.report;
  const auto& p = ex.params;
  r.line("== example ==");
  r.record(sec, "coupling", to_string(p.coupling));
  r.record(sec, "back_free_epsilon", to_string(p.back_free_epsilon));
  for (const auto& [key, v] : std::vector<std::pair<std::string, double>>{{"b_diag", p.b_diag},
                                                                            {"b_back", p.b_back},
                                                                            {"b_fwd1", p.b_fwd1},
                                                                            {"b_fwd2", p.b_fwd2},
                                                                            {"eps", p.eps},
                                                                            {"delta", p.delta},
                                                                            {"delta_prime", p.delta_prime},
                                                                            {"b_input", p.b_input}})
    r.record(sec, key, v);
  const GainOperator op = derive_example_gains(p);
  r.line("coupling " + to_string(p.coupling) + ", rates w/q: " + shortnum(p.row_rate(true)) + " (rows with back term), " +
         shortnum(p.row_rate(false)) + " (others)");
  for (std::size_t row = 0; row < op.period(); ++row) {
    std::string desc;
    for (const auto& e : op.period_rows()[row].entries()) {
      const std::string off = (e.target > 0 ? "+" : "") + std::to_string(e.target);
      r.record(sec, "gain.row" + std::to_string(row) + "." + off, e.weight);
      desc += " [" + off + "] " + shortnum(e.weight);
    }
    r.line("gains, row type " + std::to_string(row) + ":" + desc);
  }
  const auto rep = check_example_small_gain(op, c.analysis.n_max);
  auto terms = [&](const std::string& name, const std::vector<GainProductTerm>& ts, double value) {
    std::string desc;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      r.record(sec, name + ".term." + std::to_string(i + 1), ts[i].value);
      r.record(sec, name + ".walk." + std::to_string(i + 1), ts[i].walk);
      desc += (desc.empty() ? "" : (p.coupling == Coupling::Sum ? " + " : ", ")) + shortnum(ts[i].value);
    }
    r.record(sec, name + ".value", value);
    r.line(name + " (" + std::to_string(ts.size()) + " terms): " +
           (p.coupling == Coupling::Sum ? "" : "max(") + desc + (p.coupling == Coupling::Sum ? "" : ")") + " = " +
           shortnum(value));
  };
  terms("back_free", rep.back_free_terms, rep.back_free_value);
  terms("back", rep.back_terms, rep.back_value);
  r.record(sec, "worst", rep.worst);
  r.record(sec, "margin", rep.margin);
  r.record(sec, "operator_norm2", rep.operator_norm2);
  r.record(sec, "status", rep.verdict.satisfied() ? "Satisfied" : "Unknown");
  r.record(sec, "verdict_n", rep.verdict.satisfied() ? std::to_string(rep.verdict.n) : std::string("none"));
  r.line("length-2 condition: worst " + shortnum(rep.worst) + (rep.pass ? " < 1" : " >= 1") + ", ||Gamma^2(1)|| = " +
         shortnum(rep.operator_norm2));
  if (!rep.note.empty()) {
    r.record(sec, "note", rep.note);
    r.line("note: " + rep.note);
  }
  r.verdict(sec, rep.pass, c.summary);
  return rep.pass;
}

// ---------------------------------------------------------------------------

std::vector<double> composite_series(const CompositeLyapunov& cl, const Trajectory& traj) {
  std::vector<double> v;
  v.reserve(traj.size());
  for (const auto& x : traj.states) v.push_back(evaluate_composite(cl, x, traj.layout));
  return v;
}

bool simulate(Context& c, const ExampleConfig& ex) {
  const std::string sec = "simulate";
  auto& r = c.report;
  const auto& a = c.analysis;
  const auto& p = ex.params;
  r.line("== simulate ==");
  r.record(sec, "horizon", ex.horizon);
  r.record(sec, "dt", ex.dt);
  r.record(sec, "input_norm", ex.input_norm);
  r.line("RK4, dt = " + shortnum(ex.dt) + ", T = " + shortnum(ex.horizon) + ", x0 = 1");

  const GainOperator op = derive_example_gains(p);
  std::optional<CompositeLyapunov> cl;
  try {
    const auto verdict = small_gain_check(op, a.n_max);
    if (!verdict.satisfied()) throw NoCertificateError("small-gain condition not established");
    const auto cert = synthesize_from_verdict(op, verdict, a.k_max, a.tail_tol, a.tol);
    CompositeOptions copt;
    copt.seed = c.opts.seed;
    cl = example_composite(p, op, cert, copt);
    r.record(sec, "lyapunov", "available");
    r.record(sec, "lambda", cl->lambda());
    r.record(sec, "s0_min", cl->s0_min());
    r.record(sec, "s0_max", cl->s0_max());
    r.line("composite V = sup_i V_i / s0_i with s0 in [" + shortnum(cl->s0_min()) + ", " + shortnum(cl->s0_max()) +
           "], lambda = " + shortnum(cl->lambda()));
  } catch (const std::runtime_error& e) {
    r.record(sec, "lyapunov", std::string("none: ") + e.what());
    r.line(std::string("no composite Lyapunov function: ") + e.what());
  }

  bool pass = cl.has_value();
  std::vector<double> terminal;
  for (std::size_t N : ex.sizes) {
    const std::string k = "N." + std::to_string(N);
    const auto net = build_example_network(p, N);
    const std::vector<double> x0(N, 1.0);
    Trajectory traj;
    try {
      traj = integrate(net, x0, InputSignal::zero(), ex.horizon, ex.dt);
    } catch (const BlowUpError& e) {
      r.record(sec, k + ".blowup", e.what());
      r.line("N = " + std::to_string(N) + ": " + e.what());
      pass = false;
      continue;
    }
    const double sup_end = state_sup_norm(traj.states.back(), traj.layout);
    terminal.push_back(sup_end);
    r.record(sec, k + ".terminal_sup_norm", sup_end);
    std::string line = "N = " + std::to_string(N) + ": terminal sup norm " + shortnum(sup_end);

    if (cl) {
      const auto V = composite_series(*cl, traj);
      std::size_t increases = 0;
      double worst_quotient = -std::numeric_limits<double>::infinity();
      for (std::size_t s = 0; s + 1 < V.size(); ++s) {
        if (V[s] <= 0.0) continue;
        if (V[s + 1] >= V[s]) ++increases;
        worst_quotient = std::max(worst_quotient, (V[s + 1] - V[s]) / ex.dt);
      }
      const auto impl = check_implication_along_trajectory(*cl, traj, InputSignal::zero());
      const auto iss = iss_bound_check(traj, *cl, InputSignal::zero());
      r.record(sec, k + ".V0", V.front());
      r.record(sec, k + ".V_end", V.back());
      r.record(sec, k + ".non_decreasing_steps", increases);
      r.record(sec, k + ".max_forward_quotient", worst_quotient);
      r.record(sec, k + ".implication_violations", impl.violations.size());
      r.record(sec, k + ".implication_worst_margin", impl.worst_margin);
      r.record(sec, k + ".iss_bound", iss.pass);
      r.record(sec, k + ".iss_worst_margin", iss.worst_margin);
      line += ", V " + shortnum(V.front()) + " -> " + shortnum(V.back()) +
              (increases == 0 ? " strictly decreasing" : ", " + std::to_string(increases) + " non-decreasing steps") +
              ", implication " + (impl.ok() ? "ok" : std::to_string(impl.violations.size()) + " violations") +
              ", ISS bound " + (iss.pass ? "ok" : "violated");
      pass = pass && increases == 0 && impl.ok() && iss.pass;

      if (ex.input_norm > 0.0) {
        const auto u = InputSignal::constant_per_channel({ex.input_norm});
        const auto traj_u = integrate(net, x0, u, ex.horizon, ex.dt);
        const double level = composite_external_gain(*cl, ex.input_norm) * 1.05;
        const auto sub = check_sublevel(*cl, traj_u, level);
        const auto iss_u = iss_bound_check(traj_u, *cl, u);
        r.record(sec, k + ".input.level", level);
        r.record(sec, k + ".input.entered", sub.entered);
        r.record(sec, k + ".input.entry_time", sub.entry_time);
        r.record(sec, k + ".input.stays", sub.stays);
        r.record(sec, k + ".input.V_end", sub.terminal_value);
        r.record(sec, k + ".input.iss_bound", iss_u.pass);
        line += "; |u| = " + shortnum(ex.input_norm) + ": V_end " + shortnum(sub.terminal_value) + " vs level " +
                shortnum(level) + (sub.entered && sub.stays ? " (entered at t = " + shortnum(sub.entry_time) + ", stays)"
                                                             : " (sublevel not reached or left)");
        pass = pass && sub.entered && sub.stays && iss_u.pass;
        if (c.cfg.report.trajectories) {
          std::ostringstream csv;
          write_trajectory_csv(csv, traj_u, c.cfg.report.stride);
          const fs::path f = c.opts.out_dir / ("trajectory_N" + std::to_string(N) + "_input.csv");
          write_file_atomic(f, csv.str());
          c.files.push_back(f);
        }
      }
    }
    r.line(line);
    if (c.cfg.report.trajectories) {
      std::ostringstream csv;
      write_trajectory_csv(csv, traj, c.cfg.report.stride);
      const fs::path f = c.opts.out_dir / ("trajectory_N" + std::to_string(N) + ".csv");
      write_file_atomic(f, csv.str());
      c.files.push_back(f);
    }
  }
  if (terminal.size() > 1) {
    const auto [lo, hi] = std::minmax_element(terminal.begin(), terminal.end());
    const double spread = *lo > 0.0 ? *hi / *lo - 1.0 : (*hi > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    r.record(sec, "terminal_spread", spread);
    r.line("terminal sup norms agree within " + shortnum(100.0 * spread) + "% across N");
    pass = pass && spread <= 0.05;
  }
  r.verdict(sec, pass, c.summary);
  return pass;
}

void write_outputs(Context& c, const std::string& base) {
  const fs::path txt = c.opts.out_dir / (base + ".txt");
  const fs::path tsv = c.opts.out_dir / (base + ".tsv");
  write_file_atomic(txt, c.report.text());
  write_file_atomic(tsv, c.report.records());
  c.files.insert(c.files.begin(), {txt, tsv});
}

}  // namespace

std::string to_string(Command c) {
  switch (c) {
    case Command::Analyze: return "analyze";
    case Command::Certify: return "certify";
    case Command::GraphCheck: return "graph-check";
    case Command::Simulate: return "simulate";
    case Command::FullReport: return "full-report";
  }
  return "?";
}

Command parse_command(const std::string& name) {
  for (auto c : {Command::Analyze, Command::Certify, Command::GraphCheck, Command::Simulate, Command::FullReport})
    if (to_string(c) == name) return c;
  throw std::invalid_argument("unknown command '" + name + "'");
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

CommandOutcome run_command(Command cmd, const AnalysisConfig& cfg, const RunOptions& opts) {
  Context c{cfg, cfg.analysis, opts, {}, {}, {}};
  if (opts.n_max) {
    if (*opts.n_max == 0) throw ConfigError({"--n-max must be positive"});
    c.analysis.n_max = *opts.n_max;
  }
  // validate before touching the file system
  std::optional<GainOperator> op;
  const ExampleConfig* ex = nullptr;
  if (cmd == Command::Simulate || cmd == Command::FullReport) ex = &require_example(cfg, cmd);
  if (cmd == Command::FullReport) op = derive_example_gains(ex->params);
  else if (cmd != Command::Simulate) op = cfg.resolve_operator();
  if (op && (cmd == Command::GraphCheck || cmd == Command::FullReport) &&
      !op->uniform_kind(AggregationSpec::Kind::Sum) && !op->uniform_kind(AggregationSpec::Kind::Max))
    throw ConfigError({"graph-check needs an operator whose rows all use sum or all use max aggregation"});

  fs::create_directories(opts.out_dir);
  c.report.record("run", "command", to_string(cmd));
  c.report.record("run", "seed", std::to_string(opts.seed));
  c.report.line("issnet " + to_string(cmd));
  c.report.line();

  bool pass = true;
  switch (cmd) {
    case Command::Analyze:
      pass = analyze(c, *op).ok;
      break;
    case Command::Certify: {
      const auto verdict = small_gain_check(*op, c.analysis.n_max);
      pass = certify(c, *op, verdict);
      break;
    }
    case Command::GraphCheck:
      pass = graph_check(c, *op);
      break;
    case Command::Simulate:
      pass = simulate(c, *ex);
      break;
    case Command::FullReport: {
      pass = example_small_gain(c, *ex);
      const auto res = analyze(c, *op);
      pass = res.ok && pass;
      pass = certify(c, *op, res.verdict) && pass;
      pass = graph_check(c, *op) && pass;
      pass = simulate(c, *ex) && pass;
      break;
    }
  }
  c.report.record("run", "result", pass ? "PASS" : "FAIL");
  c.report.line(std::string("overall: ") + (pass ? "PASS" : "FAIL"));
  write_outputs(c, to_string(cmd));

  CommandOutcome out;
  out.exit_code = pass ? kExitPass : kExitFail;
  out.files = std::move(c.files);
  for (const auto& s : c.summary) out.summary += s + "\n";
  out.summary += std::string("overall: ") + (pass ? "PASS" : "FAIL") + "\n";
  return out;
}

}  // namespace issnet
