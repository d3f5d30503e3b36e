#include "issnet/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace issnet {

namespace {

std::string join_errors(const std::vector<std::string>& errors) {
  std::string out = "invalid configuration";
  for (const auto& e : errors) out += "\n  " + e;
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

std::optional<double> to_double(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<long long> to_int(const std::string& s) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

struct Section {
  int line = 0;
  std::map<std::string, Entry> keys;
};

using Document = std::map<std::string, Section>;

const std::vector<std::string> kSections = {"operator", "analysis", "example", "report"};

Document tokenize(const std::string& text, std::vector<std::string>& errors) {
  Document doc;
  Section* current = nullptr;
  std::string current_name;
  std::istringstream in(text);
  int lineno = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++lineno;
    std::string line = raw;
    // comments: whole-line '#' or ';', or ' #' after a value
    if (const auto hash = line.find(" #"); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    const std::string at = "line " + std::to_string(lineno) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') {
        errors.push_back(at + "malformed section header");
        current = nullptr;
        continue;
      }
      current_name = trim(line.substr(1, line.size() - 2));
      if (std::find(kSections.begin(), kSections.end(), current_name) == kSections.end()) {
        errors.push_back(at + "unknown section [" + current_name + "]");
        current = nullptr;
        continue;
      }
      if (doc.count(current_name)) {
        errors.push_back(at + "duplicate section [" + current_name + "]");
        current = nullptr;
        continue;
      }
      current = &doc[current_name];
      current->line = lineno;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back(at + "expected 'key = value'");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) {
      errors.push_back(at + "empty key");
      continue;
    }
    if (!current) {
      errors.push_back(at + "key '" + key + "' outside a known section");
      continue;
    }
    if (current->keys.count(key)) {
      errors.push_back(at + "duplicate key '" + key + "' in [" + current_name + "]");
      continue;
    }
    current->keys[key] = Entry{trim(line.substr(eq + 1)), lineno, false};
  }
  return doc;
}

// Typed access to one section; every problem is appended to `errors`.
class Reader {
 public:
  Reader(std::string name, Section& s, std::vector<std::string>& errors)
      : name_(std::move(name)), s_(s), errors_(errors) {}

  Entry* find(const std::string& key) {
    const auto it = s_.keys.find(key);
    if (it == s_.keys.end()) return nullptr;
    it->second.used = true;
    return &it->second;
  }

  void error(const Entry& e, const std::string& key, const std::string& what) {
    errors_.push_back("line " + std::to_string(e.line) + ": [" + name_ + "] " + key + ": " + what);
  }
  void section_error(const std::string& what) {
    errors_.push_back("line " + std::to_string(s_.line) + ": [" + name_ + "] " + what);
  }

  template <class Pred>
  void real(const std::string& key, double& out, Pred ok, const char* requirement) {
    Entry* e = find(key);
    if (!e) return;
    const auto v = to_double(e->value);
    if (!v) return error(*e, key, "expected a number, got '" + e->value + "'");
    if (!ok(*v)) return error(*e, key, std::string("must be ") + requirement);
    out = *v;
  }

  void count(const std::string& key, std::size_t& out, long long min_value = 1) {
    Entry* e = find(key);
    if (!e) return;
    const auto v = to_int(e->value);
    if (!v) return error(*e, key, "expected an integer, got '" + e->value + "'");
    if (*v < min_value) return error(*e, key, "must be at least " + std::to_string(min_value));
    out = static_cast<std::size_t>(*v);
  }

  void boolean(const std::string& key, bool& out) {
    Entry* e = find(key);
    if (!e) return;
    if (e->value == "true") out = true;
    else if (e->value == "false") out = false;
    else error(*e, key, "expected true or false");
  }

  /// Index of `value` in `choices`, or nullopt (with an error) if absent.
  std::optional<std::size_t> choice(const std::string& key, const std::vector<std::string>& choices) {
    Entry* e = find(key);
    if (!e) return std::nullopt;
    for (std::size_t i = 0; i < choices.size(); ++i)
      if (choices[i] == e->value) return i;
    std::string list;
    for (const auto& c : choices) list += (list.empty() ? "" : ", ") + c;
    error(*e, key, "expected one of " + list + ", got '" + e->value + "'");
    return std::nullopt;
  }

  /// Keys "<prefix>.K" as K -> entry, checking that K runs 0..count-1.
  std::map<std::size_t, Entry*> indexed(const std::string& prefix, bool& ok) {
    std::map<std::size_t, Entry*> out;
    for (auto& [key, entry] : s_.keys) {
      if (key.rfind(prefix + ".", 0) != 0) continue;
      entry.used = true;
      const auto idx = to_int(key.substr(prefix.size() + 1));
      if (!idx || *idx < 0) {
        error(entry, key, "index must be a nonnegative integer");
        ok = false;
        continue;
      }
      out[static_cast<std::size_t>(*idx)] = &entry;
    }
    std::size_t expect = 0;
    for (const auto& [idx, entry] : out) {
      if (idx != expect) {
        error(*entry, prefix + "." + std::to_string(idx), "missing " + prefix + "." + std::to_string(expect));
        ok = false;
        break;
      }
      ++expect;
    }
    return out;
  }

  void reject_unused() {
    for (const auto& [key, entry] : s_.keys)
      if (!entry.used) error(entry, key, "unknown key");
  }

  int line() const { return s_.line; }

 private:
  std::string name_;
  Section& s_;
  std::vector<std::string>& errors_;
};

bool weight_ok(double w, Reader& r, const Entry& e, const std::string& key, const std::string& token) {
  if (w < 0.0) {
    r.error(e, key, "negative weight " + token);
    return false;
  }
  return true;
}

std::optional<GainOperator> read_operator(Reader& r, bool& from_example) {
  const auto form = r.choice("form", {"finite", "periodic", "example"});
  if (!r.find("form")) {
    r.section_error("missing required key 'form'");
    return std::nullopt;
  }
  AggregationSpec agg = AggregationSpec::sum();
  if (const auto kind = r.choice("aggregation", {"sum", "max", "mixed"})) {
    if (*kind == 1) agg = AggregationSpec::max();
    if (*kind == 2) {
      std::size_t split = 1;
      if (!r.find("split")) r.section_error("aggregation = mixed needs 'split'");
      r.count("split", split, 1);
      agg = AggregationSpec::mixed(split);
    }
  }
  if (!form) return std::nullopt;
  if (*form == 2) {
    from_example = true;
    return std::nullopt;
  }

  bool ok = true;
  if (*form == 0) {
    const auto rows = r.indexed("row", ok);
    if (!ok) return std::nullopt;
    if (rows.empty()) {
      r.section_error("finite operator needs row.0 .. row.N-1");
      return std::nullopt;
    }
    std::vector<std::vector<double>> matrix;
    for (const auto& [idx, e] : rows) {
      const std::string key = "row." + std::to_string(idx);
      std::vector<double> row;
      for (const auto& tok : split_ws(e->value)) {
        const auto v = to_double(tok);
        if (!v) {
          r.error(*e, key, "expected numbers, got '" + tok + "'");
          ok = false;
          break;
        }
        ok = weight_ok(*v, r, *e, key, tok) && ok;
        row.push_back(*v);
      }
      if (ok && row.size() != rows.size()) {
        r.error(*e, key, "expected " + std::to_string(rows.size()) + " entries, got " + std::to_string(row.size()));
        ok = false;
      }
      matrix.push_back(std::move(row));
    }
    if (!ok) return std::nullopt;
    return GainOperator::from_matrix(matrix, agg);
  }

  auto read_rows = [&](const std::string& prefix) {
    std::vector<GainRow> out;
    for (const auto& [idx, e] : r.indexed(prefix, ok)) {
      const std::string key = prefix + "." + std::to_string(idx);
      std::vector<GainEntry> entries;
      for (const auto& tok : split_ws(e->value)) {
        const auto colon = tok.find(':');
        const auto off = colon == std::string::npos ? std::nullopt : to_int(tok.substr(0, colon));
        const auto w = colon == std::string::npos ? std::nullopt : to_double(tok.substr(colon + 1));
        if (!off || !w) {
          r.error(*e, key, "expected offset:weight pairs, got '" + tok + "'");
          ok = false;
          continue;
        }
        ok = weight_ok(*w, r, *e, key, tok) && ok;
        entries.push_back({*off, *w});
      }
      if (ok) out.emplace_back(std::move(entries), agg);
    }
    return out;
  };
  auto prefix = read_rows("prefix");
  auto period = read_rows("row");
  if (ok && period.empty()) {
    r.section_error("periodic operator needs row.0 .. row.P-1");
    return std::nullopt;
  }
  if (!ok) return std::nullopt;
  return GainOperator::periodic(std::move(prefix), std::move(period));
}

ExampleConfig read_example(Reader& r) {
  ExampleConfig c;
  auto& p = c.params;
  const auto nonneg = [](double v) { return v >= 0.0; };
  const auto pos = [](double v) { return v > 0.0; };
  r.real("b_diag", p.b_diag, pos, "positive");
  r.real("b_back", p.b_back, nonneg, "nonnegative");
  r.real("b_fwd1", p.b_fwd1, nonneg, "nonnegative");
  r.real("b_fwd2", p.b_fwd2, nonneg, "nonnegative");
  r.real("eps", p.eps, pos, "positive");
  r.real("delta", p.delta, pos, "positive");
  r.real("delta_prime", p.delta_prime, pos, "positive");
  r.real("b_input", p.b_input, nonneg, "nonnegative");
  if (const auto k = r.choice("coupling", {"sum", "max"})) p.coupling = *k == 0 ? Coupling::Sum : Coupling::Max;
  if (const auto k = r.choice("back_free_epsilon", {"keep", "drop"}))
    p.back_free_epsilon = *k == 0 ? BackFreeEpsilon::Keep : BackFreeEpsilon::Drop;
  r.real("horizon", c.horizon, pos, "positive");
  r.real("dt", c.dt, pos, "positive");
  r.real("input_norm", c.input_norm, nonneg, "nonnegative");
  if (Entry* e = r.find("sizes")) {
    std::vector<std::size_t> sizes;
    for (const auto& tok : split_ws(e->value)) {
      const auto v = to_int(tok);
      if (!v || *v < 1) {
        r.error(*e, "sizes", "expected positive integers, got '" + tok + "'");
        sizes.clear();
        break;
      }
      sizes.push_back(static_cast<std::size_t>(*v));
    }
    if (!sizes.empty()) c.sizes = std::move(sizes);
    else if (split_ws(e->value).empty()) r.error(*e, "sizes", "empty list");
  }
  if (c.dt > c.horizon) r.section_error("dt must not exceed horizon");
  try {
    p.validate();
  } catch (const std::invalid_argument& ex) {
    r.section_error(ex.what());
  }
  return c;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error(join_errors(errors)), errors_(std::move(errors)) {}

GainOperator AnalysisConfig::resolve_operator() const {
  if (op) return *op;
  if (example) return derive_example_gains(example->params);
  if (operator_from_example) throw ConfigError({"[operator] form = example needs an [example] section"});
  throw ConfigError({"missing required section [operator] (or [example])"});
}

AnalysisConfig parse_config(const std::string& text) {
  std::vector<std::string> errors;
  Document doc = tokenize(text, errors);
  AnalysisConfig cfg;

  if (auto it = doc.find("operator"); it != doc.end()) {
    Reader r("operator", it->second, errors);
    try {
      cfg.op = read_operator(r, cfg.operator_from_example);
    } catch (const std::invalid_argument& ex) {
      r.section_error(ex.what());
    }
    r.reject_unused();
  }
  if (auto it = doc.find("analysis"); it != doc.end()) {
    Reader r("analysis", it->second, errors);
    auto& a = cfg.analysis;
    const auto pos = [](double v) { return v > 0.0; };
    r.count("n_max", a.n_max);
    double lambda = 0.0;
    r.real("lambda", lambda, [](double v) { return v > 0.0 && v < 1.0; }, "in (0, 1)");
    if (lambda > 0.0) a.lambda = lambda;
    r.real("tol", a.tol, pos, "positive");
    r.count("k_max", a.k_max);
    r.real("tail_tol", a.tail_tol, pos, "positive");
    r.count("uges_steps", a.uges_steps);
    r.count("decay_steps", a.decay_steps);
    r.count("graph_depth", a.graph_depth);
    r.reject_unused();
  }
  if (auto it = doc.find("example"); it != doc.end()) {
    Reader r("example", it->second, errors);
    cfg.example = read_example(r);
    r.reject_unused();
  }
  if (auto it = doc.find("report"); it != doc.end()) {
    Reader r("report", it->second, errors);
    if (Entry* e = r.find("directory")) {
      if (e->value.empty()) r.error(*e, "directory", "empty path");
      else cfg.report.directory = e->value;
    }
    r.boolean("trajectories", cfg.report.trajectories);
    r.count("stride", cfg.report.stride);
    r.reject_unused();
  }
  if (!doc.count("operator") && !doc.count("example"))
    errors.push_back("line 1: missing required section [operator] (or [example])");
  if (cfg.operator_from_example && !doc.count("example"))
    errors.push_back("line " + std::to_string(doc["operator"].line) +
                     ": [operator] form = example needs an [example] section");
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return cfg;
}

AnalysisConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({"cannot read config file '" + path + "'"});
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace issnet
