#include "rank1/experiments.hpp"

#include "rank1/acceptance.hpp"
#include "rank1/joinings.hpp"
#include "rank1/oracle.hpp"
#include "rank1/products.hpp"
#include "rank1/spectral.hpp"
#include "rank1/weak_limits.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include <unistd.h>

namespace rank1 {

namespace {

json cell(const Rational& q) { return to_string(q); }
json cell(const BigInt& z) { return to_string(z); }
json cell(const MeasureBound& b) { return to_string(b); }

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

// "h_4+2000", "8*h_6", "-3", "h_{5} - 2*h_4"
BigInt eval_term(const Construction* c, const std::string& t, const std::string& whole) {
  auto star = t.find('*');
  BigInt coef = 1;
  std::string rest = t;
  if (star != std::string::npos) {
    coef = parse_bigint(t.substr(0, star));
    rest = t.substr(star + 1);
  }
  if (!rest.empty() && rest[0] == 'h') {
    if (!c) throw ConfigError("'" + whole + "' needs a construction for h_j");
    std::string idx = rest.substr(1);
    if (!idx.empty() && idx[0] == '_') idx = idx.substr(1);
    if (idx.size() >= 2 && idx.front() == '{' && idx.back() == '}') idx = idx.substr(1, idx.size() - 2);
    long j = to_ll(parse_bigint(idx));
    if (j < 1 || j > 200) throw ConfigError("stage out of range in '" + whole + "'");
    return coef * c->height(static_cast<int>(j));
  }
  return coef * parse_bigint(rest);
}

BigInt eval_expr(const Construction* c, std::string_view text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw ConfigError("empty value");
  try {
    BigInt total = 0;
    std::size_t i = 0;
    while (i < s.size()) {
      int sign = 1;
      if (s[i] == '+' || s[i] == '-') {
        sign = s[i] == '-' ? -1 : 1;
        ++i;
      }
      std::size_t j = i;
      int depth = 0;
      while (j < s.size() && (depth > 0 || (s[j] != '+' && s[j] != '-'))) {
        if (s[j] == '{') ++depth;
        if (s[j] == '}') --depth;
        ++j;
      }
      if (j == i) throw ConfigError("malformed value '" + s + "'");
      BigInt term = eval_term(c, s.substr(i, j - i), s);
      total += sign * term;
      i = j;
    }
    return total;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("malformed value '" + s + "'");
  }
}

struct Range {
  BigInt lo, hi;
};

// Reads params, remembering every value used (given or default) in `resolved`.
class Params {
 public:
  Params(const json& in, json& resolved, const Construction* c) : in_(in), out_(resolved), c_(c) {}

  bool has(const std::string& key) const { return in_.contains(key); }

  std::string text(const std::string& key, const std::string& fallback) {
    std::string v = fallback;
    if (has(key)) {
      if (!in_[key].is_string()) throw ConfigError("param '" + key + "' must be a string");
      v = in_[key].get<std::string>();
    }
    out_[key] = v;
    return v;
  }

  BigInt big(const std::string& key, const std::string& fallback) {
    json raw = has(key) ? in_[key] : json(fallback);
    out_[key] = raw;
    if (raw.is_number_integer()) return BigInt(raw.get<long>());
    if (raw.is_string()) return eval_expr(c_, raw.get<std::string>());
    throw ConfigError("param '" + key + "' must be an integer or an expression string");
  }

  long integer(const std::string& key, long fallback) {
    json raw = has(key) ? in_[key] : json(fallback);
    out_[key] = raw;
    try {
      if (raw.is_number_integer()) return raw.get<long>();
      if (raw.is_string()) return to_ll(eval_expr(c_, raw.get<std::string>()));
    } catch (const std::overflow_error&) {
    }
    throw ConfigError("param '" + key + "' must be a machine-size integer");
  }

  Rational rational(const std::string& key, const std::string& fallback) {
    json raw = has(key) ? in_[key] : json(fallback);
    out_[key] = raw;
    try {
      if (raw.is_number_integer()) return Rational(raw.get<long>());
      if (raw.is_string()) return parse_rational(trim(raw.get<std::string>()));
    } catch (const std::invalid_argument&) {
    }
    throw ConfigError("param '" + key + "' must be a rational \"p/q\"");
  }

  bool flag(const std::string& key, bool fallback) {
    bool v = fallback;
    if (has(key)) {
      if (!in_[key].is_boolean()) throw ConfigError("param '" + key + "' must be true or false");
      v = in_[key].get<bool>();
    }
    out_[key] = v;
    return v;
  }

  /// "a..b", a single value, or [a, b]; endpoints may use h_j.
  Range range(const std::string& key, const std::string& fallback) {
    json raw = has(key) ? in_[key] : json(fallback);
    out_[key] = raw;
    Range r;
    if (raw.is_array()) {
      if (raw.size() != 2) throw ConfigError("param '" + key + "' must be [lo, hi]");
      auto endpoint = [&](const json& v) {
        if (v.is_number_integer()) return BigInt(v.get<long>());
        if (v.is_string()) return eval_expr(c_, v.get<std::string>());
        throw ConfigError("param '" + key + "' has a bad endpoint");
      };
      r = {endpoint(raw[0]), endpoint(raw[1])};
    } else if (raw.is_number_integer()) {
      r = {BigInt(raw.get<long>()), BigInt(raw.get<long>())};
    } else if (raw.is_string()) {
      std::string s = raw.get<std::string>();
      auto dots = s.find("..");
      if (dots == std::string::npos) {
        r.lo = r.hi = eval_expr(c_, s);
      } else {
        r = {eval_expr(c_, s.substr(0, dots)), eval_expr(c_, s.substr(dots + 2))};
      }
    } else {
      throw ConfigError("param '" + key + "' must be a range \"lo..hi\"");
    }
    if (r.lo > r.hi) throw ConfigError("param '" + key + "' is an empty range");
    return r;
  }

  std::pair<int, int> stages(const std::string& key, const std::string& fallback) {
    Range r = range(key, fallback);
    if (r.lo < 1 || r.hi > 200) throw ConfigError("param '" + key + "' must lie in 1..200");
    return {static_cast<int>(to_ll(r.lo)), static_cast<int>(to_ll(r.hi))};
  }

  LevelSet set(const std::string& key, const ConstructionPtr& c, const std::string& fallback) {
    std::string s = text(key, fallback);
    try {
      return LevelSet::parse(c, s);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("param '" + key + "': " + e.what());
    }
  }

  std::vector<BigInt> big_list(const std::string& key) {
    const json& raw = in_[key];
    if (!raw.is_array()) throw ConfigError("param '" + key + "' must be an array");
    std::vector<BigInt> v;
    for (const auto& x : raw) {
      if (x.is_number_integer()) v.emplace_back(x.get<long>());
      else if (x.is_string()) v.push_back(eval_expr(c_, x.get<std::string>()));
      else throw ConfigError("param '" + key + "' holds a non-integer");
    }
    out_[key] = raw;
    return v;
  }

  const json& raw(const std::string& key) {
    out_[key] = in_[key];
    return in_[key];
  }

 private:
  const json& in_;
  json& out_;
  const Construction* c_;
};

const char* kE2 = "stage=2; levels=0";

std::vector<BigInt> enumerate(const Range& r) {
  std::vector<BigInt> v;
  if (r.hi - r.lo > 1000000) throw ConfigError("range longer than 1000000 points");
  for (BigInt n = r.lo; n <= r.hi; ++n) v.push_back(n);
  return v;
}

Verdict from_counts(bool any_fail, bool any_open) {
  if (any_fail) return Verdict::fail;
  if (any_open) return Verdict::inconclusive;
  return Verdict::pass;
}

// ---- experiments --------------------------------------------------------

void geometry(const ConstructionPtr& c, Params& p, Report& r) {
  auto [j0, j1] = p.has("j") ? p.stages("j", "") : p.stages("j_range", "1..6");
  r.columns = {"j", "r", "h", "level_width", "space_measure", "spacers", "column_offsets"};
  for (int j = j0; j <= j1; ++j) {
    const auto& g = c->stage(j);
    json sp = json::array(), off = json::array();
    for (const auto& s : g.spacers) sp.push_back(to_string(s));
    for (const auto& o : g.column_offsets) off.push_back(to_string(o));
    r.rows.push_back({j, g.r, cell(g.h), cell(g.level_width), cell(g.space_measure), sp, off});
  }
}

void measure(const ConstructionPtr& c, Params& p, Report& r) {
  const long J = p.integer("J", 12);
  if (J < 1 || J > 200) throw ConfigError("param 'J' must lie in 1..200");
  auto series = infinite_measure_partial_sum(*c, static_cast<int>(J));
  r.columns = {"j", "partial_sum", "approx"};
  for (std::size_t i = 0; i < series.partial_sums.size(); ++i)
    r.rows.push_back({static_cast<long>(i + 1), cell(series.partial_sums[i]), to_double(series.partial_sums[i])});
  r.summary["total"] = cell(series.total);
  r.summary["looks_divergent"] = series.looks_divergent;
  if (c->params().cuts.is_constant()) {
    auto star = condition_star_check(*c, static_cast<int>(J));
    r.summary["star_condition"] = star.pass;
    json v = json::array();
    for (const auto& s : star.violations) v.push_back(s);
    r.summary["star_violations"] = v;
  } else {
    r.summary["star_condition"] = "not applicable: r_j varies";
  }
}

void oracle(const ConstructionPtr& c, Params& p, Report& r) {
  auto a = p.set("a", c, kE2);
  auto b = p.set("b", c, kE2);
  Range k = p.has("n") ? p.range("n", "") : p.range("k_range", "-h_3..h_3");
  BigInt reach = k.hi;
  if (-k.lo > reach) reach = -k.lo;
  const int need = stage_containing_shift(*c, std::max(a.stage(), b.stage()), reach) + 1;
  const long J = p.integer("J", need);
  if (J < need || J > 40) throw ConfigError("param 'J' must lie in " + std::to_string(need) + "..40");
  IntervalSystem sys(c->params(), static_cast<int>(J));

  r.columns = {"n", "oracle_value", "oracle_undefined", "calc_lo", "calc_hi", "consistent"};
  long bad = 0;
  for (const auto& n : enumerate(k)) {
    auto o = sys.intersection(a.stage(), a.levels(), b.stage(), b.levels(), to_ll(n));
    auto t = apply_power_bounds(a, b, n, static_cast<int>(J));
    // true value lies in [value, value + undefined] and in [lo, hi]
    bool ok = o.value <= t.hi && t.lo <= o.value + o.undefined;
    if (o.undefined == 0 && t.exact()) ok = o.value == t.lo;
    if (!ok) ++bad;
    r.rows.push_back({cell(n), cell(o.value), cell(o.undefined), cell(t.lo), cell(t.hi), ok});
  }
  r.summary["inconsistent"] = bad;
  r.verdict = bad ? Verdict::fail : Verdict::pass;
}

void limits(const ConstructionPtr& c, Params& p, Report& r) {
  auto seq = CandidateSequence::parse(p.text("seq", "h_j"));
  auto poly = OperatorPolynomial::parse(p.text("poly", "1/2*T^0"));
  auto a = p.set("a", c, kE2);
  auto b = p.set("b", c, kE2);
  auto [j0, j1] = p.stages("j_range", "3..8");
  const Rational tol = p.rational("tol", "0");
  auto rep = verify_limit(seq, poly, {{a, b}}, j0, j1, tol);
  r.columns = {"j", "n", "lo", "hi", "prediction", "deviation"};
  for (const auto& row : rep.rows)
    r.rows.push_back({row.k, cell(row.n), cell(row.value.lo), cell(row.value.hi), cell(row.prediction),
                      cell(row.deviation.worst)});
  r.summary["max_deviation"] = cell(rep.max_deviation);
  r.verdict = rep.verdict;
}

void scan(const ConstructionPtr& c, Params& p, Report& r) {
  auto a = p.set("a", c, kE2);
  auto b = p.set("b", c, kE2);
  auto [j0, j1] = p.stages("j_range", "4..7");
  const bool custom_step = p.has("step");
  const BigInt step = custom_step ? p.big("step", "") : BigInt(0);
  if (custom_step && step < 1) throw ConfigError("param 'step' must be positive");
  if (!custom_step) r.resolved["step"] = "h_{j-1}";
  const long samples = p.integer("samples", kDefaultDeadZoneSamples);
  const bool exhaustive = p.flag("exhaustive", false);
  if (j0 < 2) throw ConfigError("param 'j_range' must start at 2 or later");

  r.columns = {"j", "zone", "n", "lo", "hi"};
  bool fail = false, open = false;
  for (int j = j0; j <= j1; ++j) {
    auto w = scan_window(a, b, j, custom_step ? step : c->height(j - 1), samples, exhaustive);
    for (const auto& row : w.window) r.rows.push_back({j, "window", cell(row.n), cell(row.value.lo), cell(row.value.hi)});
    for (const auto& row : w.dead_zone) {
      r.rows.push_back({j, "dead", cell(row.n), cell(row.value.lo), cell(row.value.hi)});
      if (row.value.lo > 0) fail = true;
      else if (row.value.hi > 0) open = true;
    }
  }
  r.verdict = from_counts(fail, open);
}

void eq4(const ConstructionPtr& c, Params& p, Report& r) {
  const long N = p.integer("N", c->params().cuts.base - 1);
  const long pp = p.integer("p", 1);
  const long n = p.integer("n", 1);
  auto a = p.set("a", c, kE2);
  auto b = p.set("b", c, kE2);
  std::vector<int> stages;
  if (p.has("stages")) {
    for (const auto& s : p.big_list("stages")) stages.push_back(static_cast<int>(to_ll(s)));
  } else {
    const long cutoff = p.integer("sigma_cutoff", 9);
    for (int s : sigma_preimage(pp < 0 ? -pp : pp, static_cast<int>(cutoff)))
      if (s > std::max(a.stage(), b.stage())) stages.push_back(s);
    if (stages.empty()) throw ConfigError("no stage up to sigma_cutoff has sigma = |p|");
    r.resolved["stages"] = stages;
  }
  const Rational tol = p.has("tol") ? p.rational("tol", "0") : Rational(a.measure() / 50);
  r.resolved["tol"] = to_string(tol);
  auto rep = verify_eq4(static_cast<int>(N), pp, static_cast<int>(n), a, b, stages, tol);
  r.columns = {"stage", "n", "lo", "hi", "prediction", "deviation"};
  for (const auto& row : rep.rows)
    r.rows.push_back({row.stage, cell(row.shift), cell(row.value.lo), cell(row.value.hi), cell(row.prediction),
                      cell(row.deviation.worst)});
  r.summary["deviation_non_increasing"] = rep.deviation_non_increasing;
  r.verdict = rep.verdict;
}

void joinings(const ConstructionPtr& c, Params& p, Report& r) {
  const long m = p.integer("m", 0);
  auto [j0, j1] = p.stages("j_range", "4..8");
  const Rational eps = p.rational("eps", "0");
  std::vector<Rectangle> grid;
  if (p.has("grid")) {
    const json& g = p.raw("grid");
    if (!g.is_array() || g.empty()) throw ConfigError("param 'grid' must be a non-empty array of [A, B] pairs");
    for (const auto& pair : g) {
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_string())
        throw ConfigError("param 'grid' entries must be [\"stage=..\", \"stage=..\"]");
      try {
        grid.emplace_back(LevelSet::parse(c, pair[0].get<std::string>()), LevelSet::parse(c, pair[1].get<std::string>()));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("param 'grid': ") + e.what());
      }
    }
  } else {
    const long top = std::min<long>(5, to_ll(c->height(2)));
    json g = json::array();
    for (long x = 0; x < top; ++x)
      for (long y = 0; y < top; ++y) {
        grid.emplace_back(LevelSet::level(c, 2, x), LevelSet::level(c, 2, y));
        g.push_back({grid.back().first.to_string(), grid.back().second.to_string()});
      }
    r.resolved["grid"] = g;
  }
  auto rep = theorem1_witness(m, grid, j0, j1, eps);
  r.columns = {"j", "k_chosen", "margin_lo", "margin_hi", "trivial"};
  bool trivial = false;
  for (const auto& row : rep.rows) {
    r.rows.push_back({row.j, cell(row.k_chosen), cell(row.margin_lo), cell(row.margin_hi), row.trivial});
    trivial = trivial || row.trivial;
  }
  r.summary["vacuous"] = rep.vacuous;
  r.summary["trivial_fallback_used"] = trivial;
  r.verdict = rep.verdict;
}

void products(const std::vector<ConstructionPtr>& cs, Params& p, Report& r) {
  if (cs.size() > 2) throw ConfigError("products takes one or two constructions");
  const auto& left = cs.front();
  const auto& right = cs.back();
  ProductSystem sys{left, p.integer("m", 1), right, p.integer("n", 1)};
  try {
    sys.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  auto a = p.set("a", left, kE2);
  auto a2 = p.set("a_prime", right, kE2);
  Range k = p.range("k_range", "h_4+1..h_4+2000");
  if (k.lo < 1) throw ConfigError("param 'k_range' must start at 1 or later");
  const long samples = p.integer("samples", 256);
  if (samples < 2) throw ConfigError("param 'samples' must be at least 2");
  std::optional<std::pair<int, Rational>> target;
  if (p.has("ratio_target")) {
    Rational t = p.rational("ratio_target", "1");
    target = std::make_pair(static_cast<int>(p.integer("ratio_stages", 8)), t);
  }
  auto rep = dissipativity_scan(sys, a, a2, k.lo, k.hi, samples, target);
  r.columns = {"k", "left_value", "right_value", "product_lo", "product_hi", "status"};
  for (const auto& s : rep.samples)
    r.rows.push_back({cell(s.k), cell(s.left), cell(s.right), cell(s.product.lo), cell(s.product.hi),
                      to_string(s.status)});
  r.summary["proven_zero"] = rep.proven_zero;
  r.summary["unresolved"] = rep.unresolved;
  r.summary["nonzero"] = rep.nonzero;
  r.summary["note"] = rep.summary();
  if (target) {
    json rows = json::array();
    for (const auto& row : rep.ratio_check)
      rows.push_back({{"i", row.i}, {"ratio", cell(row.ratio)}, {"deviation", cell(row.deviation)}});
    r.summary["ratio_check"] = rows;
  }
  r.verdict = from_counts(rep.nonzero > 0, rep.unresolved > 0);
}

void spectral(const ConstructionPtr& c, Params& p, Report& r) {
  const std::string mode = p.text("mode", "corr");
  auto a = p.set("a", c, kE2);
  if (mode == "density") {
    const long N = p.integer("N", 64);
    const long M = p.integer("M", 1024);
    if (N < 1 || M < 1 || M > 1000000) throw ConfigError("params 'N' and 'M' must be positive, M <= 1000000");
    auto corr = correlations_upto(a, N);
    auto d = fejer_density(corr, N, M);
    r.columns = {"theta", "F"};
    for (std::size_t i = 0; i < d.theta.size(); ++i) r.rows.push_back({d.theta[i], d.density[i]});
    r.summary["min"] = d.min;
    r.summary["max"] = d.max;
    r.summary["mean"] = d.mean;
    r.summary["max_over_mean"] = d.max_over_mean;
    r.summary["top5_share"] = d.top5_share;
    r.verdict = d.min >= -1e-9 ? Verdict::pass : Verdict::fail;
    return;
  }
  if (mode != "corr" && mode != "suspend") throw ConfigError("param 'mode' must be corr, density or suspend");
  std::vector<BigInt> ns = p.has("n_list") ? p.big_list("n_list") : enumerate(p.range("n_range", "0..64"));
  auto corr = correlations(a, ns);
  bool open = false;
  if (mode == "corr") {
    r.columns = {"n", "c_lo", "c_hi"};
    for (const auto& n : ns) {
      const auto& b = corr.bounds(n);
      open = open || !b.exact();
      r.rows.push_back({cell(n), cell(b.lo), cell(b.hi)});
    }
  } else {
    r.columns = {"n", "c_lo", "c_hi", "suspension_lo", "suspension_hi"};
    for (const auto& n : ns) {
      const auto& b = corr.bounds(n);
      open = open || !b.exact();
      auto [lo, hi] = suspension_correlation(b);
      r.rows.push_back({cell(n), cell(b.lo), cell(b.hi), lo, hi});
    }
  }
  json v = json::array();
  for (const auto& s : corr.invariant_violations()) v.push_back(s);
  r.summary["invariant_violations"] = v;
  r.verdict = from_counts(!v.empty(), open);
}

void acceptance(Params& p, Report& r) {
  std::vector<int> ids;
  if (p.has("only")) {
    const json& raw = p.raw("only");
    auto add = [&](const json& x) {
      if (!x.is_number_integer() || x.get<int>() < 1 || x.get<int>() > kCriterionCount)
        throw ConfigError("param 'only' must list criteria 1.." + std::to_string(kCriterionCount));
      ids.push_back(x.get<int>());
    };
    if (raw.is_array()) {
      for (const auto& x : raw) add(x);
    } else {
      add(raw);
    }
  }
  r.columns = {"id", "verdict", "title", "detail"};
  Verdict all = Verdict::pass;
  for (const auto& res : run_acceptance(ids)) {
    r.rows.push_back({res.id, to_string(res.verdict), res.title, res.detail});
    all = combine(all, res.verdict);
  }
  r.verdict = all;
}

// RANK1_MAX_STAGE for the duration of one run
class StageCap {
 public:
  explicit StageCap(std::optional<long> cap) {
    if (!cap) return;
    if (const char* old = std::getenv("RANK1_MAX_STAGE")) saved_ = old;
    active_ = true;
    setenv("RANK1_MAX_STAGE", std::to_string(*cap).c_str(), 1);
  }
  ~StageCap() {
    if (!active_) return;
    if (saved_) setenv("RANK1_MAX_STAGE", saved_->c_str(), 1);
    else unsetenv("RANK1_MAX_STAGE");
  }
  StageCap(const StageCap&) = delete;
  StageCap& operator=(const StageCap&) = delete;

 private:
  bool active_ = false;
  std::optional<std::string> saved_;
};

std::string csv_field(const json& v) {
  std::string s;
  if (v.is_string()) {
    s = v.get<std::string>();
  } else if (v.is_array()) {
    for (const auto& x : v) {
      if (!s.empty()) s += ' ';
      s += x.is_string() ? x.get<std::string>() : x.dump();
    }
  } else if (v.is_number_float()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
    s = buf;
  } else {
    s = v.dump();
  }
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

}  // namespace

Report run_experiment(const ExperimentConfig& cfg) {
  Report r;
  r.experiment = cfg.experiment;
  std::vector<ConstructionPtr> cs;
  for (const auto& params : cfg.constructions) cs.push_back(make_construction(params));
  if (cs.size() > 1 && cfg.experiment != "products") throw ConfigError("only products takes two constructions");

  Params p(cfg.params, r.resolved, cs.empty() ? nullptr : cs.front().get());
  std::optional<long> cap;
  if (p.has("max_stage")) {
    cap = p.integer("max_stage", 0);
    if (*cap < 1) throw ConfigError("param 'max_stage' must be positive");
  }
  StageCap guard(cap);

  const std::string& e = cfg.experiment;
  if (e == "acceptance") {
    acceptance(p, r);
    return r;
  }
  if (cs.empty()) throw ConfigError("experiment '" + e + "' needs a construction");
  const auto& c = cs.front();
  if (e == "geometry") geometry(c, p, r);
  else if (e == "measure") measure(c, p, r);
  else if (e == "oracle") oracle(c, p, r);
  else if (e == "limits") limits(c, p, r);
  else if (e == "scan") scan(c, p, r);
  else if (e == "eq4") eq4(c, p, r);
  else if (e == "joinings") joinings(c, p, r);
  else if (e == "products") products(cs, p, r);
  else if (e == "spectral") spectral(c, p, r);
  else throw ConfigError("unknown experiment '" + e + "'");
  return r;
}

std::string render(const Report& report, const ExperimentConfig& cfg) {
  json config = cfg.to_json();
  config["params"] = report.resolved;
  config["output"].erase("path");

  if (cfg.format == "json") {
    json rows = json::array();
    for (const auto& row : report.rows) {
      json obj = json::object();
      for (std::size_t i = 0; i < report.columns.size(); ++i) obj[report.columns[i]] = row[i];
      rows.push_back(obj);
    }
    json out = {{"tool", kToolName},   {"version", kToolVersion},       {"experiment", report.experiment},
                {"config", config},    {"verdict", to_string(report.verdict)}, {"summary", report.summary},
                {"columns", report.columns}, {"rows", rows}};
    return out.dump(2) + "\n";
  }

  std::ostringstream os;
  os << "# tool: " << kToolName << ' ' << kToolVersion << '\n';
  os << "# config: " << config.dump() << '\n';
  os << "# verdict: " << to_string(report.verdict) << '\n';
  if (!report.summary.empty()) os << "# summary: " << report.summary.dump() << '\n';
  for (std::size_t i = 0; i < report.columns.size(); ++i) os << (i ? "," : "") << report.columns[i];
  os << '\n';
  for (const auto& row : report.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
    os << '\n';
  }
  return os.str();
}

void write_atomically(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw std::runtime_error("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw std::runtime_error("cannot move output into " + path);
  }
}

}  // namespace rank1
