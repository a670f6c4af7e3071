#include "rank1/weak_limits.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace rank1 {

namespace {

class Scanner {
 public:
  explicit Scanner(std::string_view text) : s_(text) {}

  void skip_ws() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool done() {
    skip_ws();
    return i_ >= s_.size();
  }
  char peek() {
    skip_ws();
    return i_ < s_.size() ? s_[i_] : '\0';
  }
  bool accept(char c) {
    if (peek() != c) return false;
    ++i_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  std::string digits() {
    skip_ws();
    std::size_t start = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (start == i_) fail("expected digits");
    return std::string(s_.substr(start, i_ - start));
  }
  long signed_long() {
    bool neg = accept('-');
    if (!neg) accept('+');
    long v = to_ll(parse_bigint(digits()));
    return neg ? -v : v;
  }
  Rational rational() {
    std::string num = digits();
    if (accept('/')) return parse_rational(num + "/" + digits());
    return parse_rational(num);
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument(what + " at position " + std::to_string(i_) + " in '" + std::string(s_) + "'");
  }

 private:
  std::string_view s_;
  std::size_t i_ = 0;
};

void require_same_stage_bound(const LevelSet& a, const LevelSet& b, int below, const char* what) {
  if (std::max(a.stage(), b.stage()) >= below)
    throw std::invalid_argument(std::string(what) + ": test sets must live at a stage below " +
                                std::to_string(below));
}

}  // namespace

OperatorPolynomial::OperatorPolynomial(std::map<long, Rational> coeffs) {
  Rational sum = 0;
  for (auto& [p, c] : coeffs) {
    if (c < 0) throw std::invalid_argument("operator polynomial coefficients must be >= 0");
    if (c == 0) continue;
    coeffs_.emplace(p, c);
    sum += c;
  }
  if (sum > 1) throw std::invalid_argument("operator polynomial total exceeds 1");
}

OperatorPolynomial OperatorPolynomial::parse(std::string_view text) {
  Scanner sc(text);
  std::map<long, Rational> coeffs;
  if (sc.done()) return {};
  bool first = true;
  while (!sc.done()) {
    if (!first && !sc.accept('+')) sc.fail("expected '+' between terms");
    first = false;
    Rational c = 1;
    bool has_coeff = false;
    if (std::isdigit(static_cast<unsigned char>(sc.peek()))) {
      c = sc.rational();
      has_coeff = true;
      if (!sc.accept('*')) {
        coeffs[0] += c;  // bare number: multiple of the identity
        continue;
      }
    }
    long p = 0;
    if (sc.accept('I')) {
      p = 0;
    } else if (sc.accept('T')) {
      p = sc.accept('^') ? sc.signed_long() : 1;
    } else {
      sc.fail(has_coeff ? "expected T^p or I after '*'" : "expected a term");
    }
    coeffs[p] += c;
  }
  return OperatorPolynomial(std::move(coeffs));
}

Rational OperatorPolynomial::total() const {
  Rational sum = 0;
  for (const auto& [p, c] : coeffs_) sum += c;
  return sum;
}

std::string OperatorPolynomial::to_string() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [p, c] : coeffs_) {
    os << (first ? "" : " + ") << c.get_str() << "*T^" << p;
    first = false;
  }
  return os.str();
}

CandidateSequence CandidateSequence::parse(std::string_view text) {
  Scanner sc(text);
  CandidateSequence seq;
  bool first = true;
  while (!sc.done()) {
    long sign = 1;
    if (sc.accept('-')) {
      sign = -1;
    } else if (!sc.accept('+') && !first) {
      sc.fail("expected '+' or '-'");
    }
    first = false;
    long coeff = 1;
    bool has_coeff = false;
    if (std::isdigit(static_cast<unsigned char>(sc.peek()))) {
      coeff = to_ll(parse_bigint(sc.digits()));
      has_coeff = true;
      if (!sc.accept('*')) {
        seq.s += sign * coeff;
        continue;
      }
    }
    if (!sc.accept('h')) sc.fail(has_coeff ? "expected h_ after '*'" : "expected a term");
    sc.expect('_');
    int lag = 0;
    if (sc.accept('{')) {
      if (!std::isalpha(static_cast<unsigned char>(sc.peek()))) sc.fail("expected index variable");
      sc.accept(sc.peek());
      if (sc.accept('-')) lag = static_cast<int>(to_ll(parse_bigint(sc.digits())));
      sc.expect('}');
    } else {
      if (!std::isalpha(static_cast<unsigned char>(sc.peek()))) sc.fail("expected index variable");
      sc.accept(sc.peek());
    }
    seq.terms.push_back({sign * coeff, lag});
  }
  std::sort(seq.terms.begin(), seq.terms.end(), [](const Term& x, const Term& y) { return x.lag < y.lag; });
  seq.validate();
  return seq;
}

void CandidateSequence::validate() const {
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].alpha == 0) throw std::invalid_argument("zero coefficient in candidate sequence");
    if (terms[i].lag < 0) throw std::invalid_argument("negative lag in candidate sequence");
    if (i && terms[i].lag <= terms[i - 1].lag)
      throw std::invalid_argument("stage selectors must be strictly decreasing");
  }
}

int CandidateSequence::min_k() const { return 2 + (terms.empty() ? 0 : terms.back().lag); }

BigInt CandidateSequence::at(const Construction& c, int k) const {
  if (k < min_k()) throw std::invalid_argument("k = " + std::to_string(k) + " selects a stage below 2");
  BigInt n = s;
  for (const auto& t : terms) n += c.height(k - t.lag) * t.alpha;
  return n;
}

std::string CandidateSequence::to_string() const {
  std::string out;
  for (const auto& t : terms) {
    if (out.empty()) {
      if (t.alpha < 0) out += "-";
    } else {
      out += t.alpha < 0 ? " - " : " + ";
    }
    const long mag = t.alpha < 0 ? -t.alpha : t.alpha;
    if (mag != 1) out += std::to_string(mag) + "*";
    out += t.lag ? "h_{k-" + std::to_string(t.lag) + "}" : "h_k";
  }
  if (out.empty()) return s.get_str();
  if (s != 0) out += (s < 0 ? " - " : " + ") + BigInt(abs(s)).get_str();
  return out;
}

MeasureBound predict(const OperatorPolynomial& poly, const LevelSet& a, const LevelSet& b) {
  MeasureBound total = MeasureBound::point(0);
  for (const auto& [p, c] : poly.coeffs()) total += c * apply_power_bounds(a, b, p);
  return total;
}

LimitReport verify_limit(const CandidateSequence& seq, const OperatorPolynomial& poly,
                         const std::vector<SetPair>& pairs, int k_first, int k_last, const Rational& tol) {
  seq.validate();
  LimitReport rep;
  if (pairs.empty()) return rep;
  const int deepest_lag = seq.terms.empty() ? 0 : seq.terms.back().lag;
  for (const auto& [a, b] : pairs) require_same_stage_bound(a, b, k_first - deepest_lag, "verify_limit");

  std::vector<MeasureBound> predictions;
  for (const auto& [a, b] : pairs) predictions.push_back(predict(poly, a, b));

  const Construction& c = *pairs.front().first.construction();
  for (int k = k_first; k <= k_last; ++k) {
    BigInt n = seq.at(c, k);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      LimitRow row;
      row.k = k;
      row.n = n;
      row.pair = i;
      row.value = apply_power_bounds(pairs[i].first, pairs[i].second, n);
      row.prediction = predictions[i];
      row.deviation = Deviation::between(row.value, row.prediction);
      rep.max_deviation = max(rep.max_deviation, row.deviation.worst);
      rep.verdict = combine(rep.verdict, row.deviation.judge(tol));
      rep.rows.push_back(std::move(row));
    }
  }
  return rep;
}

std::vector<BigInt> sample_range(const BigInt& lo, const BigInt& hi, long interior) {
  std::vector<BigInt> out;
  if (hi < lo) return out;
  out.push_back(lo);
  const BigInt span = hi - lo;
  for (long i = 1; i <= interior; ++i) {
    BigInt x = lo + span * i / (interior + 1);
    out.push_back(x);
  }
  out.push_back(hi);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

WindowScan scan_window(const LevelSet& a, const LevelSet& b, int j, const BigInt& step, long dead_samples,
                       bool exhaustive) {
  if (j < 2) throw std::invalid_argument("scan_window needs j >= 2");
  if (step < 1) throw std::invalid_argument("scan step must be >= 1");
  require_same_stage_bound(a, b, j - 1, "scan_window");
  const Construction& c = *a.construction();
  WindowScan scan;
  scan.j = j;
  const BigInt& h = c.height(j);
  const BigInt& prev = c.height(j - 1);
  scan.window_lo = h - 2 * prev;
  scan.window_hi = h + 2 * prev;
  scan.dead_lo = h + 2 * prev;
  scan.dead_hi = c.height(j + 1) - 2 * h;

  for (BigInt n = scan.window_lo; n <= scan.window_hi; n += step)
    scan.window.push_back({n, apply_power_bounds(a, b, n)});

  std::vector<BigInt> dead;
  if (exhaustive) {
    if (scan.dead_hi - scan.dead_lo > kExhaustiveScanLimit)
      throw std::invalid_argument("dead zone too long for an exhaustive scan");
    for (BigInt n = scan.dead_lo; n <= scan.dead_hi; ++n) dead.push_back(n);
  } else {
    dead = sample_range(scan.dead_lo, scan.dead_hi, dead_samples);
  }
  for (auto& n : dead) {
    auto v = apply_power_bounds(a, b, n);
    if (v.hi != 0) scan.dead_zone_zero = false;
    scan.dead_zone.push_back({std::move(n), v});
  }
  return scan;
}

std::pair<Rational, Rational> eq4_coefficients(int N, int n) {
  if (N < 2 || n < 1 || n > N) throw std::invalid_argument("eq4 needs N >= 2 and 1 <= n <= N");
  Rational id(N - n, N + 1), shift(1, N + 1);
  id.canonicalize();
  return {id, shift};
}

Eq4Report verify_eq4(int N, long p, int n, const LevelSet& a, const LevelSet& b, const std::vector<int>& stages,
                     const Rational& tol) {
  auto [c_id, c_shift] = eq4_coefficients(N, n);
  const Construction& c = *a.construction();
  if (!c.params().cuts.is_constant() || c.params().cuts.at(1) != N + 1)
    throw std::invalid_argument("eq4 needs a construction with r_j = N + 1");
  if (stages.empty()) throw std::invalid_argument("σ-preimage empty");
  const long q = p < 0 ? -p : p;
  for (int s : stages)
    if (sigma_at(s) != q)
      throw std::invalid_argument("stage " + std::to_string(s) + " has sigma = " + std::to_string(sigma_at(s)) +
                                  ", not " + std::to_string(q));

  Eq4Report rep;
  rep.N = N;
  rep.n = n;
  rep.p = p;
  const MeasureBound prediction =
      c_id * MeasureBound::point(measure(intersect(a, b))) + c_shift * apply_power_bounds(a, b, p);

  std::vector<int> sorted = stages;
  std::sort(sorted.begin(), sorted.end());
  for (int s : sorted) {
    Eq4Row row;
    row.stage = s;
    row.shift = c.height(s) * n;
    if (p > 0) row.shift = -row.shift;
    row.value = apply_power_bounds(a, b, row.shift);
    row.prediction = prediction;
    row.deviation = Deviation::between(row.value, row.prediction);
    if (!rep.rows.empty() && row.deviation.worst > rep.rows.back().deviation.worst)
      rep.deviation_non_increasing = false;
    rep.verdict = combine(rep.verdict, row.deviation.judge(tol));
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

}  // namespace rank1
