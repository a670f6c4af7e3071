#include "rank1/acceptance.hpp"

#include "rank1/joinings.hpp"
#include "rank1/oracle.hpp"
#include "rank1/products.hpp"
#include "rank1/spectral.hpp"
#include "rank1/weak_limits.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <tuple>

namespace rank1 {

namespace {

// pinned tolerances
const Rational kEq4RelTol(1, 50);          // times mu(A)
const Rational kExhaustionTol(1, 1000000);  // joinings gap at stage(A) + 4
constexpr double kToeplitzFloor = -1e-9;
constexpr double kSuspensionTol = 1e-12;
constexpr double kFejerTol = 1e-9;

constexpr int kToyOracleDepth = 8;
constexpr int kUtv1OracleDepth = 6;
constexpr long kDeadZoneSamples = 64;
constexpr long kProductSamples = 256;
constexpr long kFejerGrid = 1024;

std::string str(const Rational& q) { return to_string(q); }
std::string str(const BigInt& z) { return to_string(z); }

CriterionResult named(int id, std::string title) {
  CriterionResult r;
  r.id = id;
  r.title = std::move(title);
  return r;
}

// ---- 1 ------------------------------------------------------------------

struct Tally {
  long exact = 0;
  long bracketed = 0;
  long mismatches = 0;
  std::string first;
};

void oracle_equivalence(const ConstructionParams& params, int J, Tally& t) {
  auto c = make_construction(params);
  IntervalSystem sys(params, J);

  std::vector<LevelSet> atoms;
  std::vector<std::size_t> offset(4, 0);
  for (int s = 1; s <= 3; ++s) {
    offset[s] = atoms.size();
    for (long l = 0; l < to_ll(c->height(s)); ++l) atoms.push_back(LevelSet::level(c, s, l));
  }
  const std::size_t hJ = sys.height(J);
  std::vector<std::array<std::optional<std::size_t>, 3>> anc(hJ);
  for (std::size_t l = 0; l < hJ; ++l)
    for (int s = 1; s <= 3; ++s) anc[l][s - 1] = sys.container(s, l);

  const Rational& w = sys.width(J);
  const long nmax = to_ll(c->height(4));
  std::vector<long> count(atoms.size());
  for (const auto& a : atoms) {
    for (long n = -nmax; n <= nmax; ++n) {
      auto img = sys.image(a.stage(), a.levels(), n);
      std::fill(count.begin(), count.end(), 0);
      for (auto l : img.levels)
        for (int s = 1; s <= 3; ++s)
          if (anc[l][s - 1]) ++count[offset[s] + *anc[l][s - 1]];
      for (std::size_t bi = 0; bi < atoms.size(); ++bi) {
        const Rational val = w * count[bi];
        const auto& b = atoms[bi];
        bool ok;
        if (n >= 0) {
          // same truncation on both sides
          MeasureBound calc = apply_power_bounds(a, b, n, J);
          ok = calc.lo == val && calc.unresolved_mass() == img.undefined;
          if (img.undefined == 0) ++t.exact; else ++t.bracketed;
        } else {
          MeasureBound calc = apply_power_bounds(a, b, n);
          if (img.undefined == 0 && calc.exact()) {
            ok = calc.lo == val;
            ++t.exact;
          } else {
            ok = calc.lo <= val + img.undefined && val <= calc.hi;
            ++t.bracketed;
          }
        }
        if (!ok && t.mismatches++ == 0)
          t.first = params.name + " n=" + std::to_string(n) + " A=" + a.to_string() + " B=" + b.to_string();
      }
    }
  }
}

CriterionResult c1() {
  auto r = named(1, "oracle equivalence");
  Tally t;
  oracle_equivalence(family::toy(), kToyOracleDepth, t);
  oracle_equivalence(family::utv1(), kUtv1OracleDepth, t);
  r.verdict = t.mismatches ? Verdict::fail : Verdict::pass;
  std::ostringstream d;
  d << t.exact << " exact comparisons, " << t.bracketed << " truncated brackets, " << t.mismatches << " mismatches";
  if (t.mismatches) d << " (first: " << t.first << ")";
  r.detail = d.str();
  return r;
}

// ---- 2, 3 ---------------------------------------------------------------

std::vector<LevelSet> halving_sets(const ConstructionPtr& u) {
  return {LevelSet::level(u, 2, 0), LevelSet::level(u, 2, 1), LevelSet::level(u, 2, 3)};
}

CriterionResult c2() {
  auto r = named(2, "halving");
  auto u = make_construction(family::utv1());
  std::vector<SetPair> pairs;
  for (const auto& a : halving_sets(u)) pairs.push_back({a, a});
  auto rep = verify_limit(CandidateSequence::parse("h_j"), OperatorPolynomial::parse("1/2*T^0"), pairs, 3, 8, 0);
  r.verdict = rep.verdict;
  r.detail = std::to_string(rep.rows.size()) + " values at j=3..8, max deviation " + str(rep.max_deviation);
  return r;
}

CriterionResult c3() {
  auto r = named(3, "iterated halving");
  auto u = make_construction(family::utv1());
  const auto sets = halving_sets(u);
  long checks = 0;
  Rational worst = 0;
  for (const auto& a : sets)
    for (int j = 4; j <= 8; ++j)
      for (int i = 3; i < j; ++i) {
        auto d = Deviation::between(apply_power_bounds(a, a, u->height(j) + u->height(i)),
                                    MeasureBound::point(Rational(1, 4) * a.measure()));
        r.verdict = combine(r.verdict, d.judge(0));
        worst = max(worst, d.worst);
        ++checks;
      }
  for (const auto& a : sets)
    for (const auto& b : sets)
      for (int j = 3; j <= 8; ++j) {
        auto d = Deviation::between(apply_power_bounds(a, b, u->height(j) + 1),
                                    Rational(1, 2) * apply_power_bounds(a, b, 1));
        r.verdict = combine(r.verdict, d.judge(0));
        worst = max(worst, d.worst);
        ++checks;
      }
  r.detail = std::to_string(checks) + " identities, max deviation " + str(worst);
  return r;
}

// ---- 4 ------------------------------------------------------------------

CriterionResult c4() {
  auto r = named(4, "dead zone");
  auto u = make_construction(family::utv1());
  long samples = 0, nonzero = 0, unresolved = 0;
  for (const auto& a : {LevelSet::level(u, 2, 0), LevelSet::tower(u, 2)})
    for (int j = 4; j <= 7; ++j) {
      auto scan = scan_window(a, a, j, u->height(j - 1), kDeadZoneSamples);
      for (const auto& row : scan.dead_zone) {
        ++samples;
        if (row.value.lo > 0) ++nonzero;
        else if (row.value.hi > 0) ++unresolved;
      }
    }
  r.verdict = nonzero ? Verdict::fail : unresolved ? Verdict::inconclusive : Verdict::pass;
  r.detail = std::to_string(samples) + " sampled shifts (E_2 and X_2, j=4..7), " + std::to_string(nonzero) +
             " nonzero, " + std::to_string(unresolved) + " unresolved";
  return r;
}

// ---- 5 ------------------------------------------------------------------

CriterionResult c5() {
  auto r = named(5, "eq4 on thm2(2)");
  auto t = make_construction(family::thm2(2));
  auto e2 = LevelSet::level(t, 2, 0);
  auto pre = sigma_preimage(1, 9);
  if (pre.size() < 2) {
    r.verdict = Verdict::fail;
    r.detail = "fewer than two stages with sigma = 1";
    return r;
  }
  std::vector<int> top(pre.end() - 2, pre.end());
  std::ostringstream d;
  d << "stages " << top[0] << "," << top[1] << ";";
  for (int n : {1, 2}) {
    auto rep = verify_eq4(2, 1, n, e2, e2, top, kEq4RelTol * e2.measure());
    r.verdict = combine(r.verdict, rep.verdict);
    if (!rep.deviation_non_increasing) r.verdict = combine(r.verdict, Verdict::fail);
    d << " n=" << n << " deviations";
    for (const auto& row : rep.rows) d << " " << str(row.deviation.worst);
    d << (rep.deviation_non_increasing ? " (non-increasing)" : " (increasing)") << ";";
  }
  d << " tol " << str(kEq4RelTol) << "*mu(A)";
  r.detail = d.str();
  return r;
}

// ---- 6 ------------------------------------------------------------------

CriterionResult c6() {
  auto r = named(6, "dissipativity evidence");
  auto t = make_construction(family::thm2(2));
  ProductSystem sys{t, 1, t, 3};
  std::vector<LevelSet> levels;
  for (long l = 0; l < to_ll(t->height(2)); ++l) levels.push_back(LevelSet::level(t, 2, l));

  std::ostringstream d;
  Verdict zero_part = Verdict::pass;
  std::optional<std::tuple<int, BigInt, std::size_t, std::size_t>> witness;
  for (int j : {4, 5, 6}) {
    const BigInt& h = t->height(j);
    std::size_t nonzero = 0, unresolved = 0, total = 0;
    for (std::size_t x = 0; x < levels.size(); ++x)
      for (std::size_t y = 0; y < levels.size(); ++y) {
        auto rep = dissipativity_scan(sys, levels[x], levels[y], h + 1, 8 * h, kProductSamples);
        nonzero += rep.nonzero;
        unresolved += rep.unresolved;
        total += rep.samples.size();
        if (!witness)
          for (const auto& s : rep.samples)
            if (s.status == ReturnStatus::nonzero) {
              witness = std::make_tuple(j, s.k, x, y);
              break;
            }
      }
    if (nonzero) zero_part = combine(zero_part, Verdict::fail);
    else if (unresolved) zero_part = combine(zero_part, Verdict::inconclusive);
    d << "T x T^3 j=" << j << ": " << nonzero << "/" << total << " nonzero";
    if (unresolved) d << ", " << unresolved << " unresolved";
    d << "; ";
  }
  if (witness) {
    const auto& [j, k, x, y] = *witness;
    auto v = product_return(sys, levels[x], levels[y], k);
    d << "e.g. k=" << str(k) << " on T^" << x << "E_2 x T^" << y << "E_2 gives " << str(v.lo);
    const BigInt three_k = 3 * k;
    const int J = 7;
    if (three_k < t->height(J)) {
      auto left = oracle_intersection(levels[x], levels[x], to_ll(k), J);
      auto right = oracle_intersection(levels[y], levels[y], to_ll(three_k), J);
      const bool confirmed = left.fully_defined() && right.fully_defined() && left.value * right.value == v.lo;
      d << (confirmed ? " (interval oracle agrees)" : " (interval oracle inconclusive)");
    }
    d << "; ";
  }

  auto u = make_construction(family::utv1());
  ProductSystem square{u, 1, u, 1};
  auto e2 = LevelSet::level(u, 2, 0);
  const Rational want = Rational(1, 4) * e2.measure() * e2.measure();
  Verdict witness_part = Verdict::pass;
  for (int j = 3; j <= 8; ++j) {
    auto v = product_return(square, e2, e2, u->height(j));
    witness_part = combine(witness_part, Deviation::between(v, MeasureBound::point(want)).judge(0));
  }
  d << "utv1 T x T at k=h_j, j=3..8: " << (witness_part == Verdict::pass ? "all equal " : "not all equal ")
    << str(want);
  r.verdict = combine(zero_part, witness_part);
  r.detail = d.str();
  return r;
}

// ---- 7 ------------------------------------------------------------------

CriterionResult c7() {
  auto r = named(7, "theorem-1 witness");
  auto u = make_construction(family::utv1());
  std::vector<Rectangle> grid;
  for (int x = 0; x < 5; ++x)
    for (int y = 0; y < 5; ++y) grid.push_back({LevelSet::level(u, 2, x), LevelSet::level(u, 2, y)});
  std::ostringstream d;
  Rational lowest;
  bool first = true;
  long trivial = 0;
  for (long m : {0L, 1L, -1L, 2L, -2L}) {
    auto rep = theorem1_witness(m, grid, 4, 8, 0);
    r.verdict = combine(r.verdict, rep.verdict);
    for (const auto& row : rep.rows) {
      if (row.trivial) ++trivial;
      lowest = first ? row.margin_lo : min(lowest, row.margin_lo);
      first = false;
    }
    d << "m=" << m << ": k(4)=" << str(rep.rows.front().k_chosen) << ", ";
  }
  if (trivial) r.verdict = combine(r.verdict, Verdict::fail);
  d << "min margin " << str(lowest) << ", " << trivial << " trivial fallbacks";
  r.detail = d.str();
  return r;
}

// ---- 8 ------------------------------------------------------------------

CriterionResult c8() {
  auto r = named(8, "joinings exhaustion");
  auto u = make_construction(family::utv1());
  const int stage = 2;
  long checks = 0, decreases = 0, far = 0, unresolved = 0;
  Rational worst_gap = 0;
  for (long x = 0; x < 6; ++x)
    for (long y = 0; y < 6; ++y) {
      auto a = LevelSet::level(u, stage, x), b = LevelSet::level(u, stage, y);
      for (int k = -5; k <= 5; ++k) {
        ++checks;
        auto full = delta_shift(a, b, k);
        if (!full.exact()) {
          ++unresolved;
          continue;
        }
        Rational prev = 0;
        for (int j = stage; j <= stage + 4; ++j) {
          Rational v = partial_joining(a, b, k, j).lo;
          if (v < prev) ++decreases;
          prev = v;
        }
        const Rational gap = full.lo - prev;
        worst_gap = max(worst_gap, gap);
        if (gap > kExhaustionTol || gap < 0) ++far;
      }
    }
  r.verdict = (decreases || far) ? Verdict::fail : unresolved ? Verdict::inconclusive : Verdict::pass;
  std::ostringstream d;
  d << checks << " (rectangle, k) cases, " << decreases << " decreases, worst gap at j=" << stage + 4 << " "
    << str(worst_gap) << " (tol " << to_double(kExhaustionTol) << ")";
  if (unresolved) d << ", " << unresolved << " unresolved";
  r.detail = d.str();
  return r;
}

// ---- 9 ------------------------------------------------------------------

CriterionResult c9() {
  auto r = named(9, "spectral indicators");
  std::vector<std::string> failed;
  std::ostringstream d;

  auto u = make_construction(family::utv1());
  auto ue2 = LevelSet::level(u, 2, 0);
  auto cu = correlations_upto(ue2, 2 * (to_ll(u->height(4)) + 1));
  std::vector<BigInt> hs;
  for (int j = 3; j <= 8; ++j) hs.push_back(u->height(j));
  auto ch = correlations(ue2, hs);
  for (const auto& [n, b] : ch.values) cu.values.emplace(n, b);
  if (!cu.invariant_violations().empty()) failed.push_back("normalization/symmetry");

  auto t = make_construction(family::thm2(2));
  auto te2 = LevelSet::level(t, 2, 0);
  const long N = to_ll(t->height(4)) + 1;
  auto ct = correlations_upto(te2, 3 * 2 * N);
  if (!ct.invariant_violations().empty()) failed.push_back("thm2 normalization/symmetry");

  const double eig = std::min(toeplitz_min_eigenvalue(cu, 8), toeplitz_min_eigenvalue(ct, 8));
  if (eig < kToeplitzFloor) failed.push_back("Toeplitz PSD");
  d << "min order-8 Toeplitz eigenvalue " << eig << "; ";

  bool halves = true, susp = true;
  const double want = std::expm1(0.5) / std::expm1(1.0);
  for (const auto& h : hs) {
    if (!cu.exact(h) || cu.at(h) != Rational(1, 2)) halves = false;
    else if (std::abs(suspension_correlation(cu.at(h)) - want) > kSuspensionTol) susp = false;
  }
  if (!halves) failed.push_back("c(h_j) = 1/2");
  if (!susp || !halves) failed.push_back("suspension value");
  d << "c(h_j) " << (halves ? "= 1/2" : "!= 1/2") << " for j=3..8; suspension " << want << "; ";

  // product correlations of T x T^3 past h_4
  const long h4 = to_ll(t->height(4));
  std::vector<BigInt> probe;
  for (long k = h4 + 1; k <= h4 + 2000; ++k) {
    probe.push_back(k);
    probe.push_back(3 * k);
  }
  auto cp = correlations(te2, probe);
  long nonzero = 0, unresolved = 0;
  long first_k = 0;
  for (long k = h4 + 1; k <= h4 + 2000; ++k) {
    const auto& l = cp.bounds(k);
    const auto& rr = cp.bounds(3 * k);
    if (l.hi == 0 || rr.hi == 0) continue;
    if (l.lo > 0 && rr.lo > 0) {
      if (!nonzero++) first_k = k;
    } else {
      ++unresolved;
    }
  }
  if (nonzero) failed.push_back("product correlations vanish past h_4");
  d << "T x T^3 product correlation nonzero at " << nonzero << "/2000 k in (h_4, h_4+2000]";
  if (nonzero) d << " (first k=" << first_k << ")";
  if (unresolved) d << ", " << unresolved << " unresolved";
  d << "; ";

  std::vector<double> g(2 * N);
  for (long k = 0; k < 2 * N; ++k) g[k] = to_double(ct.at(k) * ct.at(3 * k));
  auto f1 = fejer_density(g, N, kFejerGrid);
  auto f2 = fejer_density(g, 2 * N, kFejerGrid);
  double gap = 0;
  for (long i = 0; i < kFejerGrid; ++i) gap = std::max(gap, std::abs(f1.density[i] - f2.density[i]));
  if (gap > kFejerTol) failed.push_back("Fejer N vs 2N");
  d << "max |F_" << N << " - F_" << 2 * N << "| = " << gap;

  r.verdict = failed.empty() ? (unresolved ? Verdict::inconclusive : Verdict::pass) : Verdict::fail;
  if (!failed.empty()) {
    std::string f = "failed:";
    for (const auto& s : failed) f += " [" + s + "]";
    r.detail = f + "; " + d.str();
  } else {
    r.detail = d.str();
  }
  return r;
}

}  // namespace

CriterionResult run_criterion(int id) {
  static const std::vector<std::function<CriterionResult()>> table{c1, c2, c3, c4, c5, c6, c7, c8, c9};
  if (id < 1 || id > kCriterionCount) throw std::invalid_argument("no acceptance criterion " + std::to_string(id));
  const auto t0 = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    r = table[static_cast<std::size_t>(id - 1)]();
  } catch (const std::exception& e) {
    r = named(id, "criterion " + std::to_string(id));
    r.verdict = Verdict::fail;
    r.detail = std::string("error: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids) {
  std::vector<CriterionResult> out;
  if (ids.empty())
    for (int i = 1; i <= kCriterionCount; ++i) out.push_back(run_criterion(i));
  else
    for (int i : ids) out.push_back(run_criterion(i));
  return out;
}

std::string format_line(const CriterionResult& r) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(1);
  s << to_string(r.verdict) << "  " << r.id << " " << r.title << " (" << r.seconds << " s): " << r.detail;
  return s.str();
}

}  // namespace rank1
