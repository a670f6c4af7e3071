#include "rank1/joinings.hpp"

#include <algorithm>

namespace rank1 {

MeasureBound delta_shift(const LevelSet& a, const LevelSet& b, const BigInt& k) {
  return apply_power_bounds(b, a, BigInt(-k));
}

MeasureBound partial_joining(const LevelSet& a, const LevelSet& b, const BigInt& k, int j) {
  const Construction& c = *a.construction();
  const BigInt& h = c.height(j);
  if (k > h || k < -h) throw std::invalid_argument("partial joining needs |k| <= h_j");
  if (a.stage() > j || b.stage() > j) throw std::invalid_argument("partial joining needs sets at stage <= j");
  if (a.construction() != b.construction()) throw std::invalid_argument("level sets belong to different constructions");

  const LevelSet ra = refine(a, j);
  unsigned long hits = 0;
  BigInt t;
  for (const auto& l : ra.levels()) {
    t = l + k;
    if (t >= 0 && t < h && b.contains(t, j)) ++hits;
  }
  return MeasureBound::point(c.width(j) * hits, j);
}

void JoiningCombination::validate(const Construction& c) const {
  const BigInt& h = c.height(stage);
  Rational sum = 0;
  for (const auto& [k, w] : weights) {
    if (w < 0) throw std::invalid_argument("joining weights must be >= 0");
    if (k > h || k < -h) throw std::invalid_argument("joining weight on |k| > h_j");
    sum += w;
  }
  if (sum != 1) throw std::invalid_argument("joining weights sum to " + to_string(sum) + ", not 1");
}

MeasureBound combination_value(const JoiningCombination& comb, const LevelSet& a, const LevelSet& b) {
  comb.validate(*a.construction());
  MeasureBound total = MeasureBound::point(0, comb.stage);
  for (const auto& [k, w] : comb.weights)
    if (w != 0) total += w * partial_joining(a, b, k, comb.stage);
  return total;
}

std::vector<BigInt> witness_candidates(const Construction& c, int j, long m) {
  const BigInt& h = c.height(j);
  const BigInt& g = c.height(j - 1);
  return {h + m, -h + m, h + g + m, h - g + m, -h + g + m, -h - g + m, BigInt(m)};
}

WitnessReport theorem1_witness(long m, const std::vector<Rectangle>& grid, int j_first, int j_last,
                               const Rational& eps) {
  WitnessReport rep;
  rep.m = m;
  if (grid.empty()) {
    rep.vacuous = true;
    return rep;
  }
  if (j_first < 2) throw std::invalid_argument("witness search needs j >= 2");
  const Construction& c = *grid.front().first.construction();

  std::vector<MeasureBound> half_base;
  for (const auto& [a, b] : grid) half_base.push_back(Rational(1, 2) * delta_shift(a, b, m));

  for (int j = j_first; j <= j_last; ++j) {
    std::optional<WitnessRow> best;
    for (const auto& k : witness_candidates(c, j, m)) {
      WitnessRow row;
      row.j = j;
      row.k_chosen = k;
      row.trivial = (k == m);
      bool first = true;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        auto v = delta_shift(grid[i].first, grid[i].second, k);
        Rational lo = v.lo - half_base[i].hi;
        Rational hi = v.hi - half_base[i].lo;
        row.margin_lo = first ? lo : min(row.margin_lo, lo);
        row.margin_hi = first ? hi : min(row.margin_hi, hi);
        first = false;
      }
      row.ok = row.margin_lo >= -eps;
      // the trivial shift only fills in when nothing else qualifies
      if (row.trivial && best && best->ok) continue;
      if (!best || (row.ok && !best->ok) || (row.ok == best->ok && row.margin_lo > best->margin_lo))
        best = row;
    }
    const Verdict v = best->ok ? Verdict::pass : (best->margin_hi < -eps ? Verdict::fail : Verdict::inconclusive);
    rep.verdict = combine(rep.verdict, v);
    rep.rows.push_back(*best);
  }
  return rep;
}

}  // namespace rank1
