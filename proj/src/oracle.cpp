#include "rank1/oracle.hpp"

#include <algorithm>

namespace rank1 {

IntervalSystem::IntervalSystem(const ConstructionParams& params, int J) : depth_(J) {
  if (J < 1) throw std::invalid_argument("oracle depth must be >= 1");
  params.validate();

  const long h1 = to_ll(params.h1);
  Rational w = params.base_width;
  std::vector<Rational> tower;
  for (long l = 0; l < h1; ++l) tower.push_back(w * l);
  Rational cursor = w * h1;
  lefts_.push_back(tower);
  widths_.push_back(w);

  for (int j = 1; j < J; ++j) {
    const int r = params.cuts.at(j);
    const auto spacers = evaluate_spacers(params, j, BigInt(static_cast<unsigned long>(tower.size())));
    const Rational piece = w / r;
    std::vector<Rational> next;
    for (int i = 0; i < r; ++i) {
      // column i: the i-th sub-interval of every level, bottom to top
      for (const auto& left : tower) next.push_back(left + piece * i);
      // then its spacers, taken from fresh line to the right of everything
      for (BigInt t = 0; t < spacers[static_cast<std::size_t>(i)]; ++t) {
        next.push_back(cursor);
        cursor += piece;
      }
    }
    tower = std::move(next);
    w = piece;
    lefts_.push_back(tower);
    widths_.push_back(w);
  }

  for (const auto& stage : lefts_) {
    std::vector<std::pair<Rational, std::size_t>> v;
    v.reserve(stage.size());
    for (std::size_t l = 0; l < stage.size(); ++l) v.emplace_back(stage[l], l);
    std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    sorted_.push_back(std::move(v));
  }
  by_left_ = sorted_.back();
}

std::optional<std::size_t> IntervalSystem::container(int j, std::size_t l) const {
  const Rational& x = lefts_.back().at(l);
  const auto& v = sorted_.at(static_cast<std::size_t>(j - 1));
  auto it = std::upper_bound(v.begin(), v.end(), x, [](const Rational& y, const auto& e) { return y < e.first; });
  if (it == v.begin()) return std::nullopt;
  --it;
  if (x < it->first + width(j)) return it->second;
  return std::nullopt;
}

IntervalSystem::Image IntervalSystem::image(int stage_a, const std::vector<BigInt>& a, long n) const {
  if (stage_a > depth_) throw std::invalid_argument("set deeper than oracle truncation");
  const long h = static_cast<long>(height(depth_));
  if ((n < 0 ? -n : n) >= h) throw std::invalid_argument("|n| >= h_J: every point would be undefined");
  Image img{{}, 0};
  const Rational& w = width(depth_);
  for (const auto& piece : intervals_of(stage_a, a)) {
    auto it = std::lower_bound(by_left_.begin(), by_left_.end(), piece.left,
                               [](const auto& e, const Rational& y) { return e.first < y; });
    for (; it != by_left_.end() && it->first < piece.right; ++it) {
      const long target = static_cast<long>(it->second) + n;
      if (target < 0 || target >= h)
        img.undefined += w;
      else
        img.levels.push_back(static_cast<std::size_t>(target));
    }
  }
  return img;
}

Interval IntervalSystem::level(int j, std::size_t l) const {
  const Rational& left = lefts_.at(static_cast<std::size_t>(j - 1)).at(l);
  return {left, left + width(j)};
}

std::vector<Interval> IntervalSystem::intervals_of(int stage, const std::vector<BigInt>& levels) const {
  std::vector<Interval> out;
  out.reserve(levels.size());
  for (const auto& l : levels) out.push_back(level(stage, static_cast<std::size_t>(to_ll(l))));
  std::sort(out.begin(), out.end(), [](const Interval& x, const Interval& y) { return x.left < y.left; });
  return out;
}

namespace {

// Total overlap of [lo, hi) with a sorted list of disjoint intervals.
Rational overlap(const std::vector<Interval>& sorted, const Rational& lo, const Rational& hi) {
  Rational total = 0;
  auto it = std::upper_bound(sorted.begin(), sorted.end(), lo,
                             [](const Rational& x, const Interval& iv) { return x < iv.left; });
  if (it != sorted.begin()) --it;
  for (; it != sorted.end() && it->left < hi; ++it) {
    Rational a = max(lo, it->left);
    Rational b = min(hi, it->right);
    if (a < b) total += b - a;
  }
  return total;
}

}  // namespace

IntervalSystem::Result IntervalSystem::intersection(int stage_a, const std::vector<BigInt>& a, int stage_b,
                                                    const std::vector<BigInt>& b, long n) const {
  if (stage_a > depth_ || stage_b > depth_) throw std::invalid_argument("set deeper than oracle truncation");
  const long h = static_cast<long>(height(depth_));
  if ((n < 0 ? -n : n) >= h) throw std::invalid_argument("|n| >= h_J: every point would be undefined");

  const auto a_iv = intervals_of(stage_a, a);
  const auto b_iv = intervals_of(stage_b, b);
  const Rational& w = width(depth_);
  const auto& lefts = lefts_.back();

  Result res{0, 0};
  for (const auto& piece : a_iv) {
    Rational from = piece.left - w;
    auto it = std::upper_bound(by_left_.begin(), by_left_.end(), from,
                               [](const Rational& x, const auto& e) { return x < e.first; });
    for (; it != by_left_.end() && it->first < piece.right; ++it) {
      const Rational& L = it->first;
      Rational x0 = max(piece.left, L);
      Rational x1 = min(piece.right, L + w);
      if (!(x0 < x1)) continue;
      const long target = static_cast<long>(it->second) + n;
      if (target < 0 || target >= h) {
        res.undefined += x1 - x0;
        continue;
      }
      const Rational shift = lefts[static_cast<std::size_t>(target)] - L;
      res.value += overlap(b_iv, x0 + shift, x1 + shift);
    }
  }
  return res;
}

OracleResult oracle_intersection(const LevelSet& a, const LevelSet& b, long n, int J) {
  IntervalSystem sys(a.construction()->params(), J);
  auto r = sys.intersection(a.stage(), a.levels(), b.stage(), b.levels(), n);
  return {r.value, r.undefined};
}

}  // namespace rank1
