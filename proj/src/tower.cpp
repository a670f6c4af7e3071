#include "rank1/tower.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <iterator>
#include <sstream>

namespace rank1 {

namespace {

void require_same(const LevelSet& a, const LevelSet& b) {
  if (a.construction() != b.construction())
    throw std::invalid_argument("level sets belong to different constructions");
}

// Column copies of stage-j levels inside stage j+1; input sorted => output sorted.
std::vector<BigInt> refine_once(const Construction& c, const std::vector<BigInt>& levels, int j) {
  const auto& g = c.stage(j);
  std::vector<BigInt> out;
  out.reserve(levels.size() * static_cast<std::size_t>(g.r));
  for (const auto& pos : g.column_offsets)
    for (const auto& l : levels) out.push_back(pos + l);
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <typename Op>
LevelSet combine(const LevelSet& a, const LevelSet& b, Op op) {
  require_same(a, b);
  const int s = std::max(a.stage(), b.stage());
  LevelSet ra = refine(a, s);
  LevelSet rb = refine(b, s);
  std::vector<BigInt> out;
  op(ra.levels().begin(), ra.levels().end(), rb.levels().begin(), rb.levels().end(), std::back_inserter(out));
  return LevelSet(a.construction(), s, std::move(out));
}

}  // namespace

LevelSet::LevelSet(ConstructionPtr construction, int stage, std::vector<BigInt> levels)
    : construction_(std::move(construction)), stage_(stage), levels_(std::move(levels)) {
  if (!construction_) throw std::invalid_argument("level set without construction");
  if (stage_ < 1) throw std::invalid_argument("stage must be >= 1");
  std::sort(levels_.begin(), levels_.end());
  levels_.erase(std::unique(levels_.begin(), levels_.end()), levels_.end());
  const BigInt& h = construction_->height(stage_);
  if (!levels_.empty() && (levels_.front() < 0 || levels_.back() >= h))
    throw std::invalid_argument("level outside [0, h_" + std::to_string(stage_) + ")");
}

LevelSet LevelSet::level(ConstructionPtr construction, int stage, const BigInt& level) {
  return LevelSet(std::move(construction), stage, {level});
}

LevelSet LevelSet::tower(ConstructionPtr construction, int stage) {
  const long h = to_ll(construction->height(stage));
  std::vector<BigInt> levels;
  levels.reserve(static_cast<std::size_t>(h));
  for (long l = 0; l < h; ++l) levels.emplace_back(l);
  return LevelSet(std::move(construction), stage, std::move(levels));
}

LevelSet LevelSet::empty(ConstructionPtr construction, int stage) {
  return LevelSet(std::move(construction), stage, {});
}

LevelSet LevelSet::parse(ConstructionPtr construction, std::string_view text) {
  std::optional<int> stage;
  std::vector<BigInt> levels;
  std::string_view rest = text;
  while (!rest.empty()) {
    auto semi = rest.find(';');
    auto field = trim(rest.substr(0, semi));
    rest = semi == std::string_view::npos ? std::string_view{} : rest.substr(semi + 1);
    if (field.empty()) continue;
    auto eq = field.find('=');
    if (eq == std::string_view::npos) throw std::invalid_argument("expected key=value in level set");
    auto key = trim(field.substr(0, eq));
    auto value = trim(field.substr(eq + 1));
    if (key == "stage") {
      stage = static_cast<int>(to_ll(parse_bigint(value)));
    } else if (key == "levels") {
      while (!value.empty()) {
        auto comma = value.find(',');
        auto item = trim(value.substr(0, comma));
        value = comma == std::string_view::npos ? std::string_view{} : value.substr(comma + 1);
        if (item.empty()) continue;
        auto dots = item.find("..");
        if (dots == std::string_view::npos) {
          levels.push_back(parse_bigint(item));
        } else {
          BigInt lo = parse_bigint(item.substr(0, dots));
          BigInt hi = parse_bigint(item.substr(dots + 2));
          for (BigInt x = lo; x <= hi; ++x) levels.push_back(x);
        }
      }
    } else {
      throw std::invalid_argument("unknown level set key '" + std::string(key) + "'");
    }
  }
  if (!stage) throw std::invalid_argument("level set needs stage=J");
  return LevelSet(std::move(construction), *stage, std::move(levels));
}

bool LevelSet::contains(const BigInt& x, int at_stage) const {
  if (at_stage < stage_) throw std::invalid_argument("cannot test membership above the set's stage");
  BigInt cur = x;
  for (int s = at_stage - 1; s >= stage_; --s) {
    auto down = construction_->descend(cur, s);
    if (!down) return false;
    cur = std::move(*down);
  }
  return std::binary_search(levels_.begin(), levels_.end(), cur);
}

std::string LevelSet::to_string() const {
  std::ostringstream os;
  os << "stage=" << stage_ << "; levels=";
  for (std::size_t i = 0; i < levels_.size(); ++i) os << (i ? "," : "") << levels_[i].get_str();
  return os.str();
}

bool operator==(const LevelSet& a, const LevelSet& b) {
  if (a.construction() != b.construction()) return false;
  const int s = std::max(a.stage(), b.stage());
  return refine(a, s).levels_ == refine(b, s).levels_;
}

LevelSet refine(const LevelSet& a, int to_stage) {
  if (to_stage < a.stage()) throw std::invalid_argument("refine cannot coarsen");
  std::vector<BigInt> levels = a.levels();
  for (int j = a.stage(); j < to_stage; ++j) levels = refine_once(*a.construction(), levels, j);
  return LevelSet(a.construction(), to_stage, std::move(levels));
}

LevelSet intersect(const LevelSet& a, const LevelSet& b) {
  return combine(a, b, [](auto... args) { return std::set_intersection(args...); });
}

LevelSet unite(const LevelSet& a, const LevelSet& b) {
  return combine(a, b, [](auto... args) { return std::set_union(args...); });
}

LevelSet subtract(const LevelSet& a, const LevelSet& b) {
  return combine(a, b, [](auto... args) { return std::set_difference(args...); });
}

std::optional<LevelSet> shift_within(const LevelSet& a, const BigInt& n) {
  const BigInt& h = a.construction()->height(a.stage());
  std::vector<BigInt> out;
  out.reserve(a.size());
  for (const auto& l : a.levels()) {
    BigInt t = l + n;
    if (t < 0 || t >= h) return std::nullopt;
    out.push_back(std::move(t));
  }
  return LevelSet(a.construction(), a.stage(), std::move(out));
}

MeasureBound& MeasureBound::operator+=(const MeasureBound& o) {
  lo += o.lo;
  hi += o.hi;
  resolved_stage = std::max(resolved_stage, o.resolved_stage);
  return *this;
}

MeasureBound operator*(const Rational& c, const MeasureBound& b) {
  if (c < 0) throw std::invalid_argument("negative scale on a measure bound");
  return {c * b.lo, c * b.hi, b.resolved_stage};
}

MeasureBound product(const MeasureBound& a, const MeasureBound& b) {
  return {a.lo * b.lo, a.hi * b.hi, std::max(a.resolved_stage, b.resolved_stage)};
}

std::string to_string(const MeasureBound& b) {
  if (b.exact()) return to_string(b.lo);
  return "[" + to_string(b.lo) + ", " + to_string(b.hi) + "]";
}

std::optional<int> env_max_stage() {
  const char* raw = std::getenv("RANK1_MAX_STAGE");
  if (!raw || !*raw) return std::nullopt;
  try {
    long v = to_ll(parse_bigint(raw));
    if (v < 1) return std::nullopt;
    return static_cast<int>(v);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

int stage_containing_shift(const Construction& c, int from, const BigInt& n) {
  BigInt m = n < 0 ? BigInt(-n) : n;
  int j = from;
  while (c.height(j) <= m) ++j;
  return j;
}

MeasureBound apply_power_bounds(const LevelSet& a, const LevelSet& b, const BigInt& n,
                                std::optional<int> max_stage) {
  require_same(a, b);
  // mu(T^n A ∩ B) = mu(T^{-n} B ∩ A)
  if (n < 0) return apply_power_bounds(b, a, BigInt(-n), max_stage);

  const Construction& c = *a.construction();
  const int first = stage_containing_shift(c, std::max(a.stage(), b.stage()), n);
  int last = max_stage.value_or(first + kDefaultExtraStages);
  if (auto cap = env_max_stage()) last = std::min(last, *cap);
  last = std::max(last, first);

  if (a.is_empty() || b.is_empty()) return MeasureBound::point(0, first);

  std::vector<BigInt> pending = refine(a, first).levels();
  Rational lo = 0;
  for (int s = first;; ++s) {
    const auto& g = c.stage(s);
    std::vector<BigInt> deferred;
    unsigned long hits = 0;
    BigInt t;
    for (const auto& l : pending) {
      t = l + n;
      if (t < g.h) {
        if (b.contains(t, s)) ++hits;
      } else {
        deferred.push_back(l);
      }
    }
    lo += g.level_width * hits;
    if (deferred.empty()) return {lo, lo, s};
    if (s == last) return {lo, lo + g.level_width * static_cast<unsigned long>(deferred.size()), s};
    pending = refine_once(c, deferred, s);
  }
}

}  // namespace rank1
