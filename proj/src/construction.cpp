#include "rank1/construction.hpp"

#include <algorithm>
#include <cctype>

namespace rank1 {

namespace {

// Stages checked eagerly by validate(); deeper stages are checked lazily.
constexpr int kValidationDepth = 16;

BigInt factorial(long n) {
  BigInt out;
  mpz_fac_ui(out.get_mpz_t(), static_cast<unsigned long>(n));
  return out;
}

// ceil(a * (j+1)!) -- the utv1 height scaled by a.
BigInt scaled_height(const Rational& a, int j) { return ceil(a * Rational(factorial(j + 1))); }

std::vector<BigInt> spacers_at(const ConstructionParams& p, int j, const BigInt& h, int r) {
  if (p.spacers.size() > static_cast<std::size_t>(r))
    throw std::invalid_argument("more spacer rules than columns at stage " + std::to_string(j));
  std::vector<BigInt> out(static_cast<std::size_t>(r), BigInt(0));
  const std::size_t lead = static_cast<std::size_t>(r) - p.spacers.size();
  std::optional<std::size_t> completing;
  for (std::size_t k = 0; k < p.spacers.size(); ++k) {
    const SpacerRule& rule = p.spacers[k];
    BigInt& s = out[lead + k];
    switch (rule.kind) {
      case SpacerKind::zero: s = 0; break;
      case SpacerKind::constant: s = rule.c; break;
      case SpacerKind::c_times_j: s = rule.c * j; break;
      case SpacerKind::c_times_h: s = rule.c * h; break;
      case SpacerKind::j_times_h: s = h * j; break;
      case SpacerKind::sigma: s = sigma_at(j); break;
      case SpacerKind::scaled_target: completing = lead + k; break;
    }
  }
  if (completing) {
    BigInt rest = 0;
    for (std::size_t k = 0; k < out.size(); ++k)
      if (k != *completing) rest += out[k];
    BigInt& s = out[*completing];
    s = scaled_height(p.spacers[*completing - lead].a, j + 1) - h * r - rest;
    if (s < h)
      throw std::invalid_argument("scaled target spacer s_" + std::to_string(j) + " = " + s.get_str() +
                                  " is below h_j = " + h.get_str());
  }
  for (std::size_t k = 0; k < out.size(); ++k)
    if (out[k] < 0)
      throw std::invalid_argument("negative spacer s_" + std::to_string(j) + "(" + std::to_string(k + 1) + ")");
  return out;
}

StageGeometry next_stage(const ConstructionParams& p, const StageGeometry& cur) {
  StageGeometry nxt;
  nxt.j = cur.j + 1;
  nxt.h = cur.h * cur.r;
  for (const auto& s : cur.spacers) nxt.h += s;
  nxt.level_width = cur.level_width / cur.r;
  nxt.r = p.cuts.at(nxt.j);
  if (nxt.r < 2) throw std::invalid_argument("r_" + std::to_string(nxt.j) + " < 2");
  nxt.spacers = spacers_at(p, nxt.j, nxt.h, nxt.r);
  return nxt;
}

void fill_columns(StageGeometry& g) {
  g.column_offsets.assign(static_cast<std::size_t>(g.r), BigInt(0));
  BigInt spacer_mass = 0;
  for (int i = 1; i < g.r; ++i)
    g.column_offsets[i] = g.column_offsets[i - 1] + g.h + g.spacers[i - 1];
  for (const auto& s : g.spacers) spacer_mass += s;
  g.space_measure = g.level_width * g.h + (g.level_width / g.r) * spacer_mass;
}

StageGeometry first_stage(const ConstructionParams& p) {
  StageGeometry g;
  g.j = 1;
  g.h = p.h1;
  g.level_width = p.base_width;
  g.r = p.cuts.at(1);
  if (g.r < 2) throw std::invalid_argument("r_1 < 2");
  g.spacers = spacers_at(p, 1, g.h, g.r);
  fill_columns(g);
  return g;
}

}  // namespace

std::vector<BigInt> evaluate_spacers(const ConstructionParams& params, int j, const BigInt& h) {
  return spacers_at(params, j, h, params.cuts.at(j));
}

long sigma_at(int j) {
  if (j < 1) throw std::invalid_argument("sigma is 1-indexed");
  long idx = j;
  long block = 2;
  while (idx > block) {
    idx -= block;
    ++block;
  }
  return idx;
}

std::vector<int> sigma_preimage(long p, int max_stage) {
  std::vector<int> out;
  for (int j = 1; j <= max_stage; ++j)
    if (sigma_at(j) == p) out.push_back(j);
  return out;
}

void ConstructionParams::validate() const {
  if (h1 < 1) throw std::invalid_argument("h1 must be a positive integer");
  if (base_width <= 0) throw std::invalid_argument("base_width must be positive");
  for (std::size_t k = 0; k < spacers.size(); ++k) {
    const auto& rule = spacers[k];
    if (rule.c < 0) throw std::invalid_argument("spacer rule constant must be >= 0");
    if (rule.kind == SpacerKind::scaled_target) {
      if (k + 1 != spacers.size()) throw std::invalid_argument("scaled_target must be the last spacer rule");
      if (rule.a <= 1) throw std::invalid_argument("scaled_target needs a > 1");
    }
  }
  for (int j = 1; j <= kValidationDepth; ++j) {
    const int r = cuts.at(j);
    if (r < 2) throw std::invalid_argument("r_" + std::to_string(j) + " = " + std::to_string(r) + " < 2");
    if (spacers.size() > static_cast<std::size_t>(r))
      throw std::invalid_argument("more spacer rules than columns at stage " + std::to_string(j));
  }
  StageGeometry g = first_stage(*this);
  for (int j = 2; j <= kValidationDepth; ++j) g = next_stage(*this, g);
}

Construction::Construction(ConstructionParams params) : params_(std::move(params)) {
  params_.validate();
  auto first = std::make_unique<StageGeometry>(first_stage(params_));
  stages_.push_back(std::move(first));
}

const StageGeometry& Construction::stage(int j) const {
  if (j < 1) throw std::invalid_argument("stage index must be >= 1");
  std::lock_guard lock(mutex_);
  while (static_cast<int>(stages_.size()) < j) {
    auto g = std::make_unique<StageGeometry>(next_stage(params_, *stages_.back()));
    fill_columns(*g);
    stages_.push_back(std::move(g));
  }
  return *stages_[static_cast<std::size_t>(j - 1)];
}

std::optional<int> Construction::column_of(const BigInt& x, int j) const {
  const StageGeometry& g = stage(j);
  if (x < 0) return std::nullopt;
  auto it = std::upper_bound(g.column_offsets.begin(), g.column_offsets.end(), x);
  if (it == g.column_offsets.begin()) return std::nullopt;
  --it;
  if (x - *it >= g.h) return std::nullopt;
  return static_cast<int>(it - g.column_offsets.begin());
}

std::optional<BigInt> Construction::descend(const BigInt& x, int j) const {
  auto col = column_of(x, j);
  if (!col) return std::nullopt;
  return BigInt(x - stage(j).column_offsets[static_cast<std::size_t>(*col)]);
}

ConstructionPtr make_construction(ConstructionParams params) {
  return std::make_shared<const Construction>(std::move(params));
}

StageGeometry stage_geometry(const ConstructionParams& params, int j) {
  return Construction(params).stage(j);
}

namespace family {

ConstructionParams toy() {
  ConstructionParams p;
  p.name = "toy";
  p.h1 = 1;
  p.cuts = {2, 0};
  p.spacers = {SpacerRule::zero(), SpacerRule::constant(1)};
  return p;
}

ConstructionParams utv1() {
  ConstructionParams p;
  p.name = "utv1";
  p.h1 = 2;
  p.cuts = {2, 0};
  p.spacers = {SpacerRule::zero(), SpacerRule::j_times_h()};
  return p;
}

ConstructionParams thm2(int N) {
  if (N < 2) throw std::invalid_argument("thm2(N) requires N >= 2");
  ConstructionParams p;
  p.name = "thm2(" + std::to_string(N) + ")";
  p.h1 = 2;
  p.cuts = {N + 1, 0};
  p.spacers = {SpacerRule::sigma(), SpacerRule::j_times_h()};
  return p;
}

ConstructionParams scaled(const Rational& a) {
  if (a <= 1) throw std::invalid_argument("scaled(a) requires a > 1");
  ConstructionParams p;
  p.name = "scaled(" + to_string(a) + ")";
  p.h1 = ceil(a * 2);
  p.cuts = {2, 0};
  p.spacers = {SpacerRule::zero(), SpacerRule::scaled_target(a)};
  return p;
}

ConstructionParams by_name(std::string_view name) {
  auto inner = [&](std::string_view prefix) -> std::optional<std::string_view> {
    if (name.size() > prefix.size() + 2 && name.substr(0, prefix.size()) == prefix &&
        name[prefix.size()] == '(' && name.back() == ')')
      return name.substr(prefix.size() + 1, name.size() - prefix.size() - 2);
    return std::nullopt;
  };
  if (name == "toy") return toy();
  if (name == "utv1") return utv1();
  if (auto arg = inner("thm2")) return thm2(static_cast<int>(to_ll(parse_bigint(*arg))));
  if (auto arg = inner("scaled")) return scaled(parse_rational(*arg));
  throw std::invalid_argument("unknown family '" + std::string(name) + "'");
}

}  // namespace family

MeasureSeriesReport infinite_measure_partial_sum(const Construction& c, int J) {
  if (J < 1) throw std::invalid_argument("J must be >= 1");
  MeasureSeriesReport rep;
  Rational sum = 0;
  Rational last = 0;
  for (int j = 1; j <= J; ++j) {
    const auto& g = c.stage(j);
    BigInt s = 0;
    for (const auto& x : g.spacers) s += x;
    last = Rational(s) / (g.h * g.r);
    last.canonicalize();
    sum += last;
    rep.partial_sums.push_back(sum);
  }
  rep.total = sum;
  rep.looks_divergent = last * J >= 1;
  return rep;
}

StarCheckReport condition_star_check(const Construction& c, int J) {
  if (!c.params().cuts.is_constant())
    throw std::invalid_argument("condition (*) is defined for constant r only");
  StarCheckReport rep;
  const int r = c.params().cuts.at(1);
  for (int j = 1; j <= J; ++j) {
    const auto& g = c.stage(j);
    StarCheckRow row{j, {}};
    if (g.spacers[0] != 0) rep.violations.push_back("s_" + std::to_string(j) + "(1) != 0");
    std::vector<BigInt> chain;
    chain.push_back(g.h);
    for (int i = 1; i < r; ++i) chain.push_back(g.spacers[static_cast<std::size_t>(i)]);
    for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
      if (chain[k + 1] == 0) {
        row.ratios.emplace_back(std::nullopt);
        rep.violations.push_back("s_" + std::to_string(j) + "(" + std::to_string(k + 2) + ") = 0");
      } else {
        Rational q(chain[k], chain[k + 1]);
        q.canonicalize();
        row.ratios.emplace_back(q);
      }
    }
    rep.rows.push_back(std::move(row));
  }
  for (std::size_t link = 0; link + 1 < static_cast<std::size_t>(r); ++link) {
    for (std::size_t k = 1; k < rep.rows.size(); ++k) {
      const auto& prev = rep.rows[k - 1].ratios[link];
      const auto& cur = rep.rows[k].ratios[link];
      if (prev && cur && !(*cur < *prev)) {
        rep.violations.push_back("ratio " + std::to_string(link + 1) + " does not shrink at j = " +
                                 std::to_string(rep.rows[k].j));
        break;
      }
    }
  }
  rep.pass = rep.violations.empty();
  return rep;
}

}  // namespace rank1
