#pragma once

// Rank-one cutting-and-stacking constructions.
//
// Stage j is a tower of h_j levels of common width w_j. To pass to stage
// j+1 the tower is cut into r_j columns of width w_j / r_j, column i gets
// s_j(i) spacer levels on top, and the columns are stacked left to right.
// Level l of stage j therefore reappears in stage j+1 at the levels
// pos_j(i) + l, where pos_j(1) = 0 and pos_j(i+1) = pos_j(i) + h_j + s_j(i).

#include "rank1/exact.hpp"

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace rank1 {

enum class SpacerKind {
  zero,
  constant,       // c
  c_times_j,      // c * j
  c_times_h,      // c * h_j
  j_times_h,      // j * h_j
  sigma,          // 1,2, 1,2,3, 1,2,3,4, ...
  scaled_target,  // completes the stage so that h_{j+1} = ceil(a * (j+2)!)
};

struct SpacerRule {
  SpacerKind kind = SpacerKind::zero;
  BigInt c = 0;      // constant / c_times_j / c_times_h
  Rational a = 0;    // scaled_target

  static SpacerRule zero() { return {}; }
  static SpacerRule constant(BigInt c) { return {SpacerKind::constant, std::move(c), 0}; }
  static SpacerRule c_times_j(BigInt c) { return {SpacerKind::c_times_j, std::move(c), 0}; }
  static SpacerRule c_times_h(BigInt c) { return {SpacerKind::c_times_h, std::move(c), 0}; }
  static SpacerRule j_times_h() { return {SpacerKind::j_times_h, 0, 0}; }
  static SpacerRule sigma() { return {SpacerKind::sigma, 0, 0}; }
  static SpacerRule scaled_target(Rational a) { return {SpacerKind::scaled_target, 0, std::move(a)}; }
};

/// r_j = base + slope * j.
struct CutRule {
  long base = 2;
  long slope = 0;

  int at(int j) const { return static_cast<int>(base + slope * j); }
  bool is_constant() const { return slope == 0; }
};

/// The recipe for one rank-one system. Spacer rules are right-aligned
/// against the r_j columns: when fewer rules than columns are given the
/// leading columns receive no spacers.
struct ConstructionParams {
  std::string name = "custom";
  BigInt h1 = 1;
  Rational base_width = 1;
  CutRule cuts;
  std::vector<SpacerRule> spacers;

  /// Throws std::invalid_argument describing the first violated constraint.
  void validate() const;
};

/// sigma(j), 1-indexed: concatenation of the blocks (1..2), (1..3), (1..4), ...
long sigma_at(int j);

/// s_j(1..r_j) for stage j of tower height h, straight from the rules.
std::vector<BigInt> evaluate_spacers(const ConstructionParams& params, int j, const BigInt& h);

/// Stages j in [1, max_stage] with sigma(j) == p.
std::vector<int> sigma_preimage(long p, int max_stage);

struct StageGeometry {
  int j = 1;
  int r = 2;
  BigInt h;
  Rational level_width;
  std::vector<BigInt> spacers;         // s_j(1..r_j)
  std::vector<BigInt> column_offsets;  // pos_j(1..r_j)
  Rational space_measure;              // h_j w_j + spacer mass added at stage j
};

class Construction {
 public:
  explicit Construction(ConstructionParams params);

  const ConstructionParams& params() const { return params_; }
  const std::string& name() const { return params_.name; }

  /// Exact geometry of stage j >= 1. Memoized; the returned reference stays
  /// valid for the lifetime of the construction.
  const StageGeometry& stage(int j) const;

  const BigInt& height(int j) const { return stage(j).h; }
  const Rational& width(int j) const { return stage(j).level_width; }

  /// Level of stage j lying under level x of stage j+1, or nullopt when x is
  /// a spacer added at stage j.
  std::optional<BigInt> descend(const BigInt& x, int j) const;

  /// Column (0-based) of stage j containing stage-(j+1) level x.
  std::optional<int> column_of(const BigInt& x, int j) const;

 private:
  ConstructionParams params_;
  mutable std::mutex mutex_;
  mutable std::vector<std::unique_ptr<StageGeometry>> stages_;
};

using ConstructionPtr = std::shared_ptr<const Construction>;

ConstructionPtr make_construction(ConstructionParams params);

namespace family {

ConstructionParams toy();
ConstructionParams utv1();
ConstructionParams thm2(int N);
ConstructionParams scaled(const Rational& a);

/// "toy", "utv1", "thm2(N)", "scaled(p/q)".
ConstructionParams by_name(std::string_view name);

}  // namespace family

/// Free-function form of Construction::stage for callers holding only params.
StageGeometry stage_geometry(const ConstructionParams& params, int j);

struct MeasureSeriesReport {
  std::vector<Rational> partial_sums;  // S_1 .. S_J
  Rational total;
  bool looks_divergent = false;  // last increment >= 1/J; a heuristic only
};

/// Partial sums of sum_j sum_i s_j(i) / (h_j r_j); divergence of the full
/// series means the space has infinite measure.
MeasureSeriesReport infinite_measure_partial_sum(const Construction& c, int J);

struct StarCheckRow {
  int j = 0;
  // h_j/s_j(2), s_j(2)/s_j(3), ..., s_j(r-1)/s_j(r); nullopt when the
  // denominator vanishes.
  std::vector<std::optional<Rational>> ratios;
};

struct StarCheckReport {
  bool pass = false;
  std::vector<StarCheckRow> rows;
  std::vector<std::string> violations;
};

/// Checks s_j(1) = 0 and that every link of h_j << s_j(2) << ... << s_j(r)
/// has a strictly shrinking ratio over j = 1..J. Requires constant r.
StarCheckReport condition_star_check(const Construction& c, int J);

}  // namespace rank1
