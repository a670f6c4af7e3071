#pragma once

// Exact calculus on finite unions of tower levels.
//
// A LevelSet is a union of levels of one stage-j tower. T acts on every
// level below the top as a translation onto the next level, so T^n maps
// level l to level l+n whenever both lie in the tower. Points that would
// leave the tower are pushed to a deeper stage until they land inside it.

#include "rank1/construction.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rank1 {

class LevelSet {
 public:
  LevelSet(ConstructionPtr construction, int stage, std::vector<BigInt> levels);

  /// E_j at stage j shifted up by `level` (i.e. T^level E_j).
  static LevelSet level(ConstructionPtr construction, int stage, const BigInt& level);
  /// The whole stage-j tower.
  static LevelSet tower(ConstructionPtr construction, int stage);
  static LevelSet empty(ConstructionPtr construction, int stage);

  /// Parses "stage=J; levels=0,1,3,4" (ranges "a..b" inclusive allowed).
  static LevelSet parse(ConstructionPtr construction, std::string_view text);

  const ConstructionPtr& construction() const { return construction_; }
  int stage() const { return stage_; }
  const std::vector<BigInt>& levels() const { return levels_; }
  const Rational& width() const { return construction_->width(stage_); }
  bool is_empty() const { return levels_.empty(); }
  std::size_t size() const { return levels_.size(); }

  Rational measure() const { return width() * static_cast<unsigned long>(levels_.size()); }

  /// Whether level x of stage `at_stage` (>= stage()) lies in this set.
  bool contains(const BigInt& x, int at_stage) const;

  std::string to_string() const;

  friend bool operator==(const LevelSet& a, const LevelSet& b);

 private:
  ConstructionPtr construction_;
  int stage_;
  std::vector<BigInt> levels_;  // sorted, distinct, in [0, h_stage)
};

/// Same points, represented at stage `to_stage` >= A.stage().
LevelSet refine(const LevelSet& a, int to_stage);

LevelSet intersect(const LevelSet& a, const LevelSet& b);
LevelSet unite(const LevelSet& a, const LevelSet& b);
LevelSet subtract(const LevelSet& a, const LevelSet& b);
inline Rational measure(const LevelSet& a) { return a.measure(); }

/// Level set image T^n A when it stays inside the stage-A tower; nullopt
/// when some level would leave it.
std::optional<LevelSet> shift_within(const LevelSet& a, const BigInt& n);

/// Rational bracket [lo, hi] around a measure.
struct MeasureBound {
  Rational lo = 0;
  Rational hi = 0;
  int resolved_stage = 0;

  bool exact() const { return lo == hi; }
  Rational unresolved_mass() const { return hi - lo; }

  static MeasureBound point(Rational v, int stage = 0) { return {v, v, stage}; }

  MeasureBound& operator+=(const MeasureBound& o);
  friend MeasureBound operator+(MeasureBound a, const MeasureBound& b) { return a += b; }
  friend MeasureBound operator*(const Rational& c, const MeasureBound& b);
  friend bool operator==(const MeasureBound& a, const MeasureBound& b) {
    return a.lo == b.lo && a.hi == b.hi;
  }
};

/// Product of two nonnegative brackets.
MeasureBound product(const MeasureBound& a, const MeasureBound& b);

std::string to_string(const MeasureBound& b);

/// Extra stages past the common stage that apply_power_bounds explores by
/// default.
inline constexpr int kDefaultExtraStages = 8;

/// Global cap read from RANK1_MAX_STAGE (nullopt when unset or invalid).
std::optional<int> env_max_stage();

/// Smallest stage >= from whose height exceeds |n|.
int stage_containing_shift(const Construction& c, int from, const BigInt& n);

/// Bounds mu(T^n A ∩ B). max_stage defaults to common stage + 8, clipped by
/// RANK1_MAX_STAGE. Mass still outside the tower at max_stage is reported as
/// hi - lo, never guessed.
MeasureBound apply_power_bounds(const LevelSet& a, const LevelSet& b, const BigInt& n,
                                std::optional<int> max_stage = std::nullopt);

}  // namespace rank1
