#pragma once

// Brute-force model of a truncated rank-one system: every level of every
// stage up to J is an explicit half-open rational interval on the line, laid
// out by literally cutting and stacking. T^n is evaluated piece by piece as
// a translation between stage-J level intervals. Only the construction
// parameters are shared with the tower calculus.

#include "rank1/tower.hpp"

#include <optional>
#include <vector>

namespace rank1 {

struct Interval {
  Rational left;
  Rational right;
  Rational length() const { return right - left; }
};

class IntervalSystem {
 public:
  IntervalSystem(const ConstructionParams& params, int J);

  int depth() const { return depth_; }
  /// Number of levels of the stage-j tower, counted directly.
  std::size_t height(int j) const { return lefts_.at(static_cast<std::size_t>(j - 1)).size(); }
  const Rational& width(int j) const { return widths_.at(static_cast<std::size_t>(j - 1)); }
  Interval level(int j, std::size_t l) const;

  /// Stage-j levels of a level set as intervals, sorted by left endpoint.
  std::vector<Interval> intervals_of(int stage, const std::vector<BigInt>& levels) const;

  struct Result {
    Rational value;      // measure of the part of T^n A ∩ B that stays defined
    Rational undefined;  // mass of A whose orbit leaves the stage-J tower
  };

  /// Stage-j level whose interval holds stage-J level l; nullopt when l is
  /// a spacer added after stage j.
  std::optional<std::size_t> container(int j, std::size_t l) const;

  struct Image {
    std::vector<std::size_t> levels;  // stage-J levels hit by T^n A
    Rational undefined;
  };

  /// T^n A as whole stage-J levels.
  Image image(int stage_a, const std::vector<BigInt>& a, long n) const;

  /// mu(T^n A ∩ B) on the stage-J truncation. Throws when |n| >= h_J.
  Result intersection(int stage_a, const std::vector<BigInt>& a, int stage_b, const std::vector<BigInt>& b,
                      long n) const;

 private:
  int depth_;
  std::vector<std::vector<Rational>> lefts_;  // lefts_[j-1][l]
  std::vector<Rational> widths_;
  // stage-J levels ordered by left endpoint: (left, level)
  std::vector<std::pair<Rational, std::size_t>> by_left_;
  // same, for every stage
  std::vector<std::vector<std::pair<Rational, std::size_t>>> sorted_;
};

struct OracleResult {
  Rational value;
  Rational undefined;
  bool fully_defined() const { return undefined == 0; }
};

/// Oracle value of mu(T^n A ∩ B) at truncation depth J.
OracleResult oracle_intersection(const LevelSet& a, const LevelSet& b, long n, int J);

}  // namespace rank1
