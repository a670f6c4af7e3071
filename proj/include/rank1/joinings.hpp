#pragma once

// Off-diagonal joinings Delta^k (the graph measure of T^k), evaluated on
// rectangles: Delta^k(A x B) = mu(A ∩ T^{-k} B).

#include "rank1/tower.hpp"
#include "rank1/verdict.hpp"

#include <map>
#include <optional>
#include <vector>

namespace rank1 {

/// Delta^k(A x B).
MeasureBound delta_shift(const LevelSet& a, const LevelSet& b, const BigInt& k);

/// Delta^k restricted to the stage-j rectangles on which T^k is a plain
/// translation of tower levels: the points x at stage-j level l with l + k
/// also in [0, h_j). Exact; requires |k| <= h_j and A, B at stage <= j.
MeasureBound partial_joining(const LevelSet& a, const LevelSet& b, const BigInt& k, int j);

/// Convex weights c_j^k on shifts |k| <= h_j.
struct JoiningCombination {
  int stage = 1;
  std::map<BigInt, Rational> weights;

  /// Throws unless every weight is >= 0, |k| <= h_j and the weights sum to 1.
  void validate(const Construction& c) const;
};

MeasureBound combination_value(const JoiningCombination& comb, const LevelSet& a, const LevelSet& b);

using Rectangle = std::pair<LevelSet, LevelSet>;

struct WitnessRow {
  int j = 0;
  BigInt k_chosen;
  Rational margin_lo, margin_hi;  // min over the grid of Delta^k - Delta^m / 2
  bool trivial = false;           // fell back to k = m
  bool ok = false;                // margin_lo >= -eps
};

struct WitnessReport {
  long m = 0;
  std::vector<WitnessRow> rows;
  bool vacuous = false;  // empty grid
  Verdict verdict = Verdict::pass;
};

/// Candidate shifts, in preference order: m ± h_j, m ± h_j ± h_{j-1}, then m.
std::vector<BigInt> witness_candidates(const Construction& c, int j, long m);

/// For each j picks k(j) from witness_candidates maximizing the grid margin
/// of Delta^{k(j)} - Delta^m / 2, preferring shifts other than m itself.
WitnessReport theorem1_witness(long m, const std::vector<Rectangle>& grid, int j_first, int j_last,
                               const Rational& eps);

}  // namespace rank1
