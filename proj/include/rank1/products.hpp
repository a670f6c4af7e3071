#pragma once

// Products T_left^m x T_right^n measured on rectangles, where measures
// factorize exactly.

#include "rank1/tower.hpp"

#include <optional>
#include <vector>

namespace rank1 {

struct ProductSystem {
  ConstructionPtr left;
  long m = 1;
  ConstructionPtr right;
  long n = 1;

  void validate() const;
};

/// mu(T_left^{mk} A ∩ A) * mu(T_right^{nk} A' ∩ A'). The right factor is
/// skipped when the left one is exactly zero.
MeasureBound product_return(const ProductSystem& sys, const LevelSet& a, const LevelSet& a_prime, const BigInt& k);

struct RatioRow {
  int i = 0;
  Rational ratio;      // h_i / h'_i
  Rational deviation;  // |h_i / h'_i - target|
};

/// Exact height ratios of two constructions against a target a/b.
std::vector<RatioRow> ratio_condition(const Construction& a, const Construction& b, int J, const Rational& target);

enum class ReturnStatus { proven_zero, unresolved, nonzero };

const char* to_string(ReturnStatus s);

struct ReturnSample {
  BigInt k;
  MeasureBound left, right, product;
  ReturnStatus status = ReturnStatus::proven_zero;
};

struct RectangleReturnReport {
  BigInt k_lo, k_hi;
  std::vector<ReturnSample> samples;
  std::size_t proven_zero = 0;
  std::size_t unresolved = 0;
  std::size_t nonzero = 0;
  std::vector<RatioRow> ratio_check;

  bool all_proven_zero() const { return unresolved == 0 && nonzero == 0; }
  /// Finite-scan evidence only: the tail k -> infinity is not computed.
  const char* summary() const;
};

/// Samples k evenly over [k_lo, k_hi] (every k when the range has at most
/// `samples` points) and classifies each rectangle return.
RectangleReturnReport dissipativity_scan(const ProductSystem& sys, const LevelSet& a, const LevelSet& a_prime,
                                         const BigInt& k_lo, const BigInt& k_hi, long samples,
                                         std::optional<std::pair<int, Rational>> ratio_target = std::nullopt);

}  // namespace rank1
