#pragma once

// Correlation sequences c(n) = mu(T^n A ∩ A) / mu(A) and floating-point
// indicators built on them.

#include "rank1/tower.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rank1 {

struct CorrelationSequence {
  Rational base_measure;
  std::map<BigInt, MeasureBound> values;  // already divided by mu(A)

  bool has(const BigInt& n) const { return values.count(n) > 0; }
  const MeasureBound& bounds(const BigInt& n) const;
  /// Throws when n was not computed or its bound is unresolved.
  Rational at(const BigInt& n) const;
  bool exact(const BigInt& n) const { return has(n) && bounds(n).exact(); }
  /// Largest N with every |n| <= N present.
  long contiguous_radius() const;
  /// Normalization, symmetry and |c| <= 1 on everything stored.
  std::vector<std::string> invariant_violations() const;
};

/// c(n) and c(-n) for every n in the list, plus c(0).
CorrelationSequence correlations(const LevelSet& a, const std::vector<BigInt>& n_list,
                                 std::optional<int> max_stage = std::nullopt);
/// c(n) for all |n| <= radius.
CorrelationSequence correlations_upto(const LevelSet& a, long radius, std::optional<int> max_stage = std::nullopt);

/// c1(m k) * c2(n k).
Rational product_correlation(const CorrelationSequence& c1, const CorrelationSequence& c2, long m, long n,
                             const BigInt& k);

/// (e^c - 1) / (e - 1).
double suspension_correlation(const Rational& c);
std::pair<double, double> suspension_correlation(const MeasureBound& c);

struct SpectralDensityEstimate {
  long N = 0;
  std::vector<double> theta;
  std::vector<double> density;
  double min = 0, max = 0, mean = 0;
  double max_over_mean = 0;
  double top5_share = 0;  // share of the grid mass on the top 5% of points
};

/// F_N(theta) = sum_{|n|<N} (1 - |n|/N) c(n) cos(n theta) on M points of [0, 2pi).
/// `coeffs[n]` is c(n) for n >= 0; c is taken as even.
SpectralDensityEstimate fejer_density(const std::vector<double>& coeffs, long N, long M);
SpectralDensityEstimate fejer_density(const CorrelationSequence& c, long N, long M);

/// c(0..N-1) as doubles; every value must be exact.
std::vector<double> dense_coefficients(const CorrelationSequence& c, long N);

/// Smallest eigenvalue of [c((i - j) * stride)]_{i,j < order}.
double toeplitz_min_eigenvalue(const CorrelationSequence& c, int order, const BigInt& stride = 1);

}  // namespace rank1
