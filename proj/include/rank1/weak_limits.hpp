#pragma once

// Candidate weak limits of T^{n(k)}: polynomial operators sum_p c_p T^p,
// paired against level sets, and the checks built on them.

#include "rank1/tower.hpp"
#include "rank1/verdict.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace rank1 {

/// sum_p c_p T^p with c_p >= 0 and sum c_p <= 1; the missing mass is the
/// part of the limit that escapes to infinity.
class OperatorPolynomial {
 public:
  OperatorPolynomial() = default;
  explicit OperatorPolynomial(std::map<long, Rational> coeffs);

  /// "1/2*T^0 + 1/4*T^-1", "T^3", "1/3*I", "0".
  static OperatorPolynomial parse(std::string_view text);

  const std::map<long, Rational>& coeffs() const { return coeffs_; }
  Rational total() const;
  Rational deficit() const { return 1 - total(); }
  std::string to_string() const;

 private:
  std::map<long, Rational> coeffs_;
};

/// n(k) = s + sum_i alpha_i h_{k - lag_i}, lags strictly increasing.
struct CandidateSequence {
  struct Term {
    long alpha = 1;
    int lag = 0;
  };
  BigInt s = 0;
  std::vector<Term> terms;

  /// "h_k", "h_k + h_{k-1}", "h_k+1", "2*h_{k-1} - h_k - 3". Any single
  /// letter works as the index variable.
  static CandidateSequence parse(std::string_view text);

  void validate() const;
  /// Smallest k for which every selected stage is >= 2.
  int min_k() const;
  BigInt at(const Construction& c, int k) const;
  std::string to_string() const;
};

/// sum_p c_p mu(T^p A ∩ B).
MeasureBound predict(const OperatorPolynomial& poly, const LevelSet& a, const LevelSet& b);

struct LimitRow {
  int k = 0;
  BigInt n;
  std::size_t pair = 0;
  MeasureBound value;
  MeasureBound prediction;
  Deviation deviation;
};

struct LimitReport {
  std::vector<LimitRow> rows;
  Rational max_deviation = 0;  // worst case over all rows
  Verdict verdict = Verdict::pass;
};

using SetPair = std::pair<LevelSet, LevelSet>;

LimitReport verify_limit(const CandidateSequence& seq, const OperatorPolynomial& poly,
                         const std::vector<SetPair>& pairs, int k_first, int k_last, const Rational& tol);

struct ScanRow {
  BigInt n;
  MeasureBound value;
};

struct WindowScan {
  int j = 0;
  BigInt window_lo, window_hi;  // [h_j - 2h_{j-1}, h_j + 2h_{j-1}]
  BigInt dead_lo, dead_hi;      // [h_j + 2h_{j-1}, h_{j+1} - 2h_j]
  std::vector<ScanRow> window;
  std::vector<ScanRow> dead_zone;
  bool dead_zone_zero = true;  // every dead-zone value has hi == 0
};

inline constexpr long kDefaultDeadZoneSamples = 64;
/// Dead zones up to this length may be scanned exhaustively.
inline constexpr long kExhaustiveScanLimit = 100000;

/// Evenly spaced sample of [lo, hi]: both endpoints plus `interior` points.
std::vector<BigInt> sample_range(const BigInt& lo, const BigInt& hi, long interior);

WindowScan scan_window(const LevelSet& a, const LevelSet& b, int j, const BigInt& step,
                       long dead_samples = kDefaultDeadZoneSamples, bool exhaustive = false);

/// ((N-n)/(N+1), 1/(N+1)).
std::pair<Rational, Rational> eq4_coefficients(int N, int n);

struct Eq4Row {
  int stage = 0;
  BigInt shift;  // -n h_{j'} (or +n h_{j'} for negative p)
  MeasureBound value;
  MeasureBound prediction;
  Deviation deviation;
};

struct Eq4Report {
  int N = 0, n = 0;
  long p = 0;
  std::vector<Eq4Row> rows;
  bool deviation_non_increasing = true;
  Verdict verdict = Verdict::pass;
};

/// Checks T^{-n h_{j'}} -> (N-n)/(N+1) I + 1/(N+1) T^p along the listed
/// stages, which must all satisfy sigma(j') = |p|. A and B must live on a
/// construction with r_j = N+1.
Eq4Report verify_eq4(int N, long p, int n, const LevelSet& a, const LevelSet& b, const std::vector<int>& stages,
                     const Rational& tol);

}  // namespace rank1
