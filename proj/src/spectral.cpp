#include "rank1/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace rank1 {

const MeasureBound& CorrelationSequence::bounds(const BigInt& n) const {
  auto it = values.find(n);
  if (it == values.end()) throw std::out_of_range("c(" + to_string(n) + ") was not computed");
  return it->second;
}

Rational CorrelationSequence::at(const BigInt& n) const {
  const MeasureBound& b = bounds(n);
  if (!b.exact()) throw std::domain_error("c(" + to_string(n) + ") unresolved: " + to_string(b));
  return b.lo;
}

long CorrelationSequence::contiguous_radius() const {
  if (!has(0)) return -1;
  long r = 0;
  while (has(r + 1) && has(-(r + 1))) ++r;
  return r;
}

std::vector<std::string> CorrelationSequence::invariant_violations() const {
  std::vector<std::string> out;
  if (!exact(0) || at(0) != 1) out.push_back("c(0) != 1");
  for (const auto& [n, b] : values) {
    if (b.hi > 1 || b.lo < 0) out.push_back("c(" + to_string(n) + ") outside [0, 1]");
    if (n > 0 && has(-n) && bounds(-n) != b) out.push_back("c(-" + to_string(n) + ") != c(" + to_string(n) + ")");
  }
  return out;
}

namespace {

CorrelationSequence start(const LevelSet& a) {
  CorrelationSequence c;
  c.base_measure = a.measure();
  if (c.base_measure == 0) throw std::invalid_argument("correlations need a base set of positive measure");
  return c;
}

void add(CorrelationSequence& c, const LevelSet& a, const BigInt& n, std::optional<int> max_stage) {
  if (c.has(n)) return;
  MeasureBound b = apply_power_bounds(a, a, n, max_stage);
  c.values.emplace(n, (1 / c.base_measure) * b);
}

}  // namespace

CorrelationSequence correlations(const LevelSet& a, const std::vector<BigInt>& n_list, std::optional<int> max_stage) {
  CorrelationSequence c = start(a);
  add(c, a, 0, max_stage);
  for (const auto& n : n_list) {
    add(c, a, n, max_stage);
    add(c, a, BigInt(-n), max_stage);
  }
  return c;
}

CorrelationSequence correlations_upto(const LevelSet& a, long radius, std::optional<int> max_stage) {
  if (radius < 0) throw std::invalid_argument("radius must be >= 0");
  CorrelationSequence c = start(a);
  for (long n = -radius; n <= radius; ++n) add(c, a, n, max_stage);
  return c;
}

Rational product_correlation(const CorrelationSequence& c1, const CorrelationSequence& c2, long m, long n,
                             const BigInt& k) {
  const BigInt mk = k * m, nk = k * n;
  if (!c1.has(mk) || !c2.has(nk))
    throw std::out_of_range("k = " + to_string(k) + " is outside the computed correlation range");
  return c1.at(mk) * c2.at(nk);
}

double suspension_correlation(const Rational& c) {
  return std::expm1(to_double(c)) / std::expm1(1.0);
}

std::pair<double, double> suspension_correlation(const MeasureBound& c) {
  return {suspension_correlation(c.lo), suspension_correlation(c.hi)};
}

SpectralDensityEstimate fejer_density(const std::vector<double>& coeffs, long N, long M) {
  if (N < 1 || M < 1) throw std::invalid_argument("fejer_density needs N, M >= 1");
  if (static_cast<long>(coeffs.size()) < N) throw std::invalid_argument("need c(n) for all n < N");
  SpectralDensityEstimate est;
  est.N = N;
  est.theta.resize(M);
  est.density.resize(M);
  for (long i = 0; i < M; ++i) {
    const double th = 2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(M);
    double s = coeffs[0];
    for (long n = 1; n < N; ++n) {
      if (coeffs[n] == 0) continue;
      s += 2 * (1 - static_cast<double>(n) / static_cast<double>(N)) * coeffs[n] * std::cos(static_cast<double>(n) * th);
    }
    est.theta[i] = th;
    est.density[i] = s;
  }
  auto [mn, mx] = std::minmax_element(est.density.begin(), est.density.end());
  est.min = *mn;
  est.max = *mx;
  const double total = std::accumulate(est.density.begin(), est.density.end(), 0.0);
  est.mean = total / static_cast<double>(M);
  est.max_over_mean = est.max / est.mean;
  std::vector<double> sorted = est.density;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const long top = std::max<long>(1, static_cast<long>(std::ceil(0.05 * static_cast<double>(M))));
  est.top5_share = std::accumulate(sorted.begin(), sorted.begin() + top, 0.0) / total;
  return est;
}

std::vector<double> dense_coefficients(const CorrelationSequence& c, long N) {
  std::vector<double> out(N);
  for (long n = 0; n < N; ++n) out[n] = to_double(c.at(n));
  return out;
}

SpectralDensityEstimate fejer_density(const CorrelationSequence& c, long N, long M) {
  return fejer_density(dense_coefficients(c, N), N, M);
}

double toeplitz_min_eigenvalue(const CorrelationSequence& c, int order, const BigInt& stride) {
  if (order < 1) throw std::invalid_argument("Toeplitz order must be >= 1");
  Eigen::MatrixXd m(order, order);
  for (int i = 0; i < order; ++i)
    for (int j = 0; j < order; ++j) m(i, j) = to_double(c.at(BigInt(i - j) * stride));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace rank1
