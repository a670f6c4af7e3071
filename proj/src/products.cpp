#include "rank1/products.hpp"

#include "rank1/weak_limits.hpp"

namespace rank1 {

void ProductSystem::validate() const {
  if (!left || !right) throw std::invalid_argument("product system needs both factors");
  if (m == 0 || n == 0) throw std::invalid_argument("product exponents must be nonzero");
}

MeasureBound product_return(const ProductSystem& sys, const LevelSet& a, const LevelSet& a_prime, const BigInt& k) {
  sys.validate();
  if (a.construction() != sys.left || a_prime.construction() != sys.right)
    throw std::invalid_argument("rectangle sides must live on the product's factors");
  MeasureBound left = apply_power_bounds(a, a, k * sys.m);
  if (left.hi == 0) return MeasureBound::point(0, left.resolved_stage);
  return product(left, apply_power_bounds(a_prime, a_prime, k * sys.n));
}

std::vector<RatioRow> ratio_condition(const Construction& a, const Construction& b, int J, const Rational& target) {
  std::vector<RatioRow> rows;
  for (int i = 1; i <= J; ++i) {
    Rational q(a.height(i), b.height(i));
    q.canonicalize();
    rows.push_back({i, q, abs(q - target)});
  }
  return rows;
}

const char* to_string(ReturnStatus s) {
  switch (s) {
    case ReturnStatus::proven_zero: return "PROVEN-ZERO";
    case ReturnStatus::unresolved: return "UNRESOLVED";
    case ReturnStatus::nonzero: return "NONZERO";
  }
  return "?";
}

const char* RectangleReturnReport::summary() const {
  if (nonzero) return "returns observed: not dissipative evidence";
  if (unresolved) return "no return proven, some samples unresolved";
  return "all sampled returns proven zero (finite-scan evidence, not a proof)";
}

RectangleReturnReport dissipativity_scan(const ProductSystem& sys, const LevelSet& a, const LevelSet& a_prime,
                                         const BigInt& k_lo, const BigInt& k_hi, long samples,
                                         std::optional<std::pair<int, Rational>> ratio_target) {
  if (k_lo < 1) throw std::invalid_argument("dissipativity scan needs k_lo >= 1");
  if (samples < 2) throw std::invalid_argument("need at least two samples");
  RectangleReturnReport rep;
  rep.k_lo = k_lo;
  rep.k_hi = k_hi;

  std::vector<BigInt> ks;
  if (k_hi - k_lo + 1 <= samples) {
    for (BigInt k = k_lo; k <= k_hi; ++k) ks.push_back(k);
  } else {
    ks = sample_range(k_lo, k_hi, samples - 2);
  }

  for (auto& k : ks) {
    ReturnSample s;
    s.k = k;
    s.left = apply_power_bounds(a, a, k * sys.m);
    s.right = s.left.hi == 0 ? MeasureBound::point(0) : apply_power_bounds(a_prime, a_prime, k * sys.n);
    s.product = s.left.hi == 0 || s.right.hi == 0 ? MeasureBound::point(0) : product(s.left, s.right);
    if (s.product.hi == 0) {
      s.status = ReturnStatus::proven_zero;
      ++rep.proven_zero;
    } else if (s.product.lo > 0) {
      s.status = ReturnStatus::nonzero;
      ++rep.nonzero;
    } else {
      s.status = ReturnStatus::unresolved;
      ++rep.unresolved;
    }
    rep.samples.push_back(std::move(s));
  }
  if (ratio_target) rep.ratio_check = ratio_condition(*sys.left, *sys.right, ratio_target->first, ratio_target->second);
  return rep;
}

}  // namespace rank1
