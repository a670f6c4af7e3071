#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "test_main.hpp"

#include "rank1/products.hpp"
#include "rank1/spectral.hpp"

#include <cmath>
#include <random>

using namespace rank1;

TEST_CASE("correlation invariants") {
  auto u = make_construction(family::utv1());
  auto e2 = LevelSet::level(u, 2, 0);
  auto c = correlations_upto(e2, 200);
  CHECK(c.at(0) == 1);
  CHECK(c.invariant_violations().empty());
  CHECK(c.contiguous_radius() == 200);
  CHECK(toeplitz_min_eigenvalue(c, 8) >= -1e-9);
  CHECK(toeplitz_min_eigenvalue(c, 8, 6) >= -1e-9);
  CHECK_THROWS(c.at(201));
}

TEST_CASE("non-decay along h_j") {
  auto u = make_construction(family::utv1());
  auto e2 = LevelSet::level(u, 2, 0);
  std::vector<BigInt> hs;
  for (int j = 3; j <= 8; ++j) hs.push_back(u->height(j));
  auto c = correlations(e2, hs);
  for (const auto& h : hs) {
    CHECK(c.at(h) == Q("1/2"));
    CHECK(c.at(-h) == Q("1/2"));
  }
  BigInt dead = u->height(5) + 2 * u->height(4) + 17;
  CHECK(correlations(e2, {dead}).at(dead) == 0);
}

TEST_CASE("product correlation") {
  auto u = make_construction(family::utv1());
  auto e2 = LevelSet::level(u, 2, 0);
  std::vector<BigInt> hs;
  for (int j = 3; j <= 6; ++j) hs.push_back(u->height(j));
  auto c = correlations(e2, hs);
  CHECK(product_correlation(c, c, 1, 1, 0) == 1);
  for (const auto& h : hs) CHECK(product_correlation(c, c, 1, 1, h) == Q("1/4"));
  CHECK_THROWS(product_correlation(c, c, 1, 3, hs.front()));
}

TEST_CASE("product correlation matches the product return") {
  auto t = make_construction(family::thm2(2));
  ProductSystem sys{t, 1, t, 3};
  auto a = LevelSet::level(t, 2, 0);
  auto b = LevelSet::level(t, 2, 4);
  auto ca = correlations_upto(a, 300);
  auto cb = correlations_upto(b, 900);
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> kd(-300, 300);
  for (int i = 0; i < 20; ++i) {
    BigInt k = kd(rng);
    auto v = product_return(sys, a, b, k);
    REQUIRE(v.exact());
    CHECK(product_correlation(ca, cb, 1, 3, k) == v.lo / (a.measure() * b.measure()));
  }
}

TEST_CASE("suspension correlation") {
  CHECK(suspension_correlation(Q("0")) == 0);
  CHECK(std::abs(suspension_correlation(Q("1")) - 1) < 1e-15);
  const double want = (std::sqrt(std::exp(1.0)) - 1) / (std::exp(1.0) - 1);
  CHECK(std::abs(suspension_correlation(Q("1/2")) - want) < 1e-12);
  CHECK(std::abs(want - 0.3775) < 1e-4);
  auto [lo, hi] = suspension_correlation(MeasureBound{Q("1/4"), Q("1/2"), 0});
  CHECK(lo < hi);
}

TEST_CASE("fejer density") {
  std::vector<double> delta(64, 0.0);
  delta[0] = 1;
  auto flat = fejer_density(delta, 64, 128);
  CHECK(std::abs(flat.max - 1) < 1e-12);
  CHECK(std::abs(flat.min - 1) < 1e-12);

  std::vector<double> ones(64, 1.0);
  auto peak = fejer_density(ones, 64, 256);
  CHECK(std::abs(peak.density[0] - 64) < 1e-9);
  CHECK(peak.min > -1e-9);
  CHECK(std::abs(peak.mean - 1) < 1e-9);
  CHECK(peak.max_over_mean > 32);

  auto u = make_construction(family::utv1());
  auto e2 = LevelSet::level(u, 2, 0);
  const long n4 = to_ll(u->height(4)) + 1, n5 = to_ll(u->height(5)) + 1;
  auto c = correlations_upto(e2, n5);
  auto d4 = fejer_density(c, n4, 2048);
  auto d5 = fejer_density(c, n5, 2048);
  CHECK(d5.max_over_mean > d4.max_over_mean);
  CHECK(d5.min > -1e-9);
  CHECK_THROWS(fejer_density(c, n5 + 5, 16));
}
