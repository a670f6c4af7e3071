#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "test_main.hpp"

#include "rank1/oracle.hpp"
#include "rank1/products.hpp"

#include <random>

using namespace rank1;

TEST_CASE("product return factorizes") {
  auto u = make_construction(family::utv1());
  auto t = make_construction(family::thm2(2));
  ProductSystem sys{u, 1, t, 3};
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> lu(0, 5), lt(0, 8), kd(-400, 400);
  for (int i = 0; i < 50; ++i) {
    auto a = LevelSet::level(u, 2, lu(rng));
    auto b = LevelSet::level(t, 2, lt(rng));
    BigInt k = kd(rng);
    auto left = apply_power_bounds(a, a, k);
    auto right = apply_power_bounds(b, b, 3 * k);
    auto v = product_return(sys, a, b, k);
    if (left.hi == 0)
      CHECK(v.hi == 0);
    else
      CHECK(v == product(left, right));
  }
  CHECK_THROWS(product_return(sys, LevelSet::level(t, 2, 0), LevelSet::level(t, 2, 0), 1));
}

TEST_CASE("product return at k = 0 and on empty rectangles") {
  auto u = make_construction(family::utv1());
  ProductSystem sys{u, 1, u, 1};
  auto a = LevelSet::level(u, 2, 1);
  auto b = LevelSet::level(u, 3, 4);
  CHECK(product_return(sys, a, b, 0) == MeasureBound::point(a.measure() * b.measure()));
  auto empty = LevelSet::empty(u, 2);
  auto rep = dissipativity_scan(sys, empty, a, 1, 5000, 64);
  CHECK(rep.all_proven_zero());
}

TEST_CASE("quadrat limit for T x T") {
  auto u = make_construction(family::utv1());
  ProductSystem sys{u, 1, u, 1};
  auto e2 = LevelSet::level(u, 2, 0);
  const Rational quarter = Q("1/4") * e2.measure() * e2.measure();
  for (int j = 3; j <= 8; ++j) CHECK(product_return(sys, e2, e2, u->height(j)) == MeasureBound::point(quarter));
  auto rep = dissipativity_scan(sys, e2, e2, 1, u->height(6), 64);
  CHECK(rep.nonzero > 0);
}

TEST_CASE("thm2(2) T x T^3 still returns past h_4 at finite stages") {
  // The top spacer j*h_j is only a few multiples of h_j here, so returns
  // built from h_{j+1} - h_j style differences survive.
  auto t = make_construction(family::thm2(2));
  ProductSystem sys{t, 1, t, 3};
  auto e2 = LevelSet::level(t, 2, 0);
  const long k = 1311;
  CHECK(k > t->height(4));
  auto v = product_return(sys, e2, e2, k);
  CHECK(v.lo > 0);
  auto left = oracle_intersection(e2, e2, k, 6);
  auto right = oracle_intersection(e2, e2, 3 * k, 6);
  CHECK(left.fully_defined());
  CHECK(right.fully_defined());
  CHECK(left.value * right.value == v.lo);
  CHECK(v.exact());
}

TEST_CASE("a dominant top spacer removes those returns") {
  auto p = family::thm2(2);
  p.name = "thm2-wide";
  p.spacers = {SpacerRule::sigma(), SpacerRule::c_times_h(1000)};
  auto t = make_construction(p);
  ProductSystem sys{t, 1, t, 3};
  auto e2 = LevelSet::level(t, 2, 0);
  for (int j : {4, 5}) {
    auto rep = dissipativity_scan(sys, e2, e2, t->height(j) + 1, 8 * t->height(j), 256);
    CHECK(rep.all_proven_zero());
  }
}

TEST_CASE("ratio condition") {
  auto u = make_construction(family::utv1());
  auto s2 = make_construction(family::scaled(2));
  for (const auto& row : ratio_condition(*s2, *u, 8, 2)) CHECK(row.deviation <= Rational(1, u->height(row.i)));
  for (const auto& row : ratio_condition(*u, *u, 8, 1)) CHECK(row.ratio == 1);
  auto off = ratio_condition(*make_construction(family::scaled(Q("3/2"))), *u, 8, 1);
  for (const auto& row : off) CHECK(row.deviation >= Q("1/4"));
}

TEST_CASE("scan report wording") {
  auto u = make_construction(family::utv1());
  ProductSystem sys{u, 1, u, 1};
  auto a = LevelSet::level(u, 2, 0);
  auto rep = dissipativity_scan(sys, a, a, 500, 600, 10);
  CHECK(rep.samples.size() == 10);
  CHECK(std::string(to_string(ReturnStatus::proven_zero)) == "PROVEN-ZERO");
  CHECK(std::string(to_string(ReturnStatus::unresolved)) == "UNRESOLVED");
  CHECK_THROWS(dissipativity_scan(sys, a, a, 0, 10, 10));
}
