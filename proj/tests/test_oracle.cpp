#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "test_main.hpp"

#include "rank1/oracle.hpp"

using namespace rank1;

TEST_CASE("interval layout: disjoint levels of the right width") {
  for (auto p : {family::toy(), family::utv1(), family::thm2(2)}) {
    IntervalSystem sys(p, 5);
    auto c = make_construction(p);
    for (int j = 1; j <= 5; ++j) {
      CHECK(BigInt(static_cast<unsigned long>(sys.height(j))) == c->height(j));
      std::vector<Interval> all;
      for (std::size_t l = 0; l < sys.height(j); ++l) {
        auto iv = sys.level(j, l);
        CHECK(iv.length() == sys.width(j));
        all.push_back(iv);
      }
      std::sort(all.begin(), all.end(), [](auto& x, auto& y) { return x.left < y.left; });
      for (std::size_t k = 1; k < all.size(); ++k) CHECK(all[k - 1].right <= all[k].left);
    }
  }
}

TEST_CASE("oracle examples on the toy system") {
  auto toy = make_construction(family::toy());
  auto e1 = LevelSet::level(toy, 1, 0);
  auto r = oracle_intersection(e1, e1, 1, 3);
  CHECK(r.value == Q("1/2"));
  CHECK(r.undefined == 0);

  r = oracle_intersection(e1, e1, 3, 4);
  CHECK(r.value == Q("5/8"));
  CHECK(r.undefined == 0);

  auto a = LevelSet::parse(toy, "stage=2; levels=0,2");
  auto b = LevelSet::parse(toy, "stage=3; levels=0,1,6");
  r = oracle_intersection(a, b, 0, 4);
  CHECK(r.value == measure(intersect(a, b)));
  CHECK(r.undefined == 0);

  CHECK_THROWS(oracle_intersection(e1, e1, 15, 4));
  CHECK_THROWS(oracle_intersection(e1, e1, -15, 4));
}

TEST_CASE("oracle agrees with the tower calculus on small toy and utv1 cases") {
  // Truncating the calculus at the oracle depth gives the same split into
  // resolved value and escaping mass for n >= 0.
  for (auto p : {family::toy(), family::utv1()}) {
    auto c = make_construction(p);
    const int J = 5;
    const long hmax = to_ll(c->height(3));
    for (int sa = 1; sa <= 2; ++sa)
      for (int sb = 1; sb <= 2; ++sb)
        for (long la = 0; la < to_ll(c->height(sa)); ++la)
          for (long lb = 0; lb < to_ll(c->height(sb)); ++lb) {
            auto a = LevelSet::level(c, sa, la);
            auto b = LevelSet::level(c, sb, lb);
            for (long n = 0; n <= hmax; ++n) {
              auto o = oracle_intersection(a, b, n, J);
              auto t = apply_power_bounds(a, b, n, J);
              CHECK(t.lo == o.value);
              CHECK(t.unresolved_mass() == o.undefined);
            }
          }
  }
}
