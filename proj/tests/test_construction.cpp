#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "test_main.hpp"

#include "rank1/construction.hpp"

using namespace rank1;

TEST_CASE("toy heights unroll h_{j+1} = 2h_j + 1") {
  auto c = make_construction(family::toy());
  const char* expected[] = {"1", "3", "7", "15"};
  for (int j = 1; j <= 4; ++j) CHECK(c->height(j) == BigInt(expected[j - 1]));
  CHECK(c->width(4) == Q("1/8"));
}

TEST_CASE("utv1 heights are (j+1)!") {
  auto c = make_construction(family::utv1());
  CHECK(c->height(5) == 720);
  BigInt fact = 1;
  for (int j = 1; j <= 12; ++j) {
    fact *= (j + 1);
    CHECK(c->height(j) == fact);
  }
}

TEST_CASE("stage 1 is the base case") {
  auto p = family::utv1();
  p.base_width = Q("3/5");
  auto g = stage_geometry(p, 1);
  CHECK(g.h == 2);
  CHECK(g.level_width == Q("3/5"));
  REQUIRE(g.column_offsets.size() == 2);
  CHECK(g.column_offsets[0] == 0);
  CHECK(g.column_offsets[1] == 2);  // h_1 + s_1(1) = 2 + 0
}

TEST_CASE("geometry recursion invariants hold for every preset") {
  for (auto p : {family::toy(), family::utv1(), family::thm2(2), family::thm2(4), family::scaled(Q("3/2"))}) {
    auto c = make_construction(p);
    CAPTURE(p.name);
    for (int j = 1; j <= 10; ++j) {
      const auto& g = c->stage(j);
      const auto& n = c->stage(j + 1);
      BigInt spacers = 0;
      for (const auto& s : g.spacers) spacers += s;
      CHECK(n.h == g.h * g.r + spacers);
      CHECK(g.column_offsets.front() == 0);
      for (int i = 1; i < g.r; ++i)
        CHECK(g.column_offsets[i] - g.column_offsets[i - 1] == g.h + g.spacers[i - 1]);
      CHECK(g.column_offsets.back() + g.h + g.spacers.back() == n.h);
      CHECK(n.level_width == g.level_width / g.r);
      CHECK(n.space_measure >= g.space_measure);
    }
    // width times the number of stage-j refinements of one stage-1 level
    BigInt pieces = 1;
    for (int j = 1; j <= 10; ++j) {
      CHECK(c->width(j) * pieces == p.base_width);
      pieces *= c->stage(j).r;
    }
  }
}

TEST_CASE("sigma sequence and its preimages") {
  const long prefix[] = {1, 2, 1, 2, 3, 1, 2, 3, 4, 1, 2, 3, 4, 5};
  for (int j = 1; j <= 14; ++j) CHECK(sigma_at(j) == prefix[j - 1]);
  CHECK(sigma_preimage(1, 9) == std::vector<int>{1, 3, 6});
  CHECK(sigma_preimage(4, 9) == std::vector<int>{9});
  CHECK(sigma_preimage(7, 9).empty());
  CHECK_THROWS(sigma_at(0));
}

TEST_CASE("thm2 spacer vector is (0,...,0, sigma(j), j h_j)") {
  auto c = make_construction(family::thm2(3));
  const auto& g = c->stage(5);
  REQUIRE(g.r == 4);
  CHECK(g.spacers[0] == 0);
  CHECK(g.spacers[1] == 0);
  CHECK(g.spacers[2] == sigma_at(5));
  CHECK(g.spacers[3] == g.h * 5);
  CHECK_THROWS_AS(family::thm2(1), std::invalid_argument);
}

TEST_CASE("scaled family tracks a times the utv1 heights") {
  auto base = make_construction(family::utv1());
  auto two = make_construction(family::scaled(2));
  for (int j = 1; j <= 10; ++j) CHECK(two->height(j) == 2 * base->height(j));

  auto c = make_construction(family::scaled(Q("3/2")));
  for (int j = 1; j <= 12; ++j) {
    CHECK(c->height(j) == ceil(Q("3/2") * Rational(base->height(j))));
    CHECK(c->stage(j).spacers[1] >= c->height(j));
  }
  CHECK_THROWS(family::scaled(1));
}

TEST_CASE("invalid parameters are rejected at construction") {
  auto p = family::utv1();
  p.cuts = {1, 0};
  CHECK_THROWS_AS(make_construction(p), std::invalid_argument);

  p = family::utv1();
  p.spacers = {SpacerRule::zero(), SpacerRule::zero(), SpacerRule::zero()};
  CHECK_THROWS_AS(make_construction(p), std::invalid_argument);

  p = family::utv1();
  p.h1 = 0;
  CHECK_THROWS_AS(make_construction(p), std::invalid_argument);

  // the completing spacer would be negative immediately
  p = family::utv1();
  p.spacers = {SpacerRule::constant(1000), SpacerRule::scaled_target(Q("3/2"))};
  CHECK_THROWS_AS(make_construction(p), std::invalid_argument);
}

TEST_CASE("family names") {
  CHECK(family::by_name("thm2(5)").cuts.at(1) == 6);
  CHECK(family::by_name("scaled(5/2)").h1 == 5);
  CHECK_THROWS(family::by_name("chacon"));
  CHECK_THROWS(family::by_name("thm2()"));
}

TEST_CASE("descend maps column copies back and rejects spacers") {
  auto c = make_construction(family::toy());
  // stage 2 -> 3: pos_2 = (0, 3), h_2 = 3, level 6 is the spacer
  CHECK(c->descend(0, 2) == BigInt(0));
  CHECK(c->descend(4, 2) == BigInt(1));
  CHECK(!c->descend(6, 2));
  CHECK(!c->descend(-1, 2));
}

TEST_CASE("infinite measure partial sums") {
  auto toy = make_construction(family::toy());
  auto rep = infinite_measure_partial_sum(*toy, 3);
  CHECK(rep.total == Q("31/42"));
  CHECK(!infinite_measure_partial_sum(*toy, 10).looks_divergent);

  auto utv1 = make_construction(family::utv1());
  rep = infinite_measure_partial_sum(*utv1, 3);
  CHECK(rep.total == 3);
  CHECK(rep.looks_divergent);

  auto p = family::utv1();
  p.spacers.clear();
  auto flat = make_construction(p);
  CHECK(infinite_measure_partial_sum(*flat, 7).total == 0);
}

TEST_CASE("condition (*) check") {
  auto utv1 = make_construction(family::utv1());
  auto rep = condition_star_check(*utv1, 6);
  CHECK(rep.pass);
  for (const auto& row : rep.rows) CHECK(*row.ratios[0] == Rational(1, row.j));

  auto toy = make_construction(family::toy());
  rep = condition_star_check(*toy, 6);
  CHECK(!rep.pass);
  CHECK(*rep.rows[5].ratios[0] == 63);

  auto p = family::utv1();
  p.spacers = {SpacerRule::constant(1), SpacerRule::j_times_h()};
  rep = condition_star_check(*make_construction(p), 3);
  CHECK(!rep.pass);
  CHECK(rep.violations.front() == "s_1(1) != 0");

  // interior zero spacer is a violation, not a division by zero
  p = family::thm2(3);
  rep = condition_star_check(*make_construction(p), 3);
  CHECK(!rep.pass);
  CHECK(!rep.rows[0].ratios[0].has_value());

  p = family::utv1();
  p.cuts = {2, 1};
  CHECK_THROWS(condition_star_check(*make_construction(p), 3));
}
