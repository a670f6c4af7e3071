#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "test_main.hpp"

#include "rank1/weak_limits.hpp"

using namespace rank1;

namespace {

std::vector<SetPair> e2_pair(const ConstructionPtr& c) {
  auto e2 = LevelSet::level(c, 2, 0);
  return {{e2, e2}};
}

}  // namespace

TEST_CASE("operator polynomial parsing") {
  auto p = OperatorPolynomial::parse("1/2*T^0 + 1/4*T^-1");
  CHECK(p.coeffs().size() == 2);
  CHECK(p.coeffs().at(0) == Q("1/2"));
  CHECK(p.coeffs().at(-1) == Q("1/4"));
  CHECK(p.total() == Q("3/4"));
  CHECK(p.deficit() == Q("1/4"));
  CHECK(OperatorPolynomial::parse(p.to_string()).coeffs() == p.coeffs());
  CHECK(OperatorPolynomial::parse("T^3").coeffs().at(3) == 1);
  CHECK(OperatorPolynomial::parse("1/3*I").coeffs().at(0) == Q("1/3"));
  CHECK(OperatorPolynomial::parse("0").coeffs().empty());
  CHECK_THROWS(OperatorPolynomial::parse("T^0 + T^1"));
  CHECK_THROWS(OperatorPolynomial::parse("-1/2*T^0"));
  CHECK_THROWS(OperatorPolynomial::parse("1/2*X^0"));
  CHECK_THROWS(OperatorPolynomial::parse("1/2*T^"));
}

TEST_CASE("candidate sequence parsing") {
  auto u = make_construction(family::utv1());
  auto s = CandidateSequence::parse("h_k + h_{k-1} + 1");
  CHECK(s.terms.size() == 2);
  CHECK(s.s == 1);
  CHECK(s.at(*u, 5) == 720 + 120 + 1);
  CHECK(s.min_k() == 3);
  CHECK(CandidateSequence::parse(s.to_string()).at(*u, 6) == s.at(*u, 6));
  CHECK(CandidateSequence::parse("h_j").at(*u, 4) == 120);
  CHECK(CandidateSequence::parse("2*h_{k-1} - h_k - 3").at(*u, 4) == 2 * 24 - 120 - 3);
  CHECK(CandidateSequence::parse("h_{k-1} + h_k").at(*u, 5) == 840);
  CHECK_THROWS(CandidateSequence::parse("h_k + h_k"));
  CHECK_THROWS(CandidateSequence::parse("g_k"));
}

TEST_CASE("predict pairs polynomials against level sets") {
  auto u = make_construction(family::utv1());
  auto e2 = LevelSet::level(u, 2, 0);
  CHECK(predict(OperatorPolynomial::parse("T^0"), e2, e2).lo == e2.measure());
  CHECK(predict(OperatorPolynomial::parse("0"), e2, e2).hi == 0);
  auto half_shift = predict(OperatorPolynomial::parse("1/2*T^1"), e2, e2);
  CHECK(half_shift == Q("1/2") * apply_power_bounds(e2, e2, 1));
}

TEST_CASE("halving along h_k is exact") {
  auto u = make_construction(family::utv1());
  auto rep = verify_limit(CandidateSequence::parse("h_k"), OperatorPolynomial::parse("1/2*T^0"), e2_pair(u), 3, 8, 0);
  CHECK(rep.verdict == Verdict::pass);
  CHECK(rep.max_deviation == 0);
  CHECK(rep.rows.size() == 6);
  for (const auto& row : rep.rows) CHECK(row.value.exact());
}

TEST_CASE("iterated halving and unit shift") {
  auto u = make_construction(family::utv1());
  auto quarter = verify_limit(CandidateSequence::parse("h_k + h_{k-1}"), OperatorPolynomial::parse("1/4*T^0"),
                              e2_pair(u), 4, 8, 0);
  CHECK(quarter.verdict == Verdict::pass);
  CHECK(quarter.max_deviation == 0);
  auto shifted =
      verify_limit(CandidateSequence::parse("h_k + 1"), OperatorPolynomial::parse("1/2*T^1"), e2_pair(u), 3, 8, 0);
  CHECK(shifted.verdict == Verdict::pass);
  CHECK(shifted.max_deviation == 0);
}

TEST_CASE("wrong prediction fails rather than passing") {
  auto u = make_construction(family::utv1());
  auto rep = verify_limit(CandidateSequence::parse("h_k"), OperatorPolynomial::parse("1/4*T^0"), e2_pair(u), 3, 5, 0);
  CHECK(rep.verdict == Verdict::fail);
  CHECK(rep.max_deviation > 0);
}

TEST_CASE("sets must sit below the first selected stage") {
  auto u = make_construction(family::utv1());
  auto e3 = LevelSet::level(u, 3, 0);
  CHECK_THROWS(verify_limit(CandidateSequence::parse("h_k"), OperatorPolynomial::parse("1/2*T^0"), {{e3, e3}}, 3, 5, 0));
}

TEST_CASE("composition: h_k + h_{k-1} is half of h_{k-1}") {
  auto u = make_construction(family::utv1());
  std::vector<SetPair> pairs;
  for (int x = 0; x < 6; ++x)
    for (int y = 0; y < 6; ++y) pairs.push_back({LevelSet::level(u, 2, x), LevelSet::level(u, 2, y)});
  for (int k = 4; k <= 8; ++k) {
    BigInt n_both = CandidateSequence::parse("h_k + h_{k-1}").at(*u, k);
    BigInt n_inner = u->height(k - 1);
    for (const auto& [a, b] : pairs) CHECK(apply_power_bounds(a, b, n_both) == Q("1/2") * apply_power_bounds(a, b, n_inner));
  }
}

TEST_CASE("window scan and dead zone") {
  auto u = make_construction(family::utv1());
  auto e2 = LevelSet::level(u, 2, 0);
  CHECK(apply_power_bounds(e2, e2, u->height(5) + 2 * u->height(4) + 17).hi == 0);
  CHECK(apply_power_bounds(e2, e2, u->height(5)) == MeasureBound::point(Q("1/2") * e2.measure()));
  for (int j = 4; j <= 7; ++j) {
    auto scan = scan_window(e2, e2, j, 1, kDefaultDeadZoneSamples);
    CHECK(scan.dead_zone_zero);
    CHECK(scan.dead_zone.size() == static_cast<std::size_t>(kDefaultDeadZoneSamples + 2));
    CHECK(scan.window_hi == scan.dead_lo);
  }
  auto empty = LevelSet::empty(u, 2);
  auto scan = scan_window(empty, empty, 5, 7);
  CHECK(scan.dead_zone_zero);
  for (const auto& row : scan.window) CHECK(row.value.hi == 0);
}

TEST_CASE("exhaustive dead-zone scan is size-limited") {
  auto u = make_construction(family::utv1());
  auto e2 = LevelSet::level(u, 2, 0);
  auto scan = scan_window(e2, e2, 4, 1, 0, true);
  CHECK(scan.dead_zone.size() == 480 - 168 + 1);
  CHECK(scan.dead_zone_zero);
  auto toy = make_construction(family::toy());
  auto e1 = LevelSet::level(toy, 1, 0);
  CHECK(scan_window(e1, e1, 4, 1, 0, true).dead_zone.empty());
  CHECK_THROWS(scan_window(e2, e2, 8, 1, 0, true));
}

TEST_CASE("sample_range") {
  auto s = sample_range(10, 20, 3);
  CHECK(s.front() == 10);
  CHECK(s.back() == 20);
  CHECK(s.size() == 5);
  CHECK(sample_range(5, 5, 10).size() == 1);
  CHECK(sample_range(6, 5, 10).empty());
}

TEST_CASE("eq4 coefficients") {
  CHECK(eq4_coefficients(2, 2) == std::pair{Q("0"), Q("1/3")});
  CHECK(eq4_coefficients(2, 1) == std::pair{Q("1/3"), Q("1/3")});
  CHECK_THROWS(eq4_coefficients(2, 3));
  CHECK_THROWS(eq4_coefficients(1, 1));
}

TEST_CASE("eq4 on thm2(2)") {
  auto t = make_construction(family::thm2(2));
  auto e2 = LevelSet::level(t, 2, 0);
  auto stages = sigma_preimage(1, 9);
  REQUIRE(stages.size() >= 2);
  std::vector<int> top(stages.end() - 2, stages.end());
  for (int n : {1, 2}) {
    auto rep = verify_eq4(2, 1, n, e2, e2, top, Q("1/50") * e2.measure());
    CHECK(rep.verdict == Verdict::pass);
    CHECK(rep.deviation_non_increasing);
    for (const auto& row : rep.rows) CHECK(row.value.exact());
  }
  auto empty = LevelSet::empty(t, 2);
  auto rep = verify_eq4(2, 1, 2, empty, empty, top, 0);
  for (const auto& row : rep.rows) CHECK(row.deviation.worst == 0);
  CHECK_THROWS_WITH(verify_eq4(2, 1, 1, e2, e2, {}, 0), "σ-preimage empty");
  CHECK_THROWS(verify_eq4(2, 1, 1, e2, e2, {2}, 0));
  auto u = make_construction(family::utv1());
  auto ue2 = LevelSet::level(u, 2, 0);
  CHECK_THROWS(verify_eq4(2, 1, 1, ue2, ue2, {3}, 0));
}
