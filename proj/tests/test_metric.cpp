#include <doctest.h>

#include <random>

#include "kserver/error.hpp"
#include "kserver/metric.hpp"
#include "kserver/metric_io.hpp"
#include "oracles.hpp"

using namespace kserver;

namespace {

Rational q(const char* s) { return parse_rational(s); }

ErrorCode error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("parse_rational accepts integers and p/q, rejects the rest") {
  CHECK(parse_rational("3/2") == Rational(3, 2));
  CHECK(parse_rational("6/4") == Rational(3, 2));
  CHECK(parse_rational("-7") == Rational(-7));
  CHECK(parse_rational(" 5 ") == Rational(5));
  CHECK(to_string(parse_rational("6/4")) == "3/2");
  CHECK(to_string(Rational(2)) == "2");
  CHECK(error_of([] { parse_rational("1.5"); }) == ErrorCode::ParseError);
  CHECK(error_of([] { parse_rational("1/0"); }) == ErrorCode::ParseError);
  CHECK(error_of([] { parse_rational("1/-2"); }) == ErrorCode::ParseError);
  CHECK(error_of([] { parse_rational(""); }) == ErrorCode::ParseError);
}

TEST_CASE("validate_metric") {
  SUBCASE("uniform is valid with gamma 1") {
    const Metric m = validate_metric({{q("0"), q("1"), q("1")}, {q("1"), q("0"), q("1")}, {q("1"), q("1"), q("0")}});
    CHECK(m.size() == 3);
    CHECK(m.gamma() == 1);
  }
  SUBCASE("triangle violation") {
    CHECK(error_of([] {
            validate_metric({{q("0"), q("1"), q("3")}, {q("1"), q("0"), q("1")}, {q("3"), q("1"), q("0")}});
          }) == ErrorCode::TriangleViolation);
  }
  SUBCASE("halves give gamma 2") {
    const Metric m =
        validate_metric({{q("0"), q("1/2"), q("1/2")}, {q("1/2"), q("0"), q("1/2")}, {q("1/2"), q("1/2"), q("0")}});
    CHECK(m.gamma() == 2);
    CHECK(m.dist(0, 1) == Rational(1, 2));  // not applied yet
  }
  SUBCASE("error kinds") {
    CHECK(error_of([] { validate_metric({{q("0"), q("1")}, {q("2"), q("0")}}); }) == ErrorCode::AsymmetricDistance);
    CHECK(error_of([] { validate_metric({{q("0"), q("0")}, {q("0"), q("0")}}); }) == ErrorCode::ZeroOffDiagonal);
    CHECK(error_of([] { validate_metric({{q("0"), q("1")}, {q("1")}}); }) == ErrorCode::NonSquare);
    CHECK(error_of([] { validate_metric({{q("1"), q("1")}, {q("1"), q("0")}}); }) == ErrorCode::NonZeroDiagonal);
    CHECK(error_of([] { validate_metric({"a", "a"}, {{q("0"), q("1")}, {q("1"), q("0")}}); }) ==
          ErrorCode::InvalidPointName);
    CHECK(error_of([] { validate_metric({"a,b", "c"}, {{q("0"), q("1")}, {q("1"), q("0")}}); }) ==
          ErrorCode::InvalidPointName);
  }
}

TEST_CASE("normalize") {
  const Metric half = validate_metric(
      {{q("0"), q("1/2"), q("1/2")}, {q("1/2"), q("0"), q("1")}, {q("1/2"), q("1"), q("0")}});
  const Metric n1 = normalize(half);
  CHECK(n1.dist(0, 1) == 1);
  CHECK(n1.dist(0, 2) == 1);
  CHECK(n1.dist(1, 2) == 2);
  CHECK(n1.min_distance() == 1);
  CHECK(n1.is_normalized());

  const Metric tri = validate_metric({{q("0"), q("3"), q("4")}, {q("3"), q("0"), q("5")}, {q("4"), q("5"), q("0")}});
  const Metric n2 = normalize(tri);
  CHECK(n2.dist(0, 1) == 1);
  CHECK(n2.dist(0, 2) == Rational(4, 3));
  CHECK(n2.dist(1, 2) == Rational(5, 3));

  const Metric u = uniform_metric(3);
  CHECK(normalize(u).dist(0, 1) == 1);
  // idempotent
  CHECK(normalize(n2).dist(1, 2) == n2.dist(1, 2));
}

TEST_CASE("configurations enumerate lexicographically") {
  const Metric m3 = uniform_metric(3);
  CHECK(all_configurations(m3, 2) == std::vector<Configuration>{{0, 1}, {0, 2}, {1, 2}});
  CHECK(all_configurations(m3, 3) == std::vector<Configuration>{{0, 1, 2}});
  CHECK(all_configurations(uniform_metric(4), 2).size() == 6);
  CHECK(covering_configurations(m3, 2, 0) == std::vector<Configuration>{{0, 1}, {0, 2}});
  CHECK(covering_configurations(m3, 2, 2) == std::vector<Configuration>{{0, 2}, {1, 2}});
  CHECK(covering_configurations(m3, 3, 1) == std::vector<Configuration>{{0, 1, 2}});
  CHECK(error_of([&] { all_configurations(m3, 4); }) == ErrorCode::KExceedsN);
  CHECK(error_of([] { Configuration({1, 1}); }) == ErrorCode::InvalidConfiguration);
  CHECK(Configuration({2, 0}) == Configuration({0, 2}));
}

TEST_CASE("config_dist and seq_dist") {
  const Metric u = uniform_metric(3);
  const Metric line = line_metric({Rational(0), Rational(1), Rational(3)});
  CHECK(config_dist(u, {0, 1}, {0, 1}) == 0);
  CHECK(config_dist(u, {0, 1}, {0, 2}) == 1);
  // matchings: {p0->p1, p2->p2} = 1, {p0->p2, p2->p1} = 3 + 2
  CHECK(config_dist(line, {0, 2}, {1, 2}) == oracle::matching_dist(line, {0, 2}, {1, 2}));
  CHECK(config_dist(line, {0, 2}, {1, 2}) == 1);

  const std::vector<Configuration> none;
  CHECK(seq_dist(u, {0, 1}, none) == 0);
  const std::vector<Configuration> stay{{0, 1}};
  CHECK(seq_dist(u, {0, 1}, stay) == 0);
  const std::vector<Configuration> two{{0, 2}, {1, 2}};
  CHECK(seq_dist(u, {0, 1}, two) == config_dist(u, {0, 1}, {0, 2}) + config_dist(u, {0, 2}, {1, 2}));
  CHECK(seq_dist(u, {0, 1}, two) == 2);
}

TEST_CASE("config_dist is a metric on configurations (exhaustive, n <= 5)") {
  std::mt19937 rng(7);
  for (std::size_t n = 2; n <= 5; ++n) {
    const Metric m = oracle::random_metric(rng, n);
    for (int k = 1; k <= static_cast<int>(n); ++k) {
      const auto all = all_configurations(m, k);
      const Rational cap = k * m.max_distance();
      for (const auto& a : all) {
        for (const auto& b : all) {
          const Rational dab = config_dist(m, a, b);
          CHECK(dab == config_dist(m, b, a));
          CHECK((dab == 0) == (a == b));
          CHECK(dab <= cap);
          CHECK(dab == oracle::matching_dist(m, oracle::to_vec(a), oracle::to_vec(b)));
          for (const auto& c : all) CHECK(config_dist(m, a, c) <= dab + config_dist(m, b, c));
        }
      }
    }
  }
}

TEST_CASE("scaling distances scales config_dist exactly") {
  std::mt19937 rng(11);
  const Metric m = oracle::random_metric(rng, 4);
  const Rational lambda(7, 3);
  std::vector<std::vector<Rational>> scaled(4, std::vector<Rational>(4));
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) scaled[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = lambda * m.dist(i, j);
  }
  const Metric ms = validate_metric(scaled);
  const auto all = all_configurations(m, 2);
  for (const auto& a : all) {
    for (const auto& b : all) CHECK(config_dist(ms, a, b) == lambda * config_dist(m, a, b));
  }
  const std::vector<Configuration> path{{1, 2}, {2, 3}, {0, 3}};
  CHECK(seq_dist(ms, {0, 1}, path) == lambda * seq_dist(m, {0, 1}, path));
}

TEST_CASE("Hungarian and exhaustive assignment agree") {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> num(0, 40);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t k = 1 + static_cast<std::size_t>(trial % 6);
    std::vector<std::vector<Rational>> cost(k, std::vector<Rational>(k));
    for (auto& row : cost) {
      for (auto& c : row) {
        c = Rational(num(rng), 1 + trial % 5);
        c.canonicalize();
      }
    }
    CHECK(min_assignment_hungarian(cost) == min_assignment_exhaustive(cost));
  }
}

TEST_CASE("ConfigurationSpace tables") {
  const ConfigurationSpace space(line_metric({Rational(0), Rational(1), Rational(3)}), 2);
  CHECK(space.size() == 3);
  CHECK(space.index_of({1, 2}) == 2);
  CHECK(space.dist(space.index_of({0, 1}), space.index_of({0, 2})) == 2);
  CHECK(space.covering(1).size() == 2);
  CHECK(error_of([&] { space.index_of({0, 1, 2}); }) == ErrorCode::InvalidConfiguration);
  CHECK(error_of([&] { space.index_of({0, 7}); }) == ErrorCode::InvalidConfiguration);
}

TEST_CASE("metric JSON input") {
  const Metric m = parse_metric_json(R"({"points": ["a","b","c"], "distances": [["0","1","1"],["1","0","1"],[1,1,0]]})");
  CHECK(m.index_of("c") == 2);
  CHECK(m.dist(2, 0) == 1);
  CHECK(parse_metric_json(metric_to_json(m)).points() == m.points());
  CHECK(error_of([] { parse_metric_json("{not json"); }) == ErrorCode::ParseError);
  CHECK(error_of([] { parse_metric_json(R"({"distances": [[0, 1.5], [1.5, 0]]})"); }) == ErrorCode::ParseError);
  CHECK(error_of([] { parse_metric_json(R"({"points":["a","b"],"distances": [[0,1],[2,0]]})"); }) ==
        ErrorCode::AsymmetricDistance);
}
