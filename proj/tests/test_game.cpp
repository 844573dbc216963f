#include <doctest.h>

#include "kserver/error.hpp"
#include "kserver/game.hpp"
#include "oracles.hpp"

using namespace kserver;

namespace {

std::shared_ptr<const ConfigurationSpace> space_of(Metric m, int k) {
  return std::make_shared<const ConfigurationSpace>(std::move(m), k);
}

Metric line013() { return line_metric({Rational(0), Rational(1), Rational(3)}); }

}  // namespace

TEST_CASE("feasible_det examples") {
  const auto u = space_of(uniform_metric(3), 2);
  CHECK(feasible_det(u, {0, 1}, 0, Rational(0)).feasible);
  CHECK(feasible_det(u, {0, 1}, 2, Rational(2)).feasible);
  CHECK_FALSE(feasible_det(u, {0, 1}, 2, Rational(2) - Rational(1, 1024)).feasible);

  const auto k1 = space_of(line013(), 1);
  for (int T = 0; T <= 4; ++T) CHECK(feasible_det(k1, {0}, T, Rational(1)).feasible);
}

TEST_CASE("feasible_det witness strategies keep their promise") {
  const auto u = space_of(uniform_metric(3), 2);
  const DetFeasibility f = feasible_det(u, {0, 1}, 3, Rational(2));
  REQUIRE(f.feasible);
  const StrategyTableAlgorithm alg(u, {0, 1}, std::make_shared<const StrategyTable>(*f.strategy));
  CHECK(worst_adversary(u, {0, 1}, alg, 3).ratio <= ExtendedRatio(Rational(2)));
}

TEST_CASE("feasible_det is monotone in c") {
  const auto line = space_of(line013(), 2);
  const Rational value = opt_det_ratio(line, {0, 1}, 3).value;
  for (const Rational& c : std::vector<Rational>{value - Rational(1, 3), value - Rational(1, 1000), value,
                                                  value + Rational(1, 1000), value + 1}) {
    CHECK(feasible_det(line, {0, 1}, 3, c).feasible == (c >= value));
  }
}

TEST_CASE("opt_det_ratio small values") {
  const auto u = space_of(uniform_metric(3), 2);
  CHECK(opt_det_ratio(u, {0, 1}, 0).value == 1);
  CHECK(opt_det_ratio(u, {0, 1}, 1).value == 1);
  CHECK(opt_det_ratio(u, {0, 1}, 2).value == 2);
  CHECK(opt_det_ratio(space_of(line013(), 1), {0}, 3).value == 1);

  try {
    opt_det_ratio(space_of(uniform_metric(3), 3), {0, 1, 2}, 2);
    FAIL("expected DegenerateKEqualsN");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateKEqualsN);
  }
}

TEST_CASE("minimax matches explicit strategy enumeration") {
  // n = 3, k = 2, T <= 2 on two metrics plus a non-uniform random metric
  std::mt19937 rng(9);
  const std::vector<Metric> metrics{uniform_metric(3), line013(), oracle::random_metric(rng, 3)};
  for (const auto& m : metrics) {
    const auto sp = space_of(m, 2);
    for (int T = 0; T <= 2; ++T) {
      const auto brute = oracle::det_value_by_strategy_enumeration(m, {0, 1}, T);
      REQUIRE(brute.has_value());
      CHECK(opt_det_ratio(sp, {0, 1}, T).value == *brute);
    }
  }
  // n = 4, k = 2, T = 1 and n = 4, k = 3, T = 1
  const Metric m4 = oracle::random_metric(rng, 4);
  CHECK(opt_det_ratio(space_of(m4, 2), {0, 1}, 1).value ==
        *oracle::det_value_by_strategy_enumeration(m4, {0, 1}, 1));
  CHECK(opt_det_ratio(space_of(m4, 3), {0, 1, 2}, 1).value ==
        *oracle::det_value_by_strategy_enumeration(m4, {0, 1, 2}, 1));
}

TEST_CASE("opt_det_ratio is monotone in T, bounded by T*B, and attained by its witness") {
  for (const Metric& m : {uniform_metric(3), line013(), line_metric({Rational(0), Rational(1), Rational(2), Rational(4)})}) {
    const auto sp = space_of(m, 2);
    Rational previous = 1;
    for (int T = 1; T <= 4; ++T) {
      const RatioResult r = opt_det_ratio(sp, {0, 1}, T);
      CHECK(r.value >= previous);
      CHECK(r.value >= 1);
      CHECK(r.value <= ratio_upper_bound(*sp, T));
      previous = r.value;

      const StrategyTableAlgorithm witness(sp, {0, 1}, std::make_shared<const StrategyTable>(r.witness_strategy));
      const AdversaryResult adv = worst_adversary(sp, {0, 1}, witness, T);
      CHECK(adv.ratio == ExtendedRatio(r.value));
      CHECK(adv.requests == r.witness_adversary);

      // witness adversary really achieves the value
      const SimulationResult sim = [&] {
        auto a = witness.clone();
        return simulate(*a, {0, 1}, r.witness_adversary);
      }();
      CHECK(ExtendedRatio::of(sim.total_cost, oracle::opt_by_enumeration(m, {0, 1}, r.witness_adversary)) ==
            ExtendedRatio(r.value));
    }
  }
}

TEST_CASE("worst_adversary") {
  const auto u = space_of(uniform_metric(3), 2);
  const GreedyAlgorithm greedy(u, {0, 1});
  const AdversaryResult none = worst_adversary(u, {0, 1}, greedy, 0);
  CHECK(none.requests.empty());
  CHECK(none.ratio == ExtendedRatio(Rational(1)));

  const AdversaryResult two = worst_adversary(u, {0, 1}, greedy, 2);
  CHECK(two.ratio == ExtendedRatio(Rational(2)));
  CHECK(two.requests == RequestSequence{2, 0});

  // brute force over sequences of length <= 3
  Rational worst = 1;
  for (int t = 1; t <= 3; ++t) {
    for (const auto& rho : oracle::sequences(3, t)) {
      auto g = greedy.clone();
      const Rational cost = simulate(*g, {0, 1}, rho).total_cost;
      const Rational opt = oracle::opt_by_enumeration(u->metric(), {0, 1}, rho);
      const auto r = oracle::ratio(cost, opt);
      REQUIRE(r.has_value());  // greedy never pays while opt is zero
      worst = std::max(worst, *r);
    }
  }
  CHECK(worst_adversary(u, {0, 1}, greedy, 3).ratio == ExtendedRatio(worst));
}

TEST_CASE("an algorithm that pays on a zero-opt sequence has infinite ratio") {
  const auto u = space_of(uniform_metric(3), 2);
  StrategyTable restless{{{0}, Configuration{0, 2}}};
  const StrategyTableAlgorithm alg(u, {0, 1}, std::make_shared<const StrategyTable>(restless));
  const AdversaryResult r = worst_adversary(u, {0, 1}, alg, 1);
  CHECK(r.ratio.is_infinite());
  CHECK(r.requests == RequestSequence{0});
}
