#pragma once

#include <memory>
#include <optional>

#include "kserver/algorithms.hpp"
#include "kserver/metric.hpp"

namespace kserver {

using StrategyTable = StrategyTableAlgorithm::Table;

/// Optimal strict deterministic ratio over horizon T with its witnesses.
struct RatioResult {
  Rational value;
  /// Answer for every request prefix of length 1..T.
  StrategyTable witness_strategy;
  /// A request sequence on which witness_strategy attains `value`.
  RequestSequence witness_adversary;
  std::size_t nodes_evaluated = 0;
};

struct DetFeasibility {
  bool feasible = false;
  std::optional<StrategyTable> strategy;
};

/// Is there a deterministic strategy whose cost is at most c * opt on every
/// request sequence of length <= T? Exact alternating search; the
/// algorithm may answer with any covering configuration.
DetFeasibility feasible_det(std::shared_ptr<const ConfigurationSpace> space, const Configuration& c0, int horizon,
                            const Rational& c);

/// Exact game value min_strategy max_sequence cost/opt with 0/0 = 1.
/// Throws DegenerateKEqualsN when k == n.
RatioResult opt_det_ratio(std::shared_ptr<const ConfigurationSpace> space, const Configuration& c0, int horizon);

struct AdversaryResult {
  RequestSequence requests;
  ExtendedRatio ratio;
};

/// Exhaustive search over all sequences of length <= T for the one that
/// maximises simulated cost / opt. The first maximiser in depth-first order
/// (shorter prefixes before their extensions, smaller points first) wins.
AdversaryResult worst_adversary(std::shared_ptr<const ConfigurationSpace> space, const Configuration& c0,
                                const OnlineAlgorithm& algorithm, int horizon);

/// Trivial upper bound T * k * max distance on the normalized metric; at
/// least 1.
Rational ratio_upper_bound(const ConfigurationSpace& space, int horizon);

}  // namespace kserver
