#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kserver/metric.hpp"
#include "kserver/offline.hpp"

namespace kserver {

struct StepResult {
  Configuration config;
  Rational cost;
};

/// Deterministic online k-server algorithm. Each instance owns its state and
/// is stepped sequentially; clone() snapshots the state for tree searches.
class OnlineAlgorithm {
 public:
  virtual ~OnlineAlgorithm() = default;

  /// Forget all history and treat `initial` as the start configuration.
  virtual void reset(const Configuration& initial) = 0;
  /// Serve request r. After the call current() contains r.
  virtual StepResult step(PointIndex r) = 0;
  virtual const Configuration& current() const = 0;
  virtual std::unique_ptr<OnlineAlgorithm> clone() const = 0;
  virtual std::string name() const = 0;
};

/// Lazy greedy: stays if covered, else moves the server closest to r
/// (ties go to the lowest origin point index).
class GreedyAlgorithm final : public OnlineAlgorithm {
 public:
  GreedyAlgorithm(std::shared_ptr<const ConfigurationSpace> space, const Configuration& initial);

  void reset(const Configuration& initial) override;
  StepResult step(PointIndex r) override;
  const Configuration& current() const override { return current_; }
  std::unique_ptr<OnlineAlgorithm> clone() const override { return std::make_unique<GreedyAlgorithm>(*this); }
  std::string name() const override { return "greedy"; }

 private:
  std::shared_ptr<const ConfigurationSpace> space_;
  Configuration current_;
};

/// Work-function algorithm restricted to lazy moves: after updating w with r
/// it moves to the lazy candidate C' minimising w(C') + dist(current, C').
class WorkFunctionAlgorithm final : public OnlineAlgorithm {
 public:
  WorkFunctionAlgorithm(std::shared_ptr<const ConfigurationSpace> space, const Configuration& initial);

  void reset(const Configuration& initial) override;
  StepResult step(PointIndex r) override;
  const Configuration& current() const override { return current_; }
  std::unique_ptr<OnlineAlgorithm> clone() const override { return std::make_unique<WorkFunctionAlgorithm>(*this); }
  std::string name() const override { return "wfa"; }

  const WorkFunction& work_function() const noexcept { return wf_; }

 private:
  std::shared_ptr<const ConfigurationSpace> space_;
  Configuration current_;
  WorkFunction wf_;
};

/// Deterministic strategy given as a table from request prefix to answer.
/// Prefixes missing from the table fall back to staying when covered and to
/// the greedy move otherwise.
class StrategyTableAlgorithm final : public OnlineAlgorithm {
 public:
  using Table = std::map<RequestSequence, Configuration>;

  StrategyTableAlgorithm(std::shared_ptr<const ConfigurationSpace> space, const Configuration& initial,
                         std::shared_ptr<const Table> table);

  void reset(const Configuration& initial) override;
  StepResult step(PointIndex r) override;
  const Configuration& current() const override { return current_; }
  std::unique_ptr<OnlineAlgorithm> clone() const override { return std::make_unique<StrategyTableAlgorithm>(*this); }
  std::string name() const override { return "strategy-table"; }

 private:
  std::shared_ptr<const ConfigurationSpace> space_;
  std::shared_ptr<const Table> table_;
  Configuration current_;
  RequestSequence prefix_;
};

/// D-resetting wrapper: counts paid (nonzero-cost) answers and after every
/// D-th one resets the inner algorithm with the current configuration as its
/// initial configuration. Zero-cost answers are not counted.
class ResettingAlgorithm final : public OnlineAlgorithm {
 public:
  ResettingAlgorithm(std::unique_ptr<OnlineAlgorithm> inner, long long period);
  ResettingAlgorithm(const ResettingAlgorithm& other);

  void reset(const Configuration& initial) override;
  StepResult step(PointIndex r) override;
  const Configuration& current() const override { return inner_->current(); }
  std::unique_ptr<OnlineAlgorithm> clone() const override { return std::make_unique<ResettingAlgorithm>(*this); }
  std::string name() const override { return "resetting(" + inner_->name() + ")"; }

  long long period() const noexcept { return period_; }
  /// 1-based step numbers after which a reset happened.
  const std::vector<long long>& reset_steps() const noexcept { return reset_steps_; }

 private:
  std::unique_ptr<OnlineAlgorithm> inner_;
  long long period_;
  long long paid_ = 0;
  long long steps_ = 0;
  std::vector<long long> reset_steps_;
};

std::unique_ptr<OnlineAlgorithm> wrap_resetting(std::unique_ptr<OnlineAlgorithm> inner, long long period);

struct SimulationResult {
  Rational total_cost;
  std::vector<Rational> step_costs;
  std::vector<Configuration> answers;
};

/// Resets the algorithm to c0 and folds it over the requests.
SimulationResult simulate(OnlineAlgorithm& algorithm, const Configuration& c0, std::span<const PointIndex> requests);

/// Constants from the finite-horizon reduction for a normalized metric.
struct BoundParameters {
  Rational c;
  Rational alpha;
  Rational epsilon;
  Rational B;              // k * max distance
  Rational opt_threshold;  // 2B / epsilon
  Rational phi;            // c * opt_threshold + alpha
  mpz_class D;             // ceil(phi * opt_threshold)
  std::vector<Rational> xi;  // xi_2 .. xi_max(k,2)

  /// xi_i for any i >= 2, extending the recursion xi_{i+1} = xi_i * xi_2.
  Rational xi_at(int i) const;
};

/// Throws NonPositiveEpsilon for epsilon <= 0 and InvalidArgument when
/// c < 1, alpha < 0 or the metric is not normalized.
BoundParameters compute_bounds(const Metric& metric, int k, Rational c, Rational alpha, Rational epsilon);

}  // namespace kserver
