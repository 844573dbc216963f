#include "kserver/algorithms.hpp"

#include <algorithm>

#include "kserver/error.hpp"

namespace kserver {

namespace {

Configuration replace_point(const Configuration& c, PointIndex from, PointIndex to) {
  std::vector<PointIndex> pts(c.points().begin(), c.points().end());
  std::replace(pts.begin(), pts.end(), from, to);
  return Configuration(std::move(pts));
}

StepResult greedy_move(const ConfigurationSpace& space, const Configuration& current, PointIndex r) {
  space.check_request(r);
  if (current.contains(r)) return {current, Rational(0)};
  const Metric& metric = space.metric();
  std::optional<PointIndex> origin;
  for (PointIndex p : current.points()) {
    if (!origin || metric.dist(p, r) < metric.dist(*origin, r)) origin = p;
  }
  return {replace_point(current, *origin, r), metric.dist(*origin, r)};
}

}  // namespace

GreedyAlgorithm::GreedyAlgorithm(std::shared_ptr<const ConfigurationSpace> space, const Configuration& initial)
    : space_(std::move(space)), current_(space_->at(space_->index_of(initial))) {}

void GreedyAlgorithm::reset(const Configuration& initial) { current_ = space_->at(space_->index_of(initial)); }

StepResult GreedyAlgorithm::step(PointIndex r) {
  StepResult out = greedy_move(*space_, current_, r);
  current_ = out.config;
  return out;
}

WorkFunctionAlgorithm::WorkFunctionAlgorithm(std::shared_ptr<const ConfigurationSpace> space,
                                             const Configuration& initial)
    : space_(std::move(space)), current_(initial), wf_(wf_init(space_, initial)) {}

void WorkFunctionAlgorithm::reset(const Configuration& initial) {
  current_ = initial;
  wf_ = wf_init(space_, initial);
}

StepResult WorkFunctionAlgorithm::step(PointIndex r) {
  wf_ = wf_update(wf_, r);
  const ConfigIndex from = space_->index_of(current_);
  if (current_.contains(r)) return {current_, Rational(0)};

  std::vector<ConfigIndex> candidates;
  for (PointIndex p : current_.points()) candidates.push_back(space_->index_of(replace_point(current_, p, r)));
  std::sort(candidates.begin(), candidates.end());

  std::optional<ConfigIndex> best;
  Rational best_score;
  for (ConfigIndex c : candidates) {
    Rational score = wf_[c] + space_->dist(from, c);
    if (!best || score < best_score) {
      best = c;
      best_score = std::move(score);
    }
  }
  current_ = space_->at(*best);
  return {current_, space_->dist(from, *best)};
}

StrategyTableAlgorithm::StrategyTableAlgorithm(std::shared_ptr<const ConfigurationSpace> space,
                                               const Configuration& initial, std::shared_ptr<const Table> table)
    : space_(std::move(space)), table_(std::move(table)), current_(initial) {}

void StrategyTableAlgorithm::reset(const Configuration& initial) {
  current_ = initial;
  prefix_.clear();
}

StepResult StrategyTableAlgorithm::step(PointIndex r) {
  space_->check_request(r);
  prefix_.push_back(r);
  const auto it = table_->find(prefix_);
  StepResult out;
  if (it != table_->end()) {
    if (!it->second.contains(r)) {
      throw Error(ErrorCode::InvalidConfiguration, "strategy table answer does not cover the request");
    }
    out = {it->second, config_dist(space_->metric(), current_, it->second)};
  } else {
    out = greedy_move(*space_, current_, r);
  }
  current_ = out.config;
  return out;
}

ResettingAlgorithm::ResettingAlgorithm(std::unique_ptr<OnlineAlgorithm> inner, long long period)
    : inner_(std::move(inner)), period_(period) {
  if (period_ < 1) throw Error(ErrorCode::InvalidArgument, "reset period D must be at least 1");
}

ResettingAlgorithm::ResettingAlgorithm(const ResettingAlgorithm& other)
    : inner_(other.inner_->clone()),
      period_(other.period_),
      paid_(other.paid_),
      steps_(other.steps_),
      reset_steps_(other.reset_steps_) {}

void ResettingAlgorithm::reset(const Configuration& initial) {
  inner_->reset(initial);
  paid_ = 0;
  steps_ = 0;
  reset_steps_.clear();
}

StepResult ResettingAlgorithm::step(PointIndex r) {
  StepResult out = inner_->step(r);
  ++steps_;
  if (out.cost != 0 && ++paid_ % period_ == 0) {
    inner_->reset(inner_->current());
    reset_steps_.push_back(steps_);
  }
  return out;
}

std::unique_ptr<OnlineAlgorithm> wrap_resetting(std::unique_ptr<OnlineAlgorithm> inner, long long period) {
  return std::make_unique<ResettingAlgorithm>(std::move(inner), period);
}

SimulationResult simulate(OnlineAlgorithm& algorithm, const Configuration& c0, std::span<const PointIndex> requests) {
  algorithm.reset(c0);
  SimulationResult out;
  out.total_cost = 0;
  for (PointIndex r : requests) {
    StepResult s = algorithm.step(r);
    out.total_cost += s.cost;
    out.step_costs.push_back(std::move(s.cost));
    out.answers.push_back(std::move(s.config));
  }
  return out;
}

Rational BoundParameters::xi_at(int i) const {
  if (i < 2) throw Error(ErrorCode::InvalidArgument, "xi is defined from index 2");
  Rational out = xi.front();
  for (int j = 3; j <= i; ++j) out *= xi.front();
  return out;
}

BoundParameters compute_bounds(const Metric& metric, int k, Rational c, Rational alpha, Rational epsilon) {
  c.canonicalize();
  alpha.canonicalize();
  epsilon.canonicalize();
  if (epsilon <= 0) throw Error(ErrorCode::NonPositiveEpsilon, "epsilon must be positive");
  if (c < 1) throw Error(ErrorCode::InvalidArgument, "c must be at least 1");
  if (alpha < 0) throw Error(ErrorCode::InvalidArgument, "alpha must be nonnegative");
  if (!metric.is_normalized()) throw Error(ErrorCode::InvalidArgument, "metric must be normalized");
  if (k < 1 || static_cast<std::size_t>(k) > metric.size()) {
    throw Error(ErrorCode::KExceedsN, "k must lie in [1, n]");
  }

  BoundParameters b;
  b.c = c;
  b.alpha = alpha;
  b.epsilon = epsilon;
  b.B = k * metric.max_distance();
  b.opt_threshold = 2 * b.B / epsilon;
  b.phi = c * b.opt_threshold + alpha;
  b.D = ceil(Rational(b.phi * b.opt_threshold));
  const Rational xi2 = 2 + 2 * b.B * (c * b.opt_threshold + alpha) / epsilon;
  b.xi.push_back(xi2);
  for (int i = 3; i <= k; ++i) b.xi.push_back(b.xi.back() * xi2);
  return b;
}

}  // namespace kserver
