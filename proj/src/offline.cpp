#include "kserver/offline.hpp"

#include <algorithm>
#include <optional>

#include "kserver/error.hpp"

namespace kserver {

Rational WorkFunction::min_value() const { return *std::min_element(values_.begin(), values_.end()); }

WorkFunction wf_init(std::shared_ptr<const ConfigurationSpace> space, const Configuration& c0) {
  const ConfigIndex start = space->index_of(c0);
  std::vector<Rational> values(space->size());
  for (std::size_t c = 0; c < values.size(); ++c) values[c] = space->dist(start, static_cast<ConfigIndex>(c));
  return WorkFunction(std::move(space), std::move(values), 0);
}

WorkFunction wf_update(const WorkFunction& wf, PointIndex r) {
  const auto& space = wf.space();
  space.check_request(r);
  const auto covering = space.covering(r);
  std::vector<Rational> next(space.size());
  for (std::size_t c = 0; c < next.size(); ++c) {
    std::optional<Rational> best;
    for (ConfigIndex via : covering) {
      Rational v = wf[via] + space.dist(via, static_cast<ConfigIndex>(c));
      if (!best || v < *best) best = std::move(v);
    }
    next[c] = std::move(*best);
  }
  return WorkFunction(wf.space_ptr(), std::move(next), wf.prefix_len() + 1);
}

Rational opt_cost(std::shared_ptr<const ConfigurationSpace> space, const Configuration& c0,
                  std::span<const PointIndex> requests) {
  WorkFunction wf = wf_init(std::move(space), c0);
  for (PointIndex r : requests) wf = wf_update(wf, r);
  return wf.min_value();
}

Rational opt_cost(const Metric& metric, const Configuration& c0, std::span<const PointIndex> requests) {
  return opt_cost(std::make_shared<const ConfigurationSpace>(metric, static_cast<int>(c0.size())), c0, requests);
}

std::vector<Configuration> opt_answers(std::shared_ptr<const ConfigurationSpace> space, const Configuration& c0,
                                       std::span<const PointIndex> requests) {
  if (requests.empty()) return {};
  const auto& sp = *space;
  // history[t] = w_t; answer t (1-based) is a covering C with w_{t-1}(C) + link.
  std::vector<WorkFunction> history{wf_init(space, c0)};
  for (PointIndex r : requests) history.push_back(wf_update(history.back(), r));

  const std::size_t horizon = requests.size();
  std::vector<ConfigIndex> answers(horizon);
  // Last answer: cheapest covering configuration of the final request.
  {
    const auto& prev = history[horizon - 1];
    std::optional<ConfigIndex> best;
    for (ConfigIndex c : sp.covering(requests[horizon - 1])) {
      if (!best || prev[c] < prev[*best]) best = c;
    }
    answers[horizon - 1] = *best;
  }
  for (std::size_t t = horizon - 1; t >= 1; --t) {
    // Answer t (0-based t-1) must reach answers[t] at the recorded cost.
    const ConfigIndex next = answers[t];
    const Rational& target = history[t][next];
    const auto& prev = history[t - 1];
    std::optional<ConfigIndex> chosen;
    for (ConfigIndex c : sp.covering(requests[t - 1])) {
      if (prev[c] + sp.dist(c, next) == target) {
        chosen = c;
        break;
      }
    }
    answers[t - 1] = *chosen;
  }

  std::vector<Configuration> out;
  out.reserve(horizon);
  for (ConfigIndex c : answers) out.push_back(sp.at(c));
  return out;
}

std::vector<Configuration> opt_answers(const Metric& metric, const Configuration& c0,
                                       std::span<const PointIndex> requests) {
  return opt_answers(std::make_shared<const ConfigurationSpace>(metric, static_cast<int>(c0.size())), c0, requests);
}

}  // namespace kserver
