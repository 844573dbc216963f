#include "kserver/game.hpp"

#include <unordered_map>

#include "kserver/error.hpp"
#include "kserver/offline.hpp"

namespace kserver {

namespace {

struct NodeKey {
  ConfigIndex config;
  int depth;
  Rational alg_cost;
  std::vector<Rational> wf;

  bool operator==(const NodeKey&) const = default;
};

struct NodeKeyHash {
  std::size_t operator()(const NodeKey& key) const noexcept {
    RationalHash h;
    std::size_t seed = static_cast<std::size_t>(key.config) * 1315423911u + static_cast<std::size_t>(key.depth);
    auto mix = [&seed](std::size_t v) { seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2); };
    mix(h(key.alg_cost));
    for (const auto& v : key.wf) mix(h(v));
    return seed;
  }
};

struct Node {
  ConfigIndex config;
  Rational alg_cost;
  WorkFunction wf;

  NodeKey key() const { return {config, wf.prefix_len(), alg_cost, wf.values()}; }
  Node child(const ConfigurationSpace& space, ConfigIndex answer, const WorkFunction& next_wf) const {
    return {answer, alg_cost + space.dist(config, answer), next_wf};
  }
};

/// Value search with the ratio tracked at every depth (the adversary may stop).
class ValueSearch {
 public:
  ValueSearch(const ConfigurationSpace& space, int horizon) : space_(space), horizon_(horizon) {}

  ExtendedRatio value(const Node& node) {
    NodeKey key = node.key();
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    ExtendedRatio best = ExtendedRatio::of(node.alg_cost, node.wf.min_value());
    if (node.wf.prefix_len() < horizon_ && !best.is_infinite()) {
      for (PointIndex r = 0; r < static_cast<PointIndex>(space_.num_points()); ++r) {
        const WorkFunction next_wf = wf_update(node.wf, r);
        std::optional<ExtendedRatio> reply;
        for (ConfigIndex answer : space_.covering(r)) {
          ExtendedRatio v = value(node.child(space_, answer, next_wf));
          if (!reply || v < *reply) reply = std::move(v);
        }
        if (*reply > best) best = std::move(*reply);
      }
    }
    memo_.emplace(std::move(key), best);
    return best;
  }

  /// Records the minimising answer for every prefix below `node`.
  void extract(const Node& node, RequestSequence& prefix, StrategyTable& table) {
    if (node.wf.prefix_len() >= horizon_) return;
    for (PointIndex r = 0; r < static_cast<PointIndex>(space_.num_points()); ++r) {
      const WorkFunction next_wf = wf_update(node.wf, r);
      std::optional<ExtendedRatio> reply;
      std::optional<Node> chosen;
      for (ConfigIndex answer : space_.covering(r)) {
        Node child = node.child(space_, answer, next_wf);
        ExtendedRatio v = value(child);
        if (!reply || v < *reply) {
          reply = std::move(v);
          chosen = std::move(child);
        }
      }
      prefix.push_back(r);
      table[prefix] = space_.at(chosen->config);
      extract(*chosen, prefix, table);
      prefix.pop_back();
    }
  }

  std::size_t memo_size() const noexcept { return memo_.size(); }

 private:
  const ConfigurationSpace& space_;
  int horizon_;
  std::unordered_map<NodeKey, ExtendedRatio, NodeKeyHash> memo_;
};

/// Boolean version: can the algorithm keep cost <= c * opt at every depth?
class FeasibilitySearch {
 public:
  FeasibilitySearch(const ConfigurationSpace& space, int horizon, Rational c)
      : space_(space), horizon_(horizon), c_(std::move(c)) {}

  bool feasible(const Node& node) {
    NodeKey key = node.key();
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    bool ok = node.alg_cost <= c_ * node.wf.min_value();
    if (ok && node.wf.prefix_len() < horizon_) {
      for (PointIndex r = 0; ok && r < static_cast<PointIndex>(space_.num_points()); ++r) {
        const WorkFunction next_wf = wf_update(node.wf, r);
        bool any = false;
        for (ConfigIndex answer : space_.covering(r)) {
          if (feasible(node.child(space_, answer, next_wf))) {
            any = true;
            break;
          }
        }
        ok = any;
      }
    }
    memo_.emplace(std::move(key), ok);
    return ok;
  }

  void extract(const Node& node, RequestSequence& prefix, StrategyTable& table) {
    if (node.wf.prefix_len() >= horizon_) return;
    for (PointIndex r = 0; r < static_cast<PointIndex>(space_.num_points()); ++r) {
      const WorkFunction next_wf = wf_update(node.wf, r);
      for (ConfigIndex answer : space_.covering(r)) {
        Node child = node.child(space_, answer, next_wf);
        if (feasible(child)) {
          prefix.push_back(r);
          table[prefix] = space_.at(answer);
          extract(child, prefix, table);
          prefix.pop_back();
          break;
        }
      }
    }
  }

 private:
  const ConfigurationSpace& space_;
  int horizon_;
  Rational c_;
  std::unordered_map<NodeKey, bool, NodeKeyHash> memo_;
};

void check_horizon(int horizon) {
  if (horizon < 0) throw Error(ErrorCode::InvalidArgument, "horizon must be nonnegative");
}

}  // namespace

DetFeasibility feasible_det(std::shared_ptr<const ConfigurationSpace> space, const Configuration& c0, int horizon,
                            const Rational& raw_c) {
  Rational c = raw_c;
  c.canonicalize();
  check_horizon(horizon);
  if (c < 0) throw Error(ErrorCode::InvalidArgument, "c must be nonnegative");
  const Node root{space->index_of(c0), Rational(0), wf_init(space, c0)};
  FeasibilitySearch search(*space, horizon, c);
  DetFeasibility out;
  out.feasible = search.feasible(root);
  if (out.feasible) {
    StrategyTable table;
    RequestSequence prefix;
    search.extract(root, prefix, table);
    out.strategy = std::move(table);
  }
  return out;
}

RatioResult opt_det_ratio(std::shared_ptr<const ConfigurationSpace> space, const Configuration& c0, int horizon) {
  check_horizon(horizon);
  if (static_cast<std::size_t>(space->k()) >= space->num_points()) {
    throw Error(ErrorCode::DegenerateKEqualsN, "k = n: every request is free and the ratio is undefined (reported as 1)");
  }
  const Node root{space->index_of(c0), Rational(0), wf_init(space, c0)};
  ValueSearch search(*space, horizon);
  const ExtendedRatio value = search.value(root);

  RatioResult out;
  // Staying lazy-greedy always has finite ratio for k < n, so the optimum is finite.
  out.value = value.value();
  RequestSequence prefix;
  search.extract(root, prefix, out.witness_strategy);
  out.nodes_evaluated = search.memo_size();

  const StrategyTableAlgorithm witness(space, c0, std::make_shared<const StrategyTable>(out.witness_strategy));
  out.witness_adversary = worst_adversary(space, c0, witness, horizon).requests;
  return out;
}

namespace {

void adversary_dfs(const ConfigurationSpace& space, const OnlineAlgorithm& algorithm, const WorkFunction& wf,
                   const Rational& alg_cost, int horizon, RequestSequence& prefix, AdversaryResult& best) {
  const ExtendedRatio here = ExtendedRatio::of(alg_cost, wf.min_value());
  if (here > best.ratio) {
    best.ratio = here;
    best.requests = prefix;
  }
  if (wf.prefix_len() >= horizon) return;
  for (PointIndex r = 0; r < static_cast<PointIndex>(space.num_points()); ++r) {
    auto next = algorithm.clone();
    const StepResult step = next->step(r);
    prefix.push_back(r);
    adversary_dfs(space, *next, wf_update(wf, r), alg_cost + step.cost, horizon, prefix, best);
    prefix.pop_back();
  }
}

}  // namespace

AdversaryResult worst_adversary(std::shared_ptr<const ConfigurationSpace> space, const Configuration& c0,
                                const OnlineAlgorithm& algorithm, int horizon) {
  check_horizon(horizon);
  auto start = algorithm.clone();
  start->reset(c0);
  AdversaryResult best{{}, ExtendedRatio(Rational(1))};
  RequestSequence prefix;
  adversary_dfs(*space, *start, wf_init(space, c0), Rational(0), horizon, prefix, best);
  return best;
}

Rational ratio_upper_bound(const ConfigurationSpace& space, int horizon) {
  const Metric& m = space.metric();
  Rational bound = horizon * space.k() * m.max_distance() * m.gamma();
  return bound < 1 ? Rational(1) : bound;
}

}  // namespace kserver
