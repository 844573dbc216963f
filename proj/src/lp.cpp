#include "kserver/lp.hpp"

#include <algorithm>
#include <sstream>

#include "kserver/error.hpp"
#include "kserver/game.hpp"
#include "kserver/offline.hpp"

namespace kserver {

namespace {

std::size_t ipow(std::size_t base, int exp) {
  std::size_t out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

/// Digits of `index` in base `radix`, most significant first, `len` digits.
std::vector<std::size_t> digits(std::size_t index, std::size_t radix, int len) {
  std::vector<std::size_t> out(static_cast<std::size_t>(len));
  for (int i = len - 1; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = index % radix;
    index /= radix;
  }
  return out;
}

std::size_t covering_width(const ConfigurationSpace& space) { return space.covering(0).size(); }

std::string join_requests(const RequestSequence& requests) {
  std::string out;
  for (std::size_t i = 0; i < requests.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(requests[i]);
  }
  return out;
}

std::string join_answers(const ConfigurationSpace& space, const AnswerSequence& answers) {
  std::string out;
  for (std::size_t i = 0; i < answers.size(); ++i) {
    if (i) out += '.';
    const auto pts = space.at(answers[i]).points();
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (j) out += '_';
      out += std::to_string(pts[j]);
    }
  }
  return out;
}

}  // namespace

mpz_class lp_variable_count(const ConfigurationSpace& space, int horizon) {
  const mpz_class per_step = mpz_class(static_cast<unsigned long>(space.num_points())) *
                             mpz_class(static_cast<unsigned long>(covering_width(space)));
  mpz_class total = 0;
  mpz_class term = 1;
  for (int t = 1; t <= horizon; ++t) {
    term *= per_step;
    total += term;
  }
  return total;
}

std::size_t LpInstance::count(RowFamily family) const {
  return static_cast<std::size_t>(
      std::count_if(rows_.begin(), rows_.end(), [family](const LpRow& r) { return r.family == family; }));
}

std::size_t LpInstance::variable_index(const RequestSequence& requests, const AnswerSequence& answers) const {
  const int t = static_cast<int>(requests.size());
  if (t < 1 || t > horizon_ || answers.size() != requests.size()) {
    throw Error(ErrorCode::InvalidArgument, "no LP variable for this (rho, sigma) pair");
  }
  const std::size_t n = space_->num_points();
  const std::size_t width = covering_width(*space_);
  std::size_t rho = 0;
  std::size_t sigma = 0;
  for (std::size_t i = 0; i < requests.size(); ++i) {
    space_->check_request(requests[i]);
    rho = rho * n + static_cast<std::size_t>(requests[i]);
    const auto cov = space_->covering(requests[i]);
    const auto it = std::find(cov.begin(), cov.end(), answers[i]);
    if (it == cov.end()) throw Error(ErrorCode::InvalidArgument, "answer does not cover its request");
    sigma = sigma * width + static_cast<std::size_t>(it - cov.begin());
  }
  return offset_[static_cast<std::size_t>(t - 1)] + rho * ipow(width, t) + sigma;
}

LpInstance LpInstance::with_tau(const Rational& raw_tau) const {
  Rational tau = raw_tau;
  tau.canonicalize();
  LpInstance out = *this;
  out.tau_ = tau;
  for (std::size_t i = 0; i < comp_cost_.size(); ++i) out.problem_.rows[first_comp_row_ + i].rhs = tau * comp_cost_[i];
  return out;
}

std::string LpInstance::row_name(std::size_t row) const {
  const LpRow& r = rows_.at(row);
  switch (r.family) {
    case RowFamily::Probability: return "P/" + join_requests(r.requests);
    case RowFamily::Consistency:
      return "C/" + join_requests(r.requests) + "/" + join_answers(*space_, r.answers);
    case RowFamily::Competitiveness:
      return "K/" + join_requests(r.requests) + "/" + join_answers(*space_, r.answers);
  }
  return {};
}

std::string LpInstance::variable_name(std::size_t var) const {
  const LpVariable& v = variables_.at(var);
  return "x/" + join_requests(v.requests) + "/" + join_answers(*space_, v.answers);
}

LpInstance build_lp(std::shared_ptr<const ConfigurationSpace> space, const Configuration& c0, int horizon,
                    const Rational& raw_tau, std::size_t variable_cap) {
  Rational tau = raw_tau;
  tau.canonicalize();
  if (static_cast<std::size_t>(space->k()) >= space->num_points()) {
    throw Error(ErrorCode::DegenerateKEqualsN, "k = n leaves nothing to decide");
  }
  if (horizon < 1) throw Error(ErrorCode::InvalidArgument, "horizon must be at least 1");
  const mpz_class needed = lp_variable_count(*space, horizon);
  if (needed > mpz_class(static_cast<unsigned long>(variable_cap))) {
    throw Error(ErrorCode::InstanceTooLarge,
                "LP needs " + needed.get_str() + " variables, cap is " + std::to_string(variable_cap));
  }

  LpInstance lp;
  lp.space_ = space;
  lp.c0_ = space->at(space->index_of(c0));
  lp.horizon_ = horizon;
  lp.tau_ = tau;
  const ConfigIndex start = space->index_of(c0);
  const std::size_t n = space->num_points();
  const std::size_t width = covering_width(*space);

  auto answer_at = [&](PointIndex r, std::size_t pos) { return space->covering(r)[pos]; };

  for (int t = 1; t <= horizon; ++t) {
    lp.offset_.push_back(lp.variables_.size());
    const std::size_t n_rho = ipow(n, t);
    const std::size_t n_sigma = ipow(width, t);
    for (std::size_t rho = 0; rho < n_rho; ++rho) {
      const auto rd = digits(rho, n, t);
      RequestSequence requests(rd.begin(), rd.end());
      for (std::size_t sigma = 0; sigma < n_sigma; ++sigma) {
        const auto sd = digits(sigma, width, t);
        AnswerSequence answers(static_cast<std::size_t>(t));
        for (int i = 0; i < t; ++i) answers[static_cast<std::size_t>(i)] = answer_at(requests[static_cast<std::size_t>(i)], sd[static_cast<std::size_t>(i)]);
        lp.variables_.push_back({requests, std::move(answers)});
      }
    }
  }
  lp.problem_.num_vars = static_cast<int>(lp.variables_.size());

  auto var = [&](int t, std::size_t rho, std::size_t sigma) {
    return static_cast<int>(lp.offset_[static_cast<std::size_t>(t - 1)] + rho * ipow(width, t) + sigma);
  };

  // Probability rows.
  for (int t = 1; t <= horizon; ++t) {
    const std::size_t n_sigma = ipow(width, t);
    for (std::size_t rho = 0; rho < ipow(n, t); ++rho) {
      simplex::Row row;
      row.sense = simplex::Sense::Equal;
      row.rhs = 1;
      for (std::size_t s = 0; s < n_sigma; ++s) row.coeffs.emplace_back(var(t, rho, s), Rational(1));
      lp.problem_.rows.push_back(std::move(row));
      lp.rows_.push_back({RowFamily::Probability, lp.variables_[static_cast<std::size_t>(var(t, rho, 0))].requests, {}});
    }
  }

  // Consistency rows.
  for (int t = 2; t <= horizon; ++t) {
    const std::size_t n_prev = ipow(width, t - 1);
    for (std::size_t rho = 0; rho < ipow(n, t); ++rho) {
      for (std::size_t s = 0; s < n_prev; ++s) {
        simplex::Row row;
        row.sense = simplex::Sense::Equal;
        row.rhs = 0;
        for (std::size_t d = 0; d < width; ++d) row.coeffs.emplace_back(var(t, rho, s * width + d), Rational(1));
        const int parent = var(t - 1, rho / n, s);
        row.coeffs.emplace_back(parent, Rational(-1));
        lp.problem_.rows.push_back(std::move(row));
        lp.rows_.push_back({RowFamily::Consistency, lp.variables_[static_cast<std::size_t>(var(t, rho, 0))].requests,
                            lp.variables_[static_cast<std::size_t>(parent)].answers});
      }
    }
  }

  // Competitiveness rows, one per (rho_T, sigma_T).
  lp.first_comp_row_ = lp.problem_.rows.size();
  const std::size_t n_final = ipow(width, horizon);
  for (std::size_t rho = 0; rho < ipow(n, horizon); ++rho) {
    std::vector<Rational> cost(n_final);
    for (std::size_t s = 0; s < n_final; ++s) {
      const auto& answers = lp.variables_[static_cast<std::size_t>(var(horizon, rho, s))].answers;
      ConfigIndex prev = start;
      for (ConfigIndex c : answers) {
        cost[s] += space->dist(prev, c);
        prev = c;
      }
    }
    std::vector<std::pair<int, Rational>> lhs;
    for (std::size_t s = 0; s < n_final; ++s) {
      if (sgn(cost[s]) != 0) lhs.emplace_back(var(horizon, rho, s), cost[s]);
    }
    for (std::size_t s = 0; s < n_final; ++s) {
      const auto& v = lp.variables_[static_cast<std::size_t>(var(horizon, rho, s))];
      simplex::Row row;
      row.sense = simplex::Sense::LessEqual;
      row.coeffs = lhs;
      row.rhs = tau * cost[s];
      lp.problem_.rows.push_back(std::move(row));
      lp.rows_.push_back({RowFamily::Competitiveness, v.requests, v.answers});
      lp.comp_cost_.push_back(cost[s]);
    }
  }
  return lp;
}

LpFeasibility lp_feasible(const LpInstance& instance) {
  const simplex::Result r = simplex::solve_feasibility(instance.problem());
  LpFeasibility out;
  out.feasible = r.feasible;
  out.pivots = r.pivots;
  if (r.feasible) {
    if (!simplex::satisfies(instance.problem(), r.point)) {
      throw Error(ErrorCode::InvalidArgument, "simplex returned a point that violates the LP");
    }
    out.point = r.point;
  } else {
    if (!simplex::certifies_infeasible(instance.problem(), r.certificate)) {
      throw Error(ErrorCode::InvalidArgument, "simplex returned an invalid infeasibility certificate");
    }
    out.certificate = r.certificate;
  }
  return out;
}

const RandomizedPolicy::Distribution& RandomizedPolicy::at(const RequestSequence& requests,
                                                           const AnswerSequence& previous) const {
  const auto it = conditional_.find(History{requests, previous});
  if (it == conditional_.end()) throw Error(ErrorCode::InvalidArgument, "policy has no entry for this history");
  return it->second;
}

void RandomizedPolicy::set(History history, Distribution distribution) {
  conditional_[std::move(history)] = std::move(distribution);
}

RandomizedPolicy extract_policy(const LpInstance& instance, const std::vector<Rational>& point) {
  const auto& space = instance.space();
  RandomizedPolicy policy(instance.space_ptr(), instance.initial(), instance.horizon());
  const std::size_t width = covering_width(space);
  const auto& vars = instance.variables();
  // Variables of one (rho_t, sigma_{t-1}) history are `width` consecutive entries.
  for (std::size_t first = 0; first < vars.size(); first += width) {
    Rational denominator = 0;
    for (std::size_t d = 0; d < width; ++d) denominator += point[first + d];
    RandomizedPolicy::Distribution dist;
    for (std::size_t d = 0; d < width; ++d) {
      const ConfigIndex c = vars[first + d].answers.back();
      dist.emplace_back(c, sgn(denominator) == 0 ? Rational(Rational(1) / static_cast<long>(width))
                                                 : Rational(point[first + d] / denominator));
    }
    AnswerSequence previous(vars[first].answers.begin(), vars[first].answers.end() - 1);
    policy.set({vars[first].requests, std::move(previous)}, std::move(dist));
  }
  return policy;
}

RandomizedPolicy policy_from_strategy(std::shared_ptr<const ConfigurationSpace> space, const Configuration& c0,
                                      int horizon, const std::map<RequestSequence, Configuration>& strategy) {
  RandomizedPolicy policy(space, c0, horizon);
  // Only histories consistent with the strategy are recorded.
  for (const auto& [prefix, answer] : strategy) {
    AnswerSequence previous;
    for (std::size_t i = 1; i < prefix.size(); ++i) {
      previous.push_back(space->index_of(strategy.at(RequestSequence(prefix.begin(), prefix.begin() + static_cast<std::ptrdiff_t>(i)))));
    }
    policy.set({prefix, std::move(previous)}, {{space->index_of(answer), Rational(1)}});
  }
  return policy;
}

namespace {

void accumulate_costs(const RandomizedPolicy& policy, std::span<const PointIndex> requests, RequestSequence& prefix,
                      AnswerSequence& answers, ConfigIndex current, const Rational& probability,
                      std::vector<Rational>& step_costs) {
  const std::size_t t = prefix.size();
  if (t == requests.size()) return;
  prefix.push_back(requests[t]);
  for (const auto& [next, p] : policy.at(prefix, answers)) {
    if (sgn(p) == 0) continue;
    const Rational branch = probability * p;
    step_costs[t] += branch * policy.space().dist(current, next);
    answers.push_back(next);
    accumulate_costs(policy, requests, prefix, answers, next, branch, step_costs);
    answers.pop_back();
  }
  prefix.pop_back();
}

}  // namespace

std::vector<Rational> expected_step_costs(const RandomizedPolicy& policy, std::span<const PointIndex> requests) {
  if (requests.size() > static_cast<std::size_t>(policy.horizon())) {
    throw Error(ErrorCode::InvalidArgument, "sequence longer than the policy horizon");
  }
  std::vector<Rational> costs(requests.size());
  RequestSequence prefix;
  AnswerSequence answers;
  accumulate_costs(policy, requests, prefix, answers, policy.space().index_of(policy.initial()), Rational(1), costs);
  return costs;
}

Rational expected_cost(const RandomizedPolicy& policy, std::span<const PointIndex> requests) {
  Rational total = 0;
  for (const auto& c : expected_step_costs(policy, requests)) total += c;
  return total;
}

namespace {

void audit_dfs(const RandomizedPolicy& policy, const WorkFunction& wf, RequestSequence& requests, PolicyAudit& audit) {
  if (!requests.empty()) {
    ++audit.sequences_checked;
    const ExtendedRatio ratio = ExtendedRatio::of(expected_cost(policy, requests), wf.min_value());
    if (ratio > audit.worst_ratio) {
      audit.worst_ratio = ratio;
      audit.worst_sequence = requests;
    }
  }
  if (static_cast<int>(requests.size()) >= policy.horizon()) return;
  for (PointIndex r = 0; r < static_cast<PointIndex>(policy.space().num_points()); ++r) {
    requests.push_back(r);
    audit_dfs(policy, wf_update(wf, r), requests, audit);
    requests.pop_back();
  }
}

}  // namespace

PolicyAudit audit_policy(const RandomizedPolicy& policy) {
  PolicyAudit audit;
  for (const auto& [history, dist] : policy.conditionals()) {
    Rational sum = 0;
    for (const auto& [c, p] : dist) {
      sum += p;
      if (p < 0) audit.distributions_sum_to_one = false;
      if (!policy.space().covers(c, history.first.back())) audit.supported_on_covering = false;
    }
    if (sum != 1) audit.distributions_sum_to_one = false;
  }
  RequestSequence requests;
  audit_dfs(policy, wf_init(policy.space_ptr(), policy.initial()), requests, audit);
  return audit;
}

RandRatioResult opt_rand_ratio(std::shared_ptr<const ConfigurationSpace> space, const Configuration& c0, int horizon,
                               const Rational& raw_tolerance, std::size_t variable_cap) {
  Rational tolerance = raw_tolerance;
  tolerance.canonicalize();
  if (tolerance <= 0) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
  const LpInstance base = build_lp(space, c0, horizon, Rational(1), variable_cap);

  RandRatioResult out{Rational(1), Rational(1), RandomizedPolicy(space, c0, horizon), 0, base.variables().size()};
  LpFeasibility at_one = lp_feasible(base);
  if (at_one.feasible) {
    out.policy = extract_policy(base, at_one.point);
    return out;
  }

  Rational low = 1;
  Rational high = ratio_upper_bound(*space, horizon);
  LpFeasibility best = lp_feasible(base.with_tau(high));
  if (!best.feasible) throw Error(ErrorCode::InvalidArgument, "upper ratio bound infeasible (internal error)");
  while (high - low > tolerance) {
    Rational mid = (low + high) / 2;
    LpFeasibility probe = lp_feasible(base.with_tau(mid));
    ++out.iterations;
    if (probe.feasible) {
      high = std::move(mid);
      best = std::move(probe);
    } else {
      low = std::move(mid);
    }
  }
  out.tau_low = low;
  out.tau_high = high;
  out.policy = extract_policy(base.with_tau(high), best.point);
  return out;
}

std::string dump_lp(const LpInstance& instance) {
  std::ostringstream os;
  os << "\\ k-server randomized strategy polyhedron\n";
  os << "\\ n = " << instance.space().num_points() << ", k = " << instance.space().k()
     << ", T = " << instance.horizon() << ", tau = " << to_string(instance.tau()) << "\n";
  os << "Minimize\n obj: 0 " << instance.variable_name(0) << "\n";
  os << "Subject To\n";
  const auto& rows = instance.problem().rows;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    os << " " << instance.row_name(i) << ":";
    std::size_t written = 0;
    for (const auto& [v, coeff] : rows[i].coeffs) {
      if (written && written % 6 == 0) os << "\n  ";
      const bool negative = coeff < 0;
      if (written || negative) os << (negative ? " - " : " + ");
      else os << " ";
      const Rational magnitude = abs(coeff);
      if (magnitude != 1) os << to_string(magnitude) << " ";
      os << instance.variable_name(static_cast<std::size_t>(v));
      ++written;
    }
    if (written == 0) os << " 0 " << instance.variable_name(0);
    switch (rows[i].sense) {
      case simplex::Sense::LessEqual: os << " <= "; break;
      case simplex::Sense::Equal: os << " = "; break;
      case simplex::Sense::GreaterEqual: os << " >= "; break;
    }
    os << to_string(rows[i].rhs) << "\n";
  }
  os << "End\n";
  return os.str();
}

}  // namespace kserver
