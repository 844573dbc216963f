#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kserver/metric.hpp"
#include "kserver/simplex.hpp"

namespace kserver {

/// Answer sequence sigma_t as configuration indices of the shared space.
using AnswerSequence = std::vector<ConfigIndex>;

enum class RowFamily { Probability, Consistency, Competitiveness };

struct LpVariable {
  RequestSequence requests;  // rho_t
  AnswerSequence answers;    // sigma_t, one covering answer per request
};

struct LpRow {
  RowFamily family;
  RequestSequence requests;
  AnswerSequence answers;  // sigma_{t-1} for consistency rows, sigma_T for competitiveness rows
};

inline constexpr std::size_t kDefaultVariableCap = 1'000'000;

/// Number of variables x(rho_t, sigma_t), 1 <= t <= T, without building anything.
mpz_class lp_variable_count(const ConfigurationSpace& space, int horizon);

/// Randomized-strategy polyhedron for threshold tau:
///   probability:      sum_sigma x(rho_t, sigma) = 1                  per rho_t
///   consistency:      sum_{C ∋ r_t} x(rho_t, sigma C) = x(rho_{t-1}, sigma)
///                                                  per rho_t, sigma in S(rho_{t-1}), t > 1
///   competitiveness:  sum_sigma' x(rho_T, sigma') dist(sigma') <= tau dist(sigma_T)
///                                                  per rho_T, sigma_T
///   x >= 0.
/// Variables are ordered by t, then rho lexicographically, then sigma
/// lexicographically; rows by family, then the same order.
class LpInstance {
 public:
  const ConfigurationSpace& space() const noexcept { return *space_; }
  const std::shared_ptr<const ConfigurationSpace>& space_ptr() const noexcept { return space_; }
  const Configuration& initial() const noexcept { return c0_; }
  int horizon() const noexcept { return horizon_; }
  const Rational& tau() const noexcept { return tau_; }

  const std::vector<LpVariable>& variables() const noexcept { return variables_; }
  const std::vector<LpRow>& rows() const noexcept { return rows_; }
  const simplex::Problem& problem() const noexcept { return problem_; }
  std::size_t count(RowFamily family) const;

  /// Index of x(requests, answers). Throws InvalidArgument if absent.
  std::size_t variable_index(const RequestSequence& requests, const AnswerSequence& answers) const;

  /// Same structure with the competitiveness right-hand sides rescaled.
  LpInstance with_tau(const Rational& tau) const;

  /// Row / variable names used in the text dump: P/rho, C/rho/sigma, K/rho/sigma.
  std::string row_name(std::size_t row) const;
  std::string variable_name(std::size_t var) const;

 private:
  friend LpInstance build_lp(std::shared_ptr<const ConfigurationSpace>, const Configuration&, int, const Rational&,
                             std::size_t);

  std::shared_ptr<const ConfigurationSpace> space_;
  Configuration c0_;
  int horizon_ = 0;
  Rational tau_;
  std::vector<LpVariable> variables_;
  std::vector<LpRow> rows_;
  simplex::Problem problem_;
  std::vector<std::size_t> offset_;     // first variable of each t (index t-1)
  std::vector<Rational> comp_cost_;     // dist(sigma_T) per competitiveness row, same order
  std::size_t first_comp_row_ = 0;
};

/// Throws DegenerateKEqualsN for k == n, InvalidArgument for T < 1 and
/// InstanceTooLarge when the variable count exceeds `variable_cap`.
LpInstance build_lp(std::shared_ptr<const ConfigurationSpace> space, const Configuration& c0, int horizon,
                    const Rational& tau, std::size_t variable_cap = kDefaultVariableCap);

struct LpFeasibility {
  bool feasible = false;
  std::vector<Rational> point;        // feasible case
  std::vector<Rational> certificate;  // infeasible case, Farkas multipliers per row
  std::size_t pivots = 0;
};

/// Exact decision. Both outcomes are re-checked against the instance before
/// returning; a failed check throws.
LpFeasibility lp_feasible(const LpInstance& instance);

/// Conditional answer distributions x'(rho_t, sigma_{t-1}) over configurations
/// covering r_t, for every history with t <= horizon.
class RandomizedPolicy {
 public:
  using History = std::pair<RequestSequence, AnswerSequence>;  // (rho_t, sigma_{t-1})
  using Distribution = std::vector<std::pair<ConfigIndex, Rational>>;

  RandomizedPolicy(std::shared_ptr<const ConfigurationSpace> space, Configuration c0, int horizon)
      : space_(std::move(space)), c0_(std::move(c0)), horizon_(horizon) {}

  const ConfigurationSpace& space() const noexcept { return *space_; }
  const std::shared_ptr<const ConfigurationSpace>& space_ptr() const noexcept { return space_; }
  const Configuration& initial() const noexcept { return c0_; }
  int horizon() const noexcept { return horizon_; }

  const std::map<History, Distribution>& conditionals() const noexcept { return conditional_; }
  /// Throws InvalidArgument for an unknown history.
  const Distribution& at(const RequestSequence& requests, const AnswerSequence& previous) const;
  void set(History history, Distribution distribution);

 private:
  std::shared_ptr<const ConfigurationSpace> space_;
  Configuration c0_;
  int horizon_;
  std::map<History, Distribution> conditional_;
};

/// x'(rho_t, sigma C') = x(rho_t, sigma C') / sum_{C ∋ r_t} x(rho_t, sigma C);
/// histories with a zero denominator get the uniform distribution.
RandomizedPolicy extract_policy(const LpInstance& instance, const std::vector<Rational>& point);

/// Point-mass policy following a deterministic strategy table.
RandomizedPolicy policy_from_strategy(std::shared_ptr<const ConfigurationSpace> space, const Configuration& c0,
                                      int horizon, const std::map<RequestSequence, Configuration>& strategy);

/// Exact expected movement cost per step along the requests.
std::vector<Rational> expected_step_costs(const RandomizedPolicy& policy, std::span<const PointIndex> requests);
Rational expected_cost(const RandomizedPolicy& policy, std::span<const PointIndex> requests);

struct PolicyAudit {
  ExtendedRatio worst_ratio{Rational(1)};
  RequestSequence worst_sequence;
  bool distributions_sum_to_one = true;
  bool supported_on_covering = true;
  std::size_t sequences_checked = 0;
};

/// Exhaustive check over every request sequence of length 1..horizon.
PolicyAudit audit_policy(const RandomizedPolicy& policy);

struct RandRatioResult {
  Rational tau_low;
  Rational tau_high;
  RandomizedPolicy policy;
  std::size_t iterations = 0;  // midpoint probes
  std::size_t variables = 0;
};

/// Binary search on tau over [1, T * B] with exact midpoints. Returns
/// tau_low == tau_high == 1 when tau = 1 is already feasible.
RandRatioResult opt_rand_ratio(std::shared_ptr<const ConfigurationSpace> space, const Configuration& c0, int horizon,
                               const Rational& tolerance, std::size_t variable_cap = kDefaultVariableCap);

/// LP text dump (CPLEX-style sections) with rational coefficients as p/q.
std::string dump_lp(const LpInstance& instance);

}  // namespace kserver
