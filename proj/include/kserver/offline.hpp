#pragma once

#include <memory>
#include <span>
#include <vector>

#include "kserver/metric.hpp"

namespace kserver {

/// w_t(C): cheapest way to serve the first t requests and finish in C.
/// Values are stored per configuration index of the shared space.
class WorkFunction {
 public:
  WorkFunction(std::shared_ptr<const ConfigurationSpace> space, std::vector<Rational> values, int prefix_len)
      : space_(std::move(space)), values_(std::move(values)), prefix_len_(prefix_len) {}

  const ConfigurationSpace& space() const noexcept { return *space_; }
  const std::shared_ptr<const ConfigurationSpace>& space_ptr() const noexcept { return space_; }
  const std::vector<Rational>& values() const noexcept { return values_; }
  const Rational& operator[](ConfigIndex c) const { return values_[static_cast<std::size_t>(c)]; }
  const Rational& value(const Configuration& c) const { return (*this)[space_->index_of(c)]; }
  int prefix_len() const noexcept { return prefix_len_; }

  /// Optimal offline cost of the processed prefix.
  Rational min_value() const;

 private:
  std::shared_ptr<const ConfigurationSpace> space_;
  std::vector<Rational> values_;
  int prefix_len_;
};

WorkFunction wf_init(std::shared_ptr<const ConfigurationSpace> space, const Configuration& c0);

/// w'(C) = min over C2 containing r of w(C2) + dist(C2, C).
WorkFunction wf_update(const WorkFunction& wf, PointIndex r);

Rational opt_cost(std::shared_ptr<const ConfigurationSpace> space, const Configuration& c0,
                  std::span<const PointIndex> requests);
Rational opt_cost(const Metric& metric, const Configuration& c0, std::span<const PointIndex> requests);

/// One optimal answer sequence. Reconstructed backwards from the last step;
/// among tied configurations the lexicographically smallest wins.
std::vector<Configuration> opt_answers(std::shared_ptr<const ConfigurationSpace> space, const Configuration& c0,
                                       std::span<const PointIndex> requests);
std::vector<Configuration> opt_answers(const Metric& metric, const Configuration& c0,
                                       std::span<const PointIndex> requests);

}  // namespace kserver
