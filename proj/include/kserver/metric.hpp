#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kserver/rational.hpp"

namespace kserver {

using PointIndex = int;
using RequestSequence = std::vector<PointIndex>;

/// Finite metric space over exact rationals. Immutable once constructed;
/// construction goes through validate_metric so every instance satisfies
/// symmetry, positivity off the diagonal and the triangle inequality.
class Metric {
 public:
  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& points() const noexcept { return names_; }
  const std::string& name(PointIndex p) const { return names_.at(static_cast<std::size_t>(p)); }
  std::optional<PointIndex> index_of(std::string_view name) const;

  const Rational& dist(PointIndex a, PointIndex b) const {
    return dist_[static_cast<std::size_t>(a) * names_.size() + static_cast<std::size_t>(b)];
  }

  /// 1 / (minimum off-diagonal distance); 1 for a single point.
  const Rational& gamma() const noexcept { return gamma_; }
  Rational max_distance() const;
  Rational min_distance() const;
  bool is_normalized() const { return gamma_ == 1; }

 private:
  friend Metric validate_metric(std::vector<std::string>, const std::vector<std::vector<Rational>>&);
  friend Metric normalize(const Metric&);

  std::vector<std::string> names_;
  std::vector<Rational> dist_;  // row-major n*n
  Rational gamma_{1};
};

/// Checks the raw matrix and builds a Metric. gamma is computed, not applied.
/// Throws Error with NonSquare, NegativeDistance, AsymmetricDistance,
/// ZeroOffDiagonal, TriangleViolation or InvalidPointName.
Metric validate_metric(std::vector<std::string> names, const std::vector<std::vector<Rational>>& dist);

/// Names default to "0", "1", ...
Metric validate_metric(const std::vector<std::vector<Rational>>& dist);

/// Every distance multiplied by gamma; the result has minimum distance 1.
Metric normalize(const Metric& metric);

Metric uniform_metric(std::size_t n);
/// Points on a line at the given (distinct) coordinates.
Metric line_metric(const std::vector<Rational>& coordinates);

/// Canonical sorted set of occupied points.
class Configuration {
 public:
  Configuration() = default;
  /// Sorts; throws InvalidConfiguration on duplicates or negative indices.
  explicit Configuration(std::vector<PointIndex> points);
  Configuration(std::initializer_list<PointIndex> points)
      : Configuration(std::vector<PointIndex>(points)) {}

  std::span<const PointIndex> points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool contains(PointIndex p) const;

  friend auto operator<=>(const Configuration&, const Configuration&) = default;
  friend bool operator==(const Configuration&, const Configuration&) = default;

 private:
  std::vector<PointIndex> points_;
};

std::string to_string(const Configuration& c, const Metric& metric);

/// Minimum-cost perfect matching between the servers of `from` and `to`.
Rational config_dist(const Metric& metric, const Configuration& from, const Configuration& to);

/// Sum of config_dist over consecutive entries of c0, sigma[0], sigma[1], ...
Rational seq_dist(const Metric& metric, const Configuration& c0, std::span<const Configuration> sigma);

/// All k-subsets in lexicographic order. Throws KExceedsN.
std::vector<Configuration> all_configurations(const Metric& metric, int k);
std::vector<Configuration> all_configurations(std::size_t n, int k);

/// Configurations containing r, lexicographic order.
std::vector<Configuration> covering_configurations(const Metric& metric, int k, PointIndex r);

/// Assignment solvers behind config_dist; exposed so they can be cross-checked.
Rational min_assignment_exhaustive(const std::vector<std::vector<Rational>>& cost);
Rational min_assignment_hungarian(const std::vector<std::vector<Rational>>& cost);

using ConfigIndex = int;

/// Precomputed view of all configurations of k servers on a metric, with the
/// configuration distance table and the covering lists per point. Shared
/// read-only by the offline, game and LP modules.
class ConfigurationSpace {
 public:
  ConfigurationSpace(Metric metric, int k);

  const Metric& metric() const noexcept { return metric_; }
  int k() const noexcept { return k_; }
  std::size_t num_points() const noexcept { return metric_.size(); }
  std::size_t size() const noexcept { return configs_.size(); }

  const Configuration& at(ConfigIndex c) const { return configs_.at(static_cast<std::size_t>(c)); }
  const std::vector<Configuration>& configurations() const noexcept { return configs_; }
  /// Throws InvalidConfiguration if `c` is not a k-subset of this metric.
  ConfigIndex index_of(const Configuration& c) const;

  const Rational& dist(ConfigIndex a, ConfigIndex b) const {
    return dist_[static_cast<std::size_t>(a) * configs_.size() + static_cast<std::size_t>(b)];
  }
  bool covers(ConfigIndex c, PointIndex r) const;
  std::span<const ConfigIndex> covering(PointIndex r) const {
    return covering_.at(static_cast<std::size_t>(r));
  }

  /// Throws InvalidRequest for an index outside [0, n).
  void check_request(PointIndex r) const;

 private:
  Metric metric_;
  int k_;
  std::vector<Configuration> configs_;
  std::vector<Rational> dist_;
  std::vector<std::vector<ConfigIndex>> covering_;
  std::vector<std::vector<bool>> covers_;
};

/// "first k points" configuration {0, ..., k-1}.
Configuration first_k_points(int k);

}  // namespace kserver
