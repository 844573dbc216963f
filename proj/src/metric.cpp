#include "kserver/metric.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "kserver/error.hpp"

namespace kserver {

std::optional<PointIndex> Metric::index_of(std::string_view name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<PointIndex>(it - names_.begin());
}

Rational Metric::max_distance() const {
  Rational best = 0;
  for (const auto& d : dist_) best = std::max(best, d);
  return best;
}

Rational Metric::min_distance() const {
  std::optional<Rational> best;
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && (!best || dist_[i * n + j] < *best)) best = dist_[i * n + j];
    }
  }
  return best.value_or(Rational(0));
}

namespace {

constexpr std::string_view kReservedNameChars = ",|{};";

void check_names(const std::vector<std::string>& names) {
  std::set<std::string> seen;
  for (const auto& name : names) {
    if (name.empty()) throw Error(ErrorCode::InvalidPointName, "empty point name");
    if (name.find_first_of(kReservedNameChars) != std::string::npos) {
      throw Error(ErrorCode::InvalidPointName, "point name '" + name + "' contains one of ,|{};");
    }
    if (!seen.insert(name).second) {
      throw Error(ErrorCode::InvalidPointName, "duplicate point name '" + name + "'");
    }
  }
}

}  // namespace

Metric validate_metric(std::vector<std::string> names, const std::vector<std::vector<Rational>>& raw) {
  std::vector<std::vector<Rational>> dist = raw;
  for (auto& row : dist) {
    for (auto& v : row) v.canonicalize();
  }
  const std::size_t n = dist.size();
  for (const auto& row : dist) {
    if (row.size() != n) throw Error(ErrorCode::NonSquare, "distance matrix is not square");
  }
  if (names.size() != n) {
    throw Error(ErrorCode::NonSquare, "point list has " + std::to_string(names.size()) +
                                          " entries but the matrix has " + std::to_string(n) + " rows");
  }
  check_names(names);

  for (std::size_t i = 0; i < n; ++i) {
    if (dist[i][i] != 0) {
      throw Error(ErrorCode::NonZeroDiagonal, "d(" + names[i] + "," + names[i] + ") must be 0");
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (dist[i][j] < 0) {
        throw Error(ErrorCode::NegativeDistance, "d(" + names[i] + "," + names[j] + ") < 0");
      }
      if (dist[i][j] != dist[j][i]) {
        throw Error(ErrorCode::AsymmetricDistance, "d(" + names[i] + "," + names[j] + ") != d(" +
                                                       names[j] + "," + names[i] + ")");
      }
      if (i != j && dist[i][j] == 0) {
        throw Error(ErrorCode::ZeroOffDiagonal, "d(" + names[i] + "," + names[j] + ") = 0");
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t l = 0; l < n; ++l) {
      for (std::size_t j = 0; j < n; ++j) {
        if (dist[i][j] > dist[i][l] + dist[l][j]) {
          throw Error(ErrorCode::TriangleViolation,
                      "d(" + names[i] + "," + names[j] + ") > d(" + names[i] + "," + names[l] +
                          ") + d(" + names[l] + "," + names[j] + ")");
        }
      }
    }
  }

  Metric m;
  m.names_ = std::move(names);
  m.dist_.reserve(n * n);
  for (const auto& row : dist) m.dist_.insert(m.dist_.end(), row.begin(), row.end());
  if (n > 1) m.gamma_ = 1 / m.min_distance();
  return m;
}

Metric validate_metric(const std::vector<std::vector<Rational>>& dist) {
  std::vector<std::string> names(dist.size());
  for (std::size_t i = 0; i < names.size(); ++i) names[i] = std::to_string(i);
  return validate_metric(std::move(names), dist);
}

Metric normalize(const Metric& metric) {
  Metric out = metric;
  if (metric.gamma_ == 1) return out;
  for (auto& d : out.dist_) d *= metric.gamma_;
  out.gamma_ = 1;
  return out;
}

Metric uniform_metric(std::size_t n) {
  std::vector<std::vector<Rational>> d(n, std::vector<Rational>(n, Rational(1)));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  return validate_metric(d);
}

Metric line_metric(const std::vector<Rational>& coordinates) {
  const std::size_t n = coordinates.size();
  std::vector<std::vector<Rational>> d(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) d[i][j] = abs(coordinates[i] - coordinates[j]);
  }
  return validate_metric(d);
}

Configuration::Configuration(std::vector<PointIndex> points) : points_(std::move(points)) {
  std::sort(points_.begin(), points_.end());
  if (std::adjacent_find(points_.begin(), points_.end()) != points_.end()) {
    throw Error(ErrorCode::InvalidConfiguration, "configuration has duplicate points");
  }
  if (!points_.empty() && points_.front() < 0) {
    throw Error(ErrorCode::InvalidConfiguration, "negative point index");
  }
}

bool Configuration::contains(PointIndex p) const {
  return std::binary_search(points_.begin(), points_.end(), p);
}

std::string to_string(const Configuration& c, const Metric& metric) {
  std::string out = "{";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += ",";
    out += metric.name(c.points()[i]);
  }
  return out + "}";
}

Rational min_assignment_exhaustive(const std::vector<std::vector<Rational>>& cost) {
  const std::size_t k = cost.size();
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::optional<Rational> best;
  do {
    Rational total = 0;
    for (std::size_t i = 0; i < k; ++i) total += cost[i][perm[i]];
    if (!best || total < *best) best = total;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best.value_or(Rational(0));
}

Rational min_assignment_hungarian(const std::vector<std::vector<Rational>>& cost) {
  // Potentials-based Hungarian method, 1-indexed, square k x k.
  const std::size_t k = cost.size();
  std::vector<Rational> u(k + 1), v(k + 1);
  std::vector<std::size_t> match(k + 1, 0), way(k + 1, 0);
  for (std::size_t i = 1; i <= k; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<std::optional<Rational>> minv(k + 1);
    std::vector<bool> used(k + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = match[j0];
      std::optional<Rational> delta;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= k; ++j) {
        if (used[j]) continue;
        Rational cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (!minv[j] || cur < *minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (!delta || *minv[j] < *delta) {
          delta = *minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= k; ++j) {
        if (used[j]) {
          u[match[j]] += *delta;
          v[j] -= *delta;
        } else {
          *minv[j] -= *delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  Rational total = 0;
  for (std::size_t j = 1; j <= k; ++j) total += cost[match[j] - 1][j - 1];
  return total;
}

Rational config_dist(const Metric& metric, const Configuration& from, const Configuration& to) {
  if (from.size() != to.size()) {
    throw Error(ErrorCode::InvalidConfiguration, "configurations differ in size");
  }
  if (from == to) return 0;
  const std::size_t k = from.size();
  std::vector<std::vector<Rational>> cost(k, std::vector<Rational>(k));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) cost[i][j] = metric.dist(from.points()[i], to.points()[j]);
  }
  return k <= 6 ? min_assignment_exhaustive(cost) : min_assignment_hungarian(cost);
}

Rational seq_dist(const Metric& metric, const Configuration& c0, std::span<const Configuration> sigma) {
  Rational total = 0;
  const Configuration* prev = &c0;
  for (const auto& c : sigma) {
    total += config_dist(metric, *prev, c);
    prev = &c;
  }
  return total;
}

std::vector<Configuration> all_configurations(std::size_t n, int k) {
  if (k < 1 || static_cast<std::size_t>(k) > n) {
    throw Error(ErrorCode::KExceedsN, "k=" + std::to_string(k) + " must lie in [1, " + std::to_string(n) + "]");
  }
  std::vector<Configuration> out;
  std::vector<PointIndex> current(static_cast<std::size_t>(k));
  std::iota(current.begin(), current.end(), 0);
  const int ni = static_cast<int>(n);
  while (true) {
    out.emplace_back(current);
    int i = k - 1;
    while (i >= 0 && current[static_cast<std::size_t>(i)] == ni - k + i) --i;
    if (i < 0) break;
    ++current[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) {
      current[static_cast<std::size_t>(j)] = current[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return out;
}

std::vector<Configuration> all_configurations(const Metric& metric, int k) {
  return all_configurations(metric.size(), k);
}

std::vector<Configuration> covering_configurations(const Metric& metric, int k, PointIndex r) {
  if (r < 0 || static_cast<std::size_t>(r) >= metric.size()) {
    throw Error(ErrorCode::InvalidRequest, "request " + std::to_string(r) + " out of range");
  }
  std::vector<Configuration> out;
  for (auto& c : all_configurations(metric, k)) {
    if (c.contains(r)) out.push_back(std::move(c));
  }
  return out;
}

ConfigurationSpace::ConfigurationSpace(Metric metric, int k)
    : metric_(std::move(metric)), k_(k), configs_(all_configurations(metric_, k)) {
  const std::size_t m = configs_.size();
  dist_.resize(m * m);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      dist_[a * m + b] = config_dist(metric_, configs_[a], configs_[b]);
      dist_[b * m + a] = dist_[a * m + b];
    }
  }
  covering_.resize(metric_.size());
  covers_.assign(m, std::vector<bool>(metric_.size(), false));
  for (std::size_t c = 0; c < m; ++c) {
    for (PointIndex p : configs_[c].points()) {
      covering_[static_cast<std::size_t>(p)].push_back(static_cast<ConfigIndex>(c));
      covers_[c][static_cast<std::size_t>(p)] = true;
    }
  }
}

ConfigIndex ConfigurationSpace::index_of(const Configuration& c) const {
  const auto it = std::lower_bound(configs_.begin(), configs_.end(), c);
  if (it == configs_.end() || *it != c) {
    throw Error(ErrorCode::InvalidConfiguration,
                "not a " + std::to_string(k_) + "-subset of the " + std::to_string(metric_.size()) + "-point metric");
  }
  return static_cast<ConfigIndex>(it - configs_.begin());
}

bool ConfigurationSpace::covers(ConfigIndex c, PointIndex r) const {
  return covers_[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)];
}

void ConfigurationSpace::check_request(PointIndex r) const {
  if (r < 0 || static_cast<std::size_t>(r) >= metric_.size()) {
    throw Error(ErrorCode::InvalidRequest, "request " + std::to_string(r) + " out of range");
  }
}

Configuration first_k_points(int k) {
  std::vector<PointIndex> p(static_cast<std::size_t>(k));
  std::iota(p.begin(), p.end(), 0);
  return Configuration(std::move(p));
}

}  // namespace kserver
