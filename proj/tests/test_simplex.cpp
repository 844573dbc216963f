#include <doctest.h>

#include <functional>
#include <optional>
#include <random>

#include "kserver/simplex.hpp"

using namespace kserver;
using namespace kserver::simplex;

namespace {

Row row(std::vector<std::pair<int, Rational>> coeffs, Sense sense, Rational rhs) {
  return Row{std::move(coeffs), sense, std::move(rhs)};
}

/// Dense activity check written out again so the test does not rely on satisfies().
bool point_ok(const Problem& p, const std::vector<Rational>& x) {
  for (const auto& v : x) {
    if (v < 0) return false;
  }
  for (const auto& r : p.rows) {
    Rational lhs = 0;
    for (const auto& [j, a] : r.coeffs) lhs += a * x[static_cast<std::size_t>(j)];
    if (r.sense == Sense::LessEqual && lhs > r.rhs) return false;
    if (r.sense == Sense::GreaterEqual && lhs < r.rhs) return false;
    if (r.sense == Sense::Equal && lhs != r.rhs) return false;
  }
  return true;
}

/// Solves a dense square system by Gaussian elimination; nullopt if singular.
std::optional<std::vector<Rational>> solve_square(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
  const std::size_t n = a.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const Rational f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= a[i][i];
  return b;
}

/// Feasibility by vertex enumeration: {x >= 0, rows} is pointed, so it is
/// nonempty iff some basic solution (n tight constraints) satisfies it.
bool feasible_by_vertices(const Problem& p) {
  const std::size_t n = static_cast<std::size_t>(p.num_vars);
  std::vector<std::vector<Rational>> hyper;  // rows then axes
  std::vector<Rational> rhs;
  for (const auto& r : p.rows) {
    std::vector<Rational> a(n);
    for (const auto& [j, c] : r.coeffs) a[static_cast<std::size_t>(j)] += c;
    hyper.push_back(a);
    rhs.push_back(r.rhs);
  }
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Rational> a(n);
    a[j] = 1;
    hyper.push_back(a);
    rhs.push_back(0);
  }
  const std::size_t h = hyper.size();
  std::vector<std::size_t> pick(n);
  std::function<bool(std::size_t, std::size_t)> rec = [&](std::size_t depth, std::size_t from) {
    if (depth == n) {
      std::vector<std::vector<Rational>> a;
      std::vector<Rational> b;
      for (std::size_t i : pick) {
        a.push_back(hyper[i]);
        b.push_back(rhs[i]);
      }
      const auto x = solve_square(a, b);
      return x && point_ok(p, *x);
    }
    for (std::size_t i = from; i < h; ++i) {
      pick[depth] = i;
      if (rec(depth + 1, i + 1)) return true;
    }
    return false;
  };
  return rec(0, 0);
}

}  // namespace

TEST_CASE("tiny feasible and infeasible systems") {
  Problem p{2, {row({{0, Rational(1)}, {1, Rational(1)}}, Sense::Equal, Rational(1)),
                row({{0, Rational(1)}}, Sense::LessEqual, Rational(1, 2))}};
  Result r = solve_feasibility(p);
  REQUIRE(r.feasible);
  CHECK(point_ok(p, r.point));

  Problem q{2, {row({{0, Rational(1)}, {1, Rational(1)}}, Sense::LessEqual, Rational(1)),
                row({{0, Rational(1)}, {1, Rational(1)}}, Sense::GreaterEqual, Rational(2))}};
  r = solve_feasibility(q);
  REQUIRE_FALSE(r.feasible);
  CHECK(certifies_infeasible(q, r.certificate));

  // x >= 0 alone rules this out
  Problem neg{1, {row({{0, Rational(1)}}, Sense::LessEqual, Rational(-1))}};
  r = solve_feasibility(neg);
  CHECK_FALSE(r.feasible);
  CHECK(certifies_infeasible(neg, r.certificate));

  Problem empty{3, {}};
  CHECK(solve_feasibility(empty).feasible);
}

TEST_CASE("certificate checker rejects non-certificates") {
  Problem q{1, {row({{0, Rational(1)}}, Sense::LessEqual, Rational(1)),
                row({{0, Rational(1)}}, Sense::GreaterEqual, Rational(2))}};
  CHECK(certifies_infeasible(q, {Rational(1), Rational(-1)}));
  CHECK_FALSE(certifies_infeasible(q, {Rational(-1), Rational(1)}));
  CHECK_FALSE(certifies_infeasible(q, {Rational(0), Rational(0)}));
}

TEST_CASE("random small systems agree with vertex enumeration") {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> coef(-3, 3);
  std::uniform_int_distribution<int> sense(0, 2);
  int feasible = 0;
  int infeasible = 0;
  for (int trial = 0; trial < 300; ++trial) {
    Problem p;
    p.num_vars = 2 + trial % 2;
    const int m = 2 + trial % 4;
    for (int i = 0; i < m; ++i) {
      Row r;
      for (int j = 0; j < p.num_vars; ++j) {
        const int c = coef(rng);
        if (c) r.coeffs.emplace_back(j, Rational(c));
      }
      r.sense = static_cast<Sense>(sense(rng));
      r.rhs = Rational(coef(rng));
      p.rows.push_back(r);
    }
    const Result r = solve_feasibility(p);
    CHECK(r.feasible == feasible_by_vertices(p));
    if (r.feasible) {
      ++feasible;
      CHECK(point_ok(p, r.point));
    } else {
      ++infeasible;
      CHECK(certifies_infeasible(p, r.certificate));
    }
  }
  CHECK(feasible > 20);
  CHECK(infeasible > 20);
}

TEST_CASE("degenerate system with many redundant rows terminates") {
  // sum x = 1 repeated, plus x_i <= 1 and x_i - x_j <= 0 cycles that force equality
  Problem p;
  p.num_vars = 6;
  for (int rep = 0; rep < 4; ++rep) {
    Row r;
    for (int j = 0; j < 6; ++j) r.coeffs.emplace_back(j, Rational(1));
    r.sense = Sense::Equal;
    r.rhs = 1;
    p.rows.push_back(r);
  }
  for (int j = 0; j < 6; ++j) {
    p.rows.push_back(row({{j, Rational(1)}, {(j + 1) % 6, Rational(-1)}}, Sense::LessEqual, Rational(0)));
  }
  const Result r = solve_feasibility(p);
  REQUIRE(r.feasible);
  for (const auto& v : r.point) CHECK(v == Rational(1, 6));
}
