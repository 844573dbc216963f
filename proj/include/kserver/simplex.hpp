#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "kserver/rational.hpp"

namespace kserver::simplex {

enum class Sense { LessEqual, Equal, GreaterEqual };

struct Row {
  std::vector<std::pair<int, Rational>> coeffs;  // (variable, coefficient)
  Sense sense = Sense::LessEqual;
  Rational rhs;
};

/// Feasibility problem { rows, x >= 0 } over num_vars variables.
struct Problem {
  int num_vars = 0;
  std::vector<Row> rows;
};

struct Result {
  bool feasible = false;
  /// A point satisfying every row exactly (feasible case).
  std::vector<Rational> point;
  /// Farkas multipliers, one per row (infeasible case): y^T A >= 0
  /// columnwise, y^T b < 0, y >= 0 on <= rows, y <= 0 on >= rows.
  std::vector<Rational> certificate;
  std::size_t pivots = 0;
};

/// Phase-one primal simplex over exact rationals. Entering columns follow
/// the most negative reduced cost until a run of degenerate pivots, after
/// which Bland's rule takes over for the rest of the solve.
Result solve_feasibility(const Problem& problem);

/// Exact checks, independent of the tableau.
bool satisfies(const Problem& problem, const std::vector<Rational>& point);
bool certifies_infeasible(const Problem& problem, const std::vector<Rational>& certificate);

}  // namespace kserver::simplex
