#include "kserver/simplex.hpp"

#include <optional>

#include "kserver/error.hpp"

namespace kserver::simplex {

namespace {

constexpr std::size_t kDegenerateStreakBeforeBland = 50;

class Tableau {
 public:
  explicit Tableau(const Problem& problem) : num_vars_(problem.num_vars), m_(problem.rows.size()) {
    // Column layout: structural | one auxiliary per inequality row | artificials | rhs.
    std::vector<int> aux_col(m_, -1);
    int next = num_vars_;
    for (std::size_t i = 0; i < m_; ++i) {
      if (problem.rows[i].sense != Sense::Equal) aux_col[i] = next++;
    }
    sign_.resize(m_);
    basis_.resize(m_);
    initial_basis_.resize(m_);
    std::vector<bool> needs_artificial(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      const Row& row = problem.rows[i];
      sign_[i] = row.rhs < 0 ? -1 : 1;
      const int aux_sign = row.sense == Sense::LessEqual ? 1 : -1;
      needs_artificial[i] = row.sense == Sense::Equal || sign_[i] * aux_sign < 0;
    }
    first_artificial_ = next;
    for (std::size_t i = 0; i < m_; ++i) {
      if (needs_artificial[i]) initial_basis_[i] = next++;
    }
    width_ = static_cast<std::size_t>(next) + 1;
    rhs_ = width_ - 1;

    rows_.assign(m_, std::vector<Rational>(width_));
    cost_.assign(width_ - 1, Rational(0));
    for (std::size_t i = 0; i < m_; ++i) {
      const Row& row = problem.rows[i];
      auto& t = rows_[i];
      for (const auto& [var, coeff] : row.coeffs) {
        if (var < 0 || var >= num_vars_) throw Error(ErrorCode::InvalidArgument, "variable index out of range");
        t[static_cast<std::size_t>(var)] += sign_[i] * coeff;
      }
      if (aux_col[i] >= 0) {
        t[static_cast<std::size_t>(aux_col[i])] = sign_[i] * (row.sense == Sense::LessEqual ? 1 : -1);
      }
      if (needs_artificial[i]) {
        t[static_cast<std::size_t>(initial_basis_[i])] = 1;
        cost_[static_cast<std::size_t>(initial_basis_[i])] = 1;
      } else {
        initial_basis_[i] = aux_col[i];
      }
      t[rhs_] = sign_[i] * row.rhs;
      basis_[i] = initial_basis_[i];
    }

    // Reduced costs d = c - c_B^T T, objective value in the rhs slot as -w.
    reduced_.assign(width_, Rational(0));
    for (std::size_t j = 0; j + 1 < width_; ++j) reduced_[j] = cost_[j];
    for (std::size_t i = 0; i < m_; ++i) {
      if (cost_[static_cast<std::size_t>(basis_[i])] == 0) continue;
      for (std::size_t j = 0; j < width_; ++j) {
        if (sgn(rows_[i][j]) != 0) reduced_[j] -= rows_[i][j];
      }
    }
  }

  Result solve() {
    Result out;
    bool bland = false;
    std::size_t degenerate_streak = 0;
    while (true) {
      const std::optional<std::size_t> entering = choose_entering(bland);
      if (!entering) break;
      const std::optional<std::size_t> leaving = choose_leaving(*entering);
      if (!leaving) throw Error(ErrorCode::InvalidArgument, "phase-one objective unbounded (internal error)");
      if (sgn(rows_[*leaving][rhs_]) == 0) {
        if (++degenerate_streak >= kDegenerateStreakBeforeBland) bland = true;
      } else {
        degenerate_streak = 0;
      }
      pivot(*leaving, *entering);
      ++out.pivots;
    }

    // reduced_[rhs_] holds -w.
    out.feasible = sgn(reduced_[rhs_]) == 0;
    if (out.feasible) {
      out.point.assign(static_cast<std::size_t>(num_vars_), Rational(0));
      for (std::size_t i = 0; i < m_; ++i) {
        if (basis_[i] < num_vars_) out.point[static_cast<std::size_t>(basis_[i])] = rows_[i][rhs_];
      }
    } else {
      out.certificate.resize(m_);
      for (std::size_t i = 0; i < m_; ++i) {
        const auto col = static_cast<std::size_t>(initial_basis_[i]);
        const Rational u = cost_[col] - reduced_[col];
        out.certificate[i] = -sign_[i] * u;
      }
    }
    return out;
  }

 private:
  std::optional<std::size_t> choose_entering(bool bland) const {
    std::optional<std::size_t> best;
    for (std::size_t j = 0; j < static_cast<std::size_t>(first_artificial_); ++j) {
      if (sgn(reduced_[j]) >= 0) continue;
      if (bland) return j;
      if (!best || reduced_[j] < reduced_[*best]) best = j;
    }
    return best;
  }

  std::optional<std::size_t> choose_leaving(std::size_t col) const {
    std::optional<std::size_t> best;
    Rational best_ratio;
    for (std::size_t i = 0; i < m_; ++i) {
      if (sgn(rows_[i][col]) <= 0) continue;
      Rational ratio = rows_[i][rhs_] / rows_[i][col];
      if (!best || ratio < best_ratio || (ratio == best_ratio && basis_[i] < basis_[*best])) {
        best = i;
        best_ratio = std::move(ratio);
      }
    }
    return best;
  }

  void pivot(std::size_t pr, std::size_t pc) {
    auto& prow = rows_[pr];
    const Rational inv = 1 / prow[pc];
    nonzeros_.clear();
    for (std::size_t j = 0; j < width_; ++j) {
      if (sgn(prow[j]) != 0) {
        prow[j] *= inv;
        nonzeros_.push_back(j);
      }
    }
    auto eliminate = [&](std::vector<Rational>& row) {
      if (sgn(row[pc]) == 0) return;
      const Rational factor = row[pc];
      for (std::size_t j : nonzeros_) {
        tmp_ = factor * prow[j];
        row[j] -= tmp_;
      }
    };
    for (std::size_t i = 0; i < m_; ++i) {
      if (i != pr) eliminate(rows_[i]);
    }
    eliminate(reduced_);
    basis_[pr] = static_cast<int>(pc);
  }

  int num_vars_;
  std::size_t m_;
  std::size_t width_ = 0;
  std::size_t rhs_ = 0;
  int first_artificial_ = 0;
  std::vector<int> sign_;
  std::vector<int> basis_;
  std::vector<int> initial_basis_;
  std::vector<std::vector<Rational>> rows_;
  std::vector<Rational> cost_;
  std::vector<Rational> reduced_;
  std::vector<std::size_t> nonzeros_;
  Rational tmp_;
};

Rational row_activity(const Row& row, const std::vector<Rational>& point) {
  Rational sum = 0;
  for (const auto& [var, coeff] : row.coeffs) sum += coeff * point[static_cast<std::size_t>(var)];
  return sum;
}

}  // namespace

Result solve_feasibility(const Problem& problem) {
  if (problem.num_vars < 0) throw Error(ErrorCode::InvalidArgument, "negative variable count");
  Tableau tableau(problem);
  return tableau.solve();
}

bool satisfies(const Problem& problem, const std::vector<Rational>& point) {
  if (point.size() != static_cast<std::size_t>(problem.num_vars)) return false;
  for (const auto& v : point) {
    if (v < 0) return false;
  }
  for (const auto& row : problem.rows) {
    const Rational lhs = row_activity(row, point);
    switch (row.sense) {
      case Sense::LessEqual:
        if (lhs > row.rhs) return false;
        break;
      case Sense::Equal:
        if (lhs != row.rhs) return false;
        break;
      case Sense::GreaterEqual:
        if (lhs < row.rhs) return false;
        break;
    }
  }
  return true;
}

bool certifies_infeasible(const Problem& problem, const std::vector<Rational>& certificate) {
  if (certificate.size() != problem.rows.size()) return false;
  std::vector<Rational> column_sum(static_cast<std::size_t>(problem.num_vars));
  Rational rhs_sum = 0;
  for (std::size_t i = 0; i < problem.rows.size(); ++i) {
    const Row& row = problem.rows[i];
    const Rational& y = certificate[i];
    if (row.sense == Sense::LessEqual && y < 0) return false;
    if (row.sense == Sense::GreaterEqual && y > 0) return false;
    if (sgn(y) == 0) continue;
    for (const auto& [var, coeff] : row.coeffs) column_sum[static_cast<std::size_t>(var)] += y * coeff;
    rhs_sum += y * row.rhs;
  }
  for (const auto& s : column_sum) {
    if (s < 0) return false;
  }
  return rhs_sum < 0;
}

}  // namespace kserver::simplex
