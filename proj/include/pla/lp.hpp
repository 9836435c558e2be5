#ifndef PLA_LP_HPP_
#define PLA_LP_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "pla/core.hpp"

namespace pla::lp
{

/**
 * @brief Inequality-form linear program.
 *
 *   minimize    c^T x
 *   subject to  A x <= b,   x >= 0
 *
 * b may have any sign. Rows with negative right-hand side are handled by a
 * phase-one pass with artificial variables.
 */
struct Problem
{
  Matrix A;
  std::vector<double> b;
  std::vector<double> c;
};

enum class Status { optimal, infeasible, unbounded };

struct Solution
{
  Status status = Status::infeasible;
  std::vector<double> x;
  double objective = 0.0;
  /// Multipliers of the rows, all >= 0, so that c + A^T duals >= 0 and the
  /// dual value -b^T duals equals the objective.
  std::vector<double> duals;
  std::size_t pivots = 0;
};

namespace detail
{

/**
 * Dense tableau. Columns: [x (n) | slacks (rows) | artificials (k)], then rhs.
 * Bland's rule for both entering and leaving choices, so degenerate pivots
 * cannot cycle.
 */
class Tableau
{
public:
  Tableau(const Problem & prob)
  : rows_(prob.A.rows()), nx_(prob.A.cols())
  {
    if (prob.b.size() != rows_ || prob.c.size() != nx_) {
      throw std::invalid_argument("lp::Problem: dimension mismatch");
    }
    flipped_.assign(rows_, false);
    std::size_t n_art = 0;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (prob.b[r] < 0.0) {
        flipped_[r] = true;
        ++n_art;
      }
    }
    cols_ = nx_ + rows_ + n_art;
    width_ = cols_ + 1;
    t_.assign(rows_ * width_, 0.0);
    basis_.assign(rows_, 0);

    std::size_t art = nx_ + rows_;
    for (std::size_t r = 0; r < rows_; ++r) {
      const double sign = flipped_[r] ? -1.0 : 1.0;
      for (std::size_t j = 0; j < nx_; ++j) {
        at(r, j) = sign * prob.A(r, j);
      }
      at(r, nx_ + r) = sign;
      rhs(r) = sign * prob.b[r];
      if (flipped_[r]) {
        at(r, art) = 1.0;
        basis_[r] = art++;
      } else {
        basis_[r] = nx_ + r;
      }
    }
    art_begin_ = nx_ + rows_;
  }

  Solution solve(const std::vector<double> & c)
  {
    Solution sol;
    if (art_begin_ < cols_) {
      std::vector<double> phase1(cols_, 0.0);
      for (std::size_t j = art_begin_; j < cols_; ++j) {
        phase1[j] = 1.0;
      }
      run(phase1, cols_, sol.pivots);
      double infeas = 0.0;
      for (std::size_t r = 0; r < rows_; ++r) {
        if (basis_[r] >= art_begin_) {
          infeas += rhs(r);
        }
      }
      if (infeas > 1e-7 * (1.0 + max_abs_rhs())) {
        sol.status = Status::infeasible;
        return sol;
      }
      drive_out_artificials(sol.pivots);
    }

    std::vector<double> cost(cols_, 0.0);
    for (std::size_t j = 0; j < nx_; ++j) {
      cost[j] = c[j];
    }
    if (!run(cost, art_begin_, sol.pivots)) {
      sol.status = Status::unbounded;
      return sol;
    }

    sol.status = Status::optimal;
    sol.x.assign(nx_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r) {
      if (basis_[r] < nx_) {
        sol.x[basis_[r]] = std::max(0.0, rhs(r));
      }
    }
    sol.objective = 0.0;
    for (std::size_t j = 0; j < nx_; ++j) {
      sol.objective += c[j] * sol.x[j];
    }
    const auto d = reduced_costs(cost, art_begin_);
    sol.duals.assign(rows_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r) {
      sol.duals[r] = std::max(0.0, d[nx_ + r]);
    }
    return sol;
  }

private:
  double & at(std::size_t r, std::size_t j) {return t_[r * width_ + j];}
  double at(std::size_t r, std::size_t j) const {return t_[r * width_ + j];}
  double & rhs(std::size_t r) {return t_[r * width_ + cols_];}
  double rhs(std::size_t r) const {return t_[r * width_ + cols_];}

  double max_abs_rhs() const
  {
    double v = 0.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      v = std::max(v, std::abs(rhs(r)));
    }
    return v;
  }

  std::vector<double> reduced_costs(const std::vector<double> & cost, std::size_t ncols) const
  {
    std::vector<double> d(cost.begin(), cost.begin() + static_cast<std::ptrdiff_t>(ncols));
    for (std::size_t r = 0; r < rows_; ++r) {
      const double cb = cost[basis_[r]];
      if (cb == 0.0) {
        continue;
      }
      for (std::size_t j = 0; j < ncols; ++j) {
        d[j] -= cb * at(r, j);
      }
    }
    return d;
  }

  void pivot(std::size_t pr, std::size_t pc)
  {
    const double inv = 1.0 / at(pr, pc);
    for (std::size_t j = 0; j < width_; ++j) {
      at(pr, j) *= inv;
    }
    at(pr, pc) = 1.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == pr) {
        continue;
      }
      const double f = at(r, pc);
      if (f == 0.0) {
        continue;
      }
      for (std::size_t j = 0; j < width_; ++j) {
        at(r, j) -= f * at(pr, j);
      }
      at(r, pc) = 0.0;
    }
    basis_[pr] = pc;
  }

  // Returns false when unbounded. Only columns < ncols may enter.
  bool run(const std::vector<double> & cost, std::size_t ncols, std::size_t & pivots)
  {
    double scale = 1.0;
    for (std::size_t j = 0; j < ncols; ++j) {
      scale = std::max(scale, std::abs(cost[j]));
    }
    const double dtol = 1e-11 * scale;
    constexpr double ptol = 1e-12;
    for (;;) {
      const auto d = reduced_costs(cost, ncols);
      std::size_t enter = ncols;
      for (std::size_t j = 0; j < ncols; ++j) {
        if (d[j] < -dtol && !is_basic(j)) {
          enter = j;
          break;
        }
      }
      if (enter == ncols) {
        return true;
      }
      std::size_t leave = rows_;
      double best = kInf;
      for (std::size_t r = 0; r < rows_; ++r) {
        const double a = at(r, enter);
        if (a > ptol) {
          const double ratio = std::max(0.0, rhs(r)) / a;
          if (ratio < best - 1e-14 ||
            (std::abs(ratio - best) <= 1e-14 && leave < rows_ && basis_[r] < basis_[leave]))
          {
            best = ratio;
            leave = r;
          }
        }
      }
      if (leave == rows_) {
        return false;
      }
      pivot(leave, enter);
      ++pivots;
    }
  }

  bool is_basic(std::size_t j) const
  {
    for (auto b : basis_) {
      if (b == j) {
        return true;
      }
    }
    return false;
  }

  // After phase one, artificials still basic sit at zero level; pivot them out
  // on any non-artificial column, or leave them when the row is redundant.
  void drive_out_artificials(std::size_t & pivots)
  {
    for (std::size_t r = 0; r < rows_; ++r) {
      if (basis_[r] < art_begin_) {
        continue;
      }
      for (std::size_t j = 0; j < art_begin_; ++j) {
        if (std::abs(at(r, j)) > 1e-9 && !is_basic(j)) {
          pivot(r, j);
          ++pivots;
          break;
        }
      }
    }
    // Zero the artificial columns so they can never re-enter.
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t j = art_begin_; j < cols_; ++j) {
        if (basis_[r] != j) {
          at(r, j) = 0.0;
        }
      }
    }
  }

  std::size_t rows_;
  std::size_t nx_;
  std::size_t cols_ = 0;
  std::size_t width_ = 0;
  std::size_t art_begin_ = 0;
  std::vector<double> t_;
  std::vector<std::size_t> basis_;
  std::vector<bool> flipped_;
};

}  // namespace detail

/// Solves the problem with a two-phase dense simplex under Bland's rule.
inline Solution solve(const Problem & prob)
{
  detail::Tableau tab(prob);
  return tab.solve(prob.c);
}

}  // namespace pla::lp

#endif  // PLA_LP_HPP_
