#ifndef PLA_VERTEX_ORACLE_HPP_
#define PLA_VERTEX_ORACLE_HPP_

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "pla/core.hpp"

// Exhaustive reference for the allocation LP. Shares nothing with the
// simplex code paths on purpose; keep it that way.

namespace pla
{

namespace detail
{

// Gaussian elimination with partial pivoting; false when singular.
inline bool solve_square(std::vector<double> A, std::vector<double> b, std::size_t n,
  std::vector<double> & x)
{
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(A[r * n + col]) > std::abs(A[piv * n + col])) {
        piv = r;
      }
    }
    if (std::abs(A[piv * n + col]) < 1e-12) {
      return false;
    }
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(A[piv * n + j], A[col * n + j]);
      }
      std::swap(b[piv], b[col]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = A[r * n + col] / A[col * n + col];
      if (f == 0.0) {
        continue;
      }
      for (std::size_t j = col; j < n; ++j) {
        A[r * n + j] -= f * A[col * n + j];
      }
      b[r] -= f * b[col];
    }
  }
  x.assign(n, 0.0);
  for (std::size_t r = n; r-- > 0; ) {
    double acc = b[r];
    for (std::size_t j = r + 1; j < n; ++j) {
      acc -= A[r * n + j] * x[j];
    }
    x[r] = acc / A[r * n + r];
  }
  return true;
}

}  // namespace detail

/**
 * @brief Optimal allocation value by enumerating basic feasible solutions.
 *
 * Every vertex of {X >= 0, row sums <= I, column sums <= D} has mn active
 * constraints; each mn-subset of the mn+m+n constraints is solved as a square
 * system and kept when feasible. Limited to m*n <= 9.
 */
inline double brute_force_allocation(
  const Inventory & I, const DemandVector & D, double p, const Matrix & C)
{
  const std::size_t m = I.size(), n = D.size(), k = m * n;
  if (k > 9) {
    throw std::invalid_argument("brute_force_allocation: m*n must be at most 9");
  }
  if (k == 0) {
    return 0.0;
  }
  // Constraint rows as (coefficients over X, rhs), all read "row . X <= rhs"
  // with the nonnegativity rows written as -X_ij <= 0.
  const std::size_t total = k + m + n;
  std::vector<std::vector<double>> rows(total, std::vector<double>(k, 0.0));
  std::vector<double> rhs(total, 0.0);
  for (std::size_t e = 0; e < k; ++e) {
    rows[e][e] = -1.0;
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      rows[k + i][i * n + j] = 1.0;
    }
    rhs[k + i] = I[i];
  }
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      rows[k + m + j][i * n + j] = 1.0;
    }
    rhs[k + m + j] = D[j];
  }

  double best = 0.0;  // X = 0
  std::vector<std::size_t> pick(k);
  for (std::size_t e = 0; e < k; ++e) {
    pick[e] = e;
  }
  std::vector<double> A(k * k), b(k), x;
  for (;;) {
    for (std::size_t r = 0; r < k; ++r) {
      for (std::size_t c = 0; c < k; ++c) {
        A[r * k + c] = rows[pick[r]][c];
      }
      b[r] = rhs[pick[r]];
    }
    if (detail::solve_square(A, b, k, x)) {
      bool feasible = true;
      for (std::size_t r = 0; r < total && feasible; ++r) {
        double lhs = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
          lhs += rows[r][c] * x[c];
        }
        feasible = lhs <= rhs[r] + 1e-9 * (1.0 + std::abs(rhs[r]));
      }
      if (feasible) {
        double val = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          for (std::size_t j = 0; j < n; ++j) {
            val += (C(i, j) - p) * x[i * n + j];
          }
        }
        best = std::min(best, val);
      }
    }
    // next combination of k out of total
    std::size_t pos = k;
    while (pos > 0 && pick[pos - 1] == total - k + pos - 1) {
      --pos;
    }
    if (pos == 0) {
      break;
    }
    ++pick[pos - 1];
    for (std::size_t e = pos; e < k; ++e) {
      pick[e] = pick[e - 1] + 1;
    }
  }
  return best;
}

}  // namespace pla

#endif  // PLA_VERTEX_ORACLE_HPP_
