#ifndef PLA_TRANSPORT_HPP_
#define PLA_TRANSPORT_HPP_

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pla/core.hpp"

namespace pla
{

/**
 * @brief Optimal second-stage allocation with its dual certificate.
 *
 * objective = sum_ij (C_ij - p) X_ij. The duals satisfy
 * C_ij - p + lambda_i + eta_j >= 0 and objective = -lambda.I - eta.D.
 */
struct AllocationResult
{
  Matrix X;
  double objective = 0.0;
  std::vector<double> lambda;  ///< inventory rows
  std::vector<double> eta;     ///< demand columns
  std::size_t pivots = 0;
};

namespace detail
{

/**
 * Balanced transportation tableau on (m+1) x (n+1) cells. Row m is the
 * disposal source feeding unmet demand, column n the disposal sink absorbing
 * unused inventory; both carry zero cost. The basis is a spanning tree over
 * the row and column nodes.
 */
class TransportSimplex
{
public:
  TransportSimplex(const Inventory & I, const DemandVector & D, double p, const Matrix & C)
  : m_(I.size()), n_(D.size()), R_(m_ + 1), K_(n_ + 1),
    cost_(R_ * K_, 0.0), flow_(R_ * K_, 0.0), basic_(R_ * K_, false)
  {
    if (C.rows() != m_ || C.cols() != n_) {
      throw std::invalid_argument("solve_allocation: C shape does not match I and D");
    }
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        cost_[cell(i, j)] = C(i, j) - p;
      }
    }
    supply_.resize(R_);
    demand_.resize(K_);
    double total_I = 0.0, total_D = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      supply_[i] = std::max(0.0, I[i]);
      total_I += supply_[i];
    }
    for (std::size_t j = 0; j < n_; ++j) {
      demand_[j] = std::max(0.0, D[j]);
      total_D += demand_[j];
    }
    supply_[m_] = total_D;
    demand_[n_] = total_I;
    scale_ = 1.0;
    for (double c : cost_) {
      scale_ = std::max(scale_, std::abs(c));
    }
  }

  AllocationResult solve()
  {
    northwest_corner();
    std::size_t pivots = 0;
    for (;;) {
      compute_potentials();
      const std::size_t enter = entering_cell();
      if (enter == kNone) {
        break;
      }
      pivot(enter);
      ++pivots;
    }
    return extract(pivots);
  }

private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  std::size_t cell(std::size_t i, std::size_t j) const noexcept {return i * K_ + j;}

  // Staircase initial basis: exactly R+K-1 cells, always a spanning tree, zero
  // flows allowed (degenerate basics).
  void northwest_corner()
  {
    std::vector<double> s = supply_, d = demand_;
    std::size_t i = 0, j = 0;
    for (;;) {
      const double x = std::min(s[i], d[j]);
      flow_[cell(i, j)] = x;
      basic_[cell(i, j)] = true;
      s[i] -= x;
      d[j] -= x;
      if (i + 1 == R_ && j + 1 == K_) {
        break;
      }
      if (j + 1 == K_ || (i + 1 < R_ && s[i] <= d[j])) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  void compute_potentials()
  {
    u_.assign(R_, kNaN);
    v_.assign(K_, kNaN);
    u_[0] = 0.0;
    std::vector<std::size_t> stack{0};  // node ids: rows 0..R-1, cols R..R+K-1
    while (!stack.empty()) {
      const std::size_t node = stack.back();
      stack.pop_back();
      if (node < R_) {
        for (std::size_t j = 0; j < K_; ++j) {
          if (basic_[cell(node, j)] && std::isnan(v_[j])) {
            v_[j] = cost_[cell(node, j)] - u_[node];
            stack.push_back(R_ + j);
          }
        }
      } else {
        const std::size_t j = node - R_;
        for (std::size_t i = 0; i < R_; ++i) {
          if (basic_[cell(i, j)] && std::isnan(u_[i])) {
            u_[i] = cost_[cell(i, j)] - v_[j];
            stack.push_back(i);
          }
        }
      }
    }
  }

  double reduced(std::size_t i, std::size_t j) const
  {
    return cost_[cell(i, j)] - u_[i] - v_[j];
  }

  // Bland: lowest-index cell with negative reduced cost.
  std::size_t entering_cell() const
  {
    const double tol = 1e-12 * scale_;
    for (std::size_t i = 0; i < R_; ++i) {
      for (std::size_t j = 0; j < K_; ++j) {
        if (!basic_[cell(i, j)] && reduced(i, j) < -tol) {
          return cell(i, j);
        }
      }
    }
    return kNone;
  }

  // Tree path from row node `ri` to column node `cj`, as the list of basic
  // cells traversed in order.
  std::vector<std::size_t> tree_path(std::size_t ri, std::size_t cj) const
  {
    const std::size_t nodes = R_ + K_;
    std::vector<std::size_t> parent(nodes, kNone), via(nodes, kNone);
    std::vector<bool> seen(nodes, false);
    std::vector<std::size_t> queue{ri};
    seen[ri] = true;
    for (std::size_t q = 0; q < queue.size(); ++q) {
      const std::size_t node = queue[q];
      if (node == R_ + cj) {
        break;
      }
      if (node < R_) {
        for (std::size_t j = 0; j < K_; ++j) {
          const std::size_t c = cell(node, j);
          if (basic_[c] && !seen[R_ + j]) {
            seen[R_ + j] = true;
            parent[R_ + j] = node;
            via[R_ + j] = c;
            queue.push_back(R_ + j);
          }
        }
      } else {
        const std::size_t j = node - R_;
        for (std::size_t i = 0; i < R_; ++i) {
          const std::size_t c = cell(i, j);
          if (basic_[c] && !seen[i]) {
            seen[i] = true;
            parent[i] = node;
            via[i] = c;
            queue.push_back(i);
          }
        }
      }
    }
    std::vector<std::size_t> path;
    for (std::size_t node = R_ + cj; node != ri; node = parent[node]) {
      path.push_back(via[node]);
    }
    // path runs from column cj back to row ri; the cell touching cj first
    return path;
  }

  void pivot(std::size_t enter)
  {
    const std::size_t ei = enter / K_, ej = enter % K_;
    // Cycle: enter (+), then walk the tree from column ej back to row ei.
    // Cells alternate -, +, -, ... along that walk.
    const auto path = tree_path(ei, ej);
    double theta = kInf;
    std::size_t leave = kNone;
    for (std::size_t k = 0; k < path.size(); k += 2) {
      const std::size_t c = path[k];
      const bool smaller = flow_[c] < theta - 1e-15;
      const bool tie = !smaller && flow_[c] <= theta + 1e-15 && c < leave;
      if (smaller || tie) {
        theta = std::min(theta, flow_[c]);
        leave = c;
      }
    }
    theta = std::max(0.0, theta);
    flow_[enter] = theta;
    for (std::size_t k = 0; k < path.size(); ++k) {
      const std::size_t c = path[k];
      flow_[c] += (k % 2 == 0) ? -theta : theta;
    }
    flow_[leave] = 0.0;
    basic_[leave] = false;
    basic_[enter] = true;
  }

  AllocationResult extract(std::size_t pivots) const
  {
    AllocationResult res;
    res.pivots = pivots;
    res.X = Matrix(m_, n_);
    res.objective = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        const double x = std::max(0.0, flow_[cell(i, j)]);
        res.X(i, j) = x;
        res.objective += cost_[cell(i, j)] * x;
      }
    }
    res.lambda.resize(m_);
    res.eta.resize(n_);
    for (std::size_t i = 0; i < m_; ++i) {
      res.lambda[i] = std::max(0.0, -(u_[i] + v_[n_]));
    }
    for (std::size_t j = 0; j < n_; ++j) {
      res.eta[j] = std::max(0.0, -(u_[m_] + v_[j]));
    }
    return res;
  }

  std::size_t m_, n_, R_, K_;
  std::vector<double> cost_, flow_;
  std::vector<bool> basic_;
  std::vector<double> supply_, demand_;
  std::vector<double> u_, v_;
  double scale_ = 1.0;
};

}  // namespace detail

/**
 * @brief Optimal allocation of inventory I to demand D at price p.
 *
 * Solves min sum (C_ij - p) X_ij over X >= 0 with row sums <= I and column
 * sums <= D. Transportation simplex on the graph augmented with a zero-cost
 * disposal row and column, which turns both capacity families into
 * equalities. Returns a vertex solution.
 */
inline AllocationResult solve_allocation(
  const Inventory & I, const DemandVector & D, double p, const Matrix & C)
{
  if (I.empty() || D.empty()) {
    AllocationResult res;
    res.X = Matrix(I.size(), D.size());
    res.lambda.assign(I.size(), 0.0);
    res.eta.assign(D.size(), 0.0);
    return res;
  }
  detail::TransportSimplex solver(I, D, p, C);
  return solver.solve();
}

/// The (lambda, eta) certificate carried by a solve.
inline std::pair<std::vector<double>, std::vector<double>> extract_duals(const AllocationResult & r)
{
  return {r.lambda, r.eta};
}

/// Value of the allocation dual -lambda.I - eta.D.
inline double dual_objective(const AllocationResult & r, const Inventory & I, const DemandVector & D)
{
  return -dot(r.lambda, I) - dot(r.eta, D);
}

/// Largest violation of C_ij - p + lambda_i + eta_j >= 0 (0 when feasible).
inline double dual_infeasibility(const AllocationResult & r, double p, const Matrix & C)
{
  double worst = 0.0;
  for (std::size_t i = 0; i < C.rows(); ++i) {
    for (std::size_t j = 0; j < C.cols(); ++j) {
      worst = std::max(worst, -(C(i, j) - p + r.lambda[i] + r.eta[j]));
    }
  }
  return worst;
}

/// g(I, p, D): objective of the optimal allocation.
inline double allocation_value(
  const Inventory & I, const DemandVector & D, double p, const Matrix & C)
{
  return solve_allocation(I, D, p, C).objective;
}

}  // namespace pla

#endif  // PLA_TRANSPORT_HPP_
