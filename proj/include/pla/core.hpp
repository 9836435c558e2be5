#ifndef PLA_CORE_HPP_
#define PLA_CORE_HPP_

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pla
{

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Feasibility tolerance shared by the LP routines.
inline constexpr double kFeasTol = 1e-9;

/**
 * @brief Dense row-major matrix of doubles.
 *
 * Only what the allocation and scenario LPs need; not a linear algebra type.
 */
class Matrix
{
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
  : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  Matrix(std::initializer_list<std::initializer_list<double>> init)
  {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto & row : init) {
      if (row.size() != cols_) {
        throw std::invalid_argument("Matrix: ragged initializer");
      }
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  std::size_t rows() const noexcept {return rows_;}
  std::size_t cols() const noexcept {return cols_;}
  std::size_t size() const noexcept {return data_.size();}

  double & operator()(std::size_t i, std::size_t j) noexcept {return data_[i * cols_ + j];}
  double operator()(std::size_t i, std::size_t j) const noexcept {return data_[i * cols_ + j];}

  const std::vector<double> & data() const noexcept {return data_;}
  std::vector<double> & data() noexcept {return data_;}

  friend bool operator==(const Matrix &, const Matrix &) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Inventory levels, one per supplier (units).
using Inventory = std::vector<double>;
/// Realized demands, one per consumer (units).
using DemandVector = std::vector<double>;

/**
 * @brief Known market parameters: costs, price cap and the declared bounds.
 *
 * These are available to the learner. The demand model is not.
 */
struct MarketParams
{
  std::size_t m = 0;          ///< suppliers
  std::size_t n = 0;          ///< consumers
  std::vector<double> gamma;  ///< unit inventory cost per supplier
  Matrix C;                   ///< unit supply cost, m x n
  double p_max = 1.0;
  double I_max = 1.0;         ///< bound on the total inventory
  double gamma_max = 1.0;
  double a_max = 1.0;
  double b_max = 1.0;

  std::size_t interval_count() const noexcept {return m * n + 1;}
};

inline double dot(const std::vector<double> & x, const std::vector<double> & y)
{
  return std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
}

inline double sum(const std::vector<double> & x)
{
  return std::accumulate(x.begin(), x.end(), 0.0);
}

/// The all-ones probe inventory, scaled down when m ones would exceed I_max.
inline Inventory probe_inventory(const MarketParams & market)
{
  const double level = std::min(1.0, market.I_max / static_cast<double>(market.m));
  return Inventory(market.m, level);
}

}  // namespace pla

#endif  // PLA_CORE_HPP_
