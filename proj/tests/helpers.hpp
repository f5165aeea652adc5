#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "l0ssc/numkern.hpp"
#include "l0ssc/rng.hpp"

namespace testutil {

// Builds a matrix from row-major literals, the order they read on the page.
inline l0ssc::Matrix mat(std::size_t rows, std::size_t cols,
                         std::initializer_list<double> rowmajor) {
  l0ssc::Matrix m(rows, cols);
  auto it = rowmajor.begin();
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = *it++;
  return m;
}

inline double max_abs_diff(const l0ssc::Matrix& a, const l0ssc::Matrix& b) {
  double worst = 0.0;
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i)
      worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
  return worst;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    worst = std::max(worst, std::abs(a[k] - b[k]));
  return worst;
}

// Gaussian fill, column by column, for quick random fixtures.
inline l0ssc::Matrix random_matrix(std::size_t rows, std::size_t cols, l0ssc::Rng& rng) {
  l0ssc::Matrix m(rows, cols);
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = rng.gaussian();
  return m;
}

// Orthonormality residue of the columns: max |Q^T Q - I|.
inline double ortho_residue(const l0ssc::Matrix& q) {
  const auto g = l0ssc::multiply_at_b(q, q);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j)
      worst = std::max(worst, std::abs(g(i, j) - (i == j ? 1.0 : 0.0)));
  return worst;
}

}  // namespace testutil
