#include "l0ssc/model.hpp"

#include <algorithm>
#include <string>

namespace l0ssc {

int SubspaceEnsemble::max_dim() const {
  int m = 0;
  for (int dk : dims) m = std::max(m, dk);
  return m;
}

std::size_t SparseCodeMatrix::support_size(std::size_t i) const {
  std::size_t c = 0;
  for (std::size_t r = 0; r < z.rows(); ++r)
    if (z(r, i) != 0.0) ++c;
  return c;
}

Matrix normalize_columns(const Matrix& x) {
  Matrix out = x;
  for (std::size_t j = 0; j < x.cols(); ++j) {
    const double nj = norm2(x.col(j));
    if (nj <= kZeroColumnTol)
      throw invalid_input("normalize_columns: column " + std::to_string(j) + " has zero norm");
    for (std::size_t i = 0; i < x.rows(); ++i) out(i, j) /= nj;
  }
  return out;
}

}  // namespace l0ssc
