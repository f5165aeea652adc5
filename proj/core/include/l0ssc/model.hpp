#pragma once

#include <cstdint>
#include <vector>

#include "l0ssc/numkern.hpp"

namespace l0ssc {

// Observed data, one point per column. unit_columns records whether the
// columns have been normalized; consumers that assume unit norms check it.
struct DataMatrix {
  Matrix x;
  bool unit_columns = false;

  std::size_t dim() const { return x.rows(); }
  std::size_t count() const { return x.cols(); }
};

// Ground-truth union-of-subspaces structure: per-class orthonormal bases,
// class sizes via labels, and the noise radius the corruption respected.
struct SubspaceEnsemble {
  std::vector<Matrix> bases;   // bases[k]: d x dims[k], orthonormal columns
  std::vector<int> dims;       // subspace dimensions d_k
  std::vector<int> labels;     // class of each point, 0-based, size n
  double noise_bound = 0.0;    // per-point l2 noise radius delta

  std::size_t classes() const { return bases.size(); }
  int max_dim() const;
};

// A generated problem: clean points, observed (possibly corrupted) points,
// the structure they came from, and the seed that reproduces everything.
struct Instance {
  SubspaceEnsemble ensemble;
  Matrix clean;     // d x n, columns unit norm by construction
  Matrix observed;  // clean + noise, per-column noise norm <= noise_bound
  std::uint64_t seed = 0;
};

// Self-representation coefficients, column i codes point i, diagonal zero.
struct SparseCodeMatrix {
  Matrix z;

  std::size_t support_size(std::size_t i) const;
};

// Scales every column to unit norm. Throws invalid_input if any column has
// norm <= kZeroColumnTol. Idempotent up to roundoff.
Matrix normalize_columns(const Matrix& x);

}  // namespace l0ssc
