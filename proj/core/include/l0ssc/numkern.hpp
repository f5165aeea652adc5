#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace l0ssc {

// Raised when an input violates a documented precondition (bad sizes, rank
// deficiency where full rank is required, unparsable text).
class invalid_input : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a resource guard trips (enumeration too large, resampling
// exhausted). Distinct from invalid_input so callers can map exit codes.
class guard_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Tolerances shared across the numeric kernels.
inline constexpr double kOrthoTol = 1e-10;       // orthonormality / factor residue, per column
inline constexpr double kRankTol = 1e-10;        // smallest singular value treated as rank deficiency
inline constexpr double kDegreeFloor = 1e-12;    // graph degree floor before inverse sqrt
inline constexpr double kZeroColumnTol = 1e-12;  // column norm treated as zero in normalization

// Dense column-major matrix of doubles. Deliberately small: element access,
// a handful of products, and column views are all the callers need.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), v_(rows * cols, 0.0) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return v_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return v_[j * rows_ + i]; }
  double operator()(std::size_t i, std::size_t j) const { return v_[j * rows_ + i]; }

  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }

  std::span<double> col(std::size_t j) { return {v_.data() + j * rows_, rows_}; }
  std::span<const double> col(std::size_t j) const { return {v_.data() + j * rows_, rows_}; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> v_;
};

Matrix multiply(const Matrix& a, const Matrix& b);            // a * b
Matrix multiply_at_b(const Matrix& a, const Matrix& b);       // a^T * b
Matrix transpose(const Matrix& a);
Matrix select_columns(const Matrix& a, std::span<const std::size_t> idx);

std::vector<double> matvec(const Matrix& a, std::span<const double> x);     // a * x
std::vector<double> matvec_t(const Matrix& a, std::span<const double> x);   // a^T * x

double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);
double frobenius_norm(const Matrix& a);

struct QrResult {
  Matrix q;  // rows x cols, orthonormal columns
  Matrix r;  // cols x cols, upper triangular, nonnegative diagonal
};

// Householder QR, thin form. Requires rows >= cols. Reflector signs are
// resolved so that diag(R) >= 0, which makes the factorization unique for
// full-rank input and reproducible across platforms.
QrResult qr_decompose(const Matrix& a);

struct EigenResult {
  std::vector<double> values;  // descending
  Matrix vectors;              // orthonormal columns, vectors.col(k) pairs with values[k]
};

// Cyclic Jacobi for symmetric input (symmetry is enforced from the lower
// triangle). Sweeps until off-diagonal mass is below tolerance.
EigenResult sym_eigen(const Matrix& s);

// Singular values, descending, min(rows, cols) of them. Computed from the
// eigenvalues of the smaller Gram matrix; negatives from roundoff clamp to 0.
std::vector<double> singular_values(const Matrix& a);

// Largest singular value via power iteration on the Gram matrix.
// Cheaper than singular_values when only sigma_1 is needed.
double spectral_norm(const Matrix& a);

// Minimizes |a*x - b|_2 via QR. Requires full column rank
// (smallest singular value > kRankTol); throws invalid_input otherwise.
std::vector<double> least_squares(const Matrix& a, std::span<const double> b);

// Distance from x to the column span of basis: |x - basis * c| with c the
// least-squares coefficients. An empty basis (0 columns) spans {0}, so the
// distance is |x|.
double subspace_distance(std::span<const double> x, const Matrix& basis);

}  // namespace l0ssc
