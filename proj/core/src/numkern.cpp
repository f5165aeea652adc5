#include "l0ssc/numkern.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace l0ssc {

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw invalid_input("multiply: inner dimensions disagree");
  Matrix c(a.rows(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double bkj = b(k, j);
      if (bkj == 0.0) continue;
      const double* ak = a.data() + k * a.rows();
      double* cj = c.data() + j * c.rows();
      for (std::size_t i = 0; i < a.rows(); ++i) cj[i] += ak[i] * bkj;
    }
  }
  return c;
}

Matrix multiply_at_b(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw invalid_input("multiply_at_b: row counts disagree");
  Matrix c(a.cols(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j)
    for (std::size_t i = 0; i < a.cols(); ++i) c(i, j) = dot(a.col(i), b.col(j));
  return c;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) t(j, i) = a(i, j);
  return t;
}

Matrix select_columns(const Matrix& a, std::span<const std::size_t> idx) {
  Matrix s(a.rows(), idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] >= a.cols()) throw invalid_input("select_columns: index out of range");
    std::copy_n(a.col(idx[k]).data(), a.rows(), s.col(k).data());
  }
  return s;
}

std::vector<double> matvec(const Matrix& a, std::span<const double> x) {
  if (x.size() != a.cols()) throw invalid_input("matvec: size mismatch");
  std::vector<double> y(a.rows(), 0.0);
  for (std::size_t j = 0; j < a.cols(); ++j) {
    const double xj = x[j];
    if (xj == 0.0) continue;
    const double* aj = a.data() + j * a.rows();
    for (std::size_t i = 0; i < a.rows(); ++i) y[i] += aj[i] * xj;
  }
  return y;
}

std::vector<double> matvec_t(const Matrix& a, std::span<const double> x) {
  if (x.size() != a.rows()) throw invalid_input("matvec_t: size mismatch");
  std::vector<double> y(a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) y[j] = dot(a.col(j), x);
  return y;
}

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

double frobenius_norm(const Matrix& a) {
  return norm2({a.data(), a.rows() * a.cols()});
}

QrResult qr_decompose(const Matrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  if (m < n) throw invalid_input("qr_decompose: requires rows >= cols");
  if (n == 0) throw invalid_input("qr_decompose: empty input");

  // Work on a copy; accumulate Householder vectors in-place below the diagonal.
  Matrix w = a;
  std::vector<double> tau(n, 0.0);

  for (std::size_t k = 0; k < n; ++k) {
    double alpha = 0.0;
    for (std::size_t i = k; i < m; ++i) alpha += w(i, k) * w(i, k);
    alpha = std::sqrt(alpha);
    const double akk = w(k, k);
    // Reflect onto -sign(akk) * alpha so the pivot of the reflected column is
    // positive, giving diag(R) >= 0 without a separate sign pass.
    const double beta = (akk >= 0.0) ? -alpha : alpha;
    if (alpha == 0.0) {
      tau[k] = 0.0;  // column already zero below and at the pivot
      continue;
    }
    const double v0 = akk - beta;
    tau[k] = -v0 / beta;  // 2 / (v^T v) with v scaled so v[k] = 1
    const double inv_v0 = 1.0 / v0;
    for (std::size_t i = k + 1; i < m; ++i) w(i, k) *= inv_v0;
    w(k, k) = beta;
    for (std::size_t j = k + 1; j < n; ++j) {
      double s = w(k, j);
      for (std::size_t i = k + 1; i < m; ++i) s += w(i, k) * w(i, j);
      s *= tau[k];
      w(k, j) -= s;
      for (std::size_t i = k + 1; i < m; ++i) w(i, j) -= s * w(i, k);
    }
  }

  // The pivot sign lands in beta; flipping row k of R together with column k
  // of Q leaves the product unchanged and makes diag(R) >= 0.
  std::vector<double> flip(n, 1.0);
  for (std::size_t k = 0; k < n; ++k) flip[k] = (w(k, k) < 0.0) ? -1.0 : 1.0;

  QrResult out;
  out.r = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i <= j; ++i) out.r(i, j) = flip[i] * w(i, j);

  // Materialize thin Q by applying the reflectors to the first n identity
  // columns, then flip the columns whose pivot sign was absorbed.
  out.q = Matrix(m, n);
  for (std::size_t j = 0; j < n; ++j) out.q(j, j) = 1.0;
  for (std::size_t kk = n; kk-- > 0;) {
    if (tau[kk] == 0.0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      double s = out.q(kk, j);
      for (std::size_t i = kk + 1; i < m; ++i) s += w(i, kk) * out.q(i, j);
      s *= tau[kk];
      out.q(kk, j) -= s;
      for (std::size_t i = kk + 1; i < m; ++i) out.q(i, j) -= s * w(i, kk);
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (flip[j] > 0.0) continue;
    for (std::size_t i = 0; i < m; ++i) out.q(i, j) = -out.q(i, j);
  }
  return out;
}

EigenResult sym_eigen(const Matrix& s) {
  const std::size_t n = s.rows();
  if (n == 0 || s.cols() != n) throw invalid_input("sym_eigen: square input required");

  // Symmetrize from the lower triangle so tiny asymmetries cannot stall the sweep.
  Matrix a(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) a(i, j) = (i >= j) ? s(i, j) : s(j, i);

  Matrix v = Matrix::identity(n);
  const double scale = frobenius_norm(a);
  const double stop = (scale > 0.0 ? scale : 1.0) * 1e-14;
  const int max_sweeps = 64;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t j = 1; j < n; ++j)
      for (std::size_t i = 0; i < j; ++i) off += a(i, j) * a(i, j);
    if (std::sqrt(2.0 * off) <= stop) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= stop / (2.0 * double(n))) continue;
        const double app = a(p, p), aqq = a(q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });

  EigenResult out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

std::vector<double> singular_values(const Matrix& a) {
  if (a.rows() == 0 || a.cols() == 0) throw invalid_input("singular_values: empty input");
  const bool use_gram_of_cols = a.cols() <= a.rows();
  Matrix g = use_gram_of_cols ? multiply_at_b(a, a) : multiply_at_b(transpose(a), transpose(a));
  EigenResult e = sym_eigen(g);
  std::vector<double> sv(e.values.size());
  for (std::size_t i = 0; i < sv.size(); ++i) sv[i] = std::sqrt(std::max(0.0, e.values[i]));
  return sv;
}

double spectral_norm(const Matrix& a) {
  const std::size_t n = a.cols();
  if (n == 0 || a.rows() == 0) throw invalid_input("spectral_norm: empty input");
  // Deterministic start: mixed integer hash keeps the vector generic.
  std::vector<double> x(n);
  std::uint64_t h = 0x9e3779b97f4a7c15ull;
  for (std::size_t i = 0; i < n; ++i) {
    h += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = h;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z ^= z >> 31;
    x[i] = 0.5 + double(z >> 11) * 0x1.0p-53;  // in (0.5, 1.5): no sign cancellation
  }
  double nx = norm2(x);
  for (auto& xi : x) xi /= nx;

  double lambda = 0.0;
  for (int it = 0; it < 200; ++it) {
    std::vector<double> y = matvec_t(a, matvec(a, x));  // Gram action without forming the Gram
    const double ny = norm2(y);
    if (ny == 0.0) return 0.0;
    for (std::size_t i = 0; i < n; ++i) y[i] /= ny;
    const double next = ny;  // Rayleigh quotient of the Gram since |x| = 1
    x.swap(y);
    if (it > 4 && std::abs(next - lambda) <= 1e-13 * std::max(1.0, next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return std::sqrt(std::max(0.0, lambda));
}

std::vector<double> least_squares(const Matrix& a, std::span<const double> b) {
  if (a.rows() != b.size()) throw invalid_input("least_squares: size mismatch");
  if (a.cols() == 0) return {};
  if (a.rows() < a.cols()) throw invalid_input("least_squares: underdetermined system");
  {
    std::vector<double> sv = singular_values(a);
    if (sv.back() <= kRankTol) throw invalid_input("least_squares: rank-deficient input");
  }
  QrResult qr = qr_decompose(a);
  std::vector<double> y = matvec_t(qr.q, b);
  // Back substitution on R.
  const std::size_t n = a.cols();
  std::vector<double> x(n, 0.0);
  for (std::size_t ii = n; ii-- > 0;) {
    double s = y[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= qr.r(ii, j) * x[j];
    x[ii] = s / qr.r(ii, ii);
  }
  return x;
}

double subspace_distance(std::span<const double> x, const Matrix& basis) {
  if (basis.cols() == 0) return norm2(x);
  std::vector<double> c = least_squares(basis, x);
  std::vector<double> proj = matvec(basis, c);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - proj[i];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace l0ssc
