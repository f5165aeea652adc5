#include "l0ssc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <thread>

namespace l0ssc {

void hard_threshold(std::vector<double>& u, double threshold) {
  for (auto& v : u)
    if (std::abs(v) <= threshold) v = 0.0;
}

double objective(const Matrix& x, std::size_t i, std::span<const double> beta, double lambda) {
  if (beta.size() != x.cols()) throw invalid_input("objective: beta size mismatch");
  std::vector<double> r(x.rows());
  std::copy_n(x.col(i).data(), x.rows(), r.data());
  std::size_t nnz = 0;
  for (std::size_t j = 0; j < beta.size(); ++j) {
    const double bj = beta[j];
    if (bj == 0.0) continue;
    ++nnz;
    const double* xj = x.col(j).data();
    for (std::size_t q = 0; q < r.size(); ++q) r[q] -= xj[q] * bj;
  }
  return dot(r, r) + lambda * double(nnz);
}

namespace {

PointSolution solve_point_with_step(const Matrix& x, std::size_t i, const SolverOptions& opts,
                                    std::optional<std::span<const double>> init, double s) {
  const std::size_t n = x.cols(), d = x.rows();
  const double threshold = std::sqrt(2.0 * opts.lambda * s);

  std::vector<double> beta(n, 0.0);
  if (init) {
    if (init->size() != n) throw invalid_input("pgd_solve_point: init size mismatch");
    std::copy(init->begin(), init->end(), beta.begin());
    beta[i] = 0.0;
  }

  PointSolution out;
  out.trace.objectives.push_back(objective(x, i, beta, opts.lambda));

  std::vector<double> r(d), u(n);
  for (int t = 0; t < opts.max_iter; ++t) {
    // r = x_i - X beta, exploiting the sparsity of beta.
    std::copy_n(x.col(i).data(), d, r.data());
    for (std::size_t j = 0; j < n; ++j) {
      const double bj = beta[j];
      if (bj == 0.0) continue;
      const double* xj = x.col(j).data();
      for (std::size_t q = 0; q < d; ++q) r[q] -= xj[q] * bj;
    }
    // u = beta - s * grad = beta + 2s X^T r; the diagonal constraint zeroes
    // component i before thresholding every iteration.
    for (std::size_t j = 0; j < n; ++j) u[j] = beta[j] + 2.0 * s * dot(x.col(j), r);
    u[i] = 0.0;
    hard_threshold(u, threshold);
    beta.swap(u);

    out.trace.objectives.push_back(objective(x, i, beta, opts.lambda));
    const auto& obj = out.trace.objectives;
    out.trace.iterations = t + 1;
    if (std::abs(obj[obj.size() - 1] - obj[obj.size() - 2]) < opts.tol) {
      out.trace.converged = true;
      break;
    }
  }
  out.beta = std::move(beta);
  return out;
}

}  // namespace

PointSolution pgd_solve_point(const Matrix& x, std::size_t i, const SolverOptions& opts,
                              std::optional<std::span<const double>> init,
                              double step_override) {
  if (i >= x.cols()) throw invalid_input("pgd_solve_point: column index out of range");
  if (opts.lambda < 0.0) throw invalid_input("pgd_solve_point: lambda must be nonnegative");
  double s = step_override > 0.0 ? step_override : opts.step;
  if (s == 0.0) {
    const double s1 = spectral_norm(x);
    if (s1 <= 0.0) throw invalid_input("pgd_solve_point: zero matrix");
    s = 0.9 / (2.0 * s1 * s1);
  }
  if (s <= 0.0) throw invalid_input("pgd_solve_point: step must be positive");
  return solve_point_with_step(x, i, opts, init, s);
}

SolveResult solve_all(const Matrix& x, const SolverOptions& opts, const Matrix* init) {
  const std::size_t n = x.cols();
  if (n == 0) throw invalid_input("solve_all: empty input");
  if (init && (init->rows() != n || init->cols() != n))
    throw invalid_input("solve_all: init must be n x n");
  if (opts.lambda < 0.0) throw invalid_input("solve_all: lambda must be nonnegative");

  double s = opts.step;
  if (s == 0.0) {
    const double s1 = spectral_norm(x);
    if (s1 <= 0.0) throw invalid_input("solve_all: zero matrix");
    s = 0.9 / (2.0 * s1 * s1);
  }

  SolveResult out;
  out.step_used = s;
  out.codes.z = Matrix(n, n);
  out.traces.resize(n);

  const unsigned hw = std::thread::hardware_concurrency();
  const std::size_t workers = std::min<std::size_t>(n, hw ? hw : 1);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::exception_ptr first_error;
  std::mutex error_mutex;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) {
          std::optional<std::span<const double>> col_init;
          if (init) col_init = init->col(i);
          PointSolution ps = solve_point_with_step(x, i, opts, col_init, s);
          for (std::size_t j = 0; j < n; ++j) out.codes.z(j, i) = ps.beta[j];
          out.traces[i] = std::move(ps.trace);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

}  // namespace l0ssc
