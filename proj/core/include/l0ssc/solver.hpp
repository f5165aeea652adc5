#pragma once

#include <optional>
#include <vector>

#include "l0ssc/model.hpp"

namespace l0ssc {

struct SolverOptions {
  double lambda = 0.5;   // support penalty weight, >= 0
  double step = 0.0;     // gradient step s; 0 selects 0.9 / (2 * sigma_1(X)^2)
  int max_iter = 300;
  double tol = 1e-10;    // stop when successive objectives differ by less than this
  // Descent is guaranteed (and the trace is non-increasing up to roundoff)
  // whenever step * 2 * sigma_1(X)^2 <= 1; the default satisfies it.
};

struct SolveTrace {
  std::vector<double> objectives;  // objective after the initial point and each iterate
  int iterations = 0;
  bool converged = false;          // stopped on tol rather than max_iter
};

struct PointSolution {
  std::vector<double> beta;
  SolveTrace trace;
};

struct SolveResult {
  SparseCodeMatrix codes;
  std::vector<SolveTrace> traces;  // per column
  double step_used = 0.0;
};

// Hard threshold: zero every component with |u_j| <= threshold (boundary
// inclusive), keep the rest unchanged.
void hard_threshold(std::vector<double>& u, double threshold);

// |x_i - X beta|_2^2 + lambda * #nonzeros(beta). Exact zeros count as zero.
double objective(const Matrix& x, std::size_t i, std::span<const double> beta, double lambda);

// Proximal gradient descent on one column: gradient step on the quadratic
// part, component i pinned to zero, then hard threshold at sqrt(2*lambda*s).
// init, when given, must have size n; its component i is ignored.
// step_override > 0 bypasses the default step (pass sigma_1 via the options
// path in solve_all to avoid recomputing it per column).
PointSolution pgd_solve_point(const Matrix& x, std::size_t i, const SolverOptions& opts,
                              std::optional<std::span<const double>> init = std::nullopt,
                              double step_override = 0.0);

// All columns, distributed across a thread pool. Column i writes only column
// i of the output and no sampling happens here, so the result is independent
// of scheduling. init, when given, supplies column i's starting point.
SolveResult solve_all(const Matrix& x, const SolverOptions& opts,
                      const Matrix* init = nullptr);

}  // namespace l0ssc
