#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "l0ssc/model.hpp"

namespace l0ssc {

// Hard cap on supports enumerated per oracle call. Keeps worst-case runs
// around a minute; exceeding it throws guard_error naming the actual count.
inline constexpr std::uint64_t kEnumerationGuard = 2000000;

struct BruteForceResult {
  std::vector<double> beta;          // length n, component i zero
  std::vector<std::size_t> support;  // ascending
  double objective = 0.0;
  std::uint64_t supports_scanned = 0;
};

// Exact minimizer of |x_i - X beta|^2 + lambda |beta|_0 over supports of size
// <= rmax that exclude column i. Rank-deficient supports are skipped: their
// span equals that of a proper independent subset, which is also enumerated
// and carries a smaller penalty. Ties resolve to the smaller support, then
// the lexicographically first.
BruteForceResult brute_force_l0(const DataMatrix& x, std::size_t i, double lambda,
                                std::size_t rmax);

struct RestrictedEigen {
  double sigma = 0.0;      // min sigma_min over full-column-rank size-r subsets
  double sigma_bar = 0.0;  // sigma / sqrt(r)
};

// Minimum restricted eigenvalue over size-r column subsets; +infinity when no
// subset of size r has full column rank (including r > n).
RestrictedEigen restricted_eigenvalue(const DataMatrix& y, std::size_t r);

// Minimum distance from clean point i to any span of <= r linearly
// independent clean points that excludes point i and is not drawn entirely
// from point i's own class. +infinity when no such span exists.
double external_distance(const Instance& instance, std::size_t i, std::size_t r);

// Everything a theorem evaluator measured, with named inequality flags.
// Quantities that are undefined on the given instance (empty minima, infinite
// sentinels, divisions that lose their sign condition) stay absent rather
// than carrying a non-finite value.
struct ConditionReport {
  std::optional<double> tau0, tau1, sigma_x_star, sigma_bar_y_star;
  std::optional<double> m_i, m_i_delta;
  std::optional<double> mu_r0, sigma_x_r0;
  std::optional<double> c;  // semi-random spectrum margin
  std::optional<double> lambda1, lambda2, lambda0;
  std::optional<double> probability_bound;  // may be <= 0 (vacuous)
  std::size_t r_star = 0;
  std::vector<std::pair<std::string, bool>> conditions;

  bool all_hold() const;
  bool holds(std::string_view name) const;  // false when the flag is missing
};

// Deterministic-model conditions at point i, evaluated at the brute-force
// optimum restricted to supports of size <= r0. Flags, in order:
// sample-size, optimal-code-size, r0-lambda, noise-level,
// external-separation, spectrum-margin, lambda-window.
ConditionReport theorem2_conditions(const Instance& instance, std::size_t i, std::size_t r0,
                                    double lambda);

// Semi-random-model conditions from the ensemble alone. Flags, in order:
// sigma-positive, affinity, t-window, noise-margin, concentration-margin,
// noise-ratio, dimension-size, eps0-size, eps1-size, lambda-window.
ConditionReport theorem3_conditions(const SubspaceEnsemble& ensemble, std::size_t r0,
                                    double lambda, double c1, double eps0, double eps1,
                                    double t);

// Checks |d(x, span A) - d(x, span B)| <= |A - B|_2 |x|_2 / min sigma_min
// with 1e-9 slack. Both matrices must share shape and have full column rank.
bool verify_distance_perturbation(const Matrix& a, const Matrix& b,
                                  std::span<const double> x);

struct ConcentrationReport {
  double empirical_rate = 0.0;         // fraction of trials where the event held
  double threshold = 0.0;              // 1/dk - 2t sqrt(1 - 1/dk) - t^2
  double lower_bound = 0.0;            // 1 - 8 exp(-dk t^2 / 2); vacuous when <= 0
  double trace_assumption_rate = 0.0;  // fraction of sampled spans satisfying the
                                       // trace cap dk - 1
};

// Samples points uniform on a dk-dimensional random subspace's sphere and
// independent spans of dimension <= dk from a second random subspace, and
// measures how often the distance clears the threshold. The bound is
// reported even when vacuous.
ConcentrationReport concentration_check(std::size_t dk, std::size_t d, double t,
                                        std::size_t trials, std::uint64_t seed);

// Spectral-tail bound (1 + 17 sqrt(1 + p0/p')) sigma_{p0+1}
// + (8 sqrt(p) / (p'+1)) sqrt(sum_{j>p0} sigma_j^2) with p' = p - p0.
// Requires p0 >= 2 and p - p0 >= 4.
double c_p_p0(const DataMatrix& x, std::size_t p, std::size_t p0);

struct CertifyResult {
  bool certified = false;
  double gap_bound = 0.0;
  double mu = 0.0;
  double kappa0 = 0.0;        // 0 when both supports are empty
  double beta_hat_min = 0.0;  // 0 when beta_hat has empty support
  double h_star = 0.0;
  std::vector<double> beta_star;
  std::vector<std::size_t> oracle_support;
  double oracle_objective = 0.0;
};

// Compares a solver output against the global optimum. The enumeration depth
// needed for true global optimality is |x_i|^2 / lambda: any larger support
// pays more in penalty than the zero code's whole loss. certified means the
// support-recovery conditions hold, which implies beta_hat equals the
// optimum; gap_bound always bounds |beta_hat - beta_star|_2.
CertifyResult certify_optimality(const DataMatrix& x, std::size_t i, double lambda,
                                 std::span<const double> beta_hat);

}  // namespace l0ssc
