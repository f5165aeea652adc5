#include "l0ssc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "l0ssc/numkern.hpp"
#include "l0ssc/rng.hpp"
#include "l0ssc/synth.hpp"

namespace l0ssc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Counts saturate here; the guard trips far below, but error messages should
// name the exact count whenever it is representable.
constexpr std::uint64_t kCountSaturation = 1000000000000000000ull;

std::uint64_t binom_saturated(std::size_t n, std::size_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  unsigned __int128 c = 1;
  for (std::size_t i = 1; i <= r; ++i) {
    c = c * (n - r + i) / i;
    if (c > kCountSaturation) return kCountSaturation;
  }
  return static_cast<std::uint64_t>(c);
}

// Total supports of sizes 1..rmax from m candidates, saturated once past the
// guard (the exact count no longer matters at that point).
std::uint64_t supports_up_to(std::size_t m, std::size_t rmax) {
  std::uint64_t total = 0;
  for (std::size_t r = 1; r <= rmax && r <= m; ++r) {
    total += binom_saturated(m, r);
    if (total >= kCountSaturation) return kCountSaturation;
  }
  return total;
}

void check_guard(std::uint64_t count, const char* what) {
  if (count > kEnumerationGuard) {
    const std::string shown = count >= kCountSaturation
                                  ? "more than " + std::to_string(kCountSaturation)
                                  : std::to_string(count);
    throw guard_error(std::string(what) + ": " + shown +
                      " supports exceed the enumeration guard of " +
                      std::to_string(kEnumerationGuard));
  }
}

// Ascending index combinations of size r drawn from 0..m-1, lexicographic.
template <typename Fn>
void for_each_combination(std::size_t m, std::size_t r, Fn&& fn) {
  if (r == 0 || r > m) return;
  std::vector<std::size_t> idx(r);
  for (std::size_t t = 0; t < r; ++t) idx[t] = t;
  while (true) {
    fn(std::span<const std::size_t>(idx));
    std::size_t t = r;
    while (t > 0 && idx[t - 1] == m - r + (t - 1)) --t;
    if (t == 0) return;
    ++idx[t - 1];
    for (std::size_t u = t; u < r; ++u) idx[u] = idx[u - 1] + 1;
  }
}

// (objective, support size, lexicographic) total order over candidates.
bool support_better(double obj_a, std::span<const std::size_t> sup_a, double obj_b,
                    std::span<const std::size_t> sup_b) {
  if (obj_a != obj_b) return obj_a < obj_b;
  if (sup_a.size() != sup_b.size()) return sup_a.size() < sup_b.size();
  return std::lexicographical_compare(sup_a.begin(), sup_a.end(), sup_b.begin(), sup_b.end());
}

// Squared residual of projecting xi onto the span of the selected columns;
// absent when the selection is rank deficient (such spans are covered by a
// proper subset of the selection).
std::optional<double> projection_residual2(const Matrix& x, std::span<const double> xi,
                                           double xi_norm2, std::span<const std::size_t> sup) {
  if (sup.size() > x.rows()) return std::nullopt;
  const Matrix sub = select_columns(x, sup);
  const QrResult qr = qr_decompose(sub);
  for (std::size_t k = 0; k < sub.cols(); ++k) {
    if (qr.r(k, k) <= kRankTol) return std::nullopt;
  }
  const std::vector<double> qtx = matvec_t(qr.q, xi);
  return std::max(0.0, xi_norm2 - dot(qtx, qtx));
}

struct BestSupport {
  double objective = kInf;
  std::vector<std::size_t> support;
};

double sigma_min_of(const Matrix& x, std::span<const std::size_t> idx) {
  return singular_values(select_columns(x, idx)).back();
}

// min over sizes 1..r of the smallest singular value of the selected columns,
// no rank filter: rank-deficient selections legitimately pull this to zero.
double sigma_x_r(const Matrix& x, std::size_t r) {
  const std::size_t n = x.cols();
  const std::size_t cap = std::min(r, n);
  check_guard(supports_up_to(n, cap), "sigma_x_r");
  double best = kInf;
  for (std::size_t sz = 1; sz <= cap; ++sz) {
    for_each_combination(n, sz, [&](std::span<const std::size_t> idx) {
      best = std::min(best, sigma_min_of(x, idx));
    });
  }
  return best;
}

// min over 1 <= r' < rlim of the normalized restricted eigenvalue; +inf when
// rlim <= 1 (empty range) or nothing of full rank exists.
double min_sigma_bar_below(const Matrix& y, std::size_t rlim) {
  double best = kInf;
  const DataMatrix yd{y, false};
  for (std::size_t r = 1; r < rlim; ++r) {
    best = std::min(best, restricted_eigenvalue(yd, r).sigma_bar);
  }
  return best;
}

// Infimum of {lambda in (1e-6, 1-1e-6) : pred(lambda)} for a predicate whose
// truth set is an upper ray. The ray shape is audited on a coarse grid first;
// the audit failing means the closed-form monotonicity argument does not
// apply to these inputs, which is a logic error worth surfacing loudly.
std::optional<double> ray_infimum(const std::function<bool(double)>& pred) {
  constexpr double lo = 1e-6;
  constexpr double hi = 1.0 - 1e-6;
  bool seen = false;
  for (int s = 0; s <= 32; ++s) {
    const double q = lo + (hi - lo) * (static_cast<double>(s) / 32.0);
    const bool v = pred(q);
    if (seen && !v) throw guard_error("lambda threshold: defining set is not an upper ray");
    seen = seen || v;
  }
  if (!pred(hi)) return std::nullopt;
  if (pred(lo)) return lo;
  double a = lo, b = hi;
  while (b - a > 1e-9) {
    const double mid = 0.5 * (a + b);
    (pred(mid) ? b : a) = mid;
  }
  return b;
}

std::vector<std::size_t> class_counts(const SubspaceEnsemble& ens) {
  std::vector<std::size_t> counts(ens.classes(), 0);
  if (ens.dims.size() != counts.size())
    throw invalid_input("ensemble dims count does not match class count");
  for (int l : ens.labels) {
    if (l < 0 || static_cast<std::size_t>(l) >= counts.size())
      throw invalid_input("ensemble labels reference a class out of range");
    ++counts[static_cast<std::size_t>(l)];
  }
  return counts;
}

}  // namespace

bool ConditionReport::all_hold() const {
  for (const auto& [name, v] : conditions) {
    if (!v) return false;
  }
  return true;
}

bool ConditionReport::holds(std::string_view name) const {
  for (const auto& [n, v] : conditions) {
    if (n == name) return v;
  }
  return false;
}

BruteForceResult brute_force_l0(const DataMatrix& xd, std::size_t i, double lambda,
                                std::size_t rmax) {
  const Matrix& x = xd.x;
  const std::size_t n = x.cols();
  if (n == 0) throw invalid_input("brute_force_l0: empty data");
  if (i >= n) throw invalid_input("brute_force_l0: point index out of range");
  if (lambda < 0.0) throw invalid_input("brute_force_l0: lambda must be nonnegative");

  const std::size_t m = n - 1;
  rmax = std::min(rmax, m);
  check_guard(supports_up_to(m, rmax), "brute_force_l0");

  std::vector<std::size_t> cand;
  cand.reserve(m);
  for (std::size_t j = 0; j < n; ++j) {
    if (j != i) cand.push_back(j);
  }

  const auto xi = x.col(i);
  const double xi_norm2 = dot(xi, xi);

  BestSupport best;
  best.objective = xi_norm2;  // empty support
  best.support = {};
  std::uint64_t scanned = 1;

  // Scans every support whose smallest element is cand[fi].
  auto scan_first = [&](std::size_t fi, BestSupport& local, std::uint64_t& local_scanned) {
    std::vector<std::size_t> sup;
    const std::size_t tail = m - fi - 1;
    for (std::size_t r = 1; r <= rmax; ++r) {
      if (r - 1 > tail) break;
      if (r == 1) {
        sup.assign(1, cand[fi]);
        ++local_scanned;
        if (const auto res2 = projection_residual2(x, xi, xi_norm2, sup)) {
          const double obj = *res2 + lambda;
          if (support_better(obj, sup, local.objective, local.support)) {
            local.objective = obj;
            local.support = sup;
          }
        }
        continue;
      }
      for_each_combination(tail, r - 1, [&](std::span<const std::size_t> rest) {
        sup.resize(r);
        sup[0] = cand[fi];
        for (std::size_t t = 0; t < rest.size(); ++t) sup[t + 1] = cand[fi + 1 + rest[t]];
        ++local_scanned;
        if (const auto res2 = projection_residual2(x, xi, xi_norm2, sup)) {
          const double obj = *res2 + lambda * static_cast<double>(r);
          if (support_better(obj, sup, local.objective, local.support)) {
            local.objective = obj;
            local.support = sup;
          }
        }
      });
    }
  };

  const std::uint64_t total = supports_up_to(m, rmax);
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, m == 0 ? std::size_t{1} : m);
  if (total < 4096 || workers <= 1 || rmax == 0) {
    for (std::size_t fi = 0; fi < m && rmax > 0; ++fi) scan_first(fi, best, scanned);
  } else {
    std::vector<BestSupport> bests(workers);
    std::vector<std::uint64_t> counts(workers, 0);
    std::vector<std::thread> pool;
    std::mutex err_mutex;
    std::exception_ptr err;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t fi = w; fi < m; fi += workers) scan_first(fi, bests[w], counts[w]);
        } catch (...) {
          const std::lock_guard<std::mutex> lock(err_mutex);
          if (!err) err = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
    for (std::size_t w = 0; w < workers; ++w) {
      scanned += counts[w];
      if (support_better(bests[w].objective, bests[w].support, best.objective, best.support)) {
        best = std::move(bests[w]);
      }
    }
  }

  BruteForceResult out;
  out.support = best.support;
  out.objective = best.objective;
  out.supports_scanned = scanned;
  out.beta.assign(n, 0.0);
  if (!best.support.empty()) {
    const Matrix sub = select_columns(x, best.support);
    const std::vector<double> coef = least_squares(sub, xi);
    for (std::size_t t = 0; t < best.support.size(); ++t) out.beta[best.support[t]] = coef[t];
  }
  return out;
}

RestrictedEigen restricted_eigenvalue(const DataMatrix& yd, std::size_t r) {
  const Matrix& y = yd.x;
  if (r < 1) throw invalid_input("restricted_eigenvalue: r must be at least 1");
  RestrictedEigen out{kInf, kInf};
  if (r > y.cols() || r > y.rows()) return out;
  check_guard(binom_saturated(y.cols(), r), "restricted_eigenvalue");
  double best = kInf;
  for_each_combination(y.cols(), r, [&](std::span<const std::size_t> idx) {
    const double smin = sigma_min_of(y, idx);
    if (smin > kRankTol) best = std::min(best, smin);
  });
  out.sigma = best;
  out.sigma_bar = best / std::sqrt(static_cast<double>(r));
  return out;
}

double external_distance(const Instance& instance, std::size_t i, std::size_t r) {
  const Matrix& y = instance.clean;
  const auto& labels = instance.ensemble.labels;
  const std::size_t n = y.cols();
  if (labels.size() != n) throw invalid_input("external_distance: labels length mismatch");
  if (i >= n) throw invalid_input("external_distance: point index out of range");
  if (r < 1) throw invalid_input("external_distance: r must be at least 1");

  const std::size_t m = n - 1;
  const std::size_t cap = std::min({r, m, y.rows()});
  check_guard(supports_up_to(m, cap), "external_distance");

  std::vector<std::size_t> cand;
  cand.reserve(m);
  for (std::size_t j = 0; j < n; ++j) {
    if (j != i) cand.push_back(j);
  }
  const int own = labels[i];
  const auto yi = y.col(i);
  const double yi_norm2 = dot(yi, yi);

  double best = kInf;
  std::vector<std::size_t> sup;
  for (std::size_t sz = 1; sz <= cap; ++sz) {
    for_each_combination(m, sz, [&](std::span<const std::size_t> pos) {
      bool all_own = true;
      sup.resize(sz);
      for (std::size_t t = 0; t < sz; ++t) {
        sup[t] = cand[pos[t]];
        if (labels[sup[t]] != own) all_own = false;
      }
      if (all_own) return;
      if (const auto res2 = projection_residual2(y, yi, yi_norm2, sup)) {
        best = std::min(best, std::sqrt(*res2));
      }
    });
  }
  return best;
}

ConditionReport theorem2_conditions(const Instance& instance, std::size_t i, std::size_t r0,
                                    double lambda) {
  const Matrix& x = instance.observed;
  const Matrix& y = instance.clean;
  const SubspaceEnsemble& ens = instance.ensemble;
  const std::size_t n = x.cols();
  if (i >= n) throw invalid_input("theorem2_conditions: point index out of range");
  if (r0 < 2) throw invalid_input("theorem2_conditions: r0 must exceed 1");
  if (!(lambda > 0.0) || !(lambda < 1.0))
    throw invalid_input("theorem2_conditions: lambda must lie in (0, 1)");
  if (ens.labels.size() != n) throw invalid_input("theorem2_conditions: labels length mismatch");

  const double delta = ens.noise_bound;
  ConditionReport rep;

  const std::vector<std::size_t> counts = class_counts(ens);
  bool sample_ok = true;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] < static_cast<std::size_t>(ens.dims[k]) + 1) sample_ok = false;
  }
  rep.conditions.emplace_back("sample-size", sample_ok);

  const BruteForceResult bf = brute_force_l0(DataMatrix{x, false}, i, lambda, r0);
  const std::size_t r_star = bf.support.size();
  rep.r_star = r_star;
  rep.conditions.emplace_back("optimal-code-size", r_star >= 2 && r_star <= r0);
  rep.conditions.emplace_back("r0-lambda",
                              static_cast<double>(r0) <= std::floor(1.0 / lambda));

  if (r_star >= 1) rep.sigma_x_star = sigma_min_of(x, bf.support);

  double sbar_star = kInf;  // min over 1 <= r < r_star; undefined until r_star > 1
  if (r_star >= 2) {
    sbar_star = min_sigma_bar_below(y, r_star);
    if (std::isfinite(sbar_star)) rep.sigma_bar_y_star = sbar_star;
  }
  rep.conditions.emplace_back("noise-level", r_star >= 2 && delta < sbar_star);

  if (r_star >= 2 && sbar_star > delta) {
    const double tau1 = delta / (sbar_star - delta);
    rep.tau1 = tau1;
    if (rep.sigma_x_star && *rep.sigma_x_star > kRankTol) {
      rep.tau0 = 2.0 * delta * std::sqrt(static_cast<double>(r_star)) / *rep.sigma_x_star + tau1;
    }
  }

  const std::size_t dk =
      static_cast<std::size_t>(ens.dims[static_cast<std::size_t>(ens.labels[i])]);
  const double m_i = external_distance(instance, i, dk);
  if (std::isfinite(m_i)) rep.m_i = m_i;
  const double m_i_delta = m_i - delta;
  if (std::isfinite(m_i_delta)) rep.m_i_delta = m_i_delta;

  const double sxr0 = sigma_x_r(x, r0);
  rep.sigma_x_r0 = sxr0;

  // 2 delta / sigma_{X,r0}: zero noise kills the term even when the spectrum
  // floor is zero, otherwise a zero floor makes the requirement impossible.
  const double ratio = delta == 0.0 ? 0.0 : (sxr0 > kRankTol ? 2.0 * delta / sxr0 : kInf);
  rep.conditions.emplace_back("external-separation", m_i_delta > ratio);

  const double msb = min_sigma_bar_below(y, r0);
  bool mu_ok = false;
  if (msb > delta) {
    const double mu = delta / (msb - delta);
    rep.mu_r0 = mu;
    mu_ok = mu < 1.0 - ratio;
  }
  rep.conditions.emplace_back("spectrum-margin", mu_ok);

  const auto grad_term = [&](double l) {
    return delta == 0.0 ? 0.0 : 2.0 * delta / (sxr0 * std::sqrt(l));
  };
  rep.lambda1 = ray_infimum(
      [&](double l) { return std::sqrt(1.0 - l) + grad_term(l) < m_i_delta; });
  if (rep.mu_r0) {
    const double mu = *rep.mu_r0;
    rep.lambda2 = ray_infimum([&](double l) { return l - grad_term(l) > mu; });
  }
  if (rep.lambda1 && rep.lambda2) rep.lambda0 = std::max(*rep.lambda1, *rep.lambda2);
  rep.conditions.emplace_back("lambda-window",
                              rep.lambda0 && *rep.lambda0 < lambda && lambda < 1.0);
  return rep;
}

ConditionReport theorem3_conditions(const SubspaceEnsemble& ensemble, std::size_t r0,
                                    double lambda, double c1, double eps0, double eps1,
                                    double t) {
  if (r0 < 2) throw invalid_input("theorem3_conditions: r0 must exceed 1");
  if (!(lambda > 0.0) || !(lambda < 1.0))
    throw invalid_input("theorem3_conditions: lambda must lie in (0, 1)");
  if (!(c1 > 0.0) || !(eps0 > 0.0) || !(eps1 > 0.0) || !(t > 0.0))
    throw invalid_input("theorem3_conditions: c1, eps0, eps1, t must be positive");
  if (ensemble.bases.empty()) throw invalid_input("theorem3_conditions: empty ensemble");

  const double delta = ensemble.noise_bound;
  ConditionReport rep;

  const double sigma_prime = (1.0 - std::sqrt(c1) - eps1) / (1.0 + eps0);
  rep.conditions.emplace_back("sigma-positive", sigma_prime > 0.0);

  // A single class has no pairwise affinity; the affinity cap is then empty.
  const double aff = ensemble.bases.size() >= 2 ? max_affinity(ensemble) : 0.0;
  const double aff_cap = sigma_prime * sigma_prime / static_cast<double>(r0 - 1);
  rep.conditions.emplace_back("affinity", sigma_prime > 0.0 && aff < aff_cap);

  const double margin2 =
      (sigma_prime * sigma_prime - static_cast<double>(r0 - 1) * aff) /
      static_cast<double>(r0);
  if (sigma_prime > 0.0 && margin2 > 0.0) rep.c = std::sqrt(margin2);

  const int d_max = ensemble.max_dim();
  const double inv = 1.0 / static_cast<double>(d_max);
  const double theta = inv - 2.0 * t * std::sqrt(1.0 - inv) - t * t;
  rep.conditions.emplace_back("t-window", theta > 0.0);

  const bool have_margin = rep.c && *rep.c > delta;
  rep.conditions.emplace_back("noise-margin", rep.c && delta < *rep.c);

  const double root_r0 = std::sqrt(static_cast<double>(r0));
  const auto spread = [&](double l) {
    // 2 delta / (sqrt(r0) (c - delta) sqrt(lambda)); callers guard have_margin
    return delta == 0.0 ? 0.0 : 2.0 * delta / (root_r0 * (*rep.c - delta) * std::sqrt(l));
  };

  bool concentration_ok = false;
  bool ratio_ok = false;
  if (have_margin) {
    const double push = delta == 0.0 ? 0.0 : 2.0 * delta / (root_r0 * (*rep.c - delta));
    concentration_ok = delta + push <= theta;
    ratio_ok = delta / (*rep.c - delta) + push < 1.0;
  } else if (delta == 0.0) {
    concentration_ok = theta >= 0.0;
    ratio_ok = true;
  }
  rep.conditions.emplace_back("concentration-margin", concentration_ok);
  rep.conditions.emplace_back("noise-ratio", ratio_ok);

  const std::vector<std::size_t> counts = class_counts(ensemble);
  bool dim_ok = true, eps0_ok = true, eps1_ok = true;
  for (std::size_t k = 0; k < ensemble.dims.size(); ++k) {
    const double dk = static_cast<double>(ensemble.dims[k]);
    const double nk = static_cast<double>(counts[k]);
    if (dk < std::floor(1.0 / lambda)) dim_ok = false;
    if (2.0 * std::pow(dk, -0.05) + 2.0 * std::pow(dk, -0.1) > eps0) eps0_ok = false;
    const double log_term =
        (2.0 / (lambda * dk)) * std::log(std::exp(1.0) * nk / static_cast<double>(r0));
    const double eps1_lhs = std::sqrt(1.0 / (lambda * dk)) + std::sqrt(log_term);
    if (!(eps1_lhs <= eps1)) eps1_ok = false;  // NaN from a negative log counts as failure
  }
  rep.conditions.emplace_back("dimension-size", dim_ok);
  rep.conditions.emplace_back("eps0-size", eps0_ok);
  rep.conditions.emplace_back("eps1-size", eps1_ok);

  if (have_margin || delta == 0.0) {
    const double target1 = theta - delta;
    rep.lambda1 = ray_infimum(
        [&](double l) { return std::sqrt(1.0 - l) + spread(l) < target1; });
    const double target2 = have_margin ? delta / (*rep.c - delta) : 0.0;
    rep.lambda2 = ray_infimum([&](double l) { return l - spread(l) > target2; });
  }
  if (rep.lambda1 && rep.lambda2) rep.lambda0 = std::max(*rep.lambda1, *rep.lambda2);
  rep.conditions.emplace_back("lambda-window",
                              rep.lambda0 && *rep.lambda0 < lambda && lambda < 1.0);

  double failure = 0.0;
  for (std::size_t k = 0; k < ensemble.dims.size(); ++k) {
    const double dk = static_cast<double>(ensemble.dims[k]);
    const double nk = static_cast<double>(counts[k]);
    failure += std::exp(-c1 * dk) + 2.0 * nk * std::exp(-std::pow(dk, 0.9));
    failure += 8.0 * nk * std::exp(-dk * t * t / 2.0);
  }
  rep.probability_bound = 1.0 - failure;
  return rep;
}

bool verify_distance_perturbation(const Matrix& a, const Matrix& b,
                                  std::span<const double> x) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw invalid_input("verify_distance_perturbation: shape mismatch");
  if (x.size() != a.rows())
    throw invalid_input("verify_distance_perturbation: vector length mismatch");
  if (a.cols() == 0 || a.cols() > a.rows())
    throw invalid_input("verify_distance_perturbation: need 1 <= cols <= rows");

  const double smin_a = singular_values(a).back();
  const double smin_b = singular_values(b).back();
  if (smin_a <= kRankTol || smin_b <= kRankTol)
    throw invalid_input("verify_distance_perturbation: rank-deficient input");

  const double da = subspace_distance(x, a);
  const double db = subspace_distance(x, b);

  Matrix diff(a.rows(), a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    for (std::size_t r = 0; r < a.rows(); ++r) diff(r, j) = a(r, j) - b(r, j);
  }
  const double diff_norm = singular_values(diff).front();
  const double bound = diff_norm * norm2(x) / std::min(smin_a, smin_b);
  return std::abs(da - db) <= bound + 1e-9;
}

ConcentrationReport concentration_check(std::size_t dk, std::size_t d, double t,
                                        std::size_t trials, std::uint64_t seed) {
  if (dk < 1 || dk > d) throw invalid_input("concentration_check: need 1 <= dk <= d");
  if (trials < 100) throw invalid_input("concentration_check: need at least 100 trials");
  if (!(t > 0.0)) throw invalid_input("concentration_check: t must be positive");

  const double inv = 1.0 / static_cast<double>(dk);
  ConcentrationReport out;
  out.threshold = inv - 2.0 * t * std::sqrt(1.0 - inv) - t * t;
  out.lower_bound = 1.0 - 8.0 * std::exp(-static_cast<double>(dk) * t * t / 2.0);

  std::size_t hits = 0;
  std::size_t trace_ok = 0;
  std::vector<double> g(dk);
  for (std::size_t s = 0; s < trials; ++s) {
    Rng rng = Rng::stream(seed, stream_role::trial, s);

    const Matrix u = sample_basis(d, dk, rng);
    for (auto& v : g) v = rng.gaussian();
    const double gn = norm2(g);
    std::vector<double> y = matvec(u, g);
    for (auto& v : y) v /= gn;

    const Matrix basis2 = sample_basis(d, dk, rng);
    const std::size_t de = 1 + static_cast<std::size_t>(rng.uniform_below(dk));
    Matrix span_q;
    for (int attempt = 0; attempt < 3; ++attempt) {
      Matrix pts(d, de);
      std::vector<double> h(dk);
      for (std::size_t c = 0; c < de; ++c) {
        for (auto& v : h) v = rng.gaussian();
        const double hn = norm2(h);
        const std::vector<double> pt = matvec(basis2, h);
        for (std::size_t rr = 0; rr < d; ++rr) pts(rr, c) = pt[rr] / hn;
      }
      const QrResult qr = qr_decompose(pts);
      bool full = true;
      for (std::size_t k = 0; k < de; ++k) {
        if (qr.r(k, k) <= kRankTol) full = false;
      }
      if (full) {
        span_q = qr.q;
        break;
      }
      if (attempt == 2) throw guard_error("concentration_check: degenerate sampled span");
    }

    if (subspace_distance(y, span_q) >= out.threshold) ++hits;

    const Matrix overlap = multiply_at_b(u, span_q);  // dk x de
    const double fro = frobenius_norm(overlap);
    if (fro * fro <= static_cast<double>(dk) - 1.0 + 1e-9) ++trace_ok;
  }
  out.empirical_rate = static_cast<double>(hits) / static_cast<double>(trials);
  out.trace_assumption_rate = static_cast<double>(trace_ok) / static_cast<double>(trials);
  return out;
}

double c_p_p0(const DataMatrix& xd, std::size_t p, std::size_t p0) {
  if (p0 < 2) throw invalid_input("c_p_p0: p0 must be at least 2");
  if (p < p0 + 4) throw invalid_input("c_p_p0: p - p0 must be at least 4");
  const std::vector<double> sv = singular_values(xd.x);
  const double sigma_next = p0 < sv.size() ? sv[p0] : 0.0;
  double tail = 0.0;
  for (std::size_t j = p0; j < sv.size(); ++j) tail += sv[j] * sv[j];
  const double p_prime = static_cast<double>(p - p0);
  return (1.0 + 17.0 * std::sqrt(1.0 + static_cast<double>(p0) / p_prime)) * sigma_next +
         (8.0 * std::sqrt(static_cast<double>(p)) / (p_prime + 1.0)) * std::sqrt(tail);
}

CertifyResult certify_optimality(const DataMatrix& xd, std::size_t i, double lambda,
                                 std::span<const double> beta_hat) {
  const Matrix& x = xd.x;
  const std::size_t n = x.cols();
  if (i >= n) throw invalid_input("certify_optimality: point index out of range");
  if (beta_hat.size() != n) throw invalid_input("certify_optimality: beta length mismatch");
  if (!(lambda > 0.0)) throw invalid_input("certify_optimality: lambda must be positive");
  if (beta_hat[i] != 0.0) throw invalid_input("certify_optimality: component i must be zero");

  const auto xi = x.col(i);
  const double xi_norm2 = dot(xi, xi);
  // Supports larger than |x_i|^2 / lambda pay more in penalty than the zero
  // code's entire loss, so this depth already yields the global optimum.
  const std::size_t rmax =
      std::min(n - 1, static_cast<std::size_t>(std::floor(xi_norm2 / lambda)));
  const BruteForceResult bf = brute_force_l0(xd, i, lambda, rmax);

  CertifyResult out;
  out.beta_star = bf.beta;
  out.oracle_support = bf.support;
  out.oracle_objective = bf.objective;

  std::vector<std::size_t> s_hat;
  for (std::size_t j = 0; j < n; ++j) {
    if (beta_hat[j] != 0.0) s_hat.push_back(j);
  }

  const auto residual_norm = [&](std::span<const double> beta) {
    std::vector<double> r(xi.begin(), xi.end());
    for (std::size_t j = 0; j < n; ++j) {
      if (beta[j] == 0.0) continue;
      const auto xj = x.col(j);
      for (std::size_t rr = 0; rr < r.size(); ++rr) r[rr] -= beta[j] * xj[rr];
    }
    return norm2(r);
  };
  const double c_star = residual_norm(bf.beta);
  const double c_hat = residual_norm(beta_hat);

  double h_star = subspace_distance(xi, select_columns(x, bf.support));
  std::vector<std::size_t> rest;
  for (std::size_t drop = 0; drop < bf.support.size(); ++drop) {
    rest.clear();
    for (std::size_t tpos = 0; tpos < bf.support.size(); ++tpos) {
      if (tpos != drop) rest.push_back(bf.support[tpos]);
    }
    h_star = std::max(h_star, subspace_distance(xi, select_columns(x, rest)));
  }
  out.h_star = h_star;
  out.mu = std::max({h_star + c_star, 2.0 * c_hat, 2.0 * c_star});

  if (!s_hat.empty()) {
    double mn = kInf;
    for (std::size_t j : s_hat) mn = std::min(mn, std::abs(beta_hat[j]));
    out.beta_hat_min = mn;
  }

  std::vector<std::size_t> uni;
  std::set_union(s_hat.begin(), s_hat.end(), bf.support.begin(), bf.support.end(),
                 std::back_inserter(uni));
  if (!uni.empty()) {
    if (uni.size() > x.rows())
      throw guard_error("certify_optimality: union support is rank deficient");
    const double kappa0 = sigma_min_of(x, uni);
    if (kappa0 <= kRankTol)
      throw guard_error("certify_optimality: union support is rank deficient");
    out.kappa0 = kappa0;
    const double k02 = kappa0 * kappa0;
    out.certified = out.beta_hat_min >= out.mu / k02 &&
                    out.mu * out.mu / (2.0 * k02) <= lambda &&
                    lambda <= (out.beta_hat_min - out.mu / (2.0 * k02)) * out.mu;
  }

  std::vector<std::size_t> only_hat, only_star;
  std::set_difference(s_hat.begin(), s_hat.end(), bf.support.begin(), bf.support.end(),
                      std::back_inserter(only_hat));
  std::set_difference(bf.support.begin(), bf.support.end(), s_hat.begin(), s_hat.end(),
                      std::back_inserter(only_star));
  if (only_hat.empty() && only_star.empty()) {
    out.gap_bound = 0.0;  // empty symmetric difference: both sums vanish
    return out;
  }

  // Admissible interval for b; shrinking it with extra gradient coordinates
  // is safe, the bound holds for every b inside.
  const auto grad_cap = [&](std::span<const double> beta,
                            const std::vector<std::size_t>& sup) {
    std::vector<double> r(xi.begin(), xi.end());
    for (std::size_t j = 0; j < n; ++j) {
      if (beta[j] == 0.0) continue;
      const auto xj = x.col(j);
      for (std::size_t rr = 0; rr < r.size(); ++rr) r[rr] -= beta[j] * xj[rr];
    }
    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::binary_search(sup.begin(), sup.end(), j)) continue;
      worst = std::max(worst, 2.0 * std::abs(dot(x.col(j), r)));
    }
    return worst == 0.0 ? kInf : lambda / worst;
  };

  double upper = kInf;
  if (!s_hat.empty()) upper = std::min(upper, out.beta_hat_min);
  upper = std::min(upper, grad_cap(beta_hat, s_hat));
  if (!bf.support.empty()) {
    double mn = kInf;
    for (std::size_t j : bf.support) mn = std::min(mn, std::abs(bf.beta[j]));
    upper = std::min(upper, mn);
  }
  upper = std::min(upper, grad_cap(bf.beta, bf.support));

  const double b = 0.5 * upper;
  const double k02 = out.kappa0 * out.kappa0;
  const double kappa = k02;  // any value in (0, 2 kappa0^2) is admissible
  double acc = 0.0;
  for (std::size_t j : only_hat) {
    const double termv = std::max(0.0, lambda / b - kappa * std::abs(beta_hat[j] - b));
    acc += termv * termv;
  }
  const double off = std::max(0.0, lambda / b - kappa * b);
  acc += static_cast<double>(only_star.size()) * off * off;
  out.gap_bound = std::sqrt(acc) / (2.0 * k02 - kappa);
  return out;
}

}  // namespace l0ssc
