#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "l0ssc/metrics.hpp"
#include "l0ssc/oracle.hpp"
#include "l0ssc/solver.hpp"
#include "l0ssc/synth.hpp"

using namespace l0ssc;
using testutil::mat;
using testutil::random_matrix;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

DataMatrix unit_columns(Matrix x) { return DataMatrix{normalize_columns(x), true}; }

}  // namespace

TEST_CASE("brute force solves the two atom closed form") {
  Matrix x = mat(2, 3, {1, 0, kInvSqrt2,
                        0, 1, kInvSqrt2});
  auto bf = brute_force_l0(DataMatrix{x, true}, 2, 0.1, 2);
  REQUIRE(bf.support.size() == 2);
  CHECK(bf.support[0] == 0);
  CHECK(bf.support[1] == 1);
  CHECK(bf.beta[0] == doctest::Approx(kInvSqrt2).epsilon(1e-12));
  CHECK(bf.beta[1] == doctest::Approx(kInvSqrt2).epsilon(1e-12));
  CHECK(bf.beta[2] == 0.0);
  CHECK(bf.objective == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(bf.supports_scanned == 4);  // empty, {0}, {1}, {0,1}
}

TEST_CASE("brute force finds a duplicate column") {
  Matrix x = mat(2, 3, {1, 0, 1,
                        0, 1, 0});
  auto bf = brute_force_l0(DataMatrix{x, true}, 2, 0.3, 2);
  REQUIRE(bf.support.size() == 1);
  CHECK(bf.support[0] == 0);
  CHECK(bf.objective == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("large lambda prefers the empty support") {
  Matrix x = mat(2, 3, {1, 0, 1,
                        0, 1, 0});
  // At lambda = |x_i|^2 the single-atom exact code ties the zero code and
  // the tie breaks to the smaller support.
  auto tie = brute_force_l0(DataMatrix{x, true}, 2, 1.0, 2);
  CHECK(tie.support.empty());
  CHECK(tie.objective == 1.0);

  auto above = brute_force_l0(DataMatrix{x, true}, 2, 1.5, 2);
  CHECK(above.support.empty());
}

TEST_CASE("equal objectives break ties lexicographically") {
  Matrix x = mat(2, 3, {1, 1, 1,
                        0, 0, 0});
  auto bf = brute_force_l0(DataMatrix{x, true}, 2, 0.1, 2);
  REQUIRE(bf.support.size() == 1);
  CHECK(bf.support[0] == 0);  // {1} reaches the same objective, {0} is first
}

TEST_CASE("rank deficient supports are skipped, not chosen") {
  // Columns 0 and 1 are identical; the pair spans the same line as either
  // alone, so only singletons can win.
  Matrix x = mat(2, 3, {1, 1, 1,
                        0, 0, 0});
  auto bf = brute_force_l0(DataMatrix{x, true}, 2, 0.01, 2);
  CHECK(bf.support.size() == 1);
}

TEST_CASE("brute force never loses to pgd") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    DataMatrix x = unit_columns(random_matrix(5, 8, rng));
    for (std::size_t i = 0; i < 8; i += 3) {
      const auto bf = brute_force_l0(x, i, 0.5, 3);
      const auto sol = pgd_solve_point(x.x, i, SolverOptions{.lambda = 0.5});
      const double pgd_obj = objective(x.x, i, sol.beta, 0.5);
      CHECK(bf.objective <= pgd_obj + 1e-12);
    }
  }
}

TEST_CASE("brute force beats random least squares codes") {
  Rng rng(41);
  DataMatrix x = unit_columns(random_matrix(5, 8, rng));
  const double lambda = 0.4;
  const auto bf = brute_force_l0(x, 0, lambda, 3);
  for (int t = 0; t < 200; ++t) {
    // Random feasible support of size 1..3, best coefficients for it.
    const std::size_t sz = 1 + rng.uniform_below(3);
    std::vector<std::size_t> sup;
    while (sup.size() < sz) {
      const std::size_t j = 1 + rng.uniform_below(7);
      if (std::find(sup.begin(), sup.end(), j) == sup.end()) sup.push_back(j);
    }
    std::sort(sup.begin(), sup.end());
    const Matrix sel = select_columns(x.x, sup);
    if (singular_values(sel).back() <= kRankTol) continue;
    const auto coef = least_squares(sel, x.x.col(0));
    std::vector<double> beta(8, 0.0);
    for (std::size_t t2 = 0; t2 < sz; ++t2) beta[sup[t2]] = coef[t2];
    CHECK(bf.objective <= objective(x.x, 0, beta, lambda) + 1e-12);
  }
}

TEST_CASE("the enumeration guard names the support count") {
  Matrix x(3, 60);
  Rng rng(1);
  for (std::size_t j = 0; j < 60; ++j)
    for (std::size_t i = 0; i < 3; ++i) x(i, j) = rng.gaussian();
  try {
    brute_force_l0(DataMatrix{x, false}, 0, 0.5, 9);
    FAIL("guard did not trip");
  } catch (const guard_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("15174845371") != std::string::npos);
    CHECK(msg.find("2000000") != std::string::npos);
  }
}

TEST_CASE("restricted eigenvalue closed forms") {
  DataMatrix id{Matrix::identity(4), true};
  auto r2 = restricted_eigenvalue(id, 2);
  CHECK(r2.sigma == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r2.sigma_bar == doctest::Approx(kInvSqrt2).epsilon(1e-12));

  Rng rng(3);
  DataMatrix y = unit_columns(random_matrix(5, 6, rng));
  auto r1 = restricted_eigenvalue(y, 1);
  CHECK(r1.sigma == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("restricted eigenvalue matches exhaustive pair enumeration") {
  Rng rng(5);
  DataMatrix y{random_matrix(5, 7, rng), false};
  auto r2 = restricted_eigenvalue(y, 2);
  double best = kInf;
  for (std::size_t a = 0; a < 7; ++a)
    for (std::size_t b = a + 1; b < 7; ++b) {
      std::vector<std::size_t> idx = {a, b};
      best = std::min(best, singular_values(select_columns(y.x, idx)).back());
    }
  CHECK(r2.sigma == doctest::Approx(best).epsilon(1e-14));
  CHECK(r2.sigma_bar == doctest::Approx(best / std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("restricted eigenvalue is monotone while finite") {
  Rng rng(7);
  DataMatrix y{random_matrix(6, 8, rng), false};
  double prev = kInf;
  for (std::size_t r = 1; r <= 6; ++r) {
    const double cur = restricted_eigenvalue(y, r).sigma;
    if (std::isfinite(prev) && std::isfinite(cur)) CHECK(cur <= prev + 1e-12);
    prev = cur;
  }
}

TEST_CASE("restricted eigenvalue sentinels") {
  Rng rng(9);
  DataMatrix y{random_matrix(3, 4, rng), false};
  CHECK(restricted_eigenvalue(y, 5).sigma == kInf);   // r > n
  CHECK(restricted_eigenvalue(y, 4).sigma == kInf);   // r > d: nothing has full rank

  Matrix dup = mat(2, 3, {1, 1, 1, 0, 0, 0});
  CHECK(restricted_eigenvalue(DataMatrix{dup, true}, 2).sigma == kInf);

  CHECK_THROWS_AS(restricted_eigenvalue(y, 0), invalid_input);
}

namespace {

Instance two_line_instance() {
  // Two orthogonal one-dimensional subspaces, two points each.
  Instance inst;
  inst.clean = mat(2, 4, {1, 1, 0, 0,
                          0, 0, 1, 1});
  inst.observed = inst.clean;
  inst.ensemble.bases = {mat(2, 1, {1, 0}), mat(2, 1, {0, 1})};
  inst.ensemble.dims = {1, 1};
  inst.ensemble.labels = {0, 0, 1, 1};
  return inst;
}

}  // namespace

TEST_CASE("external distance across orthogonal lines is one") {
  Instance inst = two_line_instance();
  CHECK(external_distance(inst, 0, 1) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("a duplicate in another class pulls the distance to zero") {
  Instance inst;
  inst.clean = mat(2, 3, {1, 0, 1,
                          0, 1, 0});
  inst.observed = inst.clean;
  inst.ensemble.bases = {mat(2, 1, {1, 0}), Matrix::identity(2)};
  inst.ensemble.dims = {1, 2};
  inst.ensemble.labels = {0, 1, 1};
  CHECK(external_distance(inst, 0, 2) <= 1e-12);
}

TEST_CASE("external distance matches a double entry recomputation") {
  SynthConfig c;
  c.d = 5;
  c.dims = {2, 2};
  c.counts = {4, 4};
  c.seed = 11;
  Instance inst = generate(c);
  const std::size_t n = 8;
  for (std::size_t i = 0; i < n; i += 2) {
    const double got = external_distance(inst, i, 2);

    double want = kInf;
    std::vector<double> yi(inst.clean.col(i).begin(), inst.clean.col(i).end());
    const int own = inst.ensemble.labels[i];
    for (std::size_t a = 0; a < n; ++a) {
      if (a == i) continue;
      if (inst.ensemble.labels[a] != own) {
        std::vector<std::size_t> one = {a};
        want = std::min(want, subspace_distance(yi, select_columns(inst.clean, one)));
      }
      for (std::size_t b = a + 1; b < n; ++b) {
        if (b == i) continue;
        if (inst.ensemble.labels[a] == own && inst.ensemble.labels[b] == own) continue;
        std::vector<std::size_t> two = {a, b};
        const Matrix sel = select_columns(inst.clean, two);
        if (singular_values(sel).back() <= kRankTol) continue;
        want = std::min(want, subspace_distance(yi, sel));
      }
    }
    CHECK(got == doctest::Approx(want).epsilon(1e-10));
  }
}

TEST_CASE("noiseless theorem two report degenerates cleanly") {
  SynthConfig c;
  c.d = 6;
  c.dims = {2, 2};
  c.counts = {3, 3};
  c.orthogonalize = true;
  c.seed = 0;
  Instance inst = generate(c);
  ConditionReport rep = theorem2_conditions(inst, 4, 2, 0.4);

  REQUIRE(rep.mu_r0.has_value());
  CHECK(*rep.mu_r0 == 0.0);
  REQUIRE(rep.m_i.has_value());
  REQUIRE(rep.m_i_delta.has_value());
  CHECK(*rep.m_i_delta == *rep.m_i);
  CHECK(rep.holds("sample-size"));
  CHECK(rep.holds("spectrum-margin"));
  // Zero noise reduces external separation to M_i > 0.
  CHECK(rep.holds("external-separation") == (*rep.m_i > 0.0));

  const std::vector<std::string> expected = {
      "sample-size",     "optimal-code-size", "r0-lambda", "noise-level",
      "external-separation", "spectrum-margin", "lambda-window"};
  REQUIRE(rep.conditions.size() == expected.size());
  for (std::size_t k = 0; k < expected.size(); ++k)
    CHECK(rep.conditions[k].first == expected[k]);
}

TEST_CASE("report flags are consistent with reported quantities") {
  SynthConfig c;
  c.d = 6;
  c.dims = {2, 2};
  c.counts = {4, 4};
  c.delta = 0.1;
  c.seed = 21;
  Instance inst = generate(c);
  const double lambda = 0.45;
  ConditionReport rep = theorem2_conditions(inst, 1, 2, lambda);

  CHECK(rep.holds("r0-lambda") == (2.0 <= std::floor(1.0 / lambda)));
  if (rep.sigma_bar_y_star)
    CHECK(rep.holds("noise-level") == (0.1 < *rep.sigma_bar_y_star));
  if (rep.lambda1 && rep.lambda2) {
    REQUIRE(rep.lambda0.has_value());
    CHECK(*rep.lambda0 == std::max(*rep.lambda1, *rep.lambda2));
    CHECK(rep.holds("lambda-window") == (*rep.lambda0 < lambda));
  } else {
    CHECK(!rep.holds("lambda-window"));
  }
  CHECK(rep.all_hold() == std::all_of(rep.conditions.begin(), rep.conditions.end(),
                                      [](const auto& c2) { return c2.second; }));
  CHECK(!rep.holds("no-such-flag"));
}

TEST_CASE("sigma for the theorem matches the restricted eigenvalue floor") {
  SynthConfig c;
  c.d = 6;
  c.dims = {2, 2};
  c.counts = {3, 3};
  c.orthogonalize = true;
  c.seed = 2;
  Instance inst = generate(c);
  ConditionReport rep = theorem2_conditions(inst, 0, 2, 0.4);
  REQUIRE(rep.sigma_x_r0.has_value());
  const DataMatrix x{inst.observed, true};
  const double floor2 = std::min(restricted_eigenvalue(x, 1).sigma,
                                 restricted_eigenvalue(x, 2).sigma);
  CHECK(*rep.sigma_x_r0 == doctest::Approx(floor2).epsilon(1e-12));
}

TEST_CASE("when every flag holds the brute force codes satisfy the property") {
  // Combos found by scanning seeds: all seven flags hold at this lambda.
  struct Combo {
    std::uint64_t seed;
    std::size_t i;
  };
  const Combo combos[] = {{0, 4}, {1, 0}, {2, 5}};
  for (const auto& combo : combos) {
    SynthConfig c;
    c.d = 6;
    c.dims = {2, 2};
    c.counts = {3, 3};
    c.orthogonalize = true;
    c.seed = combo.seed;
    Instance inst = generate(c);
    const double mi = external_distance(inst, combo.i, 2);
    const double lambda = 0.5 * (1.0 - mi * mi + std::min(0.5, mi * mi));
    ConditionReport rep = theorem2_conditions(inst, combo.i, 2, lambda);
    REQUIRE(rep.all_hold());

    Matrix z(6, 6);
    for (std::size_t col = 0; col < 6; ++col) {
      auto bf = brute_force_l0(DataMatrix{inst.observed, true}, col, lambda, 5);
      for (std::size_t j = 0; j < 6; ++j) z(j, col) = bf.beta[j];
    }
    const SdpReport sdp = sdp_violation(SparseCodeMatrix{z}, inst.ensemble.labels);
    CHECK(sdp.per_point_sdp[combo.i]);
  }
}

TEST_CASE("semi random report for orthogonal lines") {
  SubspaceEnsemble e;
  e.bases = {mat(4, 1, {1, 0, 0, 0}), mat(4, 1, {0, 1, 0, 0})};
  e.dims = {1, 1};
  e.labels = {0, 0, 1, 1};
  const double c1 = 0.04, eps0 = 0.1, eps1 = 0.1, t = 0.2;
  ConditionReport rep = theorem3_conditions(e, 2, 0.6, c1, eps0, eps1, t);

  const double sp = (1.0 - std::sqrt(c1) - eps1) / (1.0 + eps0);
  REQUIRE(rep.c.has_value());
  CHECK(*rep.c == doctest::Approx(sp / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(rep.holds("sigma-positive"));
  CHECK(rep.holds("affinity"));

  const std::vector<std::string> expected = {
      "sigma-positive", "affinity", "t-window", "noise-margin", "concentration-margin",
      "noise-ratio", "dimension-size", "eps0-size", "eps1-size", "lambda-window"};
  REQUIRE(rep.conditions.size() == expected.size());
  for (std::size_t k = 0; k < expected.size(); ++k)
    CHECK(rep.conditions[k].first == expected[k]);

  // The failure probability decomposes over classes; recompute it.
  double failure = 0.0;
  for (std::size_t k = 0; k < 2; ++k) {
    failure += std::exp(-c1 * 1.0) + 2.0 * 2.0 * std::exp(-1.0);
    failure += 8.0 * 2.0 * std::exp(-1.0 * t * t / 2.0);
  }
  REQUIRE(rep.probability_bound.has_value());
  CHECK(*rep.probability_bound == doctest::Approx(1.0 - failure).epsilon(1e-14));
}

TEST_CASE("affinity exactly at the cap fails the strict inequality") {
  // Dyadic parameters keep every quantity exact: sigma' = 0.125 and the cap
  // 0.015625 are both powers of two, and the shared direction is built to
  // meet the cap exactly.
  const double c1 = 0.25, eps0 = 1.0, eps1 = 0.25, t = 0.1;
  const double sp = (1.0 - std::sqrt(c1) - eps1) / (1.0 + eps0);
  const double cap = sp * sp;  // r0 = 2

  SubspaceEnsemble e;
  e.bases = {mat(4, 1, {1, 0, 0, 0}),
             mat(4, 1, {cap, 0, std::sqrt(1.0 - cap * cap), 0})};
  e.dims = {1, 1};
  e.labels = {0, 0, 1, 1};
  CHECK(max_affinity(e) == cap);

  ConditionReport rep = theorem3_conditions(e, 2, 0.5, c1, eps0, eps1, t);
  CHECK(rep.holds("sigma-positive"));
  CHECK(!rep.holds("affinity"));
  CHECK(!rep.c.has_value());
}

TEST_CASE("affinity above the cap leaves the margin absent") {
  SubspaceEnsemble e;
  Matrix shared = mat(4, 1, {1, 0, 0, 0});
  e.bases = {shared, shared};
  e.dims = {1, 1};
  e.labels = {0, 0, 1, 1};
  ConditionReport rep = theorem3_conditions(e, 2, 0.5, 0.04, 0.1, 0.1, 0.2);
  CHECK(!rep.holds("affinity"));
  CHECK(!rep.c.has_value());
  CHECK(!rep.holds("noise-margin"));
}

TEST_CASE("vanishing slack parameters approach the asymptotic margin") {
  SubspaceEnsemble e;
  e.bases = {mat(4, 1, {1, 0, 0, 0}), mat(4, 1, {0, 1, 0, 0})};
  e.dims = {1, 1};
  e.labels = {0, 0, 1, 1};
  ConditionReport rep = theorem3_conditions(e, 2, 0.5, 1e-18, 1e-9, 1e-9, 0.2);
  REQUIRE(rep.c.has_value());
  // sigma' -> 1, so c -> 1/sqrt(2) for orthogonal lines.
  CHECK(*rep.c == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-8));
}

TEST_CASE("theorem evaluators validate their inputs") {
  Instance inst = two_line_instance();
  CHECK_THROWS_AS(theorem2_conditions(inst, 9, 2, 0.4), invalid_input);
  CHECK_THROWS_AS(theorem2_conditions(inst, 0, 1, 0.4), invalid_input);
  CHECK_THROWS_AS(theorem2_conditions(inst, 0, 2, 1.0), invalid_input);

  SubspaceEnsemble e = inst.ensemble;
  CHECK_THROWS_AS(theorem3_conditions(e, 1, 0.5, 0.1, 0.1, 0.1, 0.1), invalid_input);
  CHECK_THROWS_AS(theorem3_conditions(e, 2, 0.5, 0.0, 0.1, 0.1, 0.1), invalid_input);
  CHECK_THROWS_AS(theorem3_conditions(e, 2, 1.5, 0.1, 0.1, 0.1, 0.1), invalid_input);
}

TEST_CASE("distance perturbation bound accepts equal and near equal bases") {
  Rng rng(15);
  Matrix a = random_matrix(8, 3, rng);
  std::vector<double> x(8);
  for (auto& v : x) v = rng.gaussian();
  CHECK(verify_distance_perturbation(a, a, x));

  Matrix b = a;
  for (std::size_t j = 0; j < 3; ++j)
    for (std::size_t i = 0; i < 8; ++i) b(i, j) += 1e-8 * rng.gaussian();
  CHECK(verify_distance_perturbation(a, b, x));
}

TEST_CASE("distance perturbation bound holds across random draws") {
  Rng rng(16);
  for (int t = 0; t < 100; ++t) {
    const std::size_t d = 4 + rng.uniform_below(8);
    const std::size_t r = 1 + rng.uniform_below(std::min<std::size_t>(4, d - 1));
    Matrix a = random_matrix(d, r, rng);
    Matrix b = random_matrix(d, r, rng);
    std::vector<double> x(d);
    for (auto& v : x) v = rng.gaussian();
    CHECK(verify_distance_perturbation(a, b, x));
  }
}

TEST_CASE("distance perturbation validates shapes and rank") {
  Rng rng(17);
  Matrix a = random_matrix(5, 2, rng);
  Matrix wrong = random_matrix(5, 3, rng);
  std::vector<double> x(5, 1.0);
  CHECK_THROWS_AS(verify_distance_perturbation(a, wrong, x), invalid_input);

  std::vector<double> short_x(4, 1.0);
  CHECK_THROWS_AS(verify_distance_perturbation(a, a, short_x), invalid_input);

  Matrix defic(5, 2);
  for (std::size_t i = 0; i < 5; ++i) defic(i, 0) = defic(i, 1) = 1.0;
  CHECK_THROWS_AS(verify_distance_perturbation(defic, a, x), invalid_input);
}

TEST_CASE("concentration event is certain below a negative threshold") {
  ConcentrationReport rep = concentration_check(4, 16, 10.0, 200, 3);
  CHECK(rep.threshold < 0.0);
  CHECK(rep.empirical_rate == 1.0);
  CHECK(rep.lower_bound == doctest::Approx(1.0 - 8.0 * std::exp(-4.0 * 100.0 / 2.0)).epsilon(1e-12));
}

TEST_CASE("one dimensional subspaces use the degenerate threshold") {
  ConcentrationReport rep = concentration_check(1, 4, 0.5, 150, 7);
  CHECK(rep.threshold == doctest::Approx(1.0 - 0.25).epsilon(1e-15));
  CHECK(rep.empirical_rate >= 0.0);
  CHECK(rep.empirical_rate <= 1.0);
  CHECK(rep.trace_assumption_rate >= 0.0);
  CHECK(rep.trace_assumption_rate <= 1.0);
}

TEST_CASE("concentration check is deterministic and validates input") {
  ConcentrationReport a = concentration_check(4, 12, 0.3, 300, 5);
  ConcentrationReport b = concentration_check(4, 12, 0.3, 300, 5);
  CHECK(a.empirical_rate == b.empirical_rate);
  CHECK(a.trace_assumption_rate == b.trace_assumption_rate);

  CHECK_THROWS_AS(concentration_check(0, 8, 0.3, 200, 1), invalid_input);
  CHECK_THROWS_AS(concentration_check(9, 8, 0.3, 200, 1), invalid_input);
  CHECK_THROWS_AS(concentration_check(4, 8, 0.3, 99, 1), invalid_input);
  CHECK_THROWS_AS(concentration_check(4, 8, 0.0, 200, 1), invalid_input);
}

TEST_CASE("spectral tail bound closed forms") {
  DataMatrix id{Matrix::identity(10), true};
  const double got = c_p_p0(id, 8, 4);
  const double want = (1.0 + 17.0 * std::sqrt(2.0)) + (8.0 * std::sqrt(8.0) / 5.0) * std::sqrt(6.0);
  CHECK(got == doctest::Approx(want).epsilon(1e-12));
  CHECK(got == doctest::Approx(36.126755728783429).epsilon(1e-13));

  // Doubling the data doubles the bound.
  Matrix twice = Matrix::identity(10);
  for (std::size_t i = 0; i < 10; ++i) twice(i, i) = 2.0;
  CHECK(c_p_p0(DataMatrix{twice, false}, 8, 4) == doctest::Approx(2.0 * got).epsilon(1e-12));
}

TEST_CASE("low rank data has a vanishing tail bound") {
  Rng rng(19);
  Matrix base = random_matrix(10, 2, rng);
  Matrix mix = random_matrix(2, 8, rng);
  const Matrix x = normalize_columns(multiply(base, mix));  // rank 2
  // sigma_3.. are zero up to the eigensolver's floor, so the bound is tiny
  // but not exactly zero.
  CHECK(c_p_p0(DataMatrix{x, true}, 7, 2) <= 1e-4);
}

TEST_CASE("spectral tail bound validates its split") {
  DataMatrix id{Matrix::identity(10), true};
  CHECK_THROWS_AS(c_p_p0(id, 8, 1), invalid_input);
  CHECK_THROWS_AS(c_p_p0(id, 5, 2), invalid_input);
}

TEST_CASE("certifying the oracle solution itself yields a zero gap") {
  Matrix x = mat(2, 3, {1, 0, kInvSqrt2,
                        0, 1, kInvSqrt2});
  DataMatrix xd{x, true};
  auto bf = brute_force_l0(xd, 2, 0.1, 2);
  auto cert = certify_optimality(xd, 2, 0.1, bf.beta);
  CHECK(cert.gap_bound == 0.0);
  CHECK(cert.oracle_support == bf.support);
  CHECK(cert.oracle_objective == doctest::Approx(bf.objective).epsilon(1e-15));
}

TEST_CASE("a constructed instance certifies and matches the oracle support") {
  // Column 2 is exactly 3 * column 0; at lambda = 4.5 the one-atom code is
  // optimal and the certificate inequalities hold with equality.
  Matrix x = mat(2, 3, {1, 0, 3,
                        0, 1, 0});
  DataMatrix xd{x, false};
  std::vector<double> beta_hat = {3.0, 0.0, 0.0};
  auto cert = certify_optimality(xd, 2, 4.5, beta_hat);
  CHECK(cert.certified);
  CHECK(cert.kappa0 == 1.0);
  CHECK(cert.mu == 3.0);
  CHECK(cert.h_star == 3.0);
  CHECK(cert.beta_hat_min == 3.0);
  REQUIRE(cert.oracle_support.size() == 1);
  CHECK(cert.oracle_support[0] == 0);
  CHECK(cert.gap_bound == 0.0);
}

TEST_CASE("lambda below the certificate window is rejected") {
  Matrix x = mat(2, 3, {1, 0, 3,
                        0, 1, 0});
  DataMatrix xd{x, false};
  std::vector<double> beta_hat = {3.0, 0.0, 0.0};
  auto cert = certify_optimality(xd, 2, 0.1, beta_hat);
  CHECK(!cert.certified);
  CHECK(cert.gap_bound == 0.0);  // supports still agree
}

TEST_CASE("certificate gap bounds the distance to the optimum") {
  Rng rng(29);
  for (int t = 0; t < 10; ++t) {
    DataMatrix x = unit_columns(random_matrix(4, 7, rng));
    const double lambda = 0.3 + 0.05 * double(t % 5);
    const auto sol = pgd_solve_point(x.x, 1, SolverOptions{.lambda = lambda});
    const auto cert = certify_optimality(x, 1, lambda, sol.beta);
    double dist2 = 0.0;
    for (std::size_t j = 0; j < 7; ++j) {
      const double dv = sol.beta[j] - cert.beta_star[j];
      dist2 += dv * dv;
    }
    CHECK(cert.gap_bound >= std::sqrt(dist2) - 1e-9);
    if (cert.certified) {
      std::vector<std::size_t> sup;
      for (std::size_t j = 0; j < 7; ++j)
        if (sol.beta[j] != 0.0) sup.push_back(j);
      CHECK(sup == cert.oracle_support);
    }
  }
}

TEST_CASE("certify validates its inputs and guards rank deficiency") {
  Matrix x = mat(2, 3, {1, 1, 2,
                        0, 0, 0});
  DataMatrix xd{x, false};
  std::vector<double> ok = {2.0, 0.0, 0.0};
  CHECK_THROWS_AS(certify_optimality(xd, 5, 0.5, ok), invalid_input);
  CHECK_THROWS_AS(certify_optimality(xd, 2, 0.0, ok), invalid_input);
  std::vector<double> short_beta = {1.0, 0.0};
  CHECK_THROWS_AS(certify_optimality(xd, 2, 0.5, short_beta), invalid_input);
  std::vector<double> self = {0.0, 0.0, 1.0};
  CHECK_THROWS_AS(certify_optimality(xd, 2, 0.5, self), invalid_input);

  // beta_hat leaning on column 1 unions with the oracle support {0} into a
  // rank-one pair of duplicate directions.
  std::vector<double> other = {0.0, 2.0, 0.0};
  CHECK_THROWS_AS(certify_optimality(xd, 2, 0.5, other), guard_error);
}
