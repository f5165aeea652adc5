#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "l0ssc/model.hpp"

using namespace l0ssc;
using testutil::mat;
using testutil::max_abs_diff;

TEST_CASE("normalize_columns scales to unit norm and is idempotent") {
  Matrix x = mat(2, 2, {3, 0, 4, 2});
  Matrix u = normalize_columns(x);
  CHECK(u(0, 0) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(u(1, 0) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(u(0, 1) == 0.0);
  CHECK(u(1, 1) == 1.0);
  CHECK(max_abs_diff(normalize_columns(u), u) <= 1e-15);
}

TEST_CASE("normalize_columns rejects a zero column") {
  Matrix x = mat(2, 2, {1, 0, 0, 0});
  CHECK_THROWS_AS(normalize_columns(x), invalid_input);
}

TEST_CASE("data matrix reports its shape in problem terms") {
  DataMatrix d{mat(3, 5, {1, 0, 0, 0, 0,
                          0, 1, 0, 0, 0,
                          0, 0, 1, 0, 0}), false};
  CHECK(d.dim() == 3);
  CHECK(d.count() == 5);
}

TEST_CASE("ensemble counts classes and the largest dimension") {
  SubspaceEnsemble e;
  e.bases = {Matrix(4, 2), Matrix(4, 3)};
  e.dims = {2, 3};
  e.labels = {0, 0, 1, 1, 1};
  CHECK(e.classes() == 2);
  CHECK(e.max_dim() == 3);
}

TEST_CASE("support size counts exact nonzeros only") {
  SparseCodeMatrix z{mat(3, 3, {0, 1e-300, 0,
                                0, 0, -2,
                                0.5, 0, 0})};
  CHECK(z.support_size(0) == 1);  // column 0 holds {0.5}
  CHECK(z.support_size(1) == 1);  // tiny but nonzero still counts
  CHECK(z.support_size(2) == 1);
}
