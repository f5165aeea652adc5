#pragma once

#include <cstdint>
#include <vector>

#include "l0ssc/model.hpp"
#include "l0ssc/rng.hpp"

namespace l0ssc {

enum class ProjectorKind { lowrank, countsketch };

// A p x d linear map. For countsketch the dense matrix has exactly one +-1
// per column at row hash[j]; apply() uses hash/sign directly so sketching a
// d x n matrix costs O(dn) regardless of p.
struct Projector {
  ProjectorKind kind = ProjectorKind::lowrank;
  std::size_t p = 0;
  std::uint64_t seed = 0;
  Matrix dense;               // p x d
  std::vector<std::size_t> hash;  // countsketch only, size d
  std::vector<double> sign;       // countsketch only, +-1, size d
};

// Range-finder projector: Gaussian test matrix T (n x p), thin QR of X*T,
// P = Q^T. Requires 1 <= p <= min(d, n). If X*T is numerically rank
// deficient the test matrix is resampled with a derived seed; after three
// attempts a guard_error is thrown.
Projector lowrank_projector(const Matrix& x, std::size_t p, std::uint64_t seed);

// Count-sketch projector for R^d inputs: uniform row hash, Rademacher signs.
// Requires 1 <= p <= d.
Projector countsketch_projector(std::size_t d, std::size_t p, std::uint64_t seed);

// Count-sketch from explicit hash/sign arrays. Exists so tests can force
// degenerate hashes (identity at p = d makes the sketch a signed permutation).
Projector countsketch_from(std::size_t d, std::size_t p, std::vector<std::size_t> hash,
                           std::vector<double> sign);

// Applies the projector to d x n data, returning p x n.
Matrix apply(const Projector& projector, const Matrix& x);

}  // namespace l0ssc
