#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "l0ssc/model.hpp"
#include "l0ssc/rng.hpp"

namespace l0ssc {

struct SynthConfig {
  int d = 0;                       // ambient dimension
  std::vector<int> dims;           // subspace dimension per class
  std::vector<int> counts;         // points per class
  double delta = 0.0;              // noise radius; noise uniform in the delta-ball
  bool orthogonalize = false;      // force pairwise-orthogonal bases (needs sum(dims) <= d)
  std::uint64_t seed = 0;
  std::optional<double> sigma2;    // if set: isotropic Gaussian noise with this variance
                                   // instead of the delta-ball; noise_bound records the
                                   // largest sampled noise norm

  int classes() const { return int(dims.size()); }
  int total_points() const;
};

// Orthonormal basis of a random dk-dimensional subspace: QR of a Gaussian
// d x dk draw, sign convention from qr_decompose.
Matrix sample_basis(std::size_t d, std::size_t dk, Rng& rng);

// Draws the instance. Clean points are uniform on the unit sphere of their
// subspace; delta-ball noise has a Gaussian direction and radius
// delta * u^(1/d). Every basis and every point consumes its own stream keyed
// by (seed, role, index), so the draw is bit-reproducible and insensitive to
// evaluation order.
Instance generate(const SynthConfig& config);

// Isotropic Gaussian corruption of an existing matrix, one noise stream per
// column keyed (seed, noise, column). max_noise_norm is the largest column
// perturbation, the honest noise radius of the result.
struct NoisyCopy {
  Matrix x;
  double max_noise_norm = 0.0;
};

NoisyCopy add_gaussian_noise(const Matrix& clean, double sigma2, std::uint64_t seed);

// Affinity between two subspaces given orthonormal bases: |U^T V|_F.
double affinity(const Matrix& u, const Matrix& v);

// Largest pairwise affinity in the ensemble. Needs at least two classes.
double max_affinity(const SubspaceEnsemble& ensemble);

}  // namespace l0ssc
