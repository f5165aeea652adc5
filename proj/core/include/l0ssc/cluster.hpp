#pragma once

#include <cstdint>
#include <vector>

#include "l0ssc/model.hpp"
#include "l0ssc/rng.hpp"

namespace l0ssc {

// Symmetric nonnegative weights, zero diagonal.
struct SimilarityMatrix {
  Matrix w;
};

struct Labeling {
  std::vector<int> labels;  // 0-based
  int k = 0;
};

struct KmeansResult {
  std::vector<int> labels;
  double objective = 0.0;  // within-cluster sum of squares
};

// W = (|Z| + |Z^T|) / 2.
SimilarityMatrix similarity_from_codes(const SparseCodeMatrix& codes);

// Lloyd iterations from a k-means++ seeding, best of `restarts` runs by
// (objective, restart index); the index breaks exact ties deterministically.
// Columns of `points` are the samples. An emptied cluster is re-seeded with
// the point farthest from its centroid.
KmeansResult kmeans(const Matrix& points, int k, std::uint64_t seed, int restarts = 10,
                    int max_iter = 100);

// Spectral clustering: D^(-1/2) W D^(-1/2) with degrees floored at
// kDegreeFloor, top-k eigenvectors as columns, rows scaled to unit norm
// (all-zero rows stay zero: isolated vertices), then kmeans on the rows.
// Zero-degree vertices therefore land in a common cluster.
Labeling spectral_cluster(const SimilarityMatrix& w, int k, std::uint64_t seed);

}  // namespace l0ssc
