#include "l0ssc/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "l0ssc/numkern.hpp"

namespace l0ssc {

SimilarityMatrix similarity_from_codes(const SparseCodeMatrix& codes) {
  const Matrix& z = codes.z;
  if (z.rows() != z.cols()) throw invalid_input("similarity_from_codes: code matrix must be square");
  const int n = z.rows();
  SimilarityMatrix out;
  out.w = Matrix(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      out.w(i, j) = 0.5 * (std::abs(z(i, j)) + std::abs(z(j, i)));
    }
    out.w(j, j) = 0.0;
  }
  return out;
}

namespace {

// Squared distance between column i of `pts` and center c (length = rows).
double dist2_to_center(const Matrix& pts, int i, const std::vector<double>& c) {
  double acc = 0.0;
  const int nr = static_cast<int>(pts.rows());
  for (int r = 0; r < nr; ++r) {
    const double diff = pts(r, i) - c[static_cast<std::size_t>(r)];
    acc += diff * diff;
  }
  return acc;
}

std::vector<std::vector<double>> plusplus_seed(const Matrix& pts, int k, Rng& rng) {
  const int n = pts.cols();
  const int dim = pts.rows();
  std::vector<std::vector<double>> centers;
  centers.reserve(static_cast<std::size_t>(k));

  const int first = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n)));
  centers.emplace_back(pts.col(first).begin(), pts.col(first).end());

  std::vector<double> d2(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) d2[static_cast<std::size_t>(i)] = dist2_to_center(pts, i, centers[0]);

  while (static_cast<int>(centers.size()) < k) {
    double total = 0.0;
    for (double v : d2) total += v;
    int pick = 0;
    if (total > 0.0) {
      // Sample proportional to squared distance from the nearest center.
      const double target = rng.uniform01() * total;
      double cum = 0.0;
      pick = n - 1;
      for (int i = 0; i < n; ++i) {
        cum += d2[static_cast<std::size_t>(i)];
        if (cum >= target) {
          pick = i;
          break;
        }
      }
    } else {
      // All points coincide with existing centers; any choice is equivalent.
      pick = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n)));
    }
    centers.emplace_back(pts.col(pick).begin(), pts.col(pick).end());
    for (int i = 0; i < n; ++i) {
      const double cand = dist2_to_center(pts, i, centers.back());
      double& cur = d2[static_cast<std::size_t>(i)];
      if (cand < cur) cur = cand;
    }
  }
  (void)dim;
  return centers;
}

KmeansResult lloyd(const Matrix& pts, int k, Rng& rng, int max_iter) {
  const int n = pts.cols();
  const int dim = pts.rows();
  auto centers = plusplus_seed(pts, k, rng);
  std::vector<int> assign(static_cast<std::size_t>(n), 0);

  for (int it = 0; it < max_iter; ++it) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_d = dist2_to_center(pts, i, centers[0]);
      for (int c = 1; c < k; ++c) {
        const double d = dist2_to_center(pts, i, centers[static_cast<std::size_t>(c)]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (assign[static_cast<std::size_t>(i)] != best) {
        assign[static_cast<std::size_t>(i)] = best;
        changed = true;
      }
    }
    if (!changed && it > 0) break;

    std::vector<int> count(static_cast<std::size_t>(k), 0);
    for (auto& c : centers) std::fill(c.begin(), c.end(), 0.0);
    for (int i = 0; i < n; ++i) {
      const int c = assign[static_cast<std::size_t>(i)];
      ++count[static_cast<std::size_t>(c)];
      for (int r = 0; r < dim; ++r) centers[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)] += pts(r, i);
    }
    for (int c = 0; c < k; ++c) {
      if (count[static_cast<std::size_t>(c)] > 0) {
        const double inv = 1.0 / count[static_cast<std::size_t>(c)];
        for (double& v : centers[static_cast<std::size_t>(c)]) v *= inv;
      }
    }
    // Re-seed any emptied cluster with the point farthest from its centroid.
    for (int c = 0; c < k; ++c) {
      if (count[static_cast<std::size_t>(c)] > 0) continue;
      int far = 0;
      double far_d = -1.0;
      for (int i = 0; i < n; ++i) {
        const int a = assign[static_cast<std::size_t>(i)];
        const double d = dist2_to_center(pts, i, centers[static_cast<std::size_t>(a)]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      centers[static_cast<std::size_t>(c)].assign(pts.col(far).begin(), pts.col(far).end());
      assign[static_cast<std::size_t>(far)] = c;
    }
  }

  KmeansResult out;
  out.labels = assign;
  out.objective = 0.0;
  for (int i = 0; i < n; ++i) {
    out.objective += dist2_to_center(pts, i, centers[static_cast<std::size_t>(assign[static_cast<std::size_t>(i)])]);
  }
  return out;
}

}  // namespace

KmeansResult kmeans(const Matrix& points, int k, std::uint64_t seed, int restarts, int max_iter) {
  const int n = points.cols();
  if (n == 0) throw invalid_input("kmeans: no points");
  if (k < 1 || k > n) throw invalid_input("kmeans: need 1 <= k <= " + std::to_string(n));
  if (restarts < 1) throw invalid_input("kmeans: restarts must be positive");

  KmeansResult best;
  best.objective = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    Rng rng = Rng::stream(seed, stream_role::cluster, static_cast<std::uint64_t>(r));
    KmeansResult cand = lloyd(points, k, rng, max_iter);
    if (cand.objective < best.objective) best = std::move(cand);
  }
  return best;
}

Labeling spectral_cluster(const SimilarityMatrix& w, int k, std::uint64_t seed) {
  const Matrix& a = w.w;
  if (a.rows() != a.cols()) throw invalid_input("spectral_cluster: similarity must be square");
  const int n = a.rows();
  if (k < 1 || k > n) throw invalid_input("spectral_cluster: need 1 <= k <= " + std::to_string(n));

  std::vector<double> dinv_sqrt(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double deg = 0.0;
    for (int j = 0; j < n; ++j) deg += a(i, j);
    deg = std::max(deg, kDegreeFloor);
    dinv_sqrt[static_cast<std::size_t>(i)] = 1.0 / std::sqrt(deg);
  }

  Matrix s(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      s(i, j) = dinv_sqrt[static_cast<std::size_t>(i)] * a(i, j) * dinv_sqrt[static_cast<std::size_t>(j)];
    }
  }

  EigenResult eig = sym_eigen(s);

  // Embedded points as columns: coordinate c of point i is the i-th entry of
  // the c-th leading eigenvector.
  Matrix emb(k, n);
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < k; ++c) emb(c, i) = eig.vectors(i, c);
    double nrm = 0.0;
    for (int c = 0; c < k; ++c) nrm += emb(c, i) * emb(c, i);
    nrm = std::sqrt(nrm);
    if (nrm > kZeroColumnTol) {
      for (int c = 0; c < k; ++c) emb(c, i) /= nrm;
    }
    // else: keep the zero row; isolated vertices cluster together.
  }

  KmeansResult km = kmeans(emb, k, seed);
  Labeling out;
  out.labels = std::move(km.labels);
  out.k = k;
  return out;
}

}  // namespace l0ssc
