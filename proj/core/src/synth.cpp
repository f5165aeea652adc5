#include "l0ssc/synth.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace l0ssc {

int SynthConfig::total_points() const {
  int n = 0;
  for (int c : counts) n += c;
  return n;
}

Matrix sample_basis(std::size_t d, std::size_t dk, Rng& rng) {
  if (dk == 0 || dk > d) throw invalid_input("sample_basis: need 1 <= dk <= d");
  Matrix g(d, dk);
  for (std::size_t j = 0; j < dk; ++j)
    for (std::size_t i = 0; i < d; ++i) g(i, j) = rng.gaussian();
  return qr_decompose(g).q;
}

namespace {

void validate(const SynthConfig& c) {
  if (c.d <= 0) throw invalid_input("generate: d must be positive");
  if (c.dims.empty() || c.dims.size() != c.counts.size())
    throw invalid_input("generate: dims and counts must be nonempty and match");
  int sum = 0;
  for (std::size_t k = 0; k < c.dims.size(); ++k) {
    if (c.dims[k] <= 0 || c.dims[k] > c.d) throw invalid_input("generate: bad subspace dimension");
    if (c.counts[k] <= 0) throw invalid_input("generate: class counts must be positive");
    if (c.counts[k] < c.dims[k] + 1)
      throw invalid_input("generate: each class needs at least dim + 1 points");
    sum += c.dims[k];
  }
  if (c.orthogonalize && sum > c.d)
    throw invalid_input("generate: orthogonal bases need sum(dims) <= d");
  if (c.delta < 0.0) throw invalid_input("generate: delta must be nonnegative");
  if (c.sigma2 && *c.sigma2 < 0.0) throw invalid_input("generate: sigma2 must be nonnegative");
}

}  // namespace

Instance generate(const SynthConfig& config) {
  validate(config);
  const std::size_t d = std::size_t(config.d);
  const std::size_t K = config.dims.size();

  Instance inst;
  inst.seed = config.seed;
  inst.ensemble.dims = config.dims;
  inst.ensemble.noise_bound = config.delta;

  if (config.orthogonalize) {
    // One joint draw partitioned into blocks: exact pairwise orthogonality.
    std::size_t total = 0;
    for (int dk : config.dims) total += std::size_t(dk);
    Rng r = Rng::stream(config.seed, stream_role::basis, 0);
    Matrix joint = sample_basis(d, total, r);
    std::size_t off = 0;
    for (std::size_t k = 0; k < K; ++k) {
      const std::size_t dk = std::size_t(config.dims[k]);
      Matrix b(d, dk);
      for (std::size_t j = 0; j < dk; ++j)
        std::copy_n(joint.col(off + j).data(), d, b.col(j).data());
      inst.ensemble.bases.push_back(std::move(b));
      off += dk;
    }
  } else {
    for (std::size_t k = 0; k < K; ++k) {
      Rng r = Rng::stream(config.seed, stream_role::basis, k);
      inst.ensemble.bases.push_back(sample_basis(d, std::size_t(config.dims[k]), r));
    }
  }

  const std::size_t n = std::size_t(config.total_points());
  inst.clean = Matrix(d, n);
  inst.observed = Matrix(d, n);
  inst.ensemble.labels.reserve(n);

  double max_noise = 0.0;
  std::size_t i = 0;
  for (std::size_t k = 0; k < K; ++k) {
    const Matrix& basis = inst.ensemble.bases[k];
    const std::size_t dk = std::size_t(config.dims[k]);
    for (int c = 0; c < config.counts[k]; ++c, ++i) {
      inst.ensemble.labels.push_back(int(k));

      Rng pr = Rng::stream(config.seed, stream_role::point, i);
      std::vector<double> g(dk);
      for (auto& v : g) v = pr.gaussian();
      const double gn = norm2(g);
      for (auto& v : g) v /= gn;
      std::vector<double> y = matvec(basis, g);
      std::copy_n(y.data(), d, inst.clean.col(i).data());

      std::vector<double> noise(d, 0.0);
      if (config.sigma2) {
        if (*config.sigma2 > 0.0) {
          Rng nr = Rng::stream(config.seed, stream_role::noise, i);
          const double sd = std::sqrt(*config.sigma2);
          for (auto& v : noise) v = sd * nr.gaussian();
          max_noise = std::max(max_noise, norm2(noise));
        }
      } else if (config.delta > 0.0) {
        Rng nr = Rng::stream(config.seed, stream_role::noise, i);
        std::vector<double> dir(d);
        for (auto& v : dir) v = nr.gaussian();
        const double dn = norm2(dir);
        const double radius = config.delta * std::pow(nr.uniform01(), 1.0 / double(d));
        for (std::size_t q = 0; q < d; ++q) noise[q] = dir[q] / dn * radius;
      }
      for (std::size_t q = 0; q < d; ++q) inst.observed(q, i) = y[q] + noise[q];
    }
  }
  if (config.sigma2) inst.ensemble.noise_bound = max_noise;
  return inst;
}

NoisyCopy add_gaussian_noise(const Matrix& clean, double sigma2, std::uint64_t seed) {
  if (sigma2 < 0.0) throw invalid_input("add_gaussian_noise: sigma2 must be nonnegative");
  NoisyCopy out;
  out.x = clean;
  if (sigma2 == 0.0) return out;
  const double sd = std::sqrt(sigma2);
  std::vector<double> noise(clean.rows());
  for (std::size_t i = 0; i < clean.cols(); ++i) {
    Rng nr = Rng::stream(seed, stream_role::noise, i);
    for (auto& v : noise) v = sd * nr.gaussian();
    out.max_noise_norm = std::max(out.max_noise_norm, norm2(noise));
    auto col = out.x.col(i);
    for (std::size_t q = 0; q < noise.size(); ++q) col[q] += noise[q];
  }
  return out;
}

double affinity(const Matrix& u, const Matrix& v) {
  if (u.rows() != v.rows()) throw invalid_input("affinity: ambient dimensions disagree");
  return frobenius_norm(multiply_at_b(u, v));
}

double max_affinity(const SubspaceEnsemble& ensemble) {
  if (ensemble.bases.size() < 2)
    throw invalid_input("max_affinity: needs at least two subspaces");
  double m = 0.0;
  for (std::size_t k = 0; k < ensemble.bases.size(); ++k)
    for (std::size_t l = k + 1; l < ensemble.bases.size(); ++l)
      m = std::max(m, affinity(ensemble.bases[k], ensemble.bases[l]));
  return m;
}

}  // namespace l0ssc
