#include "l0ssc/project.hpp"

#include <string>
#include <utility>

namespace l0ssc {

Projector lowrank_projector(const Matrix& x, std::size_t p, std::uint64_t seed) {
  const std::size_t d = x.rows(), n = x.cols();
  if (p < 1 || p > std::min(d, n))
    throw invalid_input("lowrank_projector: need 1 <= p <= min(d, n)");

  for (int attempt = 0; attempt < 3; ++attempt) {
    Rng rng = Rng::stream(seed, stream_role::projector, std::uint64_t(attempt));
    Matrix t(n, p);
    for (std::size_t j = 0; j < p; ++j)
      for (std::size_t i = 0; i < n; ++i) t(i, j) = rng.gaussian();
    Matrix b = multiply(x, t);
    if (singular_values(b).back() <= kRankTol) continue;  // resample with next derived seed

    Projector out;
    out.kind = ProjectorKind::lowrank;
    out.p = p;
    out.seed = seed;
    out.dense = transpose(qr_decompose(b).q);
    return out;
  }
  throw guard_error("lowrank_projector: sketch rank-deficient after 3 attempts (is p > rank(X)?)");
}

Projector countsketch_projector(std::size_t d, std::size_t p, std::uint64_t seed) {
  if (p < 1 || p > d) throw invalid_input("countsketch_projector: need 1 <= p <= d");
  Rng rng = Rng::stream(seed, stream_role::projector, 0);
  std::vector<std::size_t> hash(d);
  std::vector<double> sign(d);
  for (std::size_t j = 0; j < d; ++j) {
    hash[j] = std::size_t(rng.uniform_below(p));
    sign[j] = rng.rademacher();
  }
  Projector out = countsketch_from(d, p, std::move(hash), std::move(sign));
  out.seed = seed;
  return out;
}

Projector countsketch_from(std::size_t d, std::size_t p, std::vector<std::size_t> hash,
                           std::vector<double> sign) {
  if (hash.size() != d || sign.size() != d)
    throw invalid_input("countsketch_from: hash/sign must have one entry per input dimension");
  Projector out;
  out.kind = ProjectorKind::countsketch;
  out.p = p;
  out.dense = Matrix(p, d);
  for (std::size_t j = 0; j < d; ++j) {
    if (hash[j] >= p) throw invalid_input("countsketch_from: hash row out of range");
    if (sign[j] != 1.0 && sign[j] != -1.0)
      throw invalid_input("countsketch_from: signs must be +-1");
    out.dense(hash[j], j) = sign[j];
  }
  out.hash = std::move(hash);
  out.sign = std::move(sign);
  return out;
}

Matrix apply(const Projector& projector, const Matrix& x) {
  if (x.rows() != projector.dense.cols())
    throw invalid_input("apply: projector expects dimension " +
                        std::to_string(projector.dense.cols()));
  if (projector.kind == ProjectorKind::countsketch) {
    Matrix y(projector.p, x.cols());
    for (std::size_t c = 0; c < x.cols(); ++c) {
      const double* xc = x.col(c).data();
      double* yc = y.col(c).data();
      for (std::size_t j = 0; j < x.rows(); ++j)
        yc[projector.hash[j]] += projector.sign[j] * xc[j];
    }
    return y;
  }
  return multiply(projector.dense, x);
}

}  // namespace l0ssc
