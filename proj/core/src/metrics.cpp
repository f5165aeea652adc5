#include "l0ssc/metrics.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "l0ssc/numkern.hpp"

namespace l0ssc {

namespace {

// Compact labels to 0..K-1 in sorted-key order.
std::vector<int> compact(const std::vector<int>& labels, int& k_out) {
  std::map<int, int> ids;
  for (int l : labels) ids.emplace(l, 0);
  int next = 0;
  for (auto& [key, id] : ids) id = next++;
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) out[i] = ids[labels[i]];
  k_out = next;
  return out;
}

void check_lengths(const std::vector<int>& pred, const std::vector<int>& truth) {
  if (pred.size() != truth.size())
    throw invalid_input("label sequences differ in length: " + std::to_string(pred.size()) +
                        " vs " + std::to_string(truth.size()));
  if (pred.empty()) throw invalid_input("empty label sequences");
}

// Minimum-cost perfect assignment on a square cost matrix via the potentials
// (Kuhn-Munkres) method; O(m^3). Returns row -> column.
std::vector<int> min_cost_assignment(const std::vector<std::vector<double>>& cost) {
  const int m = static_cast<int>(cost.size());
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(m) + 1, 0.0), v(static_cast<std::size_t>(m) + 1, 0.0);
  std::vector<int> p(static_cast<std::size_t>(m) + 1, 0), way(static_cast<std::size_t>(m) + 1, 0);
  for (int i = 1; i <= m; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(m) + 1, kInf);
    std::vector<char> used(static_cast<std::size_t>(m) + 1, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = p[static_cast<std::size_t>(j0)];
      int j1 = 0;
      double delta = kInf;
      for (int j = 1; j <= m; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = cost[static_cast<std::size_t>(i0 - 1)][static_cast<std::size_t>(j - 1)] -
                           u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(static_cast<std::size_t>(m), -1);
  for (int j = 1; j <= m; ++j) {
    if (p[static_cast<std::size_t>(j)] >= 1) row_to_col[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1)] = j - 1;
  }
  return row_to_col;
}

}  // namespace

double accuracy(const std::vector<int>& pred, const std::vector<int>& truth) {
  check_lengths(pred, truth);
  int ka = 0, kb = 0;
  const std::vector<int> a = compact(pred, ka);
  const std::vector<int> b = compact(truth, kb);
  const int m = std::max(ka, kb);
  std::vector<std::vector<double>> confusion(static_cast<std::size_t>(m),
                                             std::vector<double>(static_cast<std::size_t>(m), 0.0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    confusion[static_cast<std::size_t>(a[i])][static_cast<std::size_t>(b[i])] += 1.0;
  }
  // Maximize matches = minimize negated counts.
  std::vector<std::vector<double>> cost(static_cast<std::size_t>(m),
                                        std::vector<double>(static_cast<std::size_t>(m), 0.0));
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) cost[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = -confusion[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  const std::vector<int> match = min_cost_assignment(cost);
  double hits = 0.0;
  for (int r = 0; r < m; ++r) {
    if (match[static_cast<std::size_t>(r)] >= 0) hits += confusion[static_cast<std::size_t>(r)][static_cast<std::size_t>(match[static_cast<std::size_t>(r)])];
  }
  return hits / static_cast<double>(a.size());
}

double nmi(const std::vector<int>& pred, const std::vector<int>& truth) {
  check_lengths(pred, truth);
  int ka = 0, kb = 0;
  const std::vector<int> a = compact(pred, ka);
  const std::vector<int> b = compact(truth, kb);
  const double n = static_cast<double>(a.size());

  std::vector<double> pa(static_cast<std::size_t>(ka), 0.0), pb(static_cast<std::size_t>(kb), 0.0);
  std::vector<std::vector<double>> joint(static_cast<std::size_t>(ka),
                                         std::vector<double>(static_cast<std::size_t>(kb), 0.0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    pa[static_cast<std::size_t>(a[i])] += 1.0;
    pb[static_cast<std::size_t>(b[i])] += 1.0;
    joint[static_cast<std::size_t>(a[i])][static_cast<std::size_t>(b[i])] += 1.0;
  }

  double ha = 0.0, hb = 0.0;
  for (double c : pa)
    if (c > 0.0) ha -= (c / n) * std::log(c / n);
  for (double c : pb)
    if (c > 0.0) hb -= (c / n) * std::log(c / n);

  if (ha == 0.0 && hb == 0.0) return 1.0;
  if (ha == 0.0 || hb == 0.0) return 0.0;

  double mi = 0.0;
  for (int r = 0; r < ka; ++r) {
    for (int c = 0; c < kb; ++c) {
      const double nij = joint[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
      if (nij > 0.0) mi += (nij / n) * std::log(n * nij / (pa[static_cast<std::size_t>(r)] * pb[static_cast<std::size_t>(c)]));
    }
  }
  return mi / std::sqrt(ha * hb);
}

SdpReport sdp_violation(const SparseCodeMatrix& codes, const std::vector<int>& truth) {
  const Matrix& z = codes.z;
  if (z.rows() != z.cols()) throw invalid_input("sdp_violation: code matrix must be square");
  const int n = z.rows();
  if (static_cast<int>(truth.size()) != n)
    throw invalid_input("sdp_violation: labels length " + std::to_string(truth.size()) +
                        " does not match n = " + std::to_string(n));

  SdpReport out;
  out.per_point_sdp.assign(static_cast<std::size_t>(n), false);
  for (int i = 0; i < n; ++i) {
    bool any = false;
    bool within = true;
    for (int j = 0; j < n; ++j) {
      if (j == i || z(j, i) == 0.0) continue;
      any = true;
      if (truth[static_cast<std::size_t>(j)] != truth[static_cast<std::size_t>(i)]) within = false;
    }
    out.per_point_sdp[static_cast<std::size_t>(i)] = any && within;
    if (!any) ++out.zero_code_count;
  }

  long long cross = 0, viol = 0;
  const long long all_pairs = static_cast<long long>(n) * (n - 1) / 2;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const bool linked = z(i, j) != 0.0 || z(j, i) != 0.0;
      if (truth[static_cast<std::size_t>(i)] != truth[static_cast<std::size_t>(j)]) {
        ++cross;
        if (linked) ++viol;
      }
    }
  }
  out.violation_rate = cross > 0 ? static_cast<double>(viol) / static_cast<double>(cross) : 0.0;
  out.violation_rate_all = all_pairs > 0 ? static_cast<double>(viol) / static_cast<double>(all_pairs) : 0.0;
  return out;
}

}  // namespace l0ssc
