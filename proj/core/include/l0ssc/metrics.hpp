#pragma once

#include <vector>

#include "l0ssc/model.hpp"

namespace l0ssc {

// Diagnostics of a code matrix against ground-truth classes. Per-point flag i
// is true when column i is nonzero and every nonzero entry points to a column
// of the same class. The violation rate counts unordered pairs (i, j) of
// different classes linked by a nonzero similarity weight; the rate over all
// pairs is reported alongside since either denominator is defensible.
struct SdpReport {
  double violation_rate = 0.0;      // cross-class pair denominator
  double violation_rate_all = 0.0;  // all-pair denominator
  std::vector<bool> per_point_sdp;
  int zero_code_count = 0;
};

// Best-bijection agreement: optimal assignment on the confusion matrix.
double accuracy(const std::vector<int>& pred, const std::vector<int>& truth);

// I(pred;truth) / sqrt(H(pred) H(truth)), natural log. Two single-cluster
// partitions agree perfectly (1); exactly one zero-entropy partition shares
// no information (0).
double nmi(const std::vector<int>& pred, const std::vector<int>& truth);

// Entries count as nonzero exactly when they differ from 0: hard thresholding
// produces exact zeros, so no tolerance is involved.
SdpReport sdp_violation(const SparseCodeMatrix& codes, const std::vector<int>& truth);

}  // namespace l0ssc
