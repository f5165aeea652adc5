#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "l0ssc/cluster.hpp"
#include "l0ssc/metrics.hpp"
#include "l0ssc/model.hpp"
#include "l0ssc/project.hpp"
#include "l0ssc/solver.hpp"

namespace l0ssc {

enum class Method { full, dr_lowrank, dr_countsketch };
enum class InitPolicy { zeros, warm };

// End-to-end run: (optional projection) -> sparse codes -> similarity ->
// spectral clustering -> metrics against the supplied ground truth.
struct PipelineConfig {
  Method method = Method::full;
  double lambda = 0.5;
  std::size_t p = 0;   // sketch size; 0 picks ceil(min(d, n) / 10)
  std::uint64_t seed = 0;
  int k = 0;           // cluster count; 0 infers max(truth) + 1
  InitPolicy init = InitPolicy::warm;
  bool renormalize = true;  // unit-normalize input columns before anything else
  SolverOptions solver;
  // Test hook: use this projector instead of drawing one from the seed.
  const Projector* projector_override = nullptr;
};

struct StageTimes {
  double project_ms = 0.0;
  double solve_ms = 0.0;
  double cluster_ms = 0.0;
  double metrics_ms = 0.0;
  double total_ms = 0.0;
};

struct PipelineResult {
  std::vector<int> labels;
  SparseCodeMatrix codes;
  SdpReport sdp;
  double ac = 0.0;
  double nmi = 0.0;
  StageTimes times;
  SolveResult solve;
  std::size_t p_used = 0;  // 0 for the full method
};

PipelineResult run_pipeline(const Matrix& data, const std::vector<int>& truth,
                            const PipelineConfig& config);

// Grid of (lambda, seed) cells plus one aggregate row per lambda.
struct SweepConfig {
  Method method = Method::full;
  std::vector<double> lambdas;
  std::uint64_t base_seed = 0;
  std::size_t seeds = 1;  // uses base_seed .. base_seed + seeds - 1
  std::size_t p = 0;
  // When set, the input is treated as clean and corrupted per seed with
  // isotropic Gaussian noise of this variance before the run.
  std::optional<double> sigma2;
  InitPolicy init = InitPolicy::warm;
  bool renormalize = true;
  SolverOptions solver;
};

struct SweepRow {
  double lambda = 0.0;
  std::int64_t seed = 0;  // -1 marks the per-lambda aggregate (means)
  double violation_cross = 0.0;
  double violation_all = 0.0;
  double ac = 0.0;
  double nmi = 0.0;
  double wall_ms = 0.0;
};

// Rows come back grouped by lambda in grid order, seeds ascending, each
// group closed by its seed = -1 aggregate. Cells run concurrently; output
// order does not depend on scheduling.
std::vector<SweepRow> run_sweep(const Matrix& data, const std::vector<int>& truth,
                                const SweepConfig& config);

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

}  // namespace l0ssc
