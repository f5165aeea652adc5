#include "l0ssc/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <ostream>
#include <thread>
#include <vector>

#include "l0ssc/io.hpp"
#include "l0ssc/synth.hpp"

namespace l0ssc {

namespace {

using clock_type = std::chrono::steady_clock;

double ms_since(clock_type::time_point t0) {
  return std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
}

int infer_clusters(const std::vector<int>& truth) {
  int mx = -1;
  for (int l : truth) {
    if (l < 0) throw invalid_input("labels must be nonnegative");
    mx = std::max(mx, l);
  }
  return mx + 1;
}

// Unit-normalize wherever possible; sketching can collapse a column to zero
// (count-sketch cancellation), and such a column is left as it is rather
// than rejected, it simply codes nothing.
void renormalize_lenient(Matrix& x) {
  for (std::size_t j = 0; j < x.cols(); ++j) {
    auto col = x.col(j);
    const double nn = norm2(col);
    if (nn > kZeroColumnTol) {
      for (auto& v : col) v /= nn;
    }
  }
}

// Marginal-correlation warm start: the plain gradient step from zero lands
// on 2s * X^T x_i, whose largest entries are these correlations; seeding the
// few strongest keeps the solver off the all-zeros fixed point.
constexpr std::size_t kWarmEntries = 6;

Matrix warm_start(const Matrix& x) {
  const std::size_t n = x.cols();
  Matrix init(n, n);
  const std::size_t m = std::min<std::size_t>(kWarmEntries, n > 0 ? n - 1 : 0);
  if (m == 0) return init;
  std::vector<std::pair<double, std::size_t>> corr;
  corr.reserve(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    corr.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) corr.emplace_back(dot(x.col(j), x.col(i)), j);
    }
    std::partial_sort(corr.begin(), corr.begin() + static_cast<std::ptrdiff_t>(m), corr.end(),
                      [](const auto& a, const auto& b) {
                        const double fa = std::abs(a.first), fb = std::abs(b.first);
                        if (fa != fb) return fa > fb;
                        return a.second < b.second;
                      });
    for (std::size_t t = 0; t < m; ++t) init(corr[t].second, i) = corr[t].first;
  }
  return init;
}

}  // namespace

PipelineResult run_pipeline(const Matrix& data, const std::vector<int>& truth,
                            const PipelineConfig& config) {
  if (data.cols() == 0) throw invalid_input("run_pipeline: empty data");
  if (truth.size() != data.cols())
    throw invalid_input("run_pipeline: labels length does not match point count");
  const int k = config.k > 0 ? config.k : infer_clusters(truth);
  if (k < 1) throw invalid_input("run_pipeline: cluster count must be positive");

  PipelineResult out;
  const auto t0 = clock_type::now();

  // Projection stage (includes input normalization).
  const auto t_proj = clock_type::now();
  Matrix working = config.renormalize ? normalize_columns(data) : data;
  if (config.method != Method::full) {
    const std::size_t dn = std::min(working.rows(), working.cols());
    const std::size_t p = config.p > 0 ? config.p : (dn + 9) / 10;
    Projector drawn;
    const Projector* proj = config.projector_override;
    if (!proj) {
      drawn = config.method == Method::dr_lowrank
                  ? lowrank_projector(working, p, config.seed)
                  : countsketch_projector(working.rows(), p, config.seed);
      proj = &drawn;
    }
    working = apply(*proj, working);
    renormalize_lenient(working);
    out.p_used = proj->p;
  }
  out.times.project_ms = ms_since(t_proj);

  // Solve stage.
  const auto t_solve = clock_type::now();
  SolverOptions opts = config.solver;
  opts.lambda = config.lambda;
  if (config.init == InitPolicy::warm) {
    const Matrix init = warm_start(working);
    out.solve = solve_all(working, opts, &init);
  } else {
    out.solve = solve_all(working, opts);
  }
  out.codes = out.solve.codes;
  out.times.solve_ms = ms_since(t_solve);

  // Clustering stage.
  const auto t_cluster = clock_type::now();
  const SimilarityMatrix w = similarity_from_codes(out.codes);
  out.labels = spectral_cluster(w, k, config.seed).labels;
  out.times.cluster_ms = ms_since(t_cluster);

  // Metrics stage.
  const auto t_metrics = clock_type::now();
  out.ac = accuracy(out.labels, truth);
  out.nmi = nmi(out.labels, truth);
  out.sdp = sdp_violation(out.codes, truth);
  out.times.metrics_ms = ms_since(t_metrics);

  out.times.total_ms = ms_since(t0);
  return out;
}

std::vector<SweepRow> run_sweep(const Matrix& data, const std::vector<int>& truth,
                                const SweepConfig& config) {
  if (config.lambdas.empty()) throw invalid_input("run_sweep: empty lambda grid");
  for (double l : config.lambdas) {
    if (!(l > 0.0) || !(l < 1.0))
      throw invalid_input("run_sweep: lambda grid values must lie in (0, 1)");
  }
  if (config.seeds < 1) throw invalid_input("run_sweep: need at least one seed");
  if (config.sigma2 && *config.sigma2 < 0.0)
    throw invalid_input("run_sweep: sigma2 must be nonnegative");

  struct Cell {
    double violation_cross = 0.0;
    double violation_all = 0.0;
    double ac = 0.0;
    double nmi = 0.0;
    double wall_ms = 0.0;
  };
  const std::size_t n_lambda = config.lambdas.size();
  const std::size_t n_cells = n_lambda * config.seeds;
  std::vector<Cell> cells(n_cells);

  auto run_cell = [&](std::size_t idx) {
    const double lambda = config.lambdas[idx / config.seeds];
    const std::uint64_t seed = config.base_seed + idx % config.seeds;
    PipelineConfig pc;
    pc.method = config.method;
    pc.lambda = lambda;
    pc.p = config.p;
    pc.seed = seed;
    pc.init = config.init;
    pc.renormalize = config.renormalize;
    pc.solver = config.solver;
    PipelineResult res;
    if (config.sigma2) {
      const NoisyCopy noisy = add_gaussian_noise(data, *config.sigma2, seed);
      res = run_pipeline(noisy.x, truth, pc);
    } else {
      res = run_pipeline(data, truth, pc);
    }
    cells[idx] = Cell{res.sdp.violation_rate, res.sdp.violation_rate_all, res.ac, res.nmi,
                      res.times.total_ms};
  };

  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min({workers, n_cells, std::size_t{8}});
  if (workers <= 1) {
    for (std::size_t idx = 0; idx < n_cells; ++idx) run_cell(idx);
  } else {
    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr err;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        while (true) {
          const std::size_t idx = next.fetch_add(1);
          if (idx >= n_cells) return;
          try {
            run_cell(idx);
          } catch (...) {
            const std::lock_guard<std::mutex> lock(err_mutex);
            if (!err) err = std::current_exception();
            return;
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
  }

  std::vector<SweepRow> rows;
  rows.reserve(n_cells + n_lambda);
  for (std::size_t li = 0; li < n_lambda; ++li) {
    Cell sum;
    for (std::size_t si = 0; si < config.seeds; ++si) {
      const Cell& c = cells[li * config.seeds + si];
      rows.push_back(SweepRow{config.lambdas[li],
                              static_cast<std::int64_t>(config.base_seed + si),
                              c.violation_cross, c.violation_all, c.ac, c.nmi, c.wall_ms});
      sum.violation_cross += c.violation_cross;
      sum.violation_all += c.violation_all;
      sum.ac += c.ac;
      sum.nmi += c.nmi;
      sum.wall_ms += c.wall_ms;
    }
    const double inv = 1.0 / static_cast<double>(config.seeds);
    rows.push_back(SweepRow{config.lambdas[li], -1, sum.violation_cross * inv,
                            sum.violation_all * inv, sum.ac * inv, sum.nmi * inv,
                            sum.wall_ms * inv});
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "lambda,seed,violation_cross,violation_all,ac,nmi,wall_ms\n";
  for (const SweepRow& r : rows) {
    os << format_double(r.lambda) << ',' << r.seed << ',' << format_double(r.violation_cross)
       << ',' << format_double(r.violation_all) << ',' << format_double(r.ac) << ','
       << format_double(r.nmi) << ',' << format_double(r.wall_ms) << '\n';
  }
}

}  // namespace l0ssc
