// Command line driver: synth | pipeline | sweep | oracle | eval.
// Exit codes: 0 success, 2 bad input or configuration, 3 numerical guard.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "l0ssc/io.hpp"
#include "l0ssc/model.hpp"
#include "l0ssc/oracle.hpp"
#include "l0ssc/pipeline.hpp"
#include "l0ssc/synth.hpp"

#ifndef L0SSC_VERSION
#define L0SSC_VERSION "0.0.0"
#endif

namespace {

using nlohmann::json;

l0ssc::Matrix load_matrix(const std::string& path) {
  std::istringstream is(l0ssc::read_text_file(path));
  return l0ssc::read_data_csv(is);
}

std::vector<int> load_labels(const std::string& path) {
  std::istringstream is(l0ssc::read_text_file(path));
  return l0ssc::read_labels(is);
}

l0ssc::Method parse_method(const std::string& name) {
  if (name == "full") return l0ssc::Method::full;
  if (name == "dr-lr") return l0ssc::Method::dr_lowrank;
  if (name == "dr-csp") return l0ssc::Method::dr_countsketch;
  throw l0ssc::invalid_input("unknown method '" + name + "'");
}

const char* method_name(l0ssc::Method m) {
  switch (m) {
    case l0ssc::Method::full: return "full";
    case l0ssc::Method::dr_lowrank: return "dr-lr";
    default: return "dr-csp";
  }
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    l0ssc::write_text_file(out_path, text);
  }
}

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

long long parse_ll(const std::string& text, const char* what) {
  char* end = nullptr;
  const long long v = std::strtoll(text.c_str(), &end, 10);
  if (text.empty() || end != text.c_str() + text.size())
    throw l0ssc::invalid_input(std::string(what) + ": not an integer: '" + text + "'");
  return v;
}

double parse_d(const std::string& text, const char* what) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size())
    throw l0ssc::invalid_input(std::string(what) + ": not a number: '" + text + "'");
  return v;
}

std::vector<int> parse_int_list(const std::string& text, const char* what) {
  std::vector<int> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    const std::string piece =
        comma == std::string::npos ? text.substr(start) : text.substr(start, comma - start);
    out.push_back(static_cast<int>(parse_ll(piece, what)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

bool parse_bool(const std::string& text, const char* what) {
  if (text == "true" || text == "1" || text == "on") return true;
  if (text == "false" || text == "0" || text == "off") return false;
  throw l0ssc::invalid_input(std::string(what) + ": not a boolean: '" + text + "'");
}

// Config files share one grammar: synthesis fields plus solver fields.
struct FileConfig {
  l0ssc::SynthConfig synth;
  l0ssc::SolverOptions solver;
};

FileConfig parse_config_file(const std::string& path) {
  std::istringstream is(l0ssc::read_text_file(path));
  FileConfig fc;
  for (const auto& [key, value] : l0ssc::read_config(is)) {
    if (key == "d") {
      fc.synth.d = static_cast<int>(parse_ll(value, "config d"));
    } else if (key == "dims") {
      fc.synth.dims = parse_int_list(value, "config dims");
    } else if (key == "counts") {
      fc.synth.counts = parse_int_list(value, "config counts");
    } else if (key == "delta") {
      fc.synth.delta = parse_d(value, "config delta");
    } else if (key == "orthogonalize") {
      fc.synth.orthogonalize = parse_bool(value, "config orthogonalize");
    } else if (key == "seed") {
      fc.synth.seed = static_cast<std::uint64_t>(parse_ll(value, "config seed"));
    } else if (key == "sigma2") {
      fc.synth.sigma2 = parse_d(value, "config sigma2");
    } else if (key == "lambda") {
      fc.solver.lambda = parse_d(value, "config lambda");
    } else if (key == "step") {
      fc.solver.step = parse_d(value, "config step");
    } else if (key == "max_iter") {
      fc.solver.max_iter = static_cast<int>(parse_ll(value, "config max_iter"));
    } else if (key == "tol") {
      fc.solver.tol = parse_d(value, "config tol");
    } else {
      throw l0ssc::invalid_input("config: unknown key '" + key + "'");
    }
  }
  return fc;
}

std::vector<double> parse_lambda_grid(const std::string& text) {
  const std::size_t c1 = text.find(':');
  const std::size_t c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw l0ssc::invalid_input("lambda grid must look like a:b:step");
  const double a = parse_d(text.substr(0, c1), "lambda grid start");
  const double b = parse_d(text.substr(c1 + 1, c2 - c1 - 1), "lambda grid end");
  const double step = parse_d(text.substr(c2 + 1), "lambda grid step");
  if (!(step > 0.0)) throw l0ssc::invalid_input("lambda grid step must be positive");
  if (b < a) throw l0ssc::invalid_input("lambda grid end precedes start");
  std::vector<double> grid;
  const std::size_t count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
  for (std::size_t i = 0; i < count; ++i) grid.push_back(a + static_cast<double>(i) * step);
  return grid;
}

json solver_summary(const l0ssc::SolveResult& solve) {
  long long total_iter = 0;
  int max_iter = 0;
  int converged = 0;
  double final_obj_sum = 0.0;
  for (const l0ssc::SolveTrace& t : solve.traces) {
    total_iter += t.iterations;
    max_iter = std::max(max_iter, t.iterations);
    if (t.converged) ++converged;
    if (!t.objectives.empty()) final_obj_sum += t.objectives.back();
  }
  json j;
  j["step_used"] = solve.step_used;
  j["points"] = solve.traces.size();
  j["total_iterations"] = total_iter;
  j["max_iterations"] = max_iter;
  j["converged_count"] = converged;
  j["final_objective_sum"] = final_obj_sum;
  return j;
}

json run_record(const l0ssc::PipelineResult& res, l0ssc::Method method, double lambda,
                std::uint64_t seed, std::optional<double> recorded_delta) {
  json rec;
  rec["method"] = method_name(method);
  rec["p"] = res.p_used;
  rec["lambda"] = lambda;
  rec["ac"] = res.ac;
  rec["nmi"] = res.nmi;
  json sdp;
  sdp["violation_rate"] = res.sdp.violation_rate;
  sdp["violation_rate_all"] = res.sdp.violation_rate_all;
  sdp["zero_code_count"] = res.sdp.zero_code_count;
  sdp["per_point_sdp"] = res.sdp.per_point_sdp;
  rec["sdp"] = std::move(sdp);
  rec["wall_ms"] = res.times.total_ms;
  json stages;
  stages["project_ms"] = res.times.project_ms;
  stages["solve_ms"] = res.times.solve_ms;
  stages["cluster_ms"] = res.times.cluster_ms;
  stages["metrics_ms"] = res.times.metrics_ms;
  rec["stage_ms"] = std::move(stages);
  rec["solver"] = solver_summary(res.solve);
  rec["labels"] = res.labels;
  if (method != l0ssc::Method::full) {
    json proj;
    proj["kind"] = method == l0ssc::Method::dr_lowrank ? "lowrank" : "countsketch";
    proj["p"] = res.p_used;
    proj["seed"] = seed;
    rec["projector"] = std::move(proj);
  }
  if (recorded_delta) rec["delta"] = *recorded_delta;
  return rec;
}

struct SynthArgs {
  std::string config_path;
  std::string out_prefix = "synth";
  bool emit_clean = false;
};

void do_synth(const SynthArgs& args) {
  const FileConfig fc = parse_config_file(args.config_path);
  const l0ssc::Instance inst = l0ssc::generate(fc.synth);

  std::ostringstream data;
  l0ssc::write_data_csv(data, inst.observed);
  l0ssc::write_text_file(args.out_prefix + "_data.csv", data.str());

  std::ostringstream labels;
  l0ssc::write_labels(labels, inst.ensemble.labels);
  l0ssc::write_text_file(args.out_prefix + "_labels.txt", labels.str());

  std::ostringstream ens;
  l0ssc::write_ensemble_json(ens, inst.ensemble, inst.seed);
  l0ssc::write_text_file(args.out_prefix + "_ensemble.json", ens.str());

  if (args.emit_clean) {
    std::ostringstream clean;
    l0ssc::write_data_csv(clean, inst.clean);
    l0ssc::write_text_file(args.out_prefix + "_clean.csv", clean.str());
  }
}

struct PipelineArgs {
  std::string data_path;
  std::string labels_path;
  std::string method = "full";
  double lambda = 0.5;
  std::size_t p = 0;
  std::uint64_t seed = 0;
  std::string init = "warm";
  std::string renormalize = "on";
  double sigma2 = -1.0;  // < 0: disabled
  std::string out_path;
};

void do_pipeline(const PipelineArgs& args) {
  l0ssc::Matrix x = load_matrix(args.data_path);
  const std::vector<int> truth = load_labels(args.labels_path);

  std::optional<double> recorded_delta;
  if (args.sigma2 >= 0.0) {
    l0ssc::NoisyCopy noisy = l0ssc::add_gaussian_noise(x, args.sigma2, args.seed);
    x = std::move(noisy.x);
    recorded_delta = noisy.max_noise_norm;
  }

  l0ssc::PipelineConfig pc;
  pc.method = parse_method(args.method);
  pc.lambda = args.lambda;
  pc.p = args.p;
  pc.seed = args.seed;
  pc.init = args.init == "zeros" ? l0ssc::InitPolicy::zeros : l0ssc::InitPolicy::warm;
  pc.renormalize = parse_bool(args.renormalize, "--renormalize");
  const l0ssc::PipelineResult res = l0ssc::run_pipeline(x, truth, pc);

  json report;
  json cfg;
  cfg["data"] = args.data_path;
  cfg["labels"] = args.labels_path;
  cfg["method"] = args.method;
  cfg["lambda"] = args.lambda;
  cfg["p"] = args.p;
  cfg["seed"] = args.seed;
  cfg["init"] = args.init;
  cfg["renormalize"] = pc.renormalize;
  cfg["sigma2"] = args.sigma2 >= 0.0 ? json(args.sigma2) : json(nullptr);
  report["config"] = std::move(cfg);
  report["environment"] = {{"seed", args.seed}, {"version", L0SSC_VERSION}};
  report["runs"] = json::array({run_record(res, pc.method, args.lambda, args.seed,
                                           recorded_delta)});
  report["metadata"] = {{"violation_denominator",
                         "violation_rate counts cross-class linked pairs; "
                         "violation_rate_all divides by all point pairs"}};
  emit(report.dump(2) + "\n", args.out_path);
}

struct SweepArgs {
  std::string data_path;
  std::string labels_path;
  std::string method = "full";
  std::string grid;
  double lambda = -1.0;  // single-value grid alternative
  std::size_t p = 0;
  std::uint64_t seed = 0;
  std::size_t seeds = 1;
  std::string init = "warm";
  std::string renormalize = "on";
  double sigma2 = -1.0;
  std::string out_path;
};

void do_sweep(const SweepArgs& args) {
  const l0ssc::Matrix x = load_matrix(args.data_path);
  const std::vector<int> truth = load_labels(args.labels_path);

  l0ssc::SweepConfig sc;
  sc.method = parse_method(args.method);
  if (!args.grid.empty() && args.lambda >= 0.0)
    throw l0ssc::invalid_input("give either --lambda-grid or --lambda, not both");
  if (!args.grid.empty()) {
    sc.lambdas = parse_lambda_grid(args.grid);
  } else if (args.lambda >= 0.0) {
    sc.lambdas = {args.lambda};
  } else {
    throw l0ssc::invalid_input("sweep needs --lambda-grid or --lambda");
  }
  sc.base_seed = args.seed;
  sc.seeds = args.seeds;
  sc.p = args.p;
  if (args.sigma2 >= 0.0) sc.sigma2 = args.sigma2;
  sc.init = args.init == "zeros" ? l0ssc::InitPolicy::zeros : l0ssc::InitPolicy::warm;
  sc.renormalize = parse_bool(args.renormalize, "--renormalize");

  const std::vector<l0ssc::SweepRow> rows = l0ssc::run_sweep(x, truth, sc);
  std::ostringstream csv;
  l0ssc::write_sweep_csv(csv, rows);
  emit(csv.str(), args.out_path);
}

struct OracleArgs {
  std::string data_path;
  std::string labels_path;
  std::string clean_path;
  std::string ensemble_path;
  std::size_t point = 0;
  std::size_t r0 = 2;
  double lambda = 0.5;
  double delta = 0.0;
  bool delta_given = false;
  int dk = 0;
  std::string out_path;
};

void do_oracle(const OracleArgs& args) {
  l0ssc::Instance inst;
  inst.observed = load_matrix(args.data_path);
  const std::vector<int> labels = load_labels(args.labels_path);
  inst.clean = args.clean_path.empty() ? inst.observed : load_matrix(args.clean_path);
  if (inst.clean.rows() != inst.observed.rows() || inst.clean.cols() != inst.observed.cols())
    throw l0ssc::invalid_input("clean and observed data shapes disagree");

  if (!args.ensemble_path.empty()) {
    std::istringstream is(l0ssc::read_text_file(args.ensemble_path));
    inst.ensemble = l0ssc::read_ensemble_json(is).ensemble;
    if (args.delta_given) inst.ensemble.noise_bound = args.delta;
  } else {
    if (args.dk <= 0)
      throw l0ssc::invalid_input("oracle needs --ensemble or a positive --dk");
    int k = 0;
    for (int l : labels) k = std::max(k, l + 1);
    inst.ensemble.bases.assign(static_cast<std::size_t>(k), l0ssc::Matrix());
    inst.ensemble.dims.assign(static_cast<std::size_t>(k), args.dk);
    inst.ensemble.noise_bound = args.delta;
  }
  inst.ensemble.labels = labels;

  const l0ssc::ConditionReport rep =
      l0ssc::theorem2_conditions(inst, args.point, args.r0, args.lambda);

  json doc;
  doc["point"] = args.point;
  doc["r0"] = args.r0;
  doc["lambda"] = args.lambda;
  doc["r_star"] = rep.r_star;
  json q;
  q["tau0"] = opt_json(rep.tau0);
  q["tau1"] = opt_json(rep.tau1);
  q["sigma_x_star"] = opt_json(rep.sigma_x_star);
  q["sigma_bar_y_star"] = opt_json(rep.sigma_bar_y_star);
  q["m_i"] = opt_json(rep.m_i);
  q["m_i_delta"] = opt_json(rep.m_i_delta);
  q["mu_r0"] = opt_json(rep.mu_r0);
  q["sigma_x_r0"] = opt_json(rep.sigma_x_r0);
  q["lambda1"] = opt_json(rep.lambda1);
  q["lambda2"] = opt_json(rep.lambda2);
  q["lambda0"] = opt_json(rep.lambda0);
  doc["quantities"] = std::move(q);
  json conds = json::array();
  for (const auto& [name, holds] : rep.conditions) {
    conds.push_back({{"name", name}, {"holds", holds}});
  }
  doc["conditions"] = std::move(conds);
  doc["all_hold"] = rep.all_hold();
  emit(doc.dump(2) + "\n", args.out_path);
}

struct EvalArgs {
  std::string pred_path;
  std::string truth_path;
  std::string out_path;
};

void do_eval(const EvalArgs& args) {
  const std::vector<int> pred = load_labels(args.pred_path);
  const std::vector<int> truth = load_labels(args.truth_path);
  json doc;
  doc["ac"] = l0ssc::accuracy(pred, truth);
  doc["nmi"] = l0ssc::nmi(pred, truth);
  emit(doc.dump(2) + "\n", args.out_path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"noisy l0 sparse subspace clustering toolkit"};
  app.require_subcommand(1);

  SynthArgs synth_args;
  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic dataset");
  synth->add_option("config", synth_args.config_path, "key=value config file")->required();
  synth->add_option("--out", synth_args.out_prefix, "output path prefix");
  synth->add_flag("--emit-clean", synth_args.emit_clean, "also write the clean points");
  synth->callback([&] { do_synth(synth_args); });

  PipelineArgs pipe_args;
  CLI::App* pipe = app.add_subcommand("pipeline", "run one clustering pipeline");
  pipe->add_option("--data", pipe_args.data_path)->required();
  pipe->add_option("--labels", pipe_args.labels_path)->required();
  pipe->add_option("--method", pipe_args.method)
      ->check(CLI::IsMember({"full", "dr-lr", "dr-csp"}));
  pipe->add_option("--lambda", pipe_args.lambda);
  pipe->add_option("--p", pipe_args.p);
  pipe->add_option("--seed", pipe_args.seed);
  pipe->add_option("--init", pipe_args.init)->check(CLI::IsMember({"warm", "zeros"}));
  pipe->add_option("--renormalize", pipe_args.renormalize)
      ->check(CLI::IsMember({"on", "off"}));
  pipe->add_option("--sigma2", pipe_args.sigma2);
  pipe->add_option("--out", pipe_args.out_path);
  pipe->callback([&] { do_pipeline(pipe_args); });

  SweepArgs sweep_args;
  CLI::App* sweep = app.add_subcommand("sweep", "lambda/seed grid of pipeline runs");
  sweep->add_option("--data", sweep_args.data_path)->required();
  sweep->add_option("--labels", sweep_args.labels_path)->required();
  sweep->add_option("--method", sweep_args.method)
      ->check(CLI::IsMember({"full", "dr-lr", "dr-csp"}));
  sweep->add_option("--lambda-grid", sweep_args.grid, "a:b:step");
  sweep->add_option("--lambda", sweep_args.lambda, "single-value grid");
  sweep->add_option("--p", sweep_args.p);
  sweep->add_option("--seed", sweep_args.seed, "base seed");
  sweep->add_option("--seeds", sweep_args.seeds, "number of seeds");
  sweep->add_option("--init", sweep_args.init)->check(CLI::IsMember({"warm", "zeros"}));
  sweep->add_option("--renormalize", sweep_args.renormalize)
      ->check(CLI::IsMember({"on", "off"}));
  sweep->add_option("--sigma2", sweep_args.sigma2);
  sweep->add_option("--out", sweep_args.out_path);
  sweep->callback([&] { do_sweep(sweep_args); });

  OracleArgs oracle_args;
  CLI::App* oracle = app.add_subcommand("oracle", "evaluate recovery conditions at a point");
  oracle->add_option("--data", oracle_args.data_path)->required();
  oracle->add_option("--labels", oracle_args.labels_path)->required();
  oracle->add_option("--clean", oracle_args.clean_path, "clean points (defaults to --data)");
  oracle->add_option("--ensemble", oracle_args.ensemble_path, "ensemble sidecar json");
  oracle->add_option("--point", oracle_args.point)->required();
  oracle->add_option("--r0", oracle_args.r0)->required();
  oracle->add_option("--lambda", oracle_args.lambda)->required();
  CLI::Option* delta_opt = oracle->add_option("--delta", oracle_args.delta, "noise radius");
  oracle->add_option("--dk", oracle_args.dk, "uniform subspace dimension without --ensemble");
  oracle->add_option("--out", oracle_args.out_path);
  oracle->callback([&] {
    oracle_args.delta_given = delta_opt->count() > 0;
    do_oracle(oracle_args);
  });

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "metrics between two label files");
  eval->add_option("pred", eval_args.pred_path, "predicted labels")->required();
  eval->add_option("truth", eval_args.truth_path, "ground-truth labels")->required();
  eval->add_option("--out", eval_args.out_path);
  eval->callback([&] { do_eval(eval_args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const l0ssc::invalid_input& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const l0ssc::guard_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
