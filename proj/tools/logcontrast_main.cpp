// Command-line front end: synthetic data generation, fitting, GIC tuning,
// and the replication benchmark.

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "logcontrast/baselines.hpp"
#include "logcontrast/chain.hpp"
#include "logcontrast/consensus.hpp"
#include "logcontrast/io.hpp"
#include "logcontrast/metrics.hpp"
#include "logcontrast/synthetic.hpp"
#include "logcontrast/tuning.hpp"

namespace lc = logcontrast;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Exit codes, one per failure class.
enum ExitCode {
  kOk = 0,
  kUsage = 64,
  kDataError = 65,
  kMissingFile = 66,
  kTopology = 67,
  kInternal = 70,
};

int fail(ExitCode code, const std::string& kind, const std::string& message) {
  std::cerr << "error code=" << kind << " message=\"" << message << "\"\n";
  return code;
}

struct CommonOptions {
  std::string method = "dsgcdmm";
  std::string penalty = "alasso";
  int machine_count = 10;
  double rho = 1e-3;
  int rounds = 500;
  int sweeps = 20;
  double cd_tol = 1e-8;
  double outer_tol = 1e-7;
  double lambda = -1.0;  // < 0 means tune via GIC
  bool tune_gic = false;
  int grid_size = 50;
  std::uint64_t seed = 0;
  int lla_rounds = 3;
  double scad_a = 3.7;
  bool per_shard_weights = false;
};

lc::SolverConfig solver_config(const CommonOptions& opt) {
  lc::SolverConfig config;
  config.rho = opt.rho;
  config.outer_rounds = opt.rounds;
  config.cd_max_sweeps = opt.sweeps;
  config.cd_tol = opt.cd_tol;
  config.outer_tol = opt.outer_tol;
  config.seed = opt.seed;
  config.per_shard_weights = opt.per_shard_weights;
  return config;
}

void add_solver_flags(CLI::App* cmd, CommonOptions* opt) {
  cmd->add_option("--rho", opt->rho, "augmented-Lagrangian penalty");
  cmd->add_option("--rounds", opt->rounds, "communication rounds L");
  cmd->add_option("--sweeps", opt->sweeps, "inner coordinate-descent sweeps B");
  cmd->add_option("--cd-tol", opt->cd_tol, "inner sweep tolerance");
  cmd->add_option("--outer-tol", opt->outer_tol, "outer convergence tolerance");
  cmd->add_option("--lla-rounds", opt->lla_rounds, "reweighting rounds for SCAD");
  cmd->add_option("--scad-a", opt->scad_a, "SCAD shape parameter");
  cmd->add_flag("--per-shard-weights", opt->per_shard_weights,
                "resolve penalty weights on every machine instead of shard 1");
}

struct GenOptions {
  lc::Index n = 1000;
  lc::Index p = 15;
  lc::Index q = 10;
  double sigma = 0.2;
  int v_case = 1;
  double noise_sd = 0.2;
  std::uint64_t seed = 0;
  bool no_center = false;
  std::string out_dir = ".";
  std::string name = "dataset";
};

int run_gen(const GenOptions& opt) {
  lc::SyntheticSpec spec;
  spec.n = opt.n;
  spec.p = opt.p;
  spec.q = opt.q;
  spec.sigma = opt.sigma;
  spec.v_case = opt.v_case == 2 ? lc::CovariateCase::kRightSkewedLognormal
                                : lc::CovariateCase::kHeavyTailedT3;
  spec.noise_sd = opt.noise_sd;
  spec.seed = opt.seed;
  spec.center = !opt.no_center;

  const lc::SyntheticDraw draw = lc::generate_synthetic_raw(spec);
  // The recorded means come from the centered design build.
  const lc::LogContrastDesign design = lc::build_design(
      lc::CompositionMatrix(draw.X), draw.V, draw.y, spec.center);

  fs::create_directories(opt.out_dir);
  const std::string base = (fs::path(opt.out_dir) / opt.name).string();
  lc::DatasetMeta meta;
  meta.p = spec.p;
  meta.q = spec.q;
  meta.centered = spec.center;
  meta.pi_means = design.pi_means;
  meta.y_mean = design.y_mean;
  meta.seed = spec.seed;
  meta.v_case = opt.v_case;
  meta.sigma = spec.sigma;
  meta.noise_sd = spec.noise_sd;
  lc::write_dataset(base + ".csv", draw.X, draw.V, draw.y, meta);
  lc::write_coefficients(base + ".truth.csv", draw.truth);
  std::cout << "wrote " << base << ".csv (" << spec.n << " rows, p=" << spec.p
            << ", q=" << spec.q << ")\n";
  return kOk;
}

json fit_summary(const lc::FitResult& fit, double lambda, const std::string& method) {
  json summary;
  summary["method"] = method;
  summary["lambda"] = lambda;
  summary["converged"] = fit.converged;
  summary["rounds_used"] = fit.rounds_used;
  summary["total_cd_sweeps"] = fit.total_cd_sweeps;
  summary["objective"] = fit.final_objective();
  summary["zero_sum_residual"] = fit.estimate.zero_sum_residual();
  std::vector<int> support;
  for (lc::Index j = 0; j < fit.estimate.size(); ++j) {
    if (fit.estimate.zeta[j] != 0.0) support.push_back(static_cast<int>(j + 1));
  }
  summary["support"] = support;
  summary["support_size"] = support.size();
  if (!fit.rounds.empty()) {
    summary["consensus_inf"] = fit.rounds.back().consensus_inf;
  }
  if (!fit.chain_rounds.empty()) {
    summary["max_g"] = fit.chain_rounds.back().max_g();
    summary["max_r_inf"] = fit.chain_rounds.back().max_r_inf();
    summary["max_s_inf"] = fit.chain_rounds.back().max_s_inf();
    summary["messages_per_round"] = fit.chain_rounds.back().messages;
    summary["cumulative_scalars"] = fit.chain_rounds.back().cumulative_scalars;
  }
  return summary;
}

struct FitOptions {
  std::string input;
  std::string out_dir = ".";
  CommonOptions common;
};

int run_fit(const FitOptions& opt) {
  const lc::DatasetFile file = lc::read_dataset(opt.input);
  const lc::LogContrastDesign design = lc::design_from_file(file);
  const lc::Method method = lc::method_from_string(opt.common.method);
  const lc::SolverConfig config = solver_config(opt.common);

  lc::PenaltySpec penalty;
  penalty.kind = lc::penalty_kind_from_string(opt.common.penalty);
  penalty.scad_a = opt.common.scad_a;
  penalty.lla_rounds = opt.common.lla_rounds;

  const int K = method == lc::Method::kGcdmm ? 1 : opt.common.machine_count;
  if (opt.common.lambda >= 0.0 && !opt.common.tune_gic) {
    penalty.lambda = opt.common.lambda;
  } else {
    const lc::ShardedDataset shards = lc::partition(design, std::max(K, 1));
    lc::PathOptions path_options;
    path_options.grid_size = opt.common.grid_size;
    const lc::SelectionResult sel =
        lc::select_lambda(shards.shards.front(), penalty.kind, config, path_options);
    penalty.lambda = sel.lambda_opt;
    penalty.weights = sel.weights;
  }

  const lc::FitResult fit = lc::fit_method(method, design, K, penalty, config);

  fs::create_directories(opt.out_dir);
  const fs::path dir(opt.out_dir);
  lc::write_coefficients((dir / "estimate.csv").string(), fit.estimate);
  if (!fit.rounds.empty()) {
    lc::write_consensus_trace((dir / "trace.csv").string(), fit);
  } else if (!fit.chain_rounds.empty()) {
    lc::write_chain_trace((dir / "trace.csv").string(), fit);
  }
  json summary = fit_summary(fit, penalty.lambda, lc::to_string(method));
  summary["penalty"] = lc::to_string(penalty.kind);
  summary["K"] = K;
  std::ofstream summary_out((dir / "summary.json").string());
  summary_out << summary.dump(2) << "\n";
  std::cout << summary.dump(2) << "\n";
  return kOk;
}

struct TuneOptions {
  std::string input;
  std::string out_dir = ".";
  CommonOptions common;
};

int run_tune(const TuneOptions& opt) {
  const lc::DatasetFile file = lc::read_dataset(opt.input);
  const lc::LogContrastDesign design = lc::design_from_file(file);
  const lc::SolverConfig config = solver_config(opt.common);
  const lc::ShardedDataset shards =
      lc::partition(design, std::max(opt.common.machine_count, 1));

  lc::PathOptions path_options;
  path_options.grid_size = opt.common.grid_size;
  const lc::SelectionResult sel = lc::select_lambda(
      shards.shards.front(), lc::penalty_kind_from_string(opt.common.penalty), config,
      path_options);

  fs::create_directories(opt.out_dir);
  const fs::path dir(opt.out_dir);
  lc::write_path_table((dir / "path.csv").string(), sel.path);
  json summary;
  summary["lambda_opt"] = sel.lambda_opt;
  summary["grid_fallback"] = sel.grid_fallback;
  summary["df_opt"] = static_cast<int>((sel.estimate.zeta.array() != 0.0).count());
  std::ofstream summary_out((dir / "tune.json").string());
  summary_out << summary.dump(2) << "\n";
  std::cout << summary.dump(2) << "\n";
  return kOk;
}

struct BenchOptions {
  std::string methods = "gcdmm,dscdmm,dsgcdmm,acdmm";
  std::string penalties = "alasso";
  std::string machine_counts = "10";
  std::string sigmas = "0.2";
  lc::Index n = 20000;
  lc::Index p = 15;
  lc::Index q = 10;
  int v_case = 1;
  double noise_sd = 0.2;
  int reps = 20;
  std::uint64_t seed = 1;
  bool full_scale = false;
  bool curve = false;
  std::string curve_rounds = "1,2,5,10,20";
  std::string curve_sweeps = "5,10,20";
  std::string out_dir = ".";
  CommonOptions common;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

int run_bench(const BenchOptions& opt) {
  lc::BenchConfig config;
  config.methods.clear();
  for (const auto& m : split_list(opt.methods)) {
    config.methods.push_back(lc::method_from_string(m));
  }
  config.penalties.clear();
  for (const auto& p : split_list(opt.penalties)) {
    config.penalties.push_back(lc::penalty_kind_from_string(p));
  }
  config.machine_counts.clear();
  for (const auto& k : split_list(opt.machine_counts)) {
    config.machine_counts.push_back(std::stoi(k));
  }
  config.sigmas.clear();
  for (const auto& s : split_list(opt.sigmas)) {
    config.sigmas.push_back(std::stod(s));
  }
  config.data.n = opt.n;
  config.data.p = opt.p;
  config.data.q = opt.q;
  config.data.v_case = opt.v_case == 2 ? lc::CovariateCase::kRightSkewedLognormal
                                       : lc::CovariateCase::kHeavyTailedT3;
  config.data.noise_sd = opt.noise_sd;
  config.reps = opt.reps;
  config.solver = solver_config(opt.common);
  config.grid_size = opt.common.grid_size;
  config.master_seed = opt.seed;
  config.full_scale = opt.full_scale;

  fs::create_directories(opt.out_dir);
  const fs::path dir(opt.out_dir);

  const auto summaries = lc::run_replications(config);
  lc::write_metrics_table((dir / "metrics.csv").string(), summaries);
  std::cout << "wrote " << (dir / "metrics.csv").string() << " (" << summaries.size()
            << " cells)\n";
  for (const auto& cell : summaries) {
    for (const auto& failure : cell.failures) {
      std::cerr << "warning: " << lc::to_string(cell.method) << " K="
                << cell.machine_count << ": " << failure << "\n";
    }
  }

  if (opt.curve) {
    std::vector<int> Ls, Bs;
    for (const auto& v : split_list(opt.curve_rounds)) Ls.push_back(std::stoi(v));
    for (const auto& v : split_list(opt.curve_sweeps)) Bs.push_back(std::stoi(v));
    lc::SyntheticSpec spec = config.data;
    spec.sigma = config.sigmas.front();
    spec.seed = opt.seed;
    const auto points = lc::aee_vs_rounds(
        spec, config.machine_counts.front(), config.penalties.front(), Ls, Bs,
        config.solver, config.grid_size, std::min(config.reps, 5));
    lc::write_aee_curve((dir / "aee_curve.csv").string(), points);
    std::cout << "wrote " << (dir / "aee_curve.csv").string() << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed sparse log-contrast regression toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key=value config file; flags take precedence");

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate a synthetic dataset");
  gen_cmd->add_option("--n", gen.n, "sample size");
  gen_cmd->add_option("--p", gen.p, "compositional components");
  gen_cmd->add_option("--q", gen.q, "non-compositional covariates");
  gen_cmd->add_option("--sigma", gen.sigma, "correlation decay of the normal scores");
  gen_cmd->add_option("--case", gen.v_case, "covariate case: 1 heavy-tailed, 2 lognormal")
      ->check(CLI::IsMember({1, 2}));
  gen_cmd->add_option("--noise-sd", gen.noise_sd, "error standard deviation");
  gen_cmd->add_option("--seed", gen.seed, "random seed");
  gen_cmd->add_flag("--no-center", gen.no_center, "skip global centering");
  gen_cmd->add_option("--out-dir", gen.out_dir, "output directory");
  gen_cmd->add_option("--name", gen.name, "output base name");

  FitOptions fit;
  auto* fit_cmd = app.add_subcommand("fit", "fit one method on a dataset");
  fit_cmd->add_option("--in", fit.input, "dataset CSV")->required();
  fit_cmd->add_option("--out-dir", fit.out_dir, "output directory");
  fit_cmd->add_option("--method", fit.common.method, "gcdmm|acdmm|dscdmm|dsgcdmm");
  fit_cmd->add_option("--penalty", fit.common.penalty, "lasso|alasso|scad");
  fit_cmd->add_option("--K", fit.common.machine_count, "machine count");
  fit_cmd->add_option("--lambda", fit.common.lambda, "fixed regularization level");
  fit_cmd->add_flag("--tune-gic", fit.common.tune_gic, "select lambda by GIC on shard 1");
  fit_cmd->add_option("--grid-size", fit.common.grid_size, "tuning grid size");
  fit_cmd->add_option("--seed", fit.common.seed, "seed recorded in outputs");
  add_solver_flags(fit_cmd, &fit.common);

  TuneOptions tune;
  auto* tune_cmd = app.add_subcommand("tune", "GIC path on the first shard");
  tune_cmd->add_option("--in", tune.input, "dataset CSV")->required();
  tune_cmd->add_option("--out-dir", tune.out_dir, "output directory");
  tune_cmd->add_option("--penalty", tune.common.penalty, "lasso|alasso|scad");
  tune_cmd->add_option("--K", tune.common.machine_count, "machine count");
  tune_cmd->add_option("--grid-size", tune.common.grid_size, "tuning grid size");
  add_solver_flags(tune_cmd, &tune.common);

  BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "replication benchmark");
  bench_cmd->add_option("--methods", bench.methods, "comma-separated method list");
  bench_cmd->add_option("--penalties", bench.penalties, "comma-separated penalties");
  bench_cmd->add_option("--K", bench.machine_counts, "comma-separated machine counts");
  bench_cmd->add_option("--sigma", bench.sigmas, "comma-separated sigma values");
  bench_cmd->add_option("--n", bench.n, "sample size per replication");
  bench_cmd->add_option("--p", bench.p, "compositional components");
  bench_cmd->add_option("--q", bench.q, "non-compositional covariates");
  bench_cmd->add_option("--case", bench.v_case, "covariate case")
      ->check(CLI::IsMember({1, 2}));
  bench_cmd->add_option("--noise-sd", bench.noise_sd, "error standard deviation");
  bench_cmd->add_option("--reps", bench.reps, "replications");
  bench_cmd->add_option("--seed", bench.seed, "master seed");
  bench_cmd->add_flag("--full-scale", bench.full_scale, "n=200000, reps=100");
  bench_cmd->add_flag("--curve", bench.curve, "also write the AEE-vs-rounds table");
  bench_cmd->add_option("--curve-rounds", bench.curve_rounds, "L values for --curve");
  bench_cmd->add_option("--curve-sweeps", bench.curve_sweeps, "B values for --curve");
  bench_cmd->add_option("--out-dir", bench.out_dir, "output directory");
  bench_cmd->add_option("--grid-size", bench.common.grid_size, "tuning grid size");
  add_solver_flags(bench_cmd, &bench.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return fail(kUsage, "usage", e.what());
  }

  try {
    if (*gen_cmd) return run_gen(gen);
    if (*fit_cmd) return run_fit(fit);
    if (*tune_cmd) return run_tune(tune);
    if (*bench_cmd) return run_bench(bench);
    return fail(kUsage, "usage", "no subcommand");
  } catch (const lc::TopologyError& e) {
    return fail(kTopology, "topology", e.what());
  } catch (const lc::FileError& e) {
    return fail(kMissingFile, "file", e.what());
  } catch (const lc::DataError& e) {
    return fail(kDataError, "data", e.what());
  } catch (const lc::ParameterError& e) {
    return fail(kUsage, "usage", e.what());
  } catch (const std::exception& e) {
    return fail(kInternal, "internal", e.what());
  }
}
