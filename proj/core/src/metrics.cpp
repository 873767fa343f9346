#include "logcontrast/metrics.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "logcontrast/parallel.hpp"

namespace logcontrast {

std::string to_string(Method method) {
  switch (method) {
    case Method::kGcdmm: return "gcdmm";
    case Method::kAcdmm: return "acdmm";
    case Method::kDscdmm: return "dscdmm";
    case Method::kDsgcdmm: return "dsgcdmm";
  }
  return "?";
}

Method method_from_string(const std::string& name) {
  if (name == "gcdmm") return Method::kGcdmm;
  if (name == "acdmm") return Method::kAcdmm;
  if (name == "dscdmm") return Method::kDscdmm;
  if (name == "dsgcdmm") return Method::kDsgcdmm;
  throw ParameterError("unknown method: " + name);
}

FitResult fit_method(Method method, const LogContrastDesign& design, int machine_count,
                     const PenaltySpec& penalty, const SolverConfig& config) {
  switch (method) {
    case Method::kGcdmm:
      return fit_gcdmm(design, penalty, config);
    case Method::kAcdmm:
      return fit_acdmm(partition(design, machine_count), penalty, config);
    case Method::kDscdmm:
      return fit_dscdmm(partition(design, machine_count), penalty, config);
    case Method::kDsgcdmm:
      return fit_dsgcdmm(partition(design, machine_count), penalty, config);
  }
  throw ParameterError("unknown method");
}

SelectionCounts selection_metrics(const Coefficients& estimate,
                                  const Coefficients& truth, Index p,
                                  double zero_eps) {
  if (estimate.size() != truth.size()) {
    throw ShapeError("estimate and truth lengths differ");
  }
  SelectionCounts counts;
  for (Index j = 0; j < truth.size(); ++j) {
    const bool est_zero = std::abs(estimate.zeta[j]) <= zero_eps;
    const bool true_zero = truth.zeta[j] == 0.0;
    const bool compositional = j < p;
    if (!est_zero && true_zero) {
      ++counts.fp;
      ++(compositional ? counts.fp_c : counts.fp_nc);
    } else if (est_zero && !true_zero) {
      ++counts.fn;
      ++(compositional ? counts.fn_c : counts.fn_nc);
    }
  }
  return counts;
}

namespace {

double residual_norm(const Vector& r, CvNorm norm) {
  switch (norm) {
    case CvNorm::kL1: return r.lpNorm<1>();
    case CvNorm::kL2: return r.norm();
    case CvNorm::kLInf: return r.lpNorm<Eigen::Infinity>();
  }
  throw ParameterError("unknown norm");
}

LogContrastDesign rows_excluding(const LogContrastDesign& design, Index start,
                                 Index count) {
  LogContrastDesign out;
  out.p = design.p;
  out.q = design.q;
  const Index n = design.n();
  out.y.resize(n - count);
  out.Pi.resize(n - count, design.d());
  out.y.head(start) = design.y.head(start);
  out.Pi.topRows(start) = design.Pi.topRows(start);
  out.y.tail(n - start - count) = design.y.tail(n - start - count);
  out.Pi.bottomRows(n - start - count) = design.Pi.bottomRows(n - start - count);
  return out;
}

}  // namespace

double cv_loss(const LogContrastDesign& design, Method method, int machine_count,
               const PenaltySpec& penalty, const SolverConfig& config, CvNorm norm,
               int folds, CvDiagnostics* diagnostics) {
  if (folds < 2) throw ParameterError("cross-validation needs at least 2 folds");
  const Index n = design.n();
  if (folds > n) throw ParameterError("more folds than rows");
  const Index base = n / folds;
  if (diagnostics != nullptr) diagnostics->undersized_folds = false;

  double total = 0.0;
  Index start = 0;
  for (int f = 0; f < folds; ++f) {
    const Index count = (f == folds - 1) ? n - start : base;
    if (count < design.d() && diagnostics != nullptr) {
      diagnostics->undersized_folds = true;
    }
    const LogContrastDesign train = rows_excluding(design, start, count);
    const FitResult fit = fit_method(method, train, machine_count, penalty, config);
    const Vector r = design.y.segment(start, count) -
                     design.Pi.middleRows(start, count) * fit.estimate.zeta;
    total += residual_norm(r, norm) / static_cast<double>(count);
    start += count;
  }
  return total / folds;
}

namespace {

struct Accumulator {
  std::vector<double> values;
  void add(double v) { values.push_back(v); }
  double mean() const {
    if (values.empty()) return 0.0;
    double s = 0.0;
    for (double v : values) s += v;
    return s / values.size();
  }
  double se() const {
    const std::size_t m = values.size();
    if (m < 2) return 0.0;
    const double mu = mean();
    double ss = 0.0;
    for (double v : values) ss += (v - mu) * (v - mu);
    return std::sqrt(ss / (m - 1)) / std::sqrt(static_cast<double>(m));
  }
};

struct CellKey {
  int method;
  int penalty;
  int machine_count;
  double sigma;
  bool operator<(const CellKey& other) const {
    return std::tie(method, penalty, machine_count, sigma) <
           std::tie(other.method, other.penalty, other.machine_count, other.sigma);
  }
};

struct CellAccumulator {
  Accumulator aee, fp, fn, fp_c, fp_nc, fn_c, fn_nc, runtime, rounds;
  std::vector<std::string> failures;
};

}  // namespace

std::vector<CellSummary> run_replications(const BenchConfig& config) {
  BenchConfig cfg = config;
  if (cfg.full_scale) {
    cfg.data.n = 200000;
    cfg.reps = 100;
  }
  const int reps = cfg.reps;

  std::map<CellKey, CellAccumulator> cells;
  std::mutex cells_mutex;

  for (std::size_t sigma_idx = 0; sigma_idx < cfg.sigmas.size(); ++sigma_idx) {
    const double sigma = cfg.sigmas[sigma_idx];

    parallel_for(static_cast<std::size_t>(reps), [&](std::size_t rep) {
      SyntheticSpec spec = cfg.data;
      spec.sigma = sigma;
      spec.seed = derive_seed(cfg.master_seed, (sigma_idx << 32) | rep);
      auto [design, truth] = generate_synthetic(spec);

      // Rows are keyed before locking so aggregation order stays fixed.
      std::vector<std::pair<CellKey, MetricsRow>> rows;
      std::vector<std::pair<CellKey, std::string>> errors;

      for (int K : cfg.machine_counts) {
        ShardedDataset shards = partition(design, K);
        for (PenaltyKind penalty_kind : cfg.penalties) {
          double lambda_opt = 0.0;
          Vector weights;
          try {
            SolverConfig tune_config = cfg.solver;
            PathOptions opts;
            opts.grid_size = cfg.grid_size;
            const SelectionResult sel =
                select_lambda(shards.shards.front(), penalty_kind, tune_config, opts);
            lambda_opt = sel.lambda_opt;
            weights = sel.weights;
          } catch (const std::exception& e) {
            for (Method method : cfg.methods) {
              errors.push_back({CellKey{static_cast<int>(method),
                                        static_cast<int>(penalty_kind), K, sigma},
                                std::string("tuning: ") + e.what()});
            }
            continue;
          }

          PenaltySpec penalty;
          penalty.kind = penalty_kind;
          penalty.lambda = lambda_opt;
          penalty.weights = weights;

          for (Method method : cfg.methods) {
            const CellKey key{static_cast<int>(method), static_cast<int>(penalty_kind),
                              K, sigma};
            try {
              const auto t0 = std::chrono::steady_clock::now();
              const FitResult fit =
                  fit_method(method, design, K, penalty, cfg.solver);
              const auto t1 = std::chrono::steady_clock::now();

              MetricsRow row;
              row.method = method;
              row.penalty = penalty_kind;
              row.machine_count = K;
              row.sigma = sigma;
              row.aee = (fit.estimate.zeta - truth.zeta).norm();
              const double eps = method == Method::kAcdmm ? kZeroEps : 0.0;
              row.counts = selection_metrics(fit.estimate, truth, design.p, eps);
              row.runtime_seconds = std::chrono::duration<double>(t1 - t0).count();
              row.rounds_used = fit.rounds_used;
              rows.push_back({key, row});
            } catch (const std::exception& e) {
              errors.push_back({key, e.what()});
            }
          }
        }
      }

      std::lock_guard<std::mutex> lock(cells_mutex);
      for (const auto& [key, row] : rows) {
        CellAccumulator& acc = cells[key];
        acc.aee.add(row.aee);
        acc.fp.add(row.counts.fp);
        acc.fn.add(row.counts.fn);
        acc.fp_c.add(row.counts.fp_c);
        acc.fp_nc.add(row.counts.fp_nc);
        acc.fn_c.add(row.counts.fn_c);
        acc.fn_nc.add(row.counts.fn_nc);
        acc.runtime.add(row.runtime_seconds);
        acc.rounds.add(row.rounds_used);
      }
      for (const auto& [key, message] : errors) {
        cells[key].failures.push_back("rep " + std::to_string(rep) + ": " + message);
      }
    });
  }

  std::vector<CellSummary> summaries;
  summaries.reserve(cells.size());
  for (const auto& [key, acc] : cells) {
    CellSummary s;
    s.method = static_cast<Method>(key.method);
    s.penalty = static_cast<PenaltyKind>(key.penalty);
    s.machine_count = key.machine_count;
    s.sigma = key.sigma;
    s.reps = static_cast<int>(acc.aee.values.size());
    s.aee_mean = acc.aee.mean();
    s.aee_se = acc.aee.se();
    s.fp_mean = acc.fp.mean();
    s.fp_se = acc.fp.se();
    s.fn_mean = acc.fn.mean();
    s.fn_se = acc.fn.se();
    s.fp_c_mean = acc.fp_c.mean();
    s.fp_nc_mean = acc.fp_nc.mean();
    s.fn_c_mean = acc.fn_c.mean();
    s.fn_nc_mean = acc.fn_nc.mean();
    s.runtime_mean = acc.runtime.mean();
    s.rounds_mean = acc.rounds.mean();
    s.failures = acc.failures;
    summaries.push_back(std::move(s));
  }
  return summaries;
}

std::vector<AeeCurvePoint> aee_vs_rounds(const SyntheticSpec& data, int machine_count,
                                         PenaltyKind penalty_kind,
                                         const std::vector<int>& round_counts,
                                         const std::vector<int>& sweep_counts,
                                         const SolverConfig& solver, int grid_size,
                                         int reps) {
  std::vector<AeeCurvePoint> points;
  for (int B : sweep_counts) {
    for (int L : round_counts) {
      points.push_back({L, B, 0.0});
    }
  }

  for (int rep = 0; rep < reps; ++rep) {
    SyntheticSpec spec = data;
    spec.seed = derive_seed(data.seed, static_cast<std::uint64_t>(rep));
    auto [design, truth] = generate_synthetic(spec);
    ShardedDataset shards = partition(design, machine_count);

    PathOptions opts;
    opts.grid_size = grid_size;
    const SelectionResult sel =
        select_lambda(shards.shards.front(), penalty_kind, solver, opts);
    PenaltySpec penalty;
    penalty.kind = penalty_kind;
    penalty.lambda = sel.lambda_opt;
    penalty.weights = sel.weights;

    std::size_t idx = 0;
    for (int B : sweep_counts) {
      for (int L : round_counts) {
        SolverConfig run = solver;
        run.outer_rounds = L;
        run.cd_max_sweeps = B;
        run.outer_tol = 1e-300;  // force exactly L rounds
        const FitResult fit = fit_dsgcdmm(shards, penalty, run);
        points[idx++].aee += (fit.estimate.zeta - truth.zeta).norm() / reps;
      }
    }
  }
  return points;
}

}  // namespace logcontrast
