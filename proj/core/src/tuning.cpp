#include "logcontrast/tuning.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "logcontrast/baselines.hpp"
#include "logcontrast/consensus.hpp"
#include "logcontrast/parallel.hpp"

namespace logcontrast {

LambdaGrid LambdaGrid::geometric(double lambda_min, double lambda_max, int grid_size) {
  if (grid_size < 2) throw ParameterError("grid needs at least 2 points");
  if (!(lambda_min > 0.0) || !(lambda_max > lambda_min)) {
    throw ParameterError("grid endpoints must satisfy 0 < lambda_min < lambda_max");
  }
  LambdaGrid grid;
  grid.delta = (std::log(lambda_max) - std::log(lambda_min)) / (grid_size - 1);
  grid.values.resize(grid_size);
  for (int s = 0; s < grid_size; ++s) {
    grid.values[s] = std::exp(std::log(lambda_min) + s * grid.delta);
  }
  grid.values.front() = lambda_min;
  grid.values.back() = lambda_max;
  return grid;
}

LambdaGrid lambda_grid(const Shard& shard1, int grid_size) {
  if (shard1.n() == 0) throw ShapeError("tuning shard is empty");
  if (grid_size < 2) throw ParameterError("grid needs at least 2 points");
  const double n1 = static_cast<double>(shard1.n());
  const double lambda_min = 1.0 / n1;

  const Vector corr = shard1.Pi.transpose() * shard1.y;
  const double y_norm = shard1.y.norm();
  const double max_a = (2.0 * corr / n1).cwiseAbs().maxCoeff();
  const double max_b =
      y_norm > 0.0 ? (2.0 * corr / (std::sqrt(n1) * y_norm)).cwiseAbs().maxCoeff() : 0.0;
  double lambda_max = std::min(max_a, max_b);

  bool fallback = false;
  if (!(lambda_max > lambda_min)) {
    lambda_max = 2.0 * lambda_min;
    fallback = true;
  }
  LambdaGrid grid = LambdaGrid::geometric(lambda_min, lambda_max, grid_size);
  grid.fallback = fallback;
  return grid;
}

double gic_value(double rss_over_n, int df, Index n1, Index d) {
  if (!(rss_over_n > 0.0)) return -std::numeric_limits<double>::infinity();
  const double n = static_cast<double>(n1);
  const double dim = static_cast<double>(std::max(d, n1));
  const int dof = std::max(df, 2);
  return std::log(rss_over_n) + (dof - 1) * (std::log(std::log(n)) / n) * std::log(dim);
}

double gic(const Shard& shard1, const Coefficients& estimate) {
  if (estimate.size() != shard1.d()) throw ShapeError("estimate length mismatch");
  const double rss_over_n =
      (shard1.y - shard1.Pi * estimate.zeta).squaredNorm() / shard1.n();
  const int df = static_cast<int>((estimate.zeta.array() != 0.0).count());
  return gic_value(rss_over_n, df, shard1.n(), shard1.d());
}

namespace {

PathEntry evaluate_path_point(const std::vector<ShardStats>& stats, const Shard& shard,
                              double lambda, const Vector& weights,
                              const SolverConfig& config,
                              const std::optional<Vector>& warm) {
  PenaltySpec point;
  point.kind = PenaltyKind::kLasso;  // weights already carry the penalty shape
  point.lambda = lambda;
  point.weights = weights;
  SolverConfig fit_config = config;
  fit_config.warm_start = warm;
  const FitResult fit = fit_consensus(stats, shard.p, point, fit_config);

  PathEntry entry;
  entry.lambda = lambda;
  entry.zeta = fit.estimate.zeta;
  entry.df = static_cast<int>((entry.zeta.array() != 0.0).count());
  entry.rss = (shard.y - shard.Pi * entry.zeta).squaredNorm();
  entry.gic = gic_value(entry.rss / shard.n(), entry.df, shard.n(), shard.d());
  entry.degenerate = std::isinf(entry.gic);
  return entry;
}

}  // namespace

SelectionResult select_lambda(const Shard& shard1, PenaltyKind kind,
                              const SolverConfig& config, const PathOptions& options) {
  const LambdaGrid grid =
      options.grid ? *options.grid : lambda_grid(shard1, options.grid_size);
  const Index d = shard1.d();
  const int S = grid.size();

  std::vector<ShardStats> stats;
  stats.emplace_back(shard1);

  // Adaptive-lasso weights are fixed along the path (one pilot); SCAD weights
  // are re-resolved per grid point because they depend on λ.
  Vector fixed_weights = Vector::Ones(d);
  if (kind == PenaltyKind::kAdaptiveLasso) {
    PenaltySpec proto;
    proto.kind = kind;
    fixed_weights = resolve_weights(shard1, proto, config);
  }
  const auto weights_at = [&](double lambda) {
    if (kind != PenaltyKind::kScad) return fixed_weights;
    PenaltySpec proto;
    proto.kind = kind;
    proto.lambda = lambda;
    return resolve_weights(shard1, proto, config);
  };

  std::vector<PathEntry> path(S);
  std::vector<std::string> failures;
  if (options.warm_start) {
    std::optional<Vector> warm;
    for (int s = S - 1; s >= 0; --s) {
      try {
        path[s] = evaluate_path_point(stats, shard1, grid.values[s],
                                      weights_at(grid.values[s]), config, warm);
        warm = path[s].zeta;
      } catch (const std::exception& e) {
        failures.push_back("lambda=" + std::to_string(grid.values[s]) + ": " + e.what());
        path[s].lambda = grid.values[s];
        path[s].degenerate = true;
        path[s].gic = std::numeric_limits<double>::infinity();
      }
    }
  } else {
    parallel_for(static_cast<std::size_t>(S), [&](std::size_t s) {
      path[s] = evaluate_path_point(stats, shard1, grid.values[s],
                                    weights_at(grid.values[s]), config, std::nullopt);
    });
  }

  int best = -1;
  for (int s = S - 1; s >= 0; --s) {  // largest λ first: ties keep the sparser model
    if (path[s].degenerate) continue;
    if (best < 0 || path[s].gic < path[best].gic) best = s;
  }
  if (best < 0) {
    std::string log = "all path fits failed or were degenerate";
    for (const auto& f : failures) log += "\n  " + f;
    throw TuningError(log);
  }

  SelectionResult result;
  result.lambda_opt = grid.values[best];
  result.estimate = Coefficients(path[best].zeta, shard1.p);
  result.weights = weights_at(result.lambda_opt);
  result.path = std::move(path);
  result.grid_fallback = grid.fallback;
  return result;
}

}  // namespace logcontrast
