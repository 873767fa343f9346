#ifndef LOGCONTRAST_TUNING_HPP_
#define LOGCONTRAST_TUNING_HPP_

#include <optional>
#include <string>
#include <vector>

#include "logcontrast/solver.hpp"

namespace logcontrast {

// Geometrically spaced regularization grid λ_1 < … < λ_S.
struct LambdaGrid {
  std::vector<double> values;
  double delta = 0.0;    // constant log step
  bool fallback = false; // degenerate λ_max replaced by 2λ_min

  int size() const { return static_cast<int>(values.size()); }
  double min() const { return values.front(); }
  double max() const { return values.back(); }
  double mid() const { return values[values.size() / 2]; }

  static LambdaGrid geometric(double lambda_min, double lambda_max, int grid_size);
};

// Data-driven grid on the tuning shard: λ_min = 1/n₁ and
// λ_max = min{max_j |2π_j⊤y/n₁|, max_j |2π_j⊤y/(√n₁‖y‖)|}.
LambdaGrid lambda_grid(const Shard& shard1, int grid_size);

// GIC(λ) = log(RSS/n₁) + (df − 1)·(log log n₁ / n₁)·log(max(d, n₁)),
// df = max(2, #nonzero). Returns −∞ when the residual vanishes.
double gic_value(double rss_over_n, int df, Index n1, Index d);
double gic(const Shard& shard1, const Coefficients& estimate);

struct PathEntry {
  double lambda = 0.0;
  double gic = 0.0;
  double rss = 0.0;
  int df = 0;
  Vector zeta;
  bool degenerate = false;
};

struct PathOptions {
  int grid_size = 50;
  std::optional<LambdaGrid> grid; // explicit grid overrides grid_size
  bool warm_start = true;         // sequential path; disable to evaluate in parallel
};

struct SelectionResult {
  double lambda_opt = 0.0;
  Coefficients estimate;      // fit at λ_opt
  Vector weights;             // resolved weights at λ_opt
  std::vector<PathEntry> path;
  bool grid_fallback = false;
};

// Fits the regularization path on the tuning shard (largest λ first) and
// returns the GIC argmin; ties resolve toward the larger λ.
SelectionResult select_lambda(const Shard& shard1, PenaltyKind kind,
                              const SolverConfig& config,
                              const PathOptions& options = {});

}  // namespace logcontrast

#endif  // LOGCONTRAST_TUNING_HPP_
