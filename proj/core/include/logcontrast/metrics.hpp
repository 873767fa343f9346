#ifndef LOGCONTRAST_METRICS_HPP_
#define LOGCONTRAST_METRICS_HPP_

#include <string>
#include <vector>

#include "logcontrast/baselines.hpp"
#include "logcontrast/chain.hpp"
#include "logcontrast/consensus.hpp"
#include "logcontrast/synthetic.hpp"
#include "logcontrast/tuning.hpp"

namespace logcontrast {

enum class Method { kGcdmm, kAcdmm, kDscdmm, kDsgcdmm };

std::string to_string(Method method);
Method method_from_string(const std::string& name);

// Fits one method on (a sharding of) the design. Distributed methods use
// machine_count; the penalty should carry resolved weights for paired runs.
FitResult fit_method(Method method, const LogContrastDesign& design, int machine_count,
                     const PenaltySpec& penalty, const SolverConfig& config);

struct SelectionCounts {
  int fp = 0, fn = 0;
  int fp_c = 0, fp_nc = 0;
  int fn_c = 0, fn_nc = 0;
};

// False positives/negatives against the true support, split into the
// compositional (j ≤ p) and non-compositional blocks. `zero_eps` > 0 is the
// thresholded zero test for dense estimators (averaging).
SelectionCounts selection_metrics(const Coefficients& estimate,
                                  const Coefficients& truth, Index p,
                                  double zero_eps = 0.0);

struct MetricsRow {
  Method method;
  PenaltyKind penalty;
  int machine_count = 0;
  double sigma = 0.0;
  double aee = 0.0;  // ‖ζ̂ − ζ₀‖₂
  SelectionCounts counts;
  double runtime_seconds = 0.0;
  int rounds_used = 0;
};

enum class CvNorm { kL1 = 1, kL2 = 2, kLInf = 3 };

struct CvDiagnostics {
  bool undersized_folds = false;
};

// 5-fold-style CV prediction loss (1/F)Σ ‖y_v − Π_vζ̂‖_q / n_v with
// contiguous validation blocks in the stored row order.
double cv_loss(const LogContrastDesign& design, Method method, int machine_count,
               const PenaltySpec& penalty, const SolverConfig& config, CvNorm norm,
               int folds = 5, CvDiagnostics* diagnostics = nullptr);

struct BenchConfig {
  std::vector<Method> methods{Method::kGcdmm, Method::kDscdmm, Method::kDsgcdmm,
                              Method::kAcdmm};
  std::vector<PenaltyKind> penalties{PenaltyKind::kAdaptiveLasso};
  std::vector<int> machine_counts{10};
  std::vector<double> sigmas{0.2};
  SyntheticSpec data;       // n, p, q, case, noise_sd (K and sigma overridden per cell)
  int reps = 20;            // desk scale; the paper setting is 100
  SolverConfig solver;
  int grid_size = 50;
  std::uint64_t master_seed = 1;
  bool full_scale = false;  // n = 200000, reps = 100
};

struct CellSummary {
  Method method;
  PenaltyKind penalty;
  int machine_count = 0;
  double sigma = 0.0;
  int reps = 0;
  // mean / standard error pairs
  double aee_mean = 0.0, aee_se = 0.0;
  double fp_mean = 0.0, fp_se = 0.0;
  double fn_mean = 0.0, fn_se = 0.0;
  double fp_c_mean = 0.0, fp_nc_mean = 0.0;
  double fn_c_mean = 0.0, fn_nc_mean = 0.0;
  double runtime_mean = 0.0;
  double rounds_mean = 0.0;
  std::vector<std::string> failures;
};

// Replication harness: per replication, draw data, tune λ by GIC on shard 1
// (shared across methods), fit every cell, aggregate means and standard
// errors. Replications may run in parallel; aggregation order is fixed.
std::vector<CellSummary> run_replications(const BenchConfig& config);

struct AeeCurvePoint {
  int rounds = 0;  // L
  int sweeps = 0;  // B
  double aee = 0.0;
};

// Chain-solver estimation error versus communication rounds for several
// inner sweep budgets, averaged over `reps` seeded draws.
std::vector<AeeCurvePoint> aee_vs_rounds(const SyntheticSpec& data, int machine_count,
                                         PenaltyKind penalty,
                                         const std::vector<int>& round_counts,
                                         const std::vector<int>& sweep_counts,
                                         const SolverConfig& solver, int grid_size,
                                         int reps);

}  // namespace logcontrast

#endif  // LOGCONTRAST_METRICS_HPP_
