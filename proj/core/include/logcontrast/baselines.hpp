#ifndef LOGCONTRAST_BASELINES_HPP_
#define LOGCONTRAST_BASELINES_HPP_

#include "logcontrast/solver.hpp"

namespace logcontrast {

// Global single-machine solve of
//   min (1/2n)‖y − Πζ‖² + λ‖ω∘ζ‖₁  s.t. C⊤ζ = 0
// — the consensus algorithm run with one machine.
FitResult fit_gcdmm(const LogContrastDesign& design, const PenaltySpec& penalty,
                    const SolverConfig& config);

// One-shot averaging: independent local fits, estimates averaged in shard
// order. Adaptive-lasso/SCAD weights come from shard 1 and are broadcast.
FitResult fit_acdmm(const ShardedDataset& shards, const PenaltySpec& penalty,
                    const SolverConfig& config);

// Weight-vector protocol shared by every solver. Lasso: ones. Adaptive
// lasso: pilot lasso on the pilot shard, tuned by GIC, then
// ω_j = (|ζ̃_j| + 1/n)^{−1}. SCAD: reweighted-L1 rounds on the pilot shard at
// penalty.lambda; with lla_rounds = 1 the weights stay at ones.
Vector resolve_weights(const Shard& pilot, const PenaltySpec& penalty,
                       const SolverConfig& config);

}  // namespace logcontrast

#endif  // LOGCONTRAST_BASELINES_HPP_
