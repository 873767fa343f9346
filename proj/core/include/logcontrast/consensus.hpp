#ifndef LOGCONTRAST_CONSENSUS_HPP_
#define LOGCONTRAST_CONSENSUS_HPP_

#include <vector>

#include "logcontrast/solver.hpp"

namespace logcontrast {

// State of the master–worker consensus solver: the master's estimate ζ and
// zero-sum dual μ, plus each machine's (ζ_k, γ_k).
struct LocalState {
  Vector zeta;
  Vector gamma;
};

struct CentralState {
  Vector zeta_global;
  double mu = 0.0;
  std::vector<LocalState> locals;
  int round = 0;
};

// Machine k's ridge step: ζ_k ← (G_k + ρI)^{−1}(h_k + ρζ − γ_k).
Vector local_ridge_update(const ShardStats& stats, const Vector& zeta_global,
                          const Vector& gamma_k, double rho);

// Master coordinate-descent update of ζ under the zero-sum constraint:
//   ζ_j ← Shrink((1/ρ)Σ_k γ_{k,j} + Σ_k ζ_{k,j} − μc_j/ρ − c_j Σ_{m≠j} c_m ζ_m,
//                λω_j/ρ) / (c_j² + K),
// Gauss–Seidel within the sweep, warm-started from the current ζ.
// Returns the number of sweeps run.
int master_cd_update(CentralState& state, const Vector& constraint,
                     const PenaltySpec& penalty, double rho, int max_sweeps,
                     double cd_tol);

// Exact single-coordinate master update, reading state.zeta_global as the
// in-sweep vector. Recomputes every aggregate; mirrors the sweep kernel.
double master_coordinate_step(const CentralState& state, Index j,
                              const Vector& constraint, const PenaltySpec& penalty,
                              double rho);

double dual_update_mu(double mu, const Vector& zeta_global, const Vector& constraint,
                      double rho);

Vector dual_update_gamma(const Vector& gamma_k, const Vector& zeta_k,
                         const Vector& zeta_global, double rho);

// Pooled objective Σ_k (1/2n_k)‖y_k − Π_kζ‖² + λ‖ω∘ζ‖₁ at the master point.
double consensus_objective(const std::vector<ShardStats>& stats, const Vector& zeta,
                           const PenaltySpec& penalty);

// Full solver loop over precomputed shard statistics. Weights in `penalty`
// must already be resolved (empty means ones).
FitResult fit_consensus(const std::vector<ShardStats>& stats, Index p,
                        const PenaltySpec& penalty, const SolverConfig& config);

// Algorithm entry point on sharded data; resolves data-driven weights
// (adaptive lasso / SCAD) on shard 1 when the penalty does not carry them.
FitResult fit_dscdmm(const ShardedDataset& shards, const PenaltySpec& penalty,
                     const SolverConfig& config);

}  // namespace logcontrast

#endif  // LOGCONTRAST_CONSENSUS_HPP_
