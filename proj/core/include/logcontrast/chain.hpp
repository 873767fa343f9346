#ifndef LOGCONTRAST_CHAIN_HPP_
#define LOGCONTRAST_CHAIN_HPP_

#include <vector>

#include "logcontrast/solver.hpp"

namespace logcontrast {

// Chain of K machines (K even): edges (k, k+1), k = 0..K−2. Machines with an
// even index form the head group and update first each round; odd indices
// form the tail group and update from fresh head messages.
struct ChainTopology {
  explicit ChainTopology(int machine_count);

  int machine_count;
  std::vector<int> heads;
  std::vector<int> tails;

  static bool is_head(int k) { return k % 2 == 0; }
  int edge_count() const { return machine_count - 1; }
};

// One machine's local state: primal ζ_k, zero-sum dual μ_k, and the edge
// dual γ_k for edge (k, k+1) (empty on the last machine).
struct MachineState {
  Vector zeta;
  double mu = 0.0;
  Vector gamma;
};

// 𝒜-term of the coordinate update: partial-residual inner product minus the
// zero-sum coupling, evaluated at the in-sweep coordinate vector.
double chain_affine_term(const ShardStats& stats, const Vector& zeta_k, double mu_k,
                         const Vector& constraint, Index j, double rho);

// Shared coordinate-descent kernel for the per-machine subproblems.
// `coupling[j]` carries ρ·Σ_{m∈N(k)} ζ_{m,j} plus the signed edge duals, and
// `degree` is |N(k)|. Returns the number of sweeps run; zeta is updated in
// place (warm start in, solution out).
int chain_machine_update(const ShardStats& stats, Vector& zeta, double mu_k,
                         const Vector& coupling, int degree, const Vector& constraint,
                         double lambda, const Vector& weights, double rho,
                         int max_sweeps, double cd_tol);

// Exact single-coordinate update of the machine subproblem, recomputed from
// scratch. The sweep kernel above maintains incremental caches of the same
// quantities; the two must agree up to rounding.
double chain_coordinate_step(const ShardStats& stats, const Vector& zeta, double mu_k,
                             const Vector& coupling, int degree,
                             const Vector& constraint, double lambda,
                             const Vector& weights, double rho, Index j);

// Head update: neighbor estimates are the previous round's values.
// Pass nullptr for a missing neighbor / edge dual.
Vector head_cd_update(const ShardStats& stats, const MachineState& state,
                      const Vector* left_prev, const Vector* right_prev,
                      const Vector* gamma_in, const Vector* gamma_out,
                      const Vector& constraint, double lambda, const Vector& weights,
                      double rho, int max_sweeps, double cd_tol,
                      int* sweeps_out = nullptr);

// Tail update: neighbor estimates are the freshly computed head values.
Vector tail_cd_update(const ShardStats& stats, const MachineState& state,
                      const Vector* left_new, const Vector* right_new,
                      const Vector* gamma_in, const Vector* gamma_out,
                      const Vector& constraint, double lambda, const Vector& weights,
                      double rho, int max_sweeps, double cd_tol,
                      int* sweeps_out = nullptr);

// μ_k ← μ_k + ρ C⊤ζ_k for every machine; γ_k ← γ_k + ρ(ζ_k − ζ_{k+1}) per edge.
void dual_update(std::vector<Vector>& gammas, Vector& mus,
                 const std::vector<Vector>& zetas, const Vector& constraint, double rho);

// Primal residuals g_k = C⊤ζ_k and r_k = ζ_k − ζ_{k+1}; head dual residuals
// s_k = ρΔζ_{k−1} + ρΔζ_{k+1} (single term at the chain start).
ResidualReport residuals(const std::vector<Vector>& zetas,
                         const std::vector<Vector>& prev_zetas,
                         const Vector& constraint, double rho);

struct ChainReference {
  std::vector<Vector> zetas;
  Vector mus;
  std::vector<Vector> gammas;
};

struct Lemma1Bounds {
  double lower = 0.0;
  double gap = 0.0;
  double upper = 0.0;
};

// Optimality-gap sandwich for one recorded round against a converged
// reference (ζ*, μ*, γ*):
//   −Σ μ*_k g_k − Σ ⟨γ*_k, r_k⟩  ≤  Σ Q_k(ζ_k) − Σ Q_k(ζ*_k)
//   ≤ −Σ μ_k g_k − Σ ⟨γ_k, r_k⟩ + Σ_heads ⟨s_k, ζ*_k − ζ_k⟩.
Lemma1Bounds lemma1_gap_bounds(const ChainStateSnapshot& snapshot,
                               const ChainReference& reference,
                               const std::vector<ShardStats>& stats, Index p,
                               double lambda, const std::vector<Vector>& weights,
                               double rho);

// Q_k(ζ) = (1/2n_k)‖y_k − Π_kζ‖² + λ‖ω_k∘ζ‖₁.
double machine_objective(const ShardStats& stats, const Vector& zeta, double lambda,
                         const Vector& weights);

// Chain solver over precomputed shard statistics with per-machine weights.
FitResult fit_chain(const std::vector<ShardStats>& stats, Index p,
                    const PenaltySpec& penalty, const std::vector<Vector>& weights,
                    const SolverConfig& config);

// Algorithm entry point; resolves weights (shard-1 broadcast by default,
// per-machine when config.per_shard_weights is set) and rejects odd K.
FitResult fit_dsgcdmm(const ShardedDataset& shards, const PenaltySpec& penalty,
                      const SolverConfig& config);

}  // namespace logcontrast

#endif  // LOGCONTRAST_CHAIN_HPP_
