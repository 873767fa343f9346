#ifndef LOGCONTRAST_SOLVER_HPP_
#define LOGCONTRAST_SOLVER_HPP_

#include <optional>
#include <vector>

#include "logcontrast/design.hpp"
#include "logcontrast/penalty.hpp"
#include "logcontrast/types.hpp"

namespace logcontrast {

struct SolverConfig {
  double rho = 1e-3;        // augmented-Lagrangian penalty
  int outer_rounds = 500;   // communication rounds L
  int cd_max_sweeps = 20;   // inner coordinate-descent sweeps B
  double cd_tol = 1e-8;     // max coordinate change stopping the inner sweeps
  double outer_tol = 1e-7;  // residual level declaring the outer loop converged
  std::uint64_t seed = 0;
  bool record_state_trace = false;   // keep per-round machine states (chain solver)
  bool per_shard_weights = false;    // chain solver: resolve ω_k locally per machine
  std::optional<Vector> warm_start;  // initial estimate (defaults to zero)

  void validate() const;
};

// Sufficient statistics of one shard's least-squares term
// (1/2n_k)‖y_k − Π_k ζ‖² = ½ ζ⊤Gζ − h⊤ζ + ½ y2.
class ShardStats {
 public:
  explicit ShardStats(const Shard& shard);

  Index d() const { return gram_.rows(); }
  Index n() const { return n_; }
  const Matrix& gram() const { return gram_; }
  const Vector& moment() const { return moment_; }
  double y_scale() const { return y2_; }

  double smooth_value(const Vector& zeta) const;
  Vector smooth_gradient(const Vector& zeta) const;

  // Solves (G + ρI)x = rhs, caching the factorization per ρ.
  Vector ridge_solve(double rho, const Vector& rhs) const;

 private:
  Index n_;
  Matrix gram_;    // Π⊤Π / n
  Vector moment_;  // Π⊤y / n
  double y2_;      // ‖y‖² / n
  mutable double cached_rho_ = -1.0;
  mutable Eigen::LDLT<Matrix> ldlt_;
};

std::vector<ShardStats> make_shard_stats(const ShardedDataset& shards);

// Per-round trace of the consensus (master–worker) solver.
struct RoundRecord {
  int round = 0;
  double consensus_inf = 0.0;  // max_k ‖ζ_k − ζ‖_∞
  double zero_sum = 0.0;       // |C⊤ζ|
  double dual_step_inf = 0.0;  // ρ‖ζ − ζ_prev‖_∞
  double objective = 0.0;
  int cd_sweeps = 0;
};

// Per-round residuals of the chain solver.
struct ResidualReport {
  Vector g;      // zero-sum residuals C⊤ζ_k, length K
  Vector r_inf;  // ‖ζ_k − ζ_{k+1}‖_∞ per edge, length K−1
  Vector r_two;  // ‖ζ_k − ζ_{k+1}‖_2 per edge
  Vector s_inf;  // head dual residual norms, indexed by head machine order
  double objective = 0.0;
  double objective_gap = std::numeric_limits<double>::quiet_NaN();
  long messages = 0;            // vector messages sent this round
  long cumulative_scalars = 0;  // scalars transmitted so far
  int cd_sweeps = 0;

  double max_g() const { return g.size() ? g.cwiseAbs().maxCoeff() : 0.0; }
  double max_r_inf() const { return r_inf.size() ? r_inf.maxCoeff() : 0.0; }
  double max_s_inf() const { return s_inf.size() ? s_inf.maxCoeff() : 0.0; }
};

// Full snapshot of every machine after one chain round (duals post-update).
struct ChainStateSnapshot {
  std::vector<Vector> zetas;
  std::vector<Vector> prev_zetas;  // round-l values, for dual residuals
  Vector mus;
  std::vector<Vector> gammas;  // K−1 edge duals
};

struct FitResult {
  Coefficients estimate;
  bool converged = false;
  int rounds_used = 0;
  long total_cd_sweeps = 0;

  // Consensus solver diagnostics.
  std::vector<RoundRecord> rounds;
  double mu = 0.0;  // final zero-sum dual

  // Chain solver diagnostics.
  std::vector<ResidualReport> chain_rounds;
  std::vector<Vector> machine_estimates;
  Vector machine_mu;
  std::vector<Vector> machine_gamma;
  Coefficients average_estimate;  // mean over machines (chain) / shards (averaging)
  std::vector<ChainStateSnapshot> state_trace;

  double final_objective() const {
    if (!rounds.empty()) return rounds.back().objective;
    if (!chain_rounds.empty()) return chain_rounds.back().objective;
    return std::numeric_limits<double>::quiet_NaN();
  }
};

}  // namespace logcontrast

#endif  // LOGCONTRAST_SOLVER_HPP_
