#include "logcontrast/consensus.hpp"

#include <cmath>

#include "logcontrast/baselines.hpp"
#include "logcontrast/parallel.hpp"

namespace logcontrast {

Vector local_ridge_update(const ShardStats& stats, const Vector& zeta_global,
                          const Vector& gamma_k, double rho) {
  return stats.ridge_solve(rho, stats.moment() + rho * zeta_global - gamma_k);
}

int master_cd_update(CentralState& state, const Vector& constraint,
                     const PenaltySpec& penalty, double rho, int max_sweeps,
                     double cd_tol) {
  const Index d = state.zeta_global.size();
  const double K = static_cast<double>(state.locals.size());

  // Σ_k γ_k and Σ_k ζ_k are fixed during the sweeps.
  Vector gamma_sum = Vector::Zero(d);
  Vector zeta_sum = Vector::Zero(d);
  for (const auto& local : state.locals) {
    gamma_sum += local.gamma;
    zeta_sum += local.zeta;
  }

  Vector& zeta = state.zeta_global;
  double cz = constraint.dot(zeta);  // running Σ_m c_m ζ_m

  int sweeps = 0;
  for (; sweeps < max_sweeps; ++sweeps) {
    double max_change = 0.0;
    for (Index j = 0; j < d; ++j) {
      const double cj = constraint[j];
      const double arg = gamma_sum[j] / rho + zeta_sum[j] - state.mu * cj / rho -
                         cj * (cz - cj * zeta[j]);
      const double updated =
          soft_threshold(arg, penalty.lambda * penalty.weight(j) / rho) / (cj * cj + K);
      const double delta = updated - zeta[j];
      if (delta != 0.0) {
        cz += cj * delta;
        zeta[j] = updated;
      }
      max_change = std::max(max_change, std::abs(delta));
    }
    if (max_change <= cd_tol) {
      ++sweeps;
      break;
    }
  }
  return sweeps;
}

double master_coordinate_step(const CentralState& state, Index j,
                              const Vector& constraint, const PenaltySpec& penalty,
                              double rho) {
  const double K = static_cast<double>(state.locals.size());
  const double cj = constraint[j];
  double gamma_sum = 0.0, zeta_sum = 0.0;
  for (const auto& local : state.locals) {
    gamma_sum += local.gamma[j];
    zeta_sum += local.zeta[j];
  }
  const double cz = constraint.dot(state.zeta_global) - cj * state.zeta_global[j];
  const double arg = gamma_sum / rho + zeta_sum - state.mu * cj / rho - cj * cz;
  return soft_threshold(arg, penalty.lambda * penalty.weight(j) / rho) /
         (cj * cj + K);
}

double dual_update_mu(double mu, const Vector& zeta_global, const Vector& constraint,
                      double rho) {
  return mu + rho * constraint.dot(zeta_global);
}

Vector dual_update_gamma(const Vector& gamma_k, const Vector& zeta_k,
                         const Vector& zeta_global, double rho) {
  return gamma_k + rho * (zeta_k - zeta_global);
}

double consensus_objective(const std::vector<ShardStats>& stats, const Vector& zeta,
                           const PenaltySpec& penalty) {
  double value = 0.0;
  for (const auto& s : stats) value += s.smooth_value(zeta);
  for (Index j = 0; j < zeta.size(); ++j) {
    value += penalty.lambda * penalty.weight(j) * std::abs(zeta[j]);
  }
  return value;
}

FitResult fit_consensus(const std::vector<ShardStats>& stats, Index p,
                        const PenaltySpec& penalty, const SolverConfig& config) {
  config.validate();
  penalty.validate();
  if (stats.empty()) throw ParameterError("no shards");
  const Index d = stats.front().d();
  if (penalty.weights.size() > 0 && penalty.weights.size() != d) {
    throw ShapeError("penalty weight vector length mismatch");
  }
  const Vector constraint = constraint_vector(p, d - p);
  const double rho = config.rho;
  const std::size_t K = stats.size();

  CentralState state;
  state.zeta_global = config.warm_start ? *config.warm_start : Vector::Zero(d);
  state.locals.resize(K, LocalState{Vector::Zero(d), Vector::Zero(d)});

  FitResult result;
  result.rounds.reserve(config.outer_rounds);

  for (int l = 0; l < config.outer_rounds; ++l) {
    state.round = l;
    parallel_for(K, [&](std::size_t k) {
      state.locals[k].zeta =
          local_ridge_update(stats[k], state.zeta_global, state.locals[k].gamma, rho);
    });

    const Vector zeta_prev = state.zeta_global;
    const int sweeps = master_cd_update(state, constraint, penalty, rho,
                                        config.cd_max_sweeps, config.cd_tol);
    result.total_cd_sweeps += sweeps;

    state.mu = dual_update_mu(state.mu, state.zeta_global, constraint, rho);
    for (auto& local : state.locals) {
      local.gamma = dual_update_gamma(local.gamma, local.zeta, state.zeta_global, rho);
    }

    RoundRecord record;
    record.round = l;
    record.cd_sweeps = sweeps;
    double consensus_inf = 0.0;
    for (const auto& local : state.locals) {
      consensus_inf = std::max(
          consensus_inf, (local.zeta - state.zeta_global).cwiseAbs().maxCoeff());
    }
    record.consensus_inf = consensus_inf;
    record.zero_sum = std::abs(constraint.dot(state.zeta_global));
    record.dual_step_inf = rho * (state.zeta_global - zeta_prev).cwiseAbs().maxCoeff();
    record.objective = consensus_objective(stats, state.zeta_global, penalty);
    result.rounds.push_back(record);
    result.rounds_used = l + 1;

    if (record.consensus_inf <= config.outer_tol &&
        record.zero_sum <= config.outer_tol &&
        record.dual_step_inf <= config.outer_tol) {
      result.converged = true;
      break;
    }
  }

  result.estimate = Coefficients(state.zeta_global, p);
  result.mu = state.mu;
  return result;
}

FitResult fit_dscdmm(const ShardedDataset& shards, const PenaltySpec& penalty,
                     const SolverConfig& config) {
  PenaltySpec resolved = penalty;
  if (resolved.weights.size() == 0 && resolved.kind != PenaltyKind::kLasso) {
    resolved.weights = resolve_weights(shards.shards.front(), penalty, config);
  }
  return fit_consensus(make_shard_stats(shards), shards.p, resolved, config);
}

}  // namespace logcontrast
