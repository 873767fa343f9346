#include "logcontrast/baselines.hpp"

#include <string>

#include "logcontrast/consensus.hpp"
#include "logcontrast/parallel.hpp"
#include "logcontrast/tuning.hpp"

namespace logcontrast {

FitResult fit_gcdmm(const LogContrastDesign& design, const PenaltySpec& penalty,
                    const SolverConfig& config) {
  return fit_dscdmm(partition(design, 1), penalty, config);
}

FitResult fit_acdmm(const ShardedDataset& shards, const PenaltySpec& penalty,
                    const SolverConfig& config) {
  if (shards.machine_count() < 1) throw ParameterError("no shards");
  const Index d = shards.d();
  const std::size_t K = shards.shards.size();

  PenaltySpec local = penalty;
  if (local.weights.size() == 0 && local.kind != PenaltyKind::kLasso) {
    local.weights = resolve_weights(shards.shards.front(), penalty, config);
  }

  std::vector<FitResult> fits(K);
  parallel_for(K, [&](std::size_t k) {
    try {
      std::vector<ShardStats> stats;
      stats.emplace_back(shards.shards[k]);
      fits[k] = fit_consensus(stats, shards.p, local, config);
    } catch (const std::exception& e) {
      throw NumericalError("shard " + std::to_string(k + 1) + ": " + e.what());
    }
  });

  FitResult result;
  Vector average = Vector::Zero(d);
  result.converged = true;
  result.machine_estimates.reserve(K);
  for (std::size_t k = 0; k < K; ++k) {
    average += fits[k].estimate.zeta;
    result.converged = result.converged && fits[k].converged;
    result.rounds_used = std::max(result.rounds_used, fits[k].rounds_used);
    result.total_cd_sweeps += fits[k].total_cd_sweeps;
    result.machine_estimates.push_back(fits[k].estimate.zeta);
  }
  average /= static_cast<double>(K);
  result.estimate = Coefficients(average, shards.p);
  result.average_estimate = result.estimate;
  return result;
}

Vector resolve_weights(const Shard& pilot, const PenaltySpec& penalty,
                       const SolverConfig& config) {
  const Index d = pilot.d();
  switch (penalty.kind) {
    case PenaltyKind::kLasso:
      return Vector::Ones(d);
    case PenaltyKind::kAdaptiveLasso: {
      // GIC-tuned plain-lasso pilot on the pilot shard.
      const SelectionResult pilot_path =
          select_lambda(pilot, PenaltyKind::kLasso, config);
      return penalty_weights(PenaltyKind::kAdaptiveLasso, pilot_path.estimate.zeta,
                             d, static_cast<double>(pilot.n()), penalty.lambda,
                             penalty.scad_a);
    }
    case PenaltyKind::kScad: {
      if (penalty.lambda <= 0.0) {
        throw ParameterError("scad weights require lambda > 0");
      }
      // Reweighted-L1 rounds: the final consumer performs round lla_rounds,
      // so lla_rounds − 1 pilot solves happen here.
      Vector reference = Vector::Zero(d);
      Vector weights = Vector::Ones(d);
      std::vector<ShardStats> stats;
      stats.emplace_back(pilot);
      SolverConfig pilot_config = config;
      for (int m = 1; m < penalty.lla_rounds; ++m) {
        PenaltySpec stage = penalty;
        stage.kind = PenaltyKind::kLasso;
        stage.weights = weights;
        pilot_config.warm_start = reference;
        reference = fit_consensus(stats, pilot.p, stage, pilot_config).estimate.zeta;
        weights = penalty_weights(PenaltyKind::kScad, reference, d,
                                  static_cast<double>(pilot.n()), penalty.lambda,
                                  penalty.scad_a);
      }
      return weights;
    }
  }
  throw ParameterError("unknown penalty kind");
}

}  // namespace logcontrast
