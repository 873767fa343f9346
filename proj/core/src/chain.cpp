#include "logcontrast/chain.hpp"

#include <cmath>
#include <string>

#include "logcontrast/baselines.hpp"
#include "logcontrast/parallel.hpp"

namespace logcontrast {

ChainTopology::ChainTopology(int machine_count) : machine_count(machine_count) {
  if (machine_count < 2 || machine_count % 2 != 0) {
    throw TopologyError("chain solver needs an even machine count >= 2, got " +
                        std::to_string(machine_count) +
                        "; merge the last two shards to even the chain");
  }
  for (int k = 0; k < machine_count; ++k) {
    (is_head(k) ? heads : tails).push_back(k);
  }
}

double chain_affine_term(const ShardStats& stats, const Vector& zeta_k, double mu_k,
                         const Vector& constraint, Index j, double rho) {
  const Vector w = stats.gram() * zeta_k;
  const double partial = stats.moment()[j] - (w[j] - stats.gram()(j, j) * zeta_k[j]);
  const double cz = constraint.dot(zeta_k) - constraint[j] * zeta_k[j];
  return partial - mu_k * constraint[j] - rho * constraint[j] * cz;
}

double chain_coordinate_step(const ShardStats& stats, const Vector& zeta, double mu_k,
                             const Vector& coupling, int degree,
                             const Vector& constraint, double lambda,
                             const Vector& weights, double rho, Index j) {
  const double cj = constraint[j];
  const double affine = chain_affine_term(stats, zeta, mu_k, constraint, j, rho);
  const double denom = rho * (degree + cj * cj) + stats.gram()(j, j);
  return soft_threshold(affine + coupling[j], lambda * weights[j]) / denom;
}

int chain_machine_update(const ShardStats& stats, Vector& zeta, double mu_k,
                         const Vector& coupling, int degree, const Vector& constraint,
                         double lambda, const Vector& weights, double rho,
                         int max_sweeps, double cd_tol) {
  const Index d = zeta.size();
  const Matrix& gram = stats.gram();
  Vector w = gram * zeta;              // running Gζ
  double cz = constraint.dot(zeta);    // running Σ_m c_m ζ_m

  int sweeps = 0;
  for (; sweeps < max_sweeps; ++sweeps) {
    double max_change = 0.0;
    for (Index j = 0; j < d; ++j) {
      const double cj = constraint[j];
      const double affine = stats.moment()[j] - (w[j] - gram(j, j) * zeta[j]) -
                            mu_k * cj - rho * cj * (cz - cj * zeta[j]);
      const double denom = rho * (degree + cj * cj) + gram(j, j);
      const double updated =
          soft_threshold(affine + coupling[j], lambda * weights[j]) / denom;
      const double delta = updated - zeta[j];
      if (delta != 0.0) {
        w += delta * gram.col(j);
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

namespace {

Vector build_coupling(const Vector* left, const Vector* right, const Vector* gamma_in,
                      const Vector* gamma_out, double rho, Index d, int* degree) {
  Vector coupling = Vector::Zero(d);
  *degree = 0;
  if (left != nullptr) {
    coupling += rho * (*left);
    ++*degree;
  }
  if (right != nullptr) {
    coupling += rho * (*right);
    ++*degree;
  }
  if (gamma_in != nullptr) coupling += *gamma_in;
  if (gamma_out != nullptr) coupling -= *gamma_out;
  return coupling;
}

Vector run_machine(const ShardStats& stats, const MachineState& state,
                   const Vector* left, const Vector* right, const Vector* gamma_in,
                   const Vector* gamma_out, const Vector& constraint, double lambda,
                   const Vector& weights, double rho, int max_sweeps, double cd_tol,
                   int* sweeps_out) {
  int degree = 0;
  const Vector coupling =
      build_coupling(left, right, gamma_in, gamma_out, rho, state.zeta.size(), &degree);
  Vector zeta = state.zeta;
  const int sweeps = chain_machine_update(stats, zeta, state.mu, coupling, degree,
                                          constraint, lambda, weights, rho, max_sweeps,
                                          cd_tol);
  if (sweeps_out != nullptr) *sweeps_out = sweeps;
  return zeta;
}

}  // namespace

Vector head_cd_update(const ShardStats& stats, const MachineState& state,
                      const Vector* left_prev, const Vector* right_prev,
                      const Vector* gamma_in, const Vector* gamma_out,
                      const Vector& constraint, double lambda, const Vector& weights,
                      double rho, int max_sweeps, double cd_tol, int* sweeps_out) {
  return run_machine(stats, state, left_prev, right_prev, gamma_in, gamma_out,
                     constraint, lambda, weights, rho, max_sweeps, cd_tol, sweeps_out);
}

Vector tail_cd_update(const ShardStats& stats, const MachineState& state,
                      const Vector* left_new, const Vector* right_new,
                      const Vector* gamma_in, const Vector* gamma_out,
                      const Vector& constraint, double lambda, const Vector& weights,
                      double rho, int max_sweeps, double cd_tol, int* sweeps_out) {
  return run_machine(stats, state, left_new, right_new, gamma_in, gamma_out,
                     constraint, lambda, weights, rho, max_sweeps, cd_tol, sweeps_out);
}

void dual_update(std::vector<Vector>& gammas, Vector& mus,
                 const std::vector<Vector>& zetas, const Vector& constraint,
                 double rho) {
  const int K = static_cast<int>(zetas.size());
  for (int k = 0; k < K; ++k) mus[k] += rho * constraint.dot(zetas[k]);
  for (int k = 0; k + 1 < K; ++k) gammas[k] += rho * (zetas[k] - zetas[k + 1]);
}

ResidualReport residuals(const std::vector<Vector>& zetas,
                         const std::vector<Vector>& prev_zetas,
                         const Vector& constraint, double rho) {
  const int K = static_cast<int>(zetas.size());
  ResidualReport report;
  report.g.resize(K);
  for (int k = 0; k < K; ++k) report.g[k] = constraint.dot(zetas[k]);
  report.r_inf.resize(K - 1);
  report.r_two.resize(K - 1);
  for (int k = 0; k + 1 < K; ++k) {
    const Vector r = zetas[k] - zetas[k + 1];
    report.r_inf[k] = r.cwiseAbs().maxCoeff();
    report.r_two[k] = r.norm();
  }
  std::vector<double> s;
  for (int k = 0; k < K; k += 2) {
    Vector sk = rho * (zetas[k + 1] - prev_zetas[k + 1]);
    if (k > 0) sk += rho * (zetas[k - 1] - prev_zetas[k - 1]);
    s.push_back(sk.cwiseAbs().maxCoeff());
  }
  report.s_inf = Eigen::Map<Vector>(s.data(), static_cast<Index>(s.size()));
  return report;
}

double machine_objective(const ShardStats& stats, const Vector& zeta, double lambda,
                         const Vector& weights) {
  return stats.smooth_value(zeta) + lambda * (weights.array() * zeta.array().abs()).sum();
}

Lemma1Bounds lemma1_gap_bounds(const ChainStateSnapshot& snapshot,
                               const ChainReference& reference,
                               const std::vector<ShardStats>& stats, Index p,
                               double lambda, const std::vector<Vector>& weights,
                               double rho) {
  const int K = static_cast<int>(snapshot.zetas.size());
  if (reference.zetas.size() != snapshot.zetas.size() ||
      reference.mus.size() != K ||
      reference.gammas.size() != snapshot.gammas.size()) {
    throw UsageError("gap bounds need a reference optimum matching the chain layout");
  }
  const Index d = snapshot.zetas.front().size();
  const Vector constraint = constraint_vector(p, d - p);

  Lemma1Bounds bounds;
  for (int k = 0; k < K; ++k) {
    bounds.gap += machine_objective(stats[k], snapshot.zetas[k], lambda, weights[k]) -
                  machine_objective(stats[k], reference.zetas[k], lambda, weights[k]);
    const double g_k = constraint.dot(snapshot.zetas[k]);
    bounds.lower -= reference.mus[k] * g_k;
    bounds.upper -= snapshot.mus[k] * g_k;
  }
  for (int k = 0; k + 1 < K; ++k) {
    const Vector r_k = snapshot.zetas[k] - snapshot.zetas[k + 1];
    bounds.lower -= reference.gammas[k].dot(r_k);
    bounds.upper -= snapshot.gammas[k].dot(r_k);
  }
  for (int k = 0; k < K; k += 2) {
    Vector s_k = rho * (snapshot.zetas[k + 1] - snapshot.prev_zetas[k + 1]);
    if (k > 0) s_k += rho * (snapshot.zetas[k - 1] - snapshot.prev_zetas[k - 1]);
    bounds.upper += s_k.dot(reference.zetas[k] - snapshot.zetas[k]);
  }
  return bounds;
}

FitResult fit_chain(const std::vector<ShardStats>& stats, Index p,
                    const PenaltySpec& penalty, const std::vector<Vector>& weights,
                    const SolverConfig& config) {
  config.validate();
  penalty.validate();
  const ChainTopology topology(static_cast<int>(stats.size()));
  const int K = topology.machine_count;
  const Index d = stats.front().d();
  if (static_cast<int>(weights.size()) != K) {
    throw ShapeError("need one weight vector per machine");
  }
  const Vector constraint = constraint_vector(p, d - p);
  const double rho = config.rho;
  const double lambda = penalty.lambda;

  std::vector<Vector> zetas(K, Vector::Zero(d));
  if (config.warm_start) {
    for (auto& z : zetas) z = *config.warm_start;
  }
  Vector mus = Vector::Zero(K);
  std::vector<Vector> gammas(K - 1, Vector::Zero(d));

  FitResult result;
  result.chain_rounds.reserve(config.outer_rounds);
  long cumulative_scalars = 0;

  std::vector<Vector> prev(K);
  std::vector<int> sweep_counts(K, 0);
  for (int l = 0; l < config.outer_rounds; ++l) {
    prev = zetas;

    // Head phase: machines read only round-l snapshots, so updates commute.
    parallel_for(topology.heads.size(), [&](std::size_t idx) {
      const int k = topology.heads[idx];
      MachineState state{prev[k], mus[k], Vector()};
      const Vector* left = k > 0 ? &prev[k - 1] : nullptr;
      const Vector* right = k + 1 < K ? &prev[k + 1] : nullptr;
      const Vector* gin = k > 0 ? &gammas[k - 1] : nullptr;
      const Vector* gout = k + 1 < K ? &gammas[k] : nullptr;
      zetas[k] = head_cd_update(stats[k], state, left, right, gin, gout, constraint,
                                lambda, weights[k], rho, config.cd_max_sweeps,
                                config.cd_tol, &sweep_counts[k]);
    });

    // Tail phase: neighbors are heads, already holding their round-(l+1) values.
    parallel_for(topology.tails.size(), [&](std::size_t idx) {
      const int k = topology.tails[idx];
      MachineState state{prev[k], mus[k], Vector()};
      const Vector* left = k > 0 ? &zetas[k - 1] : nullptr;
      const Vector* right = k + 1 < K ? &zetas[k + 1] : nullptr;
      const Vector* gin = k > 0 ? &gammas[k - 1] : nullptr;
      const Vector* gout = k + 1 < K ? &gammas[k] : nullptr;
      zetas[k] = tail_cd_update(stats[k], state, left, right, gin, gout, constraint,
                                lambda, weights[k], rho, config.cd_max_sweeps,
                                config.cd_tol, &sweep_counts[k]);
    });

    dual_update(gammas, mus, zetas, constraint, rho);

    ResidualReport report = residuals(zetas, prev, constraint, rho);
    double objective = 0.0;
    int round_sweeps = 0;
    for (int k = 0; k < K; ++k) {
      objective += machine_objective(stats[k], zetas[k], lambda, weights[k]);
      round_sweeps += sweep_counts[k];
    }
    report.objective = objective;
    report.messages = 2L * (K - 1);
    cumulative_scalars += report.messages * d;
    report.cumulative_scalars = cumulative_scalars;
    report.cd_sweeps = round_sweeps;
    result.total_cd_sweeps += round_sweeps;
    result.chain_rounds.push_back(std::move(report));
    result.rounds_used = l + 1;

    if (config.record_state_trace) {
      result.state_trace.push_back(ChainStateSnapshot{zetas, prev, mus, gammas});
    }

    const ResidualReport& back = result.chain_rounds.back();
    if (back.max_g() <= config.outer_tol && back.max_r_inf() <= config.outer_tol &&
        back.max_s_inf() <= config.outer_tol) {
      result.converged = true;
      break;
    }
  }

  result.estimate = Coefficients(zetas.back(), p);
  Vector average = Vector::Zero(d);
  for (const auto& z : zetas) average += z;
  result.average_estimate = Coefficients(average / K, p);
  result.machine_estimates = zetas;
  result.machine_mu = mus;
  result.machine_gamma = gammas;
  return result;
}

FitResult fit_dsgcdmm(const ShardedDataset& shards, const PenaltySpec& penalty,
                      const SolverConfig& config) {
  const ChainTopology topology(shards.machine_count());  // validates even K
  const int K = topology.machine_count;
  const Index d = shards.d();

  PenaltySpec resolved = penalty;
  std::vector<Vector> weights;
  if (penalty.weights.size() > 0) {
    weights.assign(K, penalty.weights);
  } else if (penalty.kind == PenaltyKind::kLasso) {
    weights.assign(K, Vector::Ones(d));
  } else if (config.per_shard_weights) {
    weights.resize(K);
    for (int k = 0; k < K; ++k) {
      weights[k] = resolve_weights(shards.shards[k], penalty, config);
    }
  } else {
    weights.assign(K, resolve_weights(shards.shards.front(), penalty, config));
  }
  return fit_chain(make_shard_stats(shards), shards.p, resolved, weights, config);
}

}  // namespace logcontrast
