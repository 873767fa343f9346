#include "logcontrast/solver.hpp"

#include <cmath>

namespace logcontrast {

void SolverConfig::validate() const {
  if (rho <= 0.0) throw ParameterError("rho must be positive");
  if (outer_rounds < 1) throw ParameterError("outer_rounds must be at least 1");
  if (cd_max_sweeps < 1) throw ParameterError("cd_max_sweeps must be at least 1");
  if (cd_tol <= 0.0 || outer_tol <= 0.0) throw ParameterError("tolerances must be positive");
}

ShardStats::ShardStats(const Shard& shard) : n_(shard.n()) {
  if (n_ == 0) throw ShapeError("shard is empty");
  const double inv_n = 1.0 / static_cast<double>(n_);
  gram_ = (shard.Pi.transpose() * shard.Pi) * inv_n;
  moment_ = (shard.Pi.transpose() * shard.y) * inv_n;
  y2_ = shard.y.squaredNorm() * inv_n;
}

double ShardStats::smooth_value(const Vector& zeta) const {
  return 0.5 * (zeta.dot(gram_ * zeta) - 2.0 * moment_.dot(zeta) + y2_);
}

Vector ShardStats::smooth_gradient(const Vector& zeta) const {
  return gram_ * zeta - moment_;
}

Vector ShardStats::ridge_solve(double rho, const Vector& rhs) const {
  if (rho != cached_rho_) {
    Matrix sys = gram_;
    sys.diagonal().array() += rho;
    ldlt_.compute(sys);
    if (ldlt_.info() != Eigen::Success) {
      throw NumericalError("ridge system factorization failed");
    }
    cached_rho_ = rho;
  }
  Vector x = ldlt_.solve(rhs);
  if (!x.allFinite()) throw NumericalError("ridge solve produced non-finite values");
  return x;
}

std::vector<ShardStats> make_shard_stats(const ShardedDataset& shards) {
  std::vector<ShardStats> stats;
  stats.reserve(shards.shards.size());
  for (const auto& s : shards.shards) stats.emplace_back(s);
  return stats;
}

}  // namespace logcontrast
