#include <doctest.h>

#include "fixtures.hpp"
#include "logcontrast/baselines.hpp"
#include "logcontrast/consensus.hpp"
#include "logcontrast/parallel.hpp"
#include "oracles.hpp"

using namespace logcontrast;
namespace oracle = logcontrast::testing;

namespace {

ShardStats stats_of(const Shard& shard) { return ShardStats(shard); }

// Smooth part of the master subproblem: ½ζ⊤ρ(KI + cc⊤)ζ − (Σγ + ρΣζ_k − μc)⊤ζ.
void master_quadratic(const CentralState& state, const Vector& c, double rho, Matrix* A,
                      Vector* b) {
  const Index d = state.zeta_global.size();
  const double K = static_cast<double>(state.locals.size());
  *A = rho * (K * Matrix::Identity(d, d) + c * c.transpose());
  Vector gamma_sum = Vector::Zero(d), zeta_sum = Vector::Zero(d);
  for (const auto& local : state.locals) {
    gamma_sum += local.gamma;
    zeta_sum += local.zeta;
  }
  *b = gamma_sum + rho * zeta_sum - state.mu * c;
}

}  // namespace

TEST_SUITE("consensus") {

TEST_CASE("local ridge update zeros in, zeros out") {
  Shard shard;
  shard.Pi = Matrix::Random(8, 3);
  shard.y = Vector::Zero(8);
  shard.p = 2;
  shard.q = 1;
  const Vector out = local_ridge_update(stats_of(shard), Vector::Zero(3),
                                        Vector::Zero(3), 0.5);
  CHECK(out.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("local ridge update solves the diagonal system in closed form") {
  const Index d = 4;
  Shard shard;
  shard.Pi = std::sqrt(static_cast<double>(d)) * Matrix::Identity(d, d);
  shard.y = Vector::LinSpaced(d, 1.0, 4.0);
  shard.p = 2;
  shard.q = 2;
  const ShardStats stats(shard);
  REQUIRE((stats.gram() - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-14);

  Vector zeta(d), gamma(d);
  zeta << 1, -1, 0.5, 2;
  gamma << 0.1, 0.2, -0.3, 0.0;
  const Vector out = local_ridge_update(stats, zeta, gamma, 1.0);
  const Vector expected = (stats.moment() + zeta - gamma) / 2.0;
  CHECK((out - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("local ridge update matches a dense linear-solver oracle") {
  Rng rng(123);
  Shard shard;
  shard.Pi = oracle::random_matrix(20, 5, rng);
  shard.y = oracle::random_vector(20, rng);
  shard.p = 3;
  shard.q = 2;
  const ShardStats stats(shard);
  const Vector zeta = oracle::random_vector(5, rng);
  const Vector gamma = oracle::random_vector(5, rng);
  const double rho = 0.37;

  Matrix sys = stats.gram();
  sys.diagonal().array() += rho;
  const Vector expected = sys.fullPivLu().solve(stats.moment() + rho * zeta - gamma);
  const Vector out = local_ridge_update(stats, zeta, gamma, rho);
  CHECK((out - expected).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("local ridge update is bitwise reproducible") {
  Rng rng(5);
  Shard shard;
  shard.Pi = oracle::random_matrix(15, 4, rng);
  shard.y = oracle::random_vector(15, rng);
  shard.p = 2;
  shard.q = 2;
  const ShardStats stats(shard);
  const Vector zeta = oracle::random_vector(4, rng);
  const Vector gamma = oracle::random_vector(4, rng);
  const Vector a = local_ridge_update(stats, zeta, gamma, 0.1);
  const Vector b = local_ridge_update(stats, zeta, gamma, 0.1);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("master update of the zero state stays zero") {
  CentralState state;
  state.zeta_global = Vector::Zero(3);
  state.locals.assign(2, LocalState{Vector::Zero(3), Vector::Zero(3)});
  PenaltySpec penalty;
  penalty.lambda = 0.5;
  master_cd_update(state, constraint_vector(2, 1), penalty, 1.0, 10, 1e-12);
  CHECK(state.zeta_global.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("master coordinate step matches a 1-D golden-section oracle") {
  // d = 2, K = 1, C = (1, 0), handcrafted inputs.
  const Vector c = constraint_vector(1, 1);
  CentralState state;
  state.zeta_global = Vector::Zero(2);
  state.mu = 0.3;
  LocalState local;
  local.zeta = (Vector(2) << 1.4, -0.7).finished();
  local.gamma = (Vector(2) << 0.2, 0.1).finished();
  state.locals = {local};
  PenaltySpec penalty;
  penalty.lambda = 0.25;
  const double rho = 0.8;

  Matrix A;
  Vector b;
  master_quadratic(state, c, rho, &A, &b);

  // One sweep of the closed-form update, coordinate by coordinate, against
  // golden-section minimization of the same restricted objective.
  Vector zeta = state.zeta_global;
  for (Index j = 0; j < 2; ++j) {
    Vector probe = zeta;
    auto restricted = [&](double t) {
      probe[j] = t;
      return 0.5 * probe.dot(A * probe) - b.dot(probe) +
             penalty.lambda * probe.cwiseAbs().sum();
    };
    const double numeric = oracle::golden_section_minimize(restricted, -10.0, 10.0);
    probe[j] = zeta[j];

    CentralState step = state;
    step.zeta_global = zeta;
    master_cd_update(step, c, penalty, rho, 1, 0.0);
    CHECK(step.zeta_global[j] == doctest::Approx(numeric).epsilon(1e-8));
    zeta[j] = step.zeta_global[j];  // Gauss–Seidel: carry the update forward
  }
}

TEST_CASE("converged master sweep satisfies the subgradient condition") {
  Rng rng(17);
  const Index d = 6;
  const Vector c = constraint_vector(4, 2);
  CentralState state;
  state.zeta_global = Vector::Zero(d);
  state.mu = 0.2;
  for (int k = 0; k < 3; ++k) {
    state.locals.push_back(
        {oracle::random_vector(d, rng), 0.3 * oracle::random_vector(d, rng)});
  }
  PenaltySpec penalty;
  penalty.lambda = 0.4;
  const double rho = 0.6;
  master_cd_update(state, c, penalty, rho, 500, 1e-14);

  Matrix A;
  Vector b;
  master_quadratic(state, c, rho, &A, &b);
  const Vector grad = A * state.zeta_global - b;
  const Vector w = penalty.lambda * Vector::Ones(d);
  CHECK(oracle::subgradient_violation(grad, state.zeta_global, w) < 1e-6);

  // And the fixed point agrees with the independent proximal-gradient oracle.
  const Vector ref = oracle::quadratic_l1_minimize(A, b, w);
  CHECK((state.zeta_global - ref).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("dual updates") {
  const Vector c = constraint_vector(2, 1);
  SUBCASE("zero-sum satisfied leaves mu unchanged") {
    Vector zeta(3);
    zeta << 1.0, -1.0, 5.0;
    CHECK(dual_update_mu(0.7, zeta, c, 2.0) == doctest::Approx(0.7));
  }
  SUBCASE("stated increment") {
    Vector zeta(3);
    zeta << 0.5, 0.0, 9.0;
    CHECK(dual_update_mu(0.0, zeta, c, 1.0) == doctest::Approx(0.5));
  }
  SUBCASE("mu telescopes over rounds") {
    Rng rng(9);
    double mu = 0.0;
    double accumulated = 0.0;
    const double rho = 0.3;
    for (int l = 0; l < 10; ++l) {
      const Vector zeta = oracle::random_vector(3, rng);
      accumulated += rho * c.dot(zeta);
      mu = dual_update_mu(mu, zeta, c, rho);
    }
    CHECK(mu == doctest::Approx(accumulated).epsilon(1e-12));
  }
  SUBCASE("gamma update") {
    Vector gamma = Vector::Zero(2);
    Vector zeta_k(2), zeta(2);
    zeta_k << 1.0, 0.0;
    zeta << 0.0, 0.0;
    const Vector out = dual_update_gamma(gamma, zeta_k, zeta, 2.0);
    CHECK(out[0] == doctest::Approx(2.0));
    CHECK(out[1] == 0.0);
    // consensus freezes the dual
    const Vector frozen = dual_update_gamma(out, zeta, zeta, 2.0);
    CHECK((frozen - out).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("fit on a zero response returns the zero estimate") {
  LogContrastDesign design = testing::random_design(60, 4, 2, 21);
  design.y.setZero();
  PenaltySpec penalty;
  penalty.lambda = 0.1;
  SolverConfig config;
  config.rho = 1.0;
  config.outer_rounds = 50;
  const FitResult fit = fit_dscdmm(partition(design, 3), penalty, config);
  CHECK(fit.estimate.zeta.cwiseAbs().maxCoeff() == 0.0);
  CHECK(fit.final_objective() == doctest::Approx(0.0));
}

TEST_CASE("K = 1 path and the global solver coincide") {
  const LogContrastDesign design = testing::random_design(80, 5, 3, 31);
  PenaltySpec penalty;
  penalty.lambda = 0.03;
  SolverConfig config;
  config.rho = 1.0;
  config.outer_rounds = 5000;
  config.outer_tol = 1e-11;
  const FitResult global = fit_gcdmm(design, penalty, config);
  const FitResult single = fit_dscdmm(partition(design, 1), penalty, config);
  CHECK((global.estimate.zeta - single.estimate.zeta).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("distributed fit minimizes the sharded objective") {
  // Oracle target: min Σ_k (1/2n_k)‖y_k − Π_kζ‖² + λ‖ζ‖₁ s.t. C⊤ζ = 0.
  const LogContrastDesign design = testing::random_design(200, 5, 3, 41);
  const ShardedDataset shards = partition(design, 4);
  const auto stats = make_shard_stats(shards);

  PenaltySpec penalty;
  penalty.lambda = 0.05;
  SolverConfig config;
  config.rho = 1.0;
  config.outer_rounds = 20000;
  config.outer_tol = 1e-12;
  config.cd_tol = 1e-14;
  config.cd_max_sweeps = 100;
  const FitResult fit = fit_dscdmm(shards, penalty, config);
  REQUIRE(fit.converged);

  Matrix A = Matrix::Zero(8, 8);
  Vector b = Vector::Zero(8);
  for (const auto& s : stats) {
    A += s.gram();
    b += s.moment();
  }
  const Vector w = penalty.lambda * Vector::Ones(8);
  const auto ref =
      oracle::constrained_l1_minimize(A, b, w, design.constraint(), 1e-13);
  CHECK((fit.estimate.zeta - ref.zeta).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("distributed fit agrees with the pooled solver at lambda = 0") {
  const LogContrastDesign design = testing::random_design(200, 5, 3, 51);
  PenaltySpec penalty;
  penalty.lambda = 0.0;
  SolverConfig config;
  config.rho = 1.0;
  config.outer_rounds = 500;
  config.outer_tol = 1e-10;
  const FitResult distributed = fit_dscdmm(partition(design, 4), penalty, config);
  const FitResult pooled = fit_gcdmm(design, penalty, config);
  CHECK((distributed.estimate.zeta - pooled.estimate.zeta).cwiseAbs().maxCoeff() <
        1e-3);
  CHECK(std::abs(distributed.estimate.zero_sum_residual()) < 1e-6);
}

TEST_CASE("consensus and zero-sum residuals are tight after convergence") {
  const LogContrastDesign design = testing::random_design(120, 4, 2, 61);
  PenaltySpec penalty;
  penalty.lambda = 0.02;
  SolverConfig config;
  config.rho = 0.5;
  config.outer_rounds = 20000;
  config.outer_tol = 1e-9;
  const FitResult fit = fit_dscdmm(partition(design, 3), penalty, config);
  REQUIRE(fit.converged);
  CHECK(fit.rounds.back().consensus_inf <= 1e-5);
  CHECK(fit.rounds.back().zero_sum <= 1e-6);
  // Residual trace decays: late-round residual below the mid-run value.
  const auto& rounds = fit.rounds;
  CHECK(rounds.back().consensus_inf <= rounds[rounds.size() / 2].consensus_inf);
}

TEST_CASE("shard execution order does not change the result") {
  const LogContrastDesign design = testing::random_design(90, 4, 2, 71);
  PenaltySpec penalty;
  penalty.lambda = 0.05;
  SolverConfig config;
  config.rho = 1.0;
  config.outer_rounds = 200;
  set_worker_thread_count(1);
  const FitResult serial = fit_dscdmm(partition(design, 4), penalty, config);
  set_worker_thread_count(4);
  const FitResult parallel = fit_dscdmm(partition(design, 4), penalty, config);
  set_worker_thread_count(0);
  CHECK((serial.estimate.zeta - parallel.estimate.zeta).cwiseAbs().maxCoeff() == 0.0);
}

}  // TEST_SUITE
