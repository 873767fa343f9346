#include <doctest.h>

#include <cmath>

#include "logcontrast/synthetic.hpp"

using namespace logcontrast;

TEST_SUITE("synthetic") {

TEST_CASE("score means follow log(0.2 p) on the first five components") {
  const Vector nu = compositional_mean(15);
  for (Index j = 0; j < 5; ++j) {
    CHECK(nu[j] == doctest::Approx(std::log(3.0)).epsilon(1e-15));
  }
  for (Index j = 5; j < 15; ++j) CHECK(nu[j] == 0.0);
}

TEST_CASE("default truth is the padded sparse pattern with a zero sum") {
  const Coefficients truth = default_true_coefficients(15, 10);
  CHECK(truth.size() == 25);
  CHECK(truth.zeta[0] == 1.0);
  CHECK(truth.zeta[7] == 1.2);
  CHECK(truth.zeta[8] == 0.0);
  CHECK(truth.zeta[15] == 0.7);
  CHECK(truth.zeta[22] == 2.3);
  CHECK(truth.zero_sum_residual() == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("generated compositions live strictly inside the simplex") {
  SyntheticSpec spec;
  spec.n = 200;
  spec.seed = 5;
  const SyntheticDraw draw = generate_synthetic_raw(spec);
  for (Index i = 0; i < spec.n; ++i) {
    CHECK(draw.X.row(i).minCoeff() > 0.0);
    CHECK(draw.X.row(i).sum() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("lognormal case produces positive covariates") {
  SyntheticSpec spec;
  spec.n = 100;
  spec.v_case = CovariateCase::kRightSkewedLognormal;
  spec.seed = 6;
  const SyntheticDraw draw = generate_synthetic_raw(spec);
  CHECK(draw.V.minCoeff() > 0.0);
}

TEST_CASE("noise matches the nominal level on a large draw") {
  SyntheticSpec spec;
  spec.n = 100000;
  spec.seed = 7;
  spec.center = false;
  auto [design, truth] = generate_synthetic(spec);
  const Vector residual = design.y - design.Pi * truth.zeta;
  CHECK(std::abs(residual.mean()) < 0.01);
  const double sd =
      std::sqrt((residual.array() - residual.mean()).square().sum() / (spec.n - 1));
  CHECK(sd == doctest::Approx(0.2).epsilon(0.05));
  CHECK(std::abs(sd - 0.2) < 0.01);
}

TEST_CASE("draws are bitwise reproducible under the seed") {
  SyntheticSpec spec;
  spec.n = 50;
  spec.seed = 12345;
  const SyntheticDraw a = generate_synthetic_raw(spec);
  const SyntheticDraw b = generate_synthetic_raw(spec);
  CHECK((a.X - b.X).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.V - b.V).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.y - b.y).cwiseAbs().maxCoeff() == 0.0);

  spec.seed = 12346;
  const SyntheticDraw c = generate_synthetic_raw(spec);
  CHECK((a.y - c.y).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("derived seeds decorrelate replications") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}

TEST_CASE("spec validation") {
  SyntheticSpec spec;
  spec.p = 4;  // default truth needs p >= 8
  CHECK_THROWS_AS(spec.validate(), ParameterError);
  spec.true_zeta = Coefficients(Vector::Zero(4 + 10), 4);
  CHECK_NOTHROW(spec.validate());
  spec.true_zeta = Coefficients(Vector::Zero(3), 2);
  CHECK_THROWS_AS(spec.validate(), ShapeError);
}

}  // TEST_SUITE
