#include <doctest.h>

#include "logcontrast/penalty.hpp"
#include "logcontrast/synthetic.hpp"

using namespace logcontrast;

TEST_SUITE("penalty") {

TEST_CASE("soft threshold on the stated points") {
  CHECK(soft_threshold(3.0, 1.0) == doctest::Approx(2.0));
  CHECK(soft_threshold(-0.5, 1.0) == 0.0);
  CHECK(soft_threshold(-3.0, 1.0) == doctest::Approx(-2.0));
  CHECK(soft_threshold(0.0, 0.0) == 0.0);
}

TEST_CASE("soft threshold is odd, nonexpansive, identity at t = 0") {
  Rng rng(42);
  for (int i = 0; i < 200; ++i) {
    const double u = 3.0 * rng.normal();
    const double v = 3.0 * rng.normal();
    const double t = std::abs(rng.normal());
    CHECK(soft_threshold(-u, t) == doctest::Approx(-soft_threshold(u, t)));
    CHECK(std::abs(soft_threshold(u, t) - soft_threshold(v, t)) <=
          std::abs(u - v) + 1e-15);
    CHECK(soft_threshold(u, 0.0) == u);
  }
}

TEST_CASE("scad derivative branches") {
  CHECK(scad_derivative(0.5, 1.0, 3.7) == doctest::Approx(1.0));
  CHECK(scad_derivative(3.7, 1.0, 3.7) == 0.0);
  // (aλ − u)/(a − 1) = (3.7 − 2)/2.7
  CHECK(scad_derivative(2.0, 1.0, 3.7) ==
        doctest::Approx(0.62962962962962963).epsilon(1e-12));
  CHECK(scad_derivative(100.0, 1.0, 3.7) == 0.0);
  CHECK_THROWS_AS(scad_derivative(1.0, 1.0, 2.0), ParameterError);
}

TEST_CASE("scad derivative is continuous at u = lambda and nonincreasing") {
  const double lambda = 0.7, a = 3.7;
  CHECK(scad_derivative(lambda, lambda, a) == doctest::Approx(lambda));
  CHECK(scad_derivative(lambda * (1 + 1e-12), lambda, a) ==
        doctest::Approx(lambda).epsilon(1e-9));
  double prev = scad_derivative(0.0, lambda, a);
  for (double u = 0.01; u < 4.0; u += 0.01) {
    const double cur = scad_derivative(u, lambda, a);
    CHECK(cur <= prev + 1e-15);
    prev = cur;
  }
}

TEST_CASE("penalty weights per kind") {
  SUBCASE("lasso is all ones and ignores the reference") {
    const Vector w = penalty_weights(PenaltyKind::kLasso, std::nullopt, 5, 100, 0.1, 3.7);
    CHECK(w.size() == 5);
    CHECK(w.isOnes());
    Vector ref(5);
    ref << 1, -2, 3, -4, 5;
    const Vector w2 = penalty_weights(PenaltyKind::kLasso, ref, 5, 100, 0.1, 3.7);
    CHECK((w - w2).norm() == 0.0);
  }
  SUBCASE("adaptive lasso inverts the shifted pilot magnitude") {
    Vector ref = Vector::Zero(3);
    ref[1] = 2.0;
    const Vector w =
        penalty_weights(PenaltyKind::kAdaptiveLasso, ref, 3, 100, 0.1, 3.7);
    CHECK(w[0] == doctest::Approx(100.0));  // (0 + 1/100)^{-1}
    CHECK(w[1] == doctest::Approx(1.0 / 2.01));
  }
  SUBCASE("scad weight equals the derivative over lambda") {
    Vector ref = Vector::Zero(2);
    ref[0] = 2.0;
    const Vector w = penalty_weights(PenaltyKind::kScad, ref, 2, 100, 1.0, 3.7);
    CHECK(w[0] == doctest::Approx(0.62962962962962963).epsilon(1e-12));
    CHECK(w[1] == doctest::Approx(1.0));  // zero reference: first branch
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(
        penalty_weights(PenaltyKind::kAdaptiveLasso, std::nullopt, 3, 100, 0.1, 3.7),
        UsageError);
    Vector ref = Vector::Zero(3);
    CHECK_THROWS_AS(penalty_weights(PenaltyKind::kScad, ref, 3, 100, 0.0, 3.7),
                    ParameterError);
  }
}

}  // TEST_SUITE
