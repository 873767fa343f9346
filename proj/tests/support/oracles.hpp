// Reference solvers used only by tests: they share no code with the library's
// coordinate-descent / ADMM paths.
#ifndef LOGCONTRAST_TESTS_ORACLES_HPP_
#define LOGCONTRAST_TESTS_ORACLES_HPP_

#include <cmath>
#include <functional>
#include <stdexcept>

#include "logcontrast/types.hpp"

namespace logcontrast::testing {

// min ½ζ⊤Aζ − b⊤ζ + Σ_j w_j|ζ_j| by accelerated proximal gradient with
// adaptive restart. A must be symmetric positive semidefinite.
inline Vector quadratic_l1_minimize(const Matrix& A, const Vector& b, const Vector& w,
                                    double tol = 1e-13, int max_iter = 500000) {
  const Index d = b.size();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(A);
  const double lipschitz = eig.eigenvalues().maxCoeff();
  if (!(lipschitz > 0.0)) {
    // Pure L1 objective: prox of 0 gradient step.
    Vector z(d);
    for (Index j = 0; j < d; ++j) z[j] = 0.0;
    return z;
  }
  const double step = 1.0 / lipschitz;

  auto objective = [&](const Vector& z) {
    return 0.5 * z.dot(A * z) - b.dot(z) + w.dot(z.cwiseAbs());
  };
  auto prox_step = [&](const Vector& v) {
    Vector g = A * v - b;
    Vector z(d);
    for (Index j = 0; j < d; ++j) {
      const double u = v[j] - step * g[j];
      const double t = step * w[j];
      const double mag = std::abs(u) - t;
      z[j] = mag <= 0.0 ? 0.0 : (u > 0.0 ? mag : -mag);
    }
    return z;
  };

  Vector x = Vector::Zero(d);
  Vector y = x;
  double momentum = 1.0;
  double f_prev = objective(x);
  for (int it = 0; it < max_iter; ++it) {
    const Vector x_next = prox_step(y);
    const double f_next = objective(x_next);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    if (f_next > f_prev) {  // restart the momentum sequence
      y = x;
      momentum = 1.0;
      f_prev = objective(x);
      continue;
    }
    const double change = (x_next - x).cwiseAbs().maxCoeff();
    y = x_next + ((momentum - 1.0) / t_next) * (x_next - x);
    x = x_next;
    momentum = t_next;
    f_prev = f_next;
    if (change <= tol) break;
  }
  return x;
}

// min ½ζ⊤Aζ − b⊤ζ + Σ_j w_j|ζ_j|  s.t. c⊤ζ = 0, by bisection on the scalar
// multiplier: h(μ) = c⊤ ζ̂(μ) with ζ̂(μ) the unconstrained minimizer at
// linear term b − μc is monotone nonincreasing in μ.
struct ConstrainedL1Solution {
  Vector zeta;
  double mu = 0.0;
};

inline ConstrainedL1Solution constrained_l1_minimize(const Matrix& A, const Vector& b,
                                                     const Vector& w, const Vector& c,
                                                     double tol = 1e-12) {
  auto solve_at = [&](double mu) { return quadratic_l1_minimize(A, b - mu * c, w, tol); };
  auto h = [&](double mu) { return c.dot(solve_at(mu)); };

  const double h0 = h(0.0);
  if (std::abs(h0) <= tol) return {solve_at(0.0), 0.0};
  // Maintain h(lo) ≥ 0 ≥ h(hi); h is nonincreasing in μ.
  double lo, hi;
  if (h0 > 0.0) {
    lo = 0.0;
    hi = 1.0;
    while (h(hi) > 0.0) {
      hi *= 2.0;
      if (hi > 1e12) throw std::runtime_error("oracle bracket failed");
    }
  } else {
    hi = 0.0;
    lo = -1.0;
    while (h(lo) < 0.0) {
      lo *= 2.0;
      if (lo < -1e12) throw std::runtime_error("oracle bracket failed");
    }
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double hm = h(mid);
    if (std::abs(hm) <= tol && std::abs(hi - lo) <= 1e-11 * (1.0 + std::abs(mid))) {
      return {solve_at(mid), mid};
    }
    (hm > 0.0 ? lo : hi) = mid;
  }
  const double mu = 0.5 * (lo + hi);
  return {solve_at(mu), mu};
}

// Equality-constrained least squares: min ½ζ⊤Aζ − b⊤ζ s.t. c⊤ζ = 0 via the
// bordered KKT system.
inline ConstrainedL1Solution equality_least_squares(const Matrix& A, const Vector& b,
                                                    const Vector& c) {
  const Index d = b.size();
  Matrix kkt = Matrix::Zero(d + 1, d + 1);
  kkt.topLeftCorner(d, d) = A;
  kkt.topRightCorner(d, 1) = c;
  kkt.bottomLeftCorner(1, d) = c.transpose();
  Vector rhs = Vector::Zero(d + 1);
  rhs.head(d) = b;
  const Vector sol = kkt.fullPivLu().solve(rhs);
  return {sol.head(d), sol[d]};
}

// Golden-section search on a unimodal (here convex) function over [lo, hi].
inline double golden_section_minimize(const std::function<double(double)>& f, double lo,
                                      double hi, double tol = 1e-12) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

// Coordinatewise optimality violation of min smooth(ζ) + Σ_j w_j|ζ_j| given
// the smooth gradient at ζ.
inline double subgradient_violation(const Vector& grad, const Vector& zeta,
                                    const Vector& w) {
  double worst = 0.0;
  for (Index j = 0; j < zeta.size(); ++j) {
    double v;
    if (zeta[j] != 0.0) {
      v = std::abs(grad[j] + w[j] * (zeta[j] > 0.0 ? 1.0 : -1.0));
    } else {
      v = std::max(0.0, std::abs(grad[j]) - w[j]);
    }
    worst = std::max(worst, v);
  }
  return worst;
}

}  // namespace logcontrast::testing

#endif  // LOGCONTRAST_TESTS_ORACLES_HPP_
