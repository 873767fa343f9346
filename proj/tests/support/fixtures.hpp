// Shared random fixtures for the test suite.
#ifndef LOGCONTRAST_TESTS_FIXTURES_HPP_
#define LOGCONTRAST_TESTS_FIXTURES_HPP_

#include "logcontrast/design.hpp"
#include "logcontrast/synthetic.hpp"

namespace logcontrast::testing {

inline Matrix random_simplex_matrix(Index n, Index p, Rng& rng) {
  Matrix X(n, p);
  for (Index i = 0; i < n; ++i) {
    Vector row(p);
    for (Index j = 0; j < p; ++j) row[j] = std::exp(rng.normal());
    X.row(i) = row / row.sum();
  }
  return X;
}

inline Matrix random_matrix(Index n, Index q, Rng& rng) {
  Matrix V(n, q);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < q; ++j) V(i, j) = rng.normal();
  }
  return V;
}

inline Vector random_vector(Index n, Rng& rng) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = rng.normal();
  return v;
}

// Small centered design with a sparse truth and mild noise.
inline LogContrastDesign random_design(Index n, Index p, Index q, std::uint64_t seed,
                                       double noise_sd = 0.1) {
  Rng rng(seed);
  const Matrix X = random_simplex_matrix(n, p, rng);
  const Matrix V = random_matrix(n, q, rng);
  Vector zeta = Vector::Zero(p + q);
  zeta[0] = 1.0;
  zeta[1] = -1.0;  // zero-sum on the compositional block
  if (q > 0) zeta[p] = 0.8;
  Vector y(n);
  for (Index i = 0; i < n; ++i) {
    double mean = 0.0;
    for (Index j = 0; j < p; ++j) mean += std::log(X(i, j)) * zeta[j];
    for (Index j = 0; j < q; ++j) mean += V(i, j) * zeta[p + j];
    y[i] = mean + noise_sd * rng.normal();
  }
  return build_design(CompositionMatrix(X), V, y, /*center=*/true);
}

inline Shard shard_of(const LogContrastDesign& design) {
  return Shard{design.y, design.Pi, design.p, design.q};
}

}  // namespace logcontrast::testing

#endif  // LOGCONTRAST_TESTS_FIXTURES_HPP_
