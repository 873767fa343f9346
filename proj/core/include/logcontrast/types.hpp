#ifndef LOGCONTRAST_TYPES_HPP_
#define LOGCONTRAST_TYPES_HPP_

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace logcontrast {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

// Error hierarchy. DataError covers everything wrong with input data
// (shape, simplex violations); ParameterError covers bad configuration.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ShapeError : DataError {
  using DataError::DataError;
};
struct SimplexError : DataError {
  using DataError::DataError;
};
// Nonpositive entry: log-transform undefined.
struct SimplexDomainError : SimplexError {
  SimplexDomainError(const std::string& what, Index row, Index col)
      : SimplexError(what), row(row), col(col) {}
  Index row;
  Index col;
};
// Row does not sum to one within tolerance.
struct SimplexSumError : SimplexError {
  SimplexSumError(const std::string& what, Index row) : SimplexError(what), row(row) {}
  Index row;
};
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct TopologyError : ParameterError {
  using ParameterError::ParameterError;
};
struct UsageError : ParameterError {
  using ParameterError::ParameterError;
};
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TuningError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Coefficient vector ζ = (β⊤, θ⊤)⊤ with the compositional block first.
struct Coefficients {
  Vector zeta;
  Index p = 0;  // size of the compositional block

  Coefficients() = default;
  Coefficients(Vector z, Index p_) : zeta(std::move(z)), p(p_) {}

  Index size() const { return zeta.size(); }
  Index q() const { return zeta.size() - p; }
  auto beta() const { return zeta.head(p); }
  auto theta() const { return zeta.tail(zeta.size() - p); }
  double zero_sum_residual() const { return beta().sum(); }
};

// Constraint vector C = (1,...,1,0,...,0): p ones then q zeros.
inline Vector constraint_vector(Index p, Index q) {
  Vector c = Vector::Zero(p + q);
  c.head(p).setOnes();
  return c;
}

// Coefficients set exactly to zero by soft-thresholding count as zeros;
// dense estimators (e.g. shard averages) are thresholded at kZeroEps.
inline constexpr double kZeroEps = 1e-8;
inline constexpr double kSimplexTol = 1e-8;

}  // namespace logcontrast

#endif  // LOGCONTRAST_TYPES_HPP_
