#include "logcontrast/penalty.hpp"

#include <algorithm>
#include <cmath>

namespace logcontrast {

std::string to_string(PenaltyKind kind) {
  switch (kind) {
    case PenaltyKind::kLasso: return "lasso";
    case PenaltyKind::kAdaptiveLasso: return "alasso";
    case PenaltyKind::kScad: return "scad";
  }
  return "?";
}

PenaltyKind penalty_kind_from_string(const std::string& name) {
  if (name == "lasso") return PenaltyKind::kLasso;
  if (name == "alasso" || name == "adaptive-lasso") return PenaltyKind::kAdaptiveLasso;
  if (name == "scad") return PenaltyKind::kScad;
  throw ParameterError("unknown penalty kind: " + name);
}

void PenaltySpec::validate() const {
  if (lambda < 0.0) throw ParameterError("lambda must be nonnegative");
  if (scad_a <= 2.0) throw ParameterError("scad_a must exceed 2");
  if (lla_rounds < 1) throw ParameterError("lla_rounds must be positive");
  if (weights.size() > 0 && (weights.array() < 0.0).any()) {
    throw ParameterError("penalty weights must be nonnegative");
  }
}

double soft_threshold(double u, double t) {
  const double mag = std::abs(u) - t;
  if (mag <= 0.0) return 0.0;
  return u > 0.0 ? mag : -mag;
}

double scad_derivative(double u, double lambda, double a) {
  if (a <= 2.0) throw ParameterError("scad shape parameter must exceed 2");
  if (lambda < 0.0) throw ParameterError("lambda must be nonnegative");
  if (u <= lambda) return lambda;
  return std::max(a * lambda - u, 0.0) / (a - 1.0);
}

Vector penalty_weights(PenaltyKind kind, const std::optional<Vector>& reference,
                       Index d, double n, double lambda, double a) {
  switch (kind) {
    case PenaltyKind::kLasso:
      return Vector::Ones(d);
    case PenaltyKind::kAdaptiveLasso: {
      if (!reference) throw UsageError("adaptive lasso weights need a pilot estimate");
      if (reference->size() != d) throw ShapeError("reference length mismatch");
      return (reference->array().abs() + 1.0 / n).inverse().matrix();
    }
    case PenaltyKind::kScad: {
      if (!reference) throw UsageError("scad weights need the current LLA iterate");
      if (reference->size() != d) throw ShapeError("reference length mismatch");
      if (lambda <= 0.0) throw ParameterError("scad weights require lambda > 0");
      Vector w(d);
      for (Index j = 0; j < d; ++j) {
        w[j] = scad_derivative(std::abs((*reference)[j]), lambda, a) / lambda;
      }
      return w;
    }
  }
  throw ParameterError("unknown penalty kind");
}

}  // namespace logcontrast
