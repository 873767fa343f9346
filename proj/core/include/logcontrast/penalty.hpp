#ifndef LOGCONTRAST_PENALTY_HPP_
#define LOGCONTRAST_PENALTY_HPP_

#include <optional>
#include <string>

#include "logcontrast/types.hpp"

namespace logcontrast {

enum class PenaltyKind { kLasso, kAdaptiveLasso, kScad };

std::string to_string(PenaltyKind kind);
PenaltyKind penalty_kind_from_string(const std::string& name);

// Weighted-L1 penalty λ Σ_j ω_j |ζ_j|. An empty weight vector means all ones.
struct PenaltySpec {
  PenaltyKind kind = PenaltyKind::kLasso;
  double lambda = 0.0;
  Vector weights;
  double scad_a = 3.7;
  int lla_rounds = 3;

  // Weights for coordinate j, treating an empty vector as ones.
  double weight(Index j) const { return weights.size() == 0 ? 1.0 : weights[j]; }
  Vector resolved_weights(Index d) const {
    return weights.size() == 0 ? Vector::Ones(d) : weights;
  }
  void validate() const;
};

/// sgn(u)·(|u|−t)_+
double soft_threshold(double u, double t);

// Derivative of the SCAD penalty at u ≥ 0: λ on [0, λ], then the linear
// decay (aλ−u)_+/(a−1).
double scad_derivative(double u, double lambda, double a);

// Penalty weight vector ω of length d.
//   lasso:          all ones (reference ignored)
//   adaptive lasso: ω_j = (|ref_j| + 1/n)^{−1}
//   scad:           ω_j = p′_λ(|ref_j|)/λ
Vector penalty_weights(PenaltyKind kind, const std::optional<Vector>& reference,
                       Index d, double n, double lambda, double a);

}  // namespace logcontrast

#endif  // LOGCONTRAST_PENALTY_HPP_
