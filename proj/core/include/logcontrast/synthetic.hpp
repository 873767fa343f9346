#ifndef LOGCONTRAST_SYNTHETIC_HPP_
#define LOGCONTRAST_SYNTHETIC_HPP_

#include <cstdint>
#include <optional>
#include <random>
#include <utility>

#include "logcontrast/design.hpp"

namespace logcontrast {

// Normal/chi-square sampling on top of mt19937_64 with in-house transforms,
// so draws are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();  // (0, 1)
  double normal();   // standard normal, polar method
  double chi_squared(int dof);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Stream derivation for replication r of a master seed (splitmix64 mixing).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

enum class CovariateCase { kHeavyTailedT3 = 1, kRightSkewedLognormal = 2 };

struct SyntheticSpec {
  Index n = 20000;
  Index p = 15;
  Index q = 10;
  int machine_count = 10;
  double sigma = 0.2;        // Σ_ij = σ^{|i−j|} for the normal scores
  CovariateCase v_case = CovariateCase::kHeavyTailedT3;
  double noise_sd = 0.2;
  std::uint64_t seed = 0;
  std::optional<Coefficients> true_zeta;  // default: sparse pattern below
  bool center = true;

  void validate() const;
};

// Mean vector of the normal scores: log(0.2 p) on the first five entries.
Vector compositional_mean(Index p);

// Default sparse truth (first eight entries of each block active).
Coefficients default_true_coefficients(Index p, Index q);

// Draws the compositional block by row-softmaxing correlated normals, the
// extra covariates per case (t₃ scale mixture or lognormal), and
// y = Πζ₀ + ε. Deterministic under spec.seed.
std::pair<LogContrastDesign, Coefficients> generate_synthetic(const SyntheticSpec& spec);

// Same draw, returning the raw (uncentered) pieces for serialization.
struct SyntheticDraw {
  Matrix X;  // simplex rows
  Matrix V;
  Vector y;
  Coefficients truth;
};
SyntheticDraw generate_synthetic_raw(const SyntheticSpec& spec);

}  // namespace logcontrast

#endif  // LOGCONTRAST_SYNTHETIC_HPP_
