#include "logcontrast/synthetic.hpp"

#include <cmath>

namespace logcontrast {

double Rng::uniform() {
  // 53-bit mantissa draw in (0, 1).
  const std::uint64_t bits = engine_() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double scale = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * scale;
  has_spare_ = true;
  return u * scale;
}

double Rng::chi_squared(int dof) {
  double sum = 0.0;
  for (int i = 0; i < dof; ++i) {
    const double z = normal();
    sum += z * z;
  }
  return sum;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void SyntheticSpec::validate() const {
  if (n < 1 || p < 2 || q < 0) throw ParameterError("invalid synthetic dimensions");
  if (!true_zeta && (p < 8 || q < 8)) {
    throw ParameterError("default true coefficients need p >= 8 and q >= 8");
  }
  if (true_zeta && true_zeta->size() != p + q) {
    throw ShapeError("true coefficient vector must have length p + q");
  }
  if (noise_sd < 0.0) throw ParameterError("noise_sd must be nonnegative");
  if (!(sigma >= 0.0 && sigma < 1.0)) throw ParameterError("sigma must lie in [0, 1)");
}

Vector compositional_mean(Index p) {
  Vector nu = Vector::Zero(p);
  const Index active = std::min<Index>(5, p);
  nu.head(active).setConstant(std::log(0.2 * static_cast<double>(p)));
  return nu;
}

Coefficients default_true_coefficients(Index p, Index q) {
  Vector zeta = Vector::Zero(p + q);
  const double beta_head[8] = {1.0, -0.8, 0.6, 0.0, 0.0, -1.5, -0.5, 1.2};
  const double theta_head[8] = {0.7, -1.5, 1.0, 0.0, 0.0, 0.0, -0.8, 2.3};
  for (Index j = 0; j < 8; ++j) zeta[j] = beta_head[j];
  for (Index j = 0; j < 8; ++j) zeta[p + j] = theta_head[j];
  return Coefficients(zeta, p);
}

namespace {

Matrix toeplitz_correlation(Index m, double sigma) {
  Matrix cov(m, m);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < m; ++j) {
      cov(i, j) = std::pow(sigma, static_cast<double>(std::abs(i - j)));
    }
  }
  return cov;
}

Matrix exchangeable_correlation(Index m, double off_diag) {
  Matrix cov = Matrix::Constant(m, m, off_diag);
  cov.diagonal().setOnes();
  return cov;
}

Matrix cholesky_factor(const Matrix& cov) {
  Eigen::LLT<Matrix> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("covariance matrix is not positive definite");
  }
  return llt.matrixL();
}

}  // namespace

SyntheticDraw generate_synthetic_raw(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  const Index n = spec.n;
  const Index p = spec.p;
  const Index q = spec.q;

  const Vector nu = compositional_mean(p);
  const Matrix l_comp = cholesky_factor(toeplitz_correlation(p, spec.sigma));

  SyntheticDraw draw;
  draw.X.resize(n, p);
  Vector g(p);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < p; ++j) g[j] = rng.normal();
    Vector delta = nu + l_comp * g;
    const Vector row = delta.array().exp();
    draw.X.row(i) = row / row.sum();
  }

  draw.V.resize(n, q);
  if (q > 0) {
    const Matrix xi = spec.v_case == CovariateCase::kHeavyTailedT3
                          ? exchangeable_correlation(q, 0.5)
                          : toeplitz_correlation(q, 0.5);
    const Matrix l_extra = cholesky_factor(xi);
    Vector gq(q);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < q; ++j) gq[j] = rng.normal();
      Vector z = l_extra * gq;
      if (spec.v_case == CovariateCase::kHeavyTailedT3) {
        const double u = rng.chi_squared(3);
        draw.V.row(i) = z * std::sqrt(3.0 / u);
      } else {
        draw.V.row(i) = z.array().exp();
      }
    }
  }

  draw.truth = spec.true_zeta ? *spec.true_zeta : default_true_coefficients(p, q);

  draw.y.resize(n);
  const Vector& zeta0 = draw.truth.zeta;
  for (Index i = 0; i < n; ++i) {
    double mean = 0.0;
    for (Index j = 0; j < p; ++j) mean += std::log(draw.X(i, j)) * zeta0[j];
    for (Index j = 0; j < q; ++j) mean += draw.V(i, j) * zeta0[p + j];
    draw.y[i] = mean + spec.noise_sd * rng.normal();
  }
  return draw;
}

std::pair<LogContrastDesign, Coefficients> generate_synthetic(const SyntheticSpec& spec) {
  SyntheticDraw draw = generate_synthetic_raw(spec);
  LogContrastDesign design = build_design(CompositionMatrix(std::move(draw.X)),
                                          draw.V, draw.y, spec.center);
  return {std::move(design), std::move(draw.truth)};
}

}  // namespace logcontrast
