#include "hiermc/distributions.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace hiermc {

namespace {
constexpr double kLn2Pi = 1.8378770664093454835606594728112;
constexpr double kLn2 = 0.69314718055994530941723212145818;
constexpr double kPi = 3.1415926535897932384626433832795;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}  // namespace

Vector sample_mvn(const Vector& mean, const MatrixSym& cov, RandomStream& rng) {
  if (cov.dim() != mean.size()) {
    throw InputError("sample_mvn: dimension mismatch between mean and cov");
  }
  Vector z(mean.size());
  for (int i = 0; i < z.size(); ++i) z(i) = rng.normal();
  return mean + cov.chol_lower() * z;
}

double logpdf_mvn(const Vector& x, const Vector& mean, const MatrixSym& cov) {
  if (x.size() != mean.size() || cov.dim() != mean.size()) {
    throw InputError("logpdf_mvn: dimension mismatch");
  }
  const double p = static_cast<double>(x.size());
  return -0.5 * (p * kLn2Pi + cov.log_det() + cov.quad_form_inv(x - mean));
}

MatrixSym sample_wishart(const MatrixSym& scale, double dof, RandomStream& rng) {
  const int p = scale.dim();
  if (!(dof > p - 1)) {
    throw DomainError("sample_wishart: dof must exceed dim - 1");
  }
  // Bartlett: A lower triangular, A_ii^2 ~ chi^2_{dof-i}, A_ij ~ N(0,1).
  Matrix a = Matrix::Zero(p, p);
  for (int i = 0; i < p; ++i) {
    a(i, i) = std::sqrt(sample_chi_square(dof - i, rng));
    for (int j = 0; j < i; ++j) a(i, j) = rng.normal();
  }
  Matrix f = scale.chol_lower() * a;
  return repair_spd(f * f.transpose());
}

MatrixSym sample_inv_wishart(const MatrixSym& scale, double dof,
                             RandomStream& rng) {
  const int p = scale.dim();
  if (!(dof > p - 1)) {
    throw DomainError("sample_inv_wishart: dof must exceed dim - 1");
  }
  MatrixSym scale_inv = repair_spd(scale.inverse());
  MatrixSym w = sample_wishart(scale_inv, dof, rng);
  return repair_spd(w.inverse());
}

double logpdf_wishart(const MatrixSym& x, const MatrixSym& scale, double dof) {
  const int p = x.dim();
  if (scale.dim() != p) throw InputError("logpdf_wishart: dimension mismatch");
  if (!(dof > p - 1)) {
    throw DomainError("logpdf_wishart: dof must exceed dim - 1");
  }
  const double tr = scale.solve(x.entries()).trace();
  return 0.5 * (dof - p - 1) * x.log_det() - 0.5 * tr -
         0.5 * dof * p * kLn2 - 0.5 * dof * scale.log_det() -
         multivariate_lgamma(0.5 * dof, p);
}

double logpdf_inv_wishart(const MatrixSym& x, const MatrixSym& scale,
                          double dof) {
  const int p = x.dim();
  if (scale.dim() != p) {
    throw InputError("logpdf_inv_wishart: dimension mismatch");
  }
  if (!(dof > p - 1)) {
    throw DomainError("logpdf_inv_wishart: dof must exceed dim - 1");
  }
  const double tr = x.solve(scale.entries()).trace();
  return 0.5 * dof * scale.log_det() - 0.5 * (dof + p + 1) * x.log_det() -
         0.5 * tr - 0.5 * dof * p * kLn2 - multivariate_lgamma(0.5 * dof, p);
}

double sample_gamma(double shape, double rate, RandomStream& rng) {
  if (!(shape > 0.0) || !(rate > 0.0)) {
    throw DomainError("sample_gamma: shape and rate must be positive");
  }
  if (shape < 1.0) {
    // Boost: X ~ Gamma(shape+1), U^{1/shape} scaling.
    double g = sample_gamma(shape + 1.0, 1.0, rng);
    double u = rng.uniform();
    return g * std::pow(u, 1.0 / shape) / rate;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = rng.normal();
    double t = 1.0 + c * x;
    if (t <= 0.0) continue;
    double v = t * t * t;
    double u = rng.uniform();
    double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v / rate;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) {
      return d * v / rate;
    }
  }
}

double sample_chi_square(double dof, RandomStream& rng) {
  if (!(dof > 0.0)) throw DomainError("sample_chi_square: dof must be positive");
  return sample_gamma(0.5 * dof, 0.5, rng);
}

double logpdf_gamma(double x, double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0)) {
    throw DomainError("logpdf_gamma: shape and rate must be positive");
  }
  if (!(x > 0.0)) return kNegInf;
  return shape * std::log(rate) - std::lgamma(shape) +
         (shape - 1.0) * std::log(x) - rate * x;
}

double logpdf_half_cauchy(double x, double scale) {
  if (!(scale > 0.0)) {
    throw DomainError("logpdf_half_cauchy: scale must be positive");
  }
  if (x < 0.0) return kNegInf;
  const double z = x / scale;
  return std::log(2.0) - std::log(kPi * scale) - std::log1p(z * z);
}

double multivariate_lgamma(double a, int p) {
  double s = 0.25 * p * (p - 1) * std::log(kPi);
  for (int i = 1; i <= p; ++i) {
    s += std::lgamma(a + 0.5 * (1.0 - i));
  }
  return s;
}

}  // namespace hiermc
