#pragma once

// Random-variate generation and log densities for the distribution
// families used by the samplers: multivariate normal, Wishart /
// inverse Wishart, gamma and half-Cauchy.

#include "hiermc/matrix.hpp"
#include "hiermc/rng.hpp"

namespace hiermc {

/// Draw from N_p(mean, cov).
Vector sample_mvn(const Vector& mean, const MatrixSym& cov, RandomStream& rng);

double logpdf_mvn(const Vector& x, const Vector& mean, const MatrixSym& cov);

/// Draw from W_p(scale, dof) by the Bartlett decomposition. dof may be
/// non-integer but must exceed p - 1.
MatrixSym sample_wishart(const MatrixSym& scale, double dof, RandomStream& rng);

/// Draw X with X^{-1} ~ W_p(scale^{-1}, dof).
MatrixSym sample_inv_wishart(const MatrixSym& scale, double dof,
                             RandomStream& rng);

double logpdf_wishart(const MatrixSym& x, const MatrixSym& scale, double dof);

double logpdf_inv_wishart(const MatrixSym& x, const MatrixSym& scale,
                          double dof);

/// Marsaglia-Tsang gamma sampler (shape-boost below 1), rate parametrized.
double sample_gamma(double shape, double rate, RandomStream& rng);

double sample_chi_square(double dof, RandomStream& rng);

double logpdf_gamma(double x, double shape, double rate);

/// log of 2 / (pi * scale * (1 + (x/scale)^2)); -inf for x < 0.
double logpdf_half_cauchy(double x, double scale);

/// log of the multivariate gamma function Gamma_p(a).
double multivariate_lgamma(double a, int p);

}  // namespace hiermc
