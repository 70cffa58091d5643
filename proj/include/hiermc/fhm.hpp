#pragma once

// Direct Gibbs samplers for the full hierarchical models: the normal
// means model, the inverse-Wishart covariance model and the variance
// components model. Scan order is hyperparameters first, then every
// source-level parameter.

#include "hiermc/model.hpp"

namespace hiermc {

struct Example1Prior {
  double mu0 = 0.0;
  double sigma0_2 = 1.0;
  double omega = 1.0;
  double k = 3.0;
};

struct Example2Prior {
  MatrixSym v = MatrixSym::scalar(1.0);  // Wishart scale of the prior on phi
  double m = 3.0;                        // Wishart dof of the prior on phi
  double kappa = 3.0;                    // fixed dof of the source-level IW
};

struct Example3Prior {
  double beta0_mean = 0.0;
  double beta0_var = 1.0;
  double omega_u = 1.0;
  double k_u = 3.0;
  double omega_v = 1.0;
  double k_v = 3.0;
};

// Full conditional parameters, exposed so each Gibbs step can be checked
// in isolation against its analytic density.
namespace cond {

struct GaussianParams {
  double mean = 0.0;
  double var = 0.0;
};

struct IW1Params {
  double scale = 0.0;
  double dof = 0.0;
};

struct WishartParams {
  MatrixSym scale;
  double dof = 0.0;
};

// Example 1 (observation variance fixed at 1).
GaussianParams ex1_theta(double mu, double sigma2, double sum_x, int n);
GaussianParams ex1_mu(const Example1Prior& prior, double sigma2,
                      double theta_sum, int J);
IW1Params ex1_sigma2(const Example1Prior& prior, double ss, int J);

// Example 2.
WishartParams ex2_theta(const MatrixSym& phi, double kappa,
                        const Matrix& sum_outer, int n);  // inverse Wishart
WishartParams ex2_phi(const Example2Prior& prior, const Matrix& theta_inv_sum,
                      int J);  // Wishart

// Example 3.
GaussianParams ex3_theta(double beta0, double sigma_u2, double sigma_v2,
                         double sum_y, int n);
GaussianParams ex3_beta0(const Example3Prior& prior, double sigma_u2,
                         double theta_sum, int J);
IW1Params ex3_sigma_u2(const Example3Prior& prior, double ss_u, int J);
IW1Params ex3_sigma_v2(const Example3Prior& prior, double ss_v, int n_total);

}  // namespace cond

/// Gibbs sampler for the normal means model. Trace columns:
/// mu, sigma2, theta_1..theta_J.
ChainTrace fhm_example1(const HierarchicalDataset& data,
                        const Example1Prior& prior, int iters, int burn_in,
                        RandomStream& rng);

/// Gibbs sampler for the covariance model. Trace columns for p = 1:
/// phi, theta_1..theta_J (general p flattens matrices column-major).
ChainTrace fhm_example2(const HierarchicalDataset& data,
                        const Example2Prior& prior, int iters, int burn_in,
                        RandomStream& rng);

/// Gibbs sampler for the variance components model. Trace columns:
/// beta0, sigma_u2, sigma_v2, theta_1..theta_J.
ChainTrace fhm_example3(const HierarchicalDataset& data,
                        const Example3Prior& prior, int iters, int burn_in,
                        RandomStream& rng);

}  // namespace hiermc
