#pragma once

// Store-level gamma sales model: weekly volume is gamma with mean
// exp(b1 + b2 log(price) + b3 display) and shape r. Stage one samples
// (beta_j, log r_j) per store by adaptive random-walk Metropolis; the
// combination step applies the multivariate normal conjugate form; a
// Metropolis-within-Gibbs sampler over the full model serves as the
// baseline at reduced scale.

#include <filesystem>
#include <vector>

#include "hiermc/mba.hpp"
#include "hiermc/model.hpp"

namespace hiermc {

struct RetailRecord {
  int store_id = 0;
  int week = 0;
  double volume = 0.0;     // strictly positive
  double log_price = 0.0;
  double display_pct = 0.0;  // fraction of volume on display, in [0, 1]
};

struct RetailPriors {
  // Stage-one prior on beta_j when stores are sampled independently.
  double beta_prior_sd = 10.0;
  double half_cauchy_scale = 5.0;
  // Hyperpriors for the combination step and the baseline.
  Vector mu0 = Vector::Zero(3);
  MatrixSym sigma0 = MatrixSym::identity(3);
  MatrixSym v = MatrixSym::identity(3);
  double m = 6.0;
};

/// Gamma log likelihood of a store's records under coefficients beta and
/// log shape log_r. Overflowing means yield -inf rather than NaN.
double retail_loglik(const Vector& beta, double log_r,
                     const std::vector<RetailRecord>& records);

/// Stage-one posterior draws of beta_j for one store (the shape parameter
/// is sampled jointly on the log scale and marginalized out of the result).
SourceDraws retail_stage_one(const std::vector<RetailRecord>& store, int L,
                             int burn_in, RandomStream& rng,
                             const RetailPriors& priors = {});

/// Combination step over all stores' stage-one draws.
ChainTrace retail_mba(const std::vector<SourceDraws>& all_draws,
                      const RetailPriors& priors, int iters, int burn_in,
                      RandomStream& rng);

/// Metropolis-within-Gibbs sampler for the full model: conjugate
/// (mu, Sigma) given the beta_j, random-walk moves on each (beta_j, log r_j).
/// Intended for reduced-scale baselines.
ChainTrace retail_fhm_baseline(const std::vector<std::vector<RetailRecord>>& stores,
                               const RetailPriors& priors, int iters,
                               int burn_in, RandomStream& rng);

struct RetailTruth {
  Vector mu;
  MatrixSym sigma;
  std::vector<Vector> betas;
  std::vector<double> shapes;
};

/// Synthetic data with the retail schema so the case study runs without
/// the proprietary data set.
std::vector<std::vector<RetailRecord>> generate_retail(int num_stores,
                                                       int num_weeks,
                                                       RandomStream& rng,
                                                       RetailTruth* truth = nullptr);

struct RetailIngestion {
  std::vector<std::vector<RetailRecord>> stores;
  bool percent_scale_detected = false;
};

/// CSV columns: store, volume, price, display. Display values above 1.5
/// are taken to be on the 0-100 scale and rescaled to 0-1; the flag
/// reports which convention was detected.
RetailIngestion read_retail_csv(const std::filesystem::path& path);

void write_retail_csv(const std::filesystem::path& path,
                      const std::vector<std::vector<RetailRecord>>& stores);

}  // namespace hiermc
