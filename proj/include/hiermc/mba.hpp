#pragma once

// Stage two: the substitute hierarchical model. Per-source posterior
// draws enter through a likelihood scaled to its L-th root, so the full
// conditionals depend on the draws only through their mean (and the
// fixed covariance estimate) and do not concentrate as L grows. The
// Gibbs loop alternates a conjugate hyperparameter update with the
// per-source full conditionals.

#include <variant>
#include <vector>

#include "hiermc/model.hpp"

namespace hiermc {

enum class Family { MVNormal, InvWishart };

struct NormalHyperPrior {
  Vector mu0;        // prior mean of mu
  MatrixSym sigma0;  // prior covariance of mu
  MatrixSym omega;   // scale of the inverse-Wishart prior on Sigma
  double k = 3.0;    // dof of the inverse-Wishart prior on Sigma

  static NormalHyperPrior univariate(double mu0, double sigma0_2, double omega,
                                     double k);
};

struct WishartHyperPrior {
  MatrixSym v;    // Wishart scale of the prior on Phi
  double m = 3.0; // Wishart dof of the prior on Phi
};

struct GaussianMoments {
  Vector mean;
  MatrixSym cov;
};

struct IWParams {
  MatrixSym scale;
  double dof = 0.0;
};

/// (1/L) sum_l log f*(theta*_jl | psi) with f* = N_q(psi, S_j).
double scaled_loglik_mvn(const Vector& psi, const SourceDraws& draws);

/// Same average with f* = W_p(psi / nu, nu). A psi outside the positive
/// definite cone yields -inf.
double scaled_loglik_iw(const Matrix& psi, const SourceDraws& draws);

using PsiValue = std::variant<Vector, Matrix>;
double scaled_loglik(const PsiValue& psi, const SourceDraws& draws,
                     Family family);

/// Full conditional of psi_j for the normal family:
///   cov  = (Sigma^{-1} + S_j^{-1})^{-1}
///   mean = cov (Sigma^{-1} mu + S_j^{-1} mean(theta*_j)).
/// Only the draw mean enters; the number of draws does not.
GaussianMoments mvn_full_conditional(const SourceDraws& draws,
                                     const NormalHyper& hyper);

/// Full conditional of Psi_j for the inverse-Wishart family:
///   scale = Phi + nu_j mean(Theta*_j),  dof = kappa + nu_j.
IWParams iw_full_conditional(const SourceDraws& draws, const IWHyper& hyper);

/// Conjugate update of (mu, Sigma) given the psi_j, identical in form to
/// the full-model hyperparameter step: mu | Sigma is normal, Sigma | mu is
/// inverse Wishart.
NormalHyper hyper_update_normal(const std::vector<Vector>& psis,
                                const NormalHyperPrior& prior,
                                const NormalHyper& current, RandomStream& rng);

/// Conjugate update of Phi given the Psi_j:
///   Phi ~ W_p((V^{-1} + sum_j Psi_j^{-1})^{-1}, m + J kappa).
MatrixSym hyper_update_invwishart(const std::vector<MatrixSym>& psis,
                                  const WishartHyperPrior& prior, double kappa,
                                  RandomStream& rng);

struct SubstituteSpec {
  Family family = Family::MVNormal;
  std::vector<SourceDraws> sources;
  // Normal family.
  NormalHyperPrior normal_prior;
  // Inverse-Wishart family: fixed dof of the conditional prior on Psi_j
  // plus the Wishart hyperprior on Phi.
  double kappa = 3.0;
  WishartHyperPrior wishart_prior;

  void validate() const;
};

/// Gibbs sampler over (phi, psi_1..psi_J). Normal family trace columns for
/// q = 1: mu, sigma2, psi_1..psi_J (flattened otherwise); inverse-Wishart
/// family: phi, psi_1..psi_J. Per-source draws use substreams keyed by
/// source id, so permuting source order permutes the psi columns and
/// leaves the phi trace bitwise unchanged.
ChainTrace run_mba(const SubstituteSpec& spec, int iters, int burn_in,
                   RandomStream& rng);

}  // namespace hiermc
