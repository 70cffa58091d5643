#pragma once

// Stage one: per-source posterior sampling with the hyperparameters held
// fixed. Conjugate and exact where the model allows, random-walk
// Metropolis otherwise. Each operation sees only its own source, so the
// executor can fan sources across workers freely.

#include <functional>

#include "hiermc/model.hpp"

namespace hiermc {

/// Exact draws from the conjugate normal posterior of theta_j with fixed
/// prior N(mu, sigma2) and observation variance 1.
SourceDraws indep_normal(const SourceData& source, double mu_fixed,
                         double sigma2_fixed, int L, RandomStream& rng);

/// Exact draws from IW_p(phi + sum_i x x', kappa + n_j); nu is set to n_j.
SourceDraws indep_invwishart(const SourceData& source,
                             const MatrixSym& phi_fixed, double kappa_fixed,
                             int L, RandomStream& rng);

/// Exact draws of the per-source variance tau_j^2 from
/// IW_1(sigma_v2 (kappa - 2) + sum_i (y_i - center)^2, kappa + n_j),
/// with residuals taken around the supplied plug-in center; nu = n_j.
SourceDraws indep_variance(const SourceData& source, double center,
                           double sigma_v2_fixed, double kappa_fixed, int L,
                           RandomStream& rng);

using LogDensity = std::function<double(const Vector&)>;

/// Random-walk Metropolis with N(0, step_cov) proposals. During burn-in
/// the proposal scale adapts by Robbins-Monro toward 30% acceptance;
/// adaptation stops at the end of burn-in so the retained chain is a
/// valid Metropolis chain. Raises StuckChainError when the chain makes no
/// move for 10 * L consecutive steps, and a hard error if logpost returns
/// NaN. The post-burn-in acceptance rate is recorded on the result.
SourceDraws rw_metropolis(const LogDensity& logpost, const Vector& init,
                          const MatrixSym& step_cov, int L, int burn_in,
                          RandomStream& rng);

}  // namespace hiermc
