#include "hiermc/independent.hpp"

#include <cmath>

#include "hiermc/distributions.hpp"

namespace hiermc {

SourceDraws indep_normal(const SourceData& source, double mu_fixed,
                         double sigma2_fixed, int L, RandomStream& rng) {
  source.validate();
  if (source.obs_dim() != 1) {
    throw InputError("indep_normal: expects one-dimensional data");
  }
  if (!(sigma2_fixed > 0.0)) {
    throw InputError("indep_normal: sigma2 must be > 0");
  }
  if (L < 2) throw InsufficientSamplesError("indep_normal: L must be >= 2");
  const int n = source.size();
  const double v = 1.0 / (1.0 / sigma2_fixed + n);
  const double m = v * (mu_fixed / sigma2_fixed + source.sum()(0));
  Matrix draws(L, 1);
  const double sd = std::sqrt(v);
  for (int l = 0; l < L; ++l) draws(l, 0) = m + sd * rng.normal();
  return summarize_draws(source.source_id, draws);
}

SourceDraws indep_invwishart(const SourceData& source,
                             const MatrixSym& phi_fixed, double kappa_fixed,
                             int L, RandomStream& rng) {
  source.validate();
  const int p = source.obs_dim();
  if (phi_fixed.dim() != p) {
    throw InputError("indep_invwishart: phi dimension != data dimension");
  }
  if (L < 2) throw InsufficientSamplesError("indep_invwishart: L must be >= 2");
  const int n = source.size();
  MatrixSym scale = repair_spd(phi_fixed.entries() + source.sum_outer());
  const double dof = kappa_fixed + n;
  Matrix draws(L, p * p);
  for (int l = 0; l < L; ++l) {
    draws.row(l) = flatten(sample_inv_wishart(scale, dof, rng).entries());
  }
  SourceDraws out = summarize_draws(source.source_id, draws);
  out.nu = n;
  return out;
}

SourceDraws indep_variance(const SourceData& source, double center,
                           double sigma_v2_fixed, double kappa_fixed, int L,
                           RandomStream& rng) {
  source.validate();
  if (source.obs_dim() != 1) {
    throw InputError("indep_variance: expects one-dimensional data");
  }
  if (!(sigma_v2_fixed > 0.0) || !(kappa_fixed > 2.0)) {
    throw InputError("indep_variance: need sigma_v2 > 0 and kappa > 2");
  }
  if (L < 2) throw InsufficientSamplesError("indep_variance: L must be >= 2");
  const int n = source.size();
  double ss = 0.0;
  for (const auto& y : source.observations) {
    const double r = y(0) - center;
    ss += r * r;
  }
  const double scale = sigma_v2_fixed * (kappa_fixed - 2.0) + ss;
  const double dof = kappa_fixed + n;
  Matrix draws(L, 1);
  for (int l = 0; l < L; ++l) {
    draws(l, 0) = scale / sample_chi_square(dof, rng);
  }
  SourceDraws out = summarize_draws(source.source_id, draws);
  out.nu = n;
  return out;
}

SourceDraws rw_metropolis(const LogDensity& logpost, const Vector& init,
                          const MatrixSym& step_cov, int L, int burn_in,
                          RandomStream& rng) {
  if (L < 2) throw InsufficientSamplesError("rw_metropolis: L must be >= 2");
  if (burn_in < 0) throw InputError("rw_metropolis: negative burn-in");
  if (step_cov.dim() != init.size()) {
    throw InputError("rw_metropolis: step_cov dimension != init dimension");
  }
  double lp = logpost(init);
  if (!std::isfinite(lp)) {
    throw InputError("rw_metropolis: logpost not finite at init");
  }

  // An all-zero step covariance is allowed; it produces a chain that never
  // moves, which the stuck detector below turns into an error.
  const bool zero_step = step_cov.entries().isZero(0.0);
  Matrix chol = zero_step ? Matrix::Zero(init.size(), init.size())
                          : step_cov.chol_lower();

  Vector x = init;
  double log_scale = 0.0;
  const double target = 0.3;
  const long stuck_limit = 10L * L;
  long no_move = 0;

  Matrix draws(L, init.size());
  long accepted_retained = 0;

  const long total = static_cast<long>(burn_in) + L;
  for (long t = 0; t < total; ++t) {
    Vector z(init.size());
    for (int i = 0; i < z.size(); ++i) z(i) = rng.normal();
    Vector prop = x + std::exp(log_scale) * (chol * z);
    double lp_prop = logpost(prop);
    if (std::isnan(lp_prop)) {
      throw Error("rw_metropolis: logpost returned NaN");
    }
    bool accept = std::log(rng.uniform()) < lp_prop - lp;
    bool moved = false;
    if (accept) {
      moved = (prop.array() != x.array()).any();
      x = std::move(prop);
      lp = lp_prop;
    }
    no_move = moved ? 0 : no_move + 1;
    if (no_move >= stuck_limit) {
      throw StuckChainError("rw_metropolis: no accepted move in " +
                            std::to_string(stuck_limit) + " steps");
    }
    if (t < burn_in) {
      // Robbins-Monro on the log proposal scale, burn-in only.
      log_scale += std::pow(static_cast<double>(t) + 1.0, -0.6) *
                   ((accept ? 1.0 : 0.0) - target);
    } else {
      draws.row(t - burn_in) = x;
      if (accept) ++accepted_retained;
    }
  }

  SourceDraws out = summarize_draws(0, draws);
  out.acceptance_rate = static_cast<double>(accepted_retained) / L;
  return out;
}

}  // namespace hiermc
