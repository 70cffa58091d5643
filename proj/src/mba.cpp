#include "hiermc/mba.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "hiermc/distributions.hpp"

namespace hiermc {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
using Clock = std::chrono::steady_clock;
}  // namespace

NormalHyperPrior NormalHyperPrior::univariate(double mu0, double sigma0_2,
                                              double omega, double k) {
  NormalHyperPrior p;
  p.mu0 = Vector::Constant(1, mu0);
  p.sigma0 = MatrixSym::scalar(sigma0_2);
  p.omega = MatrixSym::scalar(omega);
  p.k = k;
  return p;
}

double scaled_loglik_mvn(const Vector& psi, const SourceDraws& draws) {
  if (draws.num_draws < 1 || draws.draws.rows() < 1) {
    throw InsufficientSamplesError("scaled_loglik_mvn: no stored draws");
  }
  if (psi.size() != draws.dim()) {
    throw InputError("scaled_loglik_mvn: psi dimension mismatch");
  }
  const int L = static_cast<int>(draws.draws.rows());
  double acc = 0.0;
  for (int l = 0; l < L; ++l) {
    acc += logpdf_mvn(draws.draws.row(l).transpose(), psi, draws.cov_cache);
  }
  return acc / L;
}

double scaled_loglik_iw(const Matrix& psi, const SourceDraws& draws) {
  if (draws.num_draws < 1 || draws.draws.rows() < 1) {
    throw InsufficientSamplesError("scaled_loglik_iw: no stored draws");
  }
  if (!draws.nu) {
    throw ConfigError("scaled_loglik_iw: draws carry no nu");
  }
  const int p = static_cast<int>(psi.rows());
  if (psi.cols() != p || p * p != draws.dim()) {
    throw InputError("scaled_loglik_iw: psi dimension mismatch");
  }
  const double nu = *draws.nu;
  MatrixSym scale;  // psi / nu must be positive definite, else unsupported
  try {
    scale = MatrixSym(psi / nu);
    scale.chol_lower();
  } catch (const Error&) {
    return kNegInf;
  }
  const int L = static_cast<int>(draws.draws.rows());
  double acc = 0.0;
  for (int l = 0; l < L; ++l) {
    MatrixSym x(unflatten(draws.draws.row(l).transpose(), p));
    acc += logpdf_wishart(x, scale, nu);
  }
  return acc / L;
}

double scaled_loglik(const PsiValue& psi, const SourceDraws& draws,
                     Family family) {
  if (family == Family::MVNormal) {
    return scaled_loglik_mvn(std::get<Vector>(psi), draws);
  }
  return scaled_loglik_iw(std::get<Matrix>(psi), draws);
}

GaussianMoments mvn_full_conditional(const SourceDraws& draws,
                                     const NormalHyper& hyper) {
  if (hyper.mu.size() != draws.dim() || hyper.sigma.dim() != draws.dim()) {
    throw InputError("mvn_full_conditional: dimension mismatch");
  }
  Matrix prec = hyper.sigma.inverse() + draws.cov_cache.inverse();
  MatrixSym cov = repair_spd(repair_spd(std::move(prec)).inverse());
  Vector mean = cov.entries() * (hyper.sigma.solve(hyper.mu) +
                                 draws.cov_cache.solve(draws.mean_cache));
  return {std::move(mean), std::move(cov)};
}

IWParams iw_full_conditional(const SourceDraws& draws, const IWHyper& hyper) {
  if (!draws.nu) {
    throw ConfigError("iw_full_conditional: draws carry no nu (set nu = n_j "
                      "or supply it explicitly)");
  }
  const int p = hyper.phi.dim();
  if (p * p != draws.dim()) {
    throw InputError("iw_full_conditional: dimension mismatch");
  }
  Matrix mean_mat = unflatten(draws.mean_cache, p);
  return {repair_spd(hyper.phi.entries() + *draws.nu * mean_mat),
          hyper.kappa + *draws.nu};
}

NormalHyper hyper_update_normal(const std::vector<Vector>& psis,
                                const NormalHyperPrior& prior,
                                const NormalHyper& current, RandomStream& rng) {
  if (psis.empty()) throw InputError("hyper_update_normal: no psi values");
  const int q = static_cast<int>(psis.front().size());
  const int J = static_cast<int>(psis.size());
  Vector psi_sum = Vector::Zero(q);
  for (const auto& psi : psis) {
    if (psi.size() != q) throw InputError("hyper_update_normal: mixed dims");
    psi_sum += psi;
  }

  // mu | Sigma, psi.
  Matrix prec = prior.sigma0.inverse() + J * current.sigma.inverse();
  MatrixSym cov = repair_spd(repair_spd(std::move(prec)).inverse());
  Vector mean = cov.entries() *
                (prior.sigma0.solve(prior.mu0) + current.sigma.solve(psi_sum));
  Vector mu = sample_mvn(mean, cov, rng);

  // Sigma | mu, psi.
  Matrix ss = Matrix::Zero(q, q);
  for (const auto& psi : psis) {
    Vector d = psi - mu;
    ss += d * d.transpose();
  }
  MatrixSym sigma = sample_inv_wishart(repair_spd(prior.omega.entries() + ss),
                                       prior.k + J, rng);
  return {std::move(mu), std::move(sigma)};
}

MatrixSym hyper_update_invwishart(const std::vector<MatrixSym>& psis,
                                  const WishartHyperPrior& prior, double kappa,
                                  RandomStream& rng) {
  if (psis.empty()) throw InputError("hyper_update_invwishart: no psi values");
  const int p = prior.v.dim();
  Matrix inv_sum = prior.v.inverse();
  for (const auto& psi : psis) {
    if (psi.dim() != p) throw InputError("hyper_update_invwishart: mixed dims");
    inv_sum += psi.inverse();
  }
  const double dof = prior.m + kappa * static_cast<double>(psis.size());
  return sample_wishart(repair_spd(repair_spd(std::move(inv_sum)).inverse()),
                        dof, rng);
}

void SubstituteSpec::validate() const {
  if (sources.empty()) throw InputError("SubstituteSpec: no sources");
  const int q = sources.front().dim();
  for (const auto& s : sources) {
    if (s.dim() != q) {
      throw IngestionError("SubstituteSpec: sources disagree on dimensionality");
    }
  }
  if (family == Family::MVNormal) {
    if (normal_prior.mu0.size() != q || normal_prior.sigma0.dim() != q ||
        normal_prior.omega.dim() != q) {
      throw ConfigError("SubstituteSpec: hyperprior dimension != draw dimension");
    }
  } else {
    const int p = wishart_prior.v.dim();
    if (p * p != q) {
      throw ConfigError("SubstituteSpec: hyperprior dimension != draw dimension");
    }
    for (const auto& s : sources) {
      if (!s.nu) {
        throw ConfigError("SubstituteSpec: source " +
                          std::to_string(s.source_id) + " carries no nu");
      }
    }
  }
}

namespace {

// Scalar fast path for one-dimensional draws, mirroring the matrix-free
// arithmetic of the full-model samplers so timing comparisons between the
// two schemes measure the algorithms rather than matrix plumbing.
void run_mba_normal_1d(const SubstituteSpec& spec, ChainTrace& trace,
                       const std::vector<int>& order, RandomStream& hyper_rng,
                       std::vector<RandomStream>& psi_rng) {
  const int J = static_cast<int>(spec.sources.size());
  const double mu0 = spec.normal_prior.mu0(0);
  const double sigma0_2 = spec.normal_prior.sigma0.value();
  const double omega = spec.normal_prior.omega.value();
  const double k = spec.normal_prior.k;

  std::vector<double> mean_j(J), prec_j(J), psi(J);
  for (int slot = 0; slot < J; ++slot) {
    const auto& s = spec.sources[order[slot]];
    mean_j[slot] = s.mean_cache(0);
    prec_j[slot] = 1.0 / s.cov_cache.value();
    psi[slot] = mean_j[slot];
  }
  double sigma2 = k > 2.0 ? omega / (k - 2.0) : omega;

  const int iters = trace.iterations();
  for (int t = 0; t < iters; ++t) {
    double psi_sum = 0.0;
    for (int j = 0; j < J; ++j) psi_sum += psi[j];
    const double prec_mu = 1.0 / sigma0_2 + J / sigma2;
    const double mu = (mu0 / sigma0_2 + psi_sum / sigma2) / prec_mu +
                      hyper_rng.normal() / std::sqrt(prec_mu);
    double ss = 0.0;
    for (int j = 0; j < J; ++j) ss += (psi[j] - mu) * (psi[j] - mu);
    sigma2 = (omega + ss) / sample_chi_square(k + J, hyper_rng);

    const double inv_s2 = 1.0 / sigma2;
    const double mu_w = mu * inv_s2;
    for (int j = 0; j < J; ++j) {
      const double prec = inv_s2 + prec_j[j];
      const double m = (mu_w + prec_j[j] * mean_j[j]) / prec;
      psi[j] = m + psi_rng[j].normal() / std::sqrt(prec);
    }

    trace.draws(t, 0) = mu;
    trace.draws(t, 1) = sigma2;
    for (int j = 0; j < J; ++j) trace.draws(t, 2 + j) = psi[j];
  }
}

void run_mba_iw_1d(const SubstituteSpec& spec, ChainTrace& trace,
                   const std::vector<int>& order, RandomStream& hyper_rng,
                   std::vector<RandomStream>& psi_rng) {
  const int J = static_cast<int>(spec.sources.size());
  const double v = spec.wishart_prior.v.value();
  const double m = spec.wishart_prior.m;
  const double kappa = spec.kappa;

  std::vector<double> mean_j(J), nu_j(J), psi(J);
  for (int slot = 0; slot < J; ++slot) {
    const auto& s = spec.sources[order[slot]];
    mean_j[slot] = s.mean_cache(0);
    nu_j[slot] = *s.nu;
    psi[slot] = mean_j[slot];
  }

  const int iters = trace.iterations();
  for (int t = 0; t < iters; ++t) {
    double inv_sum = 1.0 / v;
    for (int j = 0; j < J; ++j) inv_sum += 1.0 / psi[j];
    const double phi =
        sample_chi_square(m + kappa * J, hyper_rng) / inv_sum;  // W_1 draw

    for (int j = 0; j < J; ++j) {
      psi[j] = (phi + nu_j[j] * mean_j[j]) /
               sample_chi_square(kappa + nu_j[j], psi_rng[j]);
    }

    trace.draws(t, 0) = phi;
    for (int j = 0; j < J; ++j) trace.draws(t, 1 + j) = psi[j];
  }
}

}  // namespace

ChainTrace run_mba(const SubstituteSpec& spec, int iters, int burn_in,
                   RandomStream& rng) {
  spec.validate();
  if (burn_in < 0 || iters <= burn_in) {
    throw InputError("run_mba: chain length must exceed burn-in");
  }
  const auto start = Clock::now();
  const int J = static_cast<int>(spec.sources.size());
  const int q = spec.sources.front().dim();

  // Sources processed in ascending source id so that sums (and therefore
  // the phi trace) do not depend on the order sources were supplied in.
  std::vector<int> order(J);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return spec.sources[a].source_id < spec.sources[b].source_id;
  });

  // The hyper update owns substream 0 and each source the substream of its
  // id, under a seed decorrelated from the one that produced the stage-one
  // draws. Source order is therefore immaterial to every drawn value.
  RandomStream base = rng.reseeded(2);
  RandomStream hyper_rng = base.substream(0);
  std::vector<RandomStream> psi_rng;
  psi_rng.reserve(J);
  for (int slot = 0; slot < J; ++slot) {
    psi_rng.push_back(base.substream(
        static_cast<std::uint64_t>(spec.sources[order[slot]].source_id)));
  }

  ChainTrace trace;
  trace.burn_in = burn_in;

  if (spec.family == Family::MVNormal) {
    if (q == 1) {
      trace.names = {"mu", "sigma2"};
    } else {
      for (int a = 1; a <= q; ++a) trace.names.push_back("mu_" + std::to_string(a));
      for (int b = 1; b <= q; ++b)
        for (int a = 1; a <= q; ++a)
          trace.names.push_back("Sigma_" + std::to_string(a) + "_" +
                                std::to_string(b));
    }
    for (int idx : order) {
      const int sid = spec.sources[idx].source_id;
      if (q == 1) {
        trace.names.push_back("psi_" + std::to_string(sid));
      } else {
        for (int a = 1; a <= q; ++a)
          trace.names.push_back("psi_" + std::to_string(sid) + "_" +
                                std::to_string(a));
      }
    }
    trace.draws.resize(iters, static_cast<int>(trace.names.size()));

    if (q == 1) {
      run_mba_normal_1d(spec, trace, order, hyper_rng, psi_rng);
    } else {
      NormalHyper hyper;
      hyper.mu = spec.normal_prior.mu0;
      const double k = spec.normal_prior.k;
      hyper.sigma =
          k > q + 1 ? repair_spd(spec.normal_prior.omega.entries() / (k - q - 1))
                    : spec.normal_prior.omega;
      std::vector<Vector> psis(J);
      for (int slot = 0; slot < J; ++slot) {
        psis[slot] = spec.sources[order[slot]].mean_cache;
      }
      for (int t = 0; t < iters; ++t) {
        hyper = hyper_update_normal(psis, spec.normal_prior, hyper, hyper_rng);
        for (int slot = 0; slot < J; ++slot) {
          auto fc = mvn_full_conditional(spec.sources[order[slot]], hyper);
          psis[slot] = sample_mvn(fc.mean, fc.cov, psi_rng[slot]);
        }
        int c = 0;
        for (int a = 0; a < q; ++a) trace.draws(t, c++) = hyper.mu(a);
        for (int b = 0; b < q; ++b)
          for (int a = 0; a < q; ++a) trace.draws(t, c++) = hyper.sigma(a, b);
        for (int slot = 0; slot < J; ++slot)
          for (int a = 0; a < q; ++a) trace.draws(t, c++) = psis[slot](a);
      }
    }
  } else {
    const int p = spec.wishart_prior.v.dim();
    if (p == 1) {
      trace.names = {"phi"};
    } else {
      for (int b = 1; b <= p; ++b)
        for (int a = 1; a <= p; ++a)
          trace.names.push_back("phi_" + std::to_string(a) + "_" +
                                std::to_string(b));
    }
    for (int idx : order) {
      const int sid = spec.sources[idx].source_id;
      if (p == 1) {
        trace.names.push_back("psi_" + std::to_string(sid));
      } else {
        for (int b = 1; b <= p; ++b)
          for (int a = 1; a <= p; ++a)
            trace.names.push_back("psi_" + std::to_string(sid) + "_" +
                                  std::to_string(a) + "_" + std::to_string(b));
      }
    }
    trace.draws.resize(iters, static_cast<int>(trace.names.size()));

    if (p == 1) {
      run_mba_iw_1d(spec, trace, order, hyper_rng, psi_rng);
    } else {
      std::vector<MatrixSym> psis(J, MatrixSym::identity(p));
      for (int slot = 0; slot < J; ++slot) {
        psis[slot] = repair_spd(unflatten(spec.sources[order[slot]].mean_cache, p));
      }
      for (int t = 0; t < iters; ++t) {
        MatrixSym phi = hyper_update_invwishart(psis, spec.wishart_prior,
                                                spec.kappa, hyper_rng);
        IWHyper hyper{phi, spec.kappa};
        for (int slot = 0; slot < J; ++slot) {
          auto fc = iw_full_conditional(spec.sources[order[slot]], hyper);
          psis[slot] = sample_inv_wishart(fc.scale, fc.dof, psi_rng[slot]);
        }
        trace.draws.row(t).head(p * p) = flatten(phi.entries());
        int c = p * p;
        for (int slot = 0; slot < J; ++slot) {
          trace.draws.row(t).segment(c, p * p) = flatten(psis[slot].entries());
          c += p * p;
        }
      }
    }
  }

  trace.wall_clock_seconds =
      std::chrono::duration<double>(Clock::now() - start).count();
  trace.validate();
  return trace;
}

}  // namespace hiermc
