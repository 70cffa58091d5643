#include "hiermc/fhm.hpp"

#include <chrono>
#include <cmath>

#include "hiermc/distributions.hpp"

namespace hiermc {

namespace cond {

GaussianParams ex1_theta(double mu, double sigma2, double sum_x, int n) {
  const double prec = 1.0 / sigma2 + n;  // data variance fixed at 1
  return {(mu / sigma2 + sum_x) / prec, 1.0 / prec};
}

GaussianParams ex1_mu(const Example1Prior& prior, double sigma2,
                      double theta_sum, int J) {
  const double prec = 1.0 / prior.sigma0_2 + J / sigma2;
  return {(prior.mu0 / prior.sigma0_2 + theta_sum / sigma2) / prec, 1.0 / prec};
}

IW1Params ex1_sigma2(const Example1Prior& prior, double ss, int J) {
  return {prior.omega + ss, prior.k + J};
}

WishartParams ex2_theta(const MatrixSym& phi, double kappa,
                        const Matrix& sum_outer, int n) {
  return {repair_spd(phi.entries() + sum_outer), kappa + n};
}

WishartParams ex2_phi(const Example2Prior& prior, const Matrix& theta_inv_sum,
                      int J) {
  Matrix prec = prior.v.inverse() + theta_inv_sum;
  return {repair_spd(repair_spd(std::move(prec)).inverse()),
          prior.m + J * prior.kappa};
}

GaussianParams ex3_theta(double beta0, double sigma_u2, double sigma_v2,
                         double sum_y, int n) {
  const double prec = 1.0 / sigma_u2 + n / sigma_v2;
  return {(beta0 / sigma_u2 + sum_y / sigma_v2) / prec, 1.0 / prec};
}

GaussianParams ex3_beta0(const Example3Prior& prior, double sigma_u2,
                         double theta_sum, int J) {
  const double prec = 1.0 / prior.beta0_var + J / sigma_u2;
  return {(prior.beta0_mean / prior.beta0_var + theta_sum / sigma_u2) / prec,
          1.0 / prec};
}

IW1Params ex3_sigma_u2(const Example3Prior& prior, double ss_u, int J) {
  return {prior.omega_u + ss_u, prior.k_u + J};
}

IW1Params ex3_sigma_v2(const Example3Prior& prior, double ss_v, int n_total) {
  return {prior.omega_v + ss_v, prior.k_v + n_total};
}

}  // namespace cond

namespace {

double draw_gaussian(const cond::GaussianParams& g, RandomStream& rng) {
  return g.mean + std::sqrt(g.var) * rng.normal();
}

double draw_iw1(const cond::IW1Params& p, RandomStream& rng) {
  return p.scale / sample_chi_square(p.dof, rng);
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_univariate(const HierarchicalDataset& data, const char* who) {
  data.validate();
  for (const auto& s : data.sources) {
    if (s.obs_dim() != 1) {
      throw InputError(std::string(who) + ": expects one-dimensional data");
    }
  }
}

void check_run_lengths(int iters, int burn_in) {
  if (burn_in < 0 || iters <= burn_in) {
    throw InputError("chain length must exceed burn-in");
  }
}

}  // namespace

ChainTrace fhm_example1(const HierarchicalDataset& data,
                        const Example1Prior& prior, int iters, int burn_in,
                        RandomStream& rng) {
  check_univariate(data, "fhm_example1");
  check_run_lengths(iters, burn_in);
  if (!(prior.sigma0_2 > 0.0) || !(prior.omega > 0.0) || !(prior.k > 0.0)) {
    throw InputError("fhm_example1: invalid prior");
  }
  const auto start = Clock::now();
  const int J = data.num_sources();

  std::vector<double> theta(J);
  std::vector<int> n(J);
  for (int j = 0; j < J; ++j) {
    n[j] = data.sources[j].size();
    theta[j] = data.sources[j].sum()(0) / n[j];  // warm start at source means
  }
  double mu = prior.mu0;
  double sigma2 = prior.k > 2.0 ? prior.omega / (prior.k - 2.0) : prior.omega;

  ChainTrace trace;
  trace.names = {"mu", "sigma2"};
  for (int j = 1; j <= J; ++j) trace.names.push_back("theta_" + std::to_string(j));
  trace.draws.resize(iters, 2 + J);
  trace.burn_in = burn_in;

  for (int t = 0; t < iters; ++t) {
    double theta_sum = 0.0;
    for (int j = 0; j < J; ++j) theta_sum += theta[j];
    mu = draw_gaussian(cond::ex1_mu(prior, sigma2, theta_sum, J), rng);

    double ss = 0.0;
    for (int j = 0; j < J; ++j) ss += (theta[j] - mu) * (theta[j] - mu);
    sigma2 = draw_iw1(cond::ex1_sigma2(prior, ss, J), rng);

    const double inv_s2 = 1.0 / sigma2;
    const double mu_w = mu * inv_s2;
    for (int j = 0; j < J; ++j) {
      // The full conditional of theta_j conditions on the source's data,
      // so its sufficient statistic is assembled per sweep.
      double sum_x = 0.0;
      for (const auto& x : data.sources[j].observations) sum_x += x(0);
      const double prec = inv_s2 + n[j];
      theta[j] = (mu_w + sum_x) / prec + rng.normal() / std::sqrt(prec);
    }

    trace.draws(t, 0) = mu;
    trace.draws(t, 1) = sigma2;
    for (int j = 0; j < J; ++j) trace.draws(t, 2 + j) = theta[j];
  }
  trace.wall_clock_seconds = seconds_since(start);
  trace.validate();
  return trace;
}

ChainTrace fhm_example2(const HierarchicalDataset& data,
                        const Example2Prior& prior, int iters, int burn_in,
                        RandomStream& rng) {
  data.validate();
  check_run_lengths(iters, burn_in);
  const int J = data.num_sources();
  const int p = data.sources.front().obs_dim();
  if (prior.v.dim() != p) throw InputError("fhm_example2: prior dimension != p");
  if (!(prior.m > p - 1) || !(prior.kappa > p - 1)) {
    throw InputError("fhm_example2: prior dof must exceed p - 1");
  }
  const auto start = Clock::now();

  std::vector<MatrixSym> theta(J, MatrixSym::identity(p));
  std::vector<int> n(J);
  for (int j = 0; j < J; ++j) {
    if (data.sources[j].obs_dim() != p) {
      throw InputError("fhm_example2: sources disagree on dimension");
    }
    n[j] = data.sources[j].size();
    // Warm start near the per-source covariance estimate.
    Matrix init = data.sources[j].sum_outer() / std::max(n[j], 1);
    init.diagonal().array() += 1e-3;
    theta[j] = repair_spd(std::move(init));
  }
  MatrixSym phi = MatrixSym::identity(p);  // drawn before first use

  if (p == 1) {
    // Scalar path: same scheme without the matrix plumbing.
    const double v_inv = 1.0 / prior.v.value();
    std::vector<double> th(J);
    for (int j = 0; j < J; ++j) th[j] = theta[j].value();
    ChainTrace trace;
    trace.names.push_back("phi");
    for (int j = 1; j <= J; ++j) {
      trace.names.push_back("theta_" + std::to_string(j));
    }
    trace.draws.resize(iters, 1 + J);
    trace.burn_in = burn_in;
    for (int t = 0; t < iters; ++t) {
      double inv_sum = v_inv;
      for (int j = 0; j < J; ++j) inv_sum += 1.0 / th[j];
      const double phi1 =
          sample_chi_square(prior.m + J * prior.kappa, rng) / inv_sum;
      for (int j = 0; j < J; ++j) {
        double sxx = 0.0;
        for (const auto& x : data.sources[j].observations) sxx += x(0) * x(0);
        th[j] = (phi1 + sxx) / sample_chi_square(prior.kappa + n[j], rng);
      }
      trace.draws(t, 0) = phi1;
      for (int j = 0; j < J; ++j) trace.draws(t, 1 + j) = th[j];
    }
    trace.wall_clock_seconds = seconds_since(start);
    trace.validate();
    return trace;
  }

  ChainTrace trace;
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < p; ++b)
      trace.names.push_back(p == 1 ? "phi"
                                   : "phi_" + std::to_string(a + 1) + "_" +
                                         std::to_string(b + 1));
  for (int j = 1; j <= J; ++j) {
    for (int a = 0; a < p; ++a)
      for (int b = 0; b < p; ++b)
        trace.names.push_back(p == 1 ? "theta_" + std::to_string(j)
                                     : "theta_" + std::to_string(j) + "_" +
                                           std::to_string(a + 1) + "_" +
                                           std::to_string(b + 1));
  }
  trace.draws.resize(iters, (J + 1) * p * p);
  trace.burn_in = burn_in;

  for (int t = 0; t < iters; ++t) {
    Matrix theta_inv_sum = Matrix::Zero(p, p);
    for (int j = 0; j < J; ++j) theta_inv_sum += theta[j].inverse();
    auto phi_cond = cond::ex2_phi(prior, theta_inv_sum, J);
    phi = sample_wishart(phi_cond.scale, phi_cond.dof, rng);

    for (int j = 0; j < J; ++j) {
      auto tp = cond::ex2_theta(phi, prior.kappa, data.sources[j].sum_outer(),
                                n[j]);
      theta[j] = sample_inv_wishart(tp.scale, tp.dof, rng);
    }

    trace.draws.row(t).head(p * p) = flatten(phi.entries());
    for (int j = 0; j < J; ++j) {
      trace.draws.row(t).segment((j + 1) * p * p, p * p) =
          flatten(theta[j].entries());
    }
  }
  trace.wall_clock_seconds = seconds_since(start);
  trace.validate();
  return trace;
}

ChainTrace fhm_example3(const HierarchicalDataset& data,
                        const Example3Prior& prior, int iters, int burn_in,
                        RandomStream& rng) {
  check_univariate(data, "fhm_example3");
  check_run_lengths(iters, burn_in);
  if (!(prior.beta0_var > 0.0) || !(prior.omega_u > 0.0) ||
      !(prior.omega_v > 0.0) || !(prior.k_u > 0.0) || !(prior.k_v > 0.0)) {
    throw InputError("fhm_example3: invalid prior");
  }
  const auto start = Clock::now();
  const int J = data.num_sources();

  std::vector<double> theta(J);
  std::vector<int> n(J);
  int n_total = 0;
  for (int j = 0; j < J; ++j) {
    n[j] = data.sources[j].size();
    n_total += n[j];
    theta[j] = data.sources[j].sum()(0) / n[j];
  }
  double beta0 = prior.beta0_mean;
  double sigma_u2 = prior.k_u > 2.0 ? prior.omega_u / (prior.k_u - 2.0) : prior.omega_u;
  double sigma_v2 = prior.k_v > 2.0 ? prior.omega_v / (prior.k_v - 2.0) : prior.omega_v;

  ChainTrace trace;
  trace.names = {"beta0", "sigma_u2", "sigma_v2"};
  for (int j = 1; j <= J; ++j) trace.names.push_back("theta_" + std::to_string(j));
  trace.draws.resize(iters, 3 + J);
  trace.burn_in = burn_in;

  for (int t = 0; t < iters; ++t) {
    double theta_sum = 0.0;
    for (int j = 0; j < J; ++j) theta_sum += theta[j];
    beta0 = draw_gaussian(cond::ex3_beta0(prior, sigma_u2, theta_sum, J), rng);

    double ss_u = 0.0;
    for (int j = 0; j < J; ++j) ss_u += (theta[j] - beta0) * (theta[j] - beta0);
    sigma_u2 = draw_iw1(cond::ex3_sigma_u2(prior, ss_u, J), rng);

    double ss_v = 0.0;
    for (int j = 0; j < J; ++j) {
      for (const auto& y : data.sources[j].observations) {
        const double r = y(0) - theta[j];
        ss_v += r * r;
      }
    }
    sigma_v2 = draw_iw1(cond::ex3_sigma_v2(prior, ss_v, n_total), rng);

    const double inv_u = 1.0 / sigma_u2;
    const double inv_v = 1.0 / sigma_v2;
    const double b_w = beta0 * inv_u;
    for (int j = 0; j < J; ++j) {
      double sum_y = 0.0;
      for (const auto& y : data.sources[j].observations) sum_y += y(0);
      const double prec = inv_u + n[j] * inv_v;
      theta[j] = (b_w + sum_y * inv_v) / prec + rng.normal() / std::sqrt(prec);
    }

    trace.draws(t, 0) = beta0;
    trace.draws(t, 1) = sigma_u2;
    trace.draws(t, 2) = sigma_v2;
    for (int j = 0; j < J; ++j) trace.draws(t, 3 + j) = theta[j];
  }
  trace.wall_clock_seconds = seconds_since(start);
  trace.validate();
  return trace;
}

}  // namespace hiermc
