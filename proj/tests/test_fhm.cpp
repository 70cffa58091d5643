#include <doctest.h>

#include <cmath>

#include "hiermc/distributions.hpp"
#include "hiermc/fhm.hpp"
#include "oracles.hpp"
#include "testutil.hpp"

using namespace hiermc;

TEST_CASE("example 1 full conditional parameters match hand formulas") {
  Example1Prior prior;  // mu0=0, sigma0_2=1, omega=1, k=3
  // theta | mu=1, sigma2=2, data sum 10 over n=5.
  auto th = cond::ex1_theta(1.0, 2.0, 10.0, 5);
  CHECK(th.var == doctest::Approx(1.0 / 5.5).epsilon(1e-12));
  CHECK(th.mean == doctest::Approx((0.5 + 10.0) / 5.5).epsilon(1e-12));
  // mu | theta sum 6 over J=3, sigma2=2.
  auto mu = cond::ex1_mu(prior, 2.0, 6.0, 3);
  CHECK(mu.var == doctest::Approx(1.0 / 2.5).epsilon(1e-12));
  CHECK(mu.mean == doctest::Approx(3.0 / 2.5).epsilon(1e-12));
  // sigma2 | ss=4, J=3.
  auto s2 = cond::ex1_sigma2(prior, 4.0, 3);
  CHECK(s2.scale == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(s2.dof == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("full conditionals pass goodness of fit in isolation") {
  // With all conditioning values fixed, draw repeatedly from each full
  // conditional and compare against its analytic distribution.
  Example1Prior prior;
  const int n = 10000;

  auto mu_cond = cond::ex1_mu(prior, 2.0, 6.0, 3);
  {
    RandomStream rng(71, 0);
    std::vector<double> draws(n);
    const double sd = std::sqrt(mu_cond.var);
    for (auto& x : draws) x = mu_cond.mean + sd * rng.normal();
    CHECK(testutil::chi2_gof_pvalue(draws, [&](double x) {
            return testutil::normal_cdf((x - mu_cond.mean) / sd);
          }) > 0.01);
  }
  auto s2_cond = cond::ex1_sigma2(prior, 4.0, 3);
  {
    RandomStream rng(72, 0);
    std::vector<double> draws(n);
    for (auto& x : draws) x = s2_cond.scale / sample_chi_square(s2_cond.dof, rng);
    CHECK(testutil::chi2_gof_pvalue(draws, [&](double x) {
            return testutil::inv_wishart1_cdf(x, s2_cond.scale, s2_cond.dof);
          }) > 0.01);
  }
  Example3Prior p3;
  auto sv_cond = cond::ex3_sigma_v2(p3, 200.0, 54);
  {
    RandomStream rng(73, 0);
    std::vector<double> draws(n);
    for (auto& x : draws) x = sv_cond.scale / sample_chi_square(sv_cond.dof, rng);
    CHECK(testutil::chi2_gof_pvalue(draws, [&](double x) {
            return testutil::inv_wishart1_cdf(x, sv_cond.scale, sv_cond.dof);
          }) > 0.01);
  }
}

TEST_CASE("example 2 full conditional parameters") {
  Example2Prior prior;  // v=1, m=3, kappa=3
  Matrix sxx(1, 1);
  sxx << 12.0;
  auto th = cond::ex2_theta(MatrixSym::scalar(40.0), 3.0, sxx, 5);
  CHECK(th.scale.value() == doctest::Approx(52.0).epsilon(1e-12));
  CHECK(th.dof == doctest::Approx(8.0).epsilon(1e-12));

  Matrix inv_sum(1, 1);
  inv_sum << 0.5;
  auto ph = cond::ex2_phi(prior, inv_sum, 20);
  CHECK(ph.scale.value() == doctest::Approx(1.0 / 1.5).epsilon(1e-12));
  CHECK(ph.dof == doctest::Approx(63.0).epsilon(1e-12));
}

TEST_CASE("example 3 full conditional parameters") {
  Example3Prior prior;
  prior.beta0_var = 1e4;
  auto th = cond::ex3_theta(30.0, 10.0, 40.0, 540.0, 18);
  const double prec = 0.1 + 18.0 / 40.0;
  CHECK(th.var == doctest::Approx(1.0 / prec).epsilon(1e-12));
  CHECK(th.mean == doctest::Approx((3.0 + 13.5) / prec).epsilon(1e-12));

  auto b0 = cond::ex3_beta0(prior, 10.0, 450.0, 15);
  CHECK(b0.var == doctest::Approx(1.0 / (1e-4 + 1.5)).epsilon(1e-12));
  CHECK(b0.mean == doctest::Approx(45.0 / (1e-4 + 1.5)).epsilon(1e-12));

  auto su = cond::ex3_sigma_u2(prior, 60.0, 6);
  CHECK(su.scale == doctest::Approx(61.0).epsilon(1e-12));
  CHECK(su.dof == doctest::Approx(9.0).epsilon(1e-12));
}

TEST_CASE("traces are finite and variances stay positive") {
  RandomStream rng(74, 0);
  auto ds = generate_example3(6, 18, 30.0, 10.0, 40.0, rng);
  Example3Prior prior;
  prior.beta0_var = 1e4;
  RandomStream crng(74, 1);
  auto tr = fhm_example3(ds, prior, 2000, 200, crng);
  CHECK(tr.draws.allFinite());
  CHECK(tr.retained("sigma_u2").minCoeff() > 0.0);
  CHECK(tr.retained("sigma_v2").minCoeff() > 0.0);

  RandomStream rng2(75, 0);
  auto ds1 = generate_example1(10, 5, 2.0, 3.0, rng2);
  RandomStream crng2(75, 1);
  auto tr1 = fhm_example1(ds1, Example1Prior{}, 2000, 200, crng2);
  CHECK(tr1.retained("sigma2").minCoeff() > 0.0);
}

TEST_CASE("posterior mean of mu sits between prior mean and data mean") {
  Example1Prior prior;  // prior mean 0
  for (int rep = 0; rep < 20; ++rep) {
    RandomStream rng(100 + rep, 0);
    auto ds = generate_example1(10, 5, 2.0, 3.0, rng);
    double pooled = 0.0;
    long count = 0;
    for (const auto& s : ds.sources) {
      for (const auto& x : s.observations) {
        pooled += x(0);
        ++count;
      }
    }
    pooled /= count;
    RandomStream crng(200 + rep, 0);
    auto tr = fhm_example1(ds, prior, 3000, 500, crng);
    const double mu_hat = tr.retained("mu").mean();
    const double lo = std::min(0.0, pooled), hi = std::max(0.0, pooled);
    CHECK(mu_hat > lo);
    CHECK(mu_hat < hi);
  }
}

TEST_CASE("data dominance with a huge source") {
  // Two sources with n = 10^4; the per-source posterior concentrates at
  // the sample mean.
  RandomStream rng(76, 0);
  auto ds = generate_example1(2, 10000, 2.0, 3.0, rng);
  Example1Prior prior;
  RandomStream crng(76, 1);
  auto tr = fhm_example1(ds, prior, 3000, 500, crng);
  for (int j = 1; j <= 2; ++j) {
    const auto& src = ds.sources[j - 1];
    double mean = 0.0;
    for (const auto& x : src.observations) mean += x(0);
    mean /= src.size();
    Vector th = tr.retained("theta_" + std::to_string(j));
    const double m = th.mean();
    const double sd = std::sqrt((th.array() - m).square().mean());
    CHECK(std::fabs(m - mean) < 3.0 * sd + 1e-3);
  }
}

TEST_CASE("example 1 gibbs matches grid quadrature on a small instance") {
  RandomStream rng(77, 0);
  auto ds = generate_example1(3, 2, 2.0, 3.0, rng);
  std::vector<std::pair<double, double>> data;
  for (const auto& s : ds.sources) {
    data.emplace_back(s.observations[0](0), s.observations[1](0));
  }
  Example1Prior prior;
  auto grid = oracles::ex1_mu_moments(data, prior.mu0, prior.sigma0_2,
                                      prior.omega, prior.k);
  RandomStream crng(77, 1);
  auto tr = fhm_example1(ds, prior, 120000, 2000, crng);
  Vector mu = tr.retained("mu");
  const double mean = mu.mean();
  const double sd = std::sqrt((mu.array() - mean).square().mean());
  CHECK(std::fabs(mean - grid.mean) < 0.05);
  CHECK(std::fabs(sd - grid.sd) < 0.05);
}

TEST_CASE("example 2 gibbs matches quadrature on a two-source instance") {
  RandomStream rng(78, 0);
  auto ds = generate_example2(2, 1, 1, MatrixSym::scalar(40.0), 3.0, rng);
  std::vector<double> x = {ds.sources[0].observations[0](0),
                           ds.sources[1].observations[0](0)};
  Example2Prior prior;  // v=1, m=3, kappa=3
  const double oracle = oracles::ex2_phi_mean(x, prior.v.value(), prior.m,
                                              prior.kappa);
  RandomStream crng(78, 1);
  auto tr = fhm_example2(ds, prior, 200000, 2000, crng);
  const double mean = tr.retained("phi").mean();
  CHECK(mean == doctest::Approx(oracle).epsilon(0.05));
}

TEST_CASE("zero-noise variance components data pins beta0 to the grand mean") {
  RandomStream rng(79, 0);
  auto ds = generate_example3(8, 10, 30.0, 1e-30, 1e-30, rng);
  Example3Prior prior;
  prior.beta0_var = 1e4;
  RandomStream crng(79, 1);
  auto tr = fhm_example3(ds, prior, 4000, 1000, crng);
  CHECK(tr.retained("beta0").mean() == doctest::Approx(30.0).epsilon(0.01 / 30.0));
}

TEST_CASE("non-finite data is rejected") {
  RandomStream rng(80, 0);
  auto ds = generate_example1(3, 2, 0.0, 1.0, rng);
  ds.sources[1].observations[0](0) = std::nan("");
  RandomStream crng(80, 1);
  CHECK_THROWS_AS(fhm_example1(ds, Example1Prior{}, 100, 10, crng), InputError);
}
