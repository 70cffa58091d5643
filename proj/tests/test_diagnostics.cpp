#include <doctest.h>

#include <cmath>

#include "hiermc/diagnostics.hpp"
#include "hiermc/rng.hpp"
#include "testutil.hpp"

using namespace hiermc;

TEST_CASE("raftery-lewis on an iid chain approaches the analytic minimum") {
  RandomStream rng(301, 0);
  std::vector<double> chain(20000);
  for (auto& x : chain) x = rng.normal();
  auto res = raftery_lewis(chain, 0.5, 0.05, 0.95);
  // n_min = ceil(1.96^2 * 0.25 / 0.0025) = 385.
  CHECK(res.n_min == 385);
  CHECK(std::fabs(static_cast<double>(res.n_required) - 385.0) < 0.2 * 385.0);
  CHECK(res.thinning == 1);
}

TEST_CASE("raftery-lewis error paths") {
  std::vector<double> constant(5000, 1.0);
  CHECK_THROWS_AS(raftery_lewis(constant, 0.5, 0.05, 0.95), InputError);

  std::vector<double> tiny(100, 0.0);
  for (std::size_t i = 0; i < tiny.size(); ++i) tiny[i] = i;
  try {
    raftery_lewis(tiny, 0.5, 0.05, 0.95);
    FAIL("expected NeedsLongerPilotError");
  } catch (const NeedsLongerPilotError& e) {
    CHECK(e.n_min == 385);
  }
}

TEST_CASE("an AR(1) chain needs more iterations than an iid chain") {
  RandomStream rng(302, 0);
  std::vector<double> iid(30000), ar(30000);
  double x = 0.0;
  for (std::size_t i = 0; i < ar.size(); ++i) {
    iid[i] = rng.normal();
    x = 0.9 * x + rng.normal();
    ar[i] = x;
  }
  auto r_iid = raftery_lewis(iid, 0.5, 0.05, 0.95);
  auto r_ar = raftery_lewis(ar, 0.5, 0.05, 0.95);
  CHECK(r_ar.n_required > r_iid.n_required);
  CHECK(r_ar.dependence_factor > 1.5);
}

TEST_CASE("raftery-lewis is invariant under monotone transforms") {
  RandomStream rng(303, 0);
  std::vector<double> chain(5000);
  double x = 0.0;
  for (auto& v : chain) {
    x = 0.5 * x + rng.normal();
    v = x;
  }
  auto base = raftery_lewis(chain, 0.5, 0.05, 0.95);
  RandomStream trng(304, 0);
  for (int t = 0; t < 20; ++t) {
    const double a = 0.1 + 5.0 * trng.uniform();
    const double b = -4.0 + 8.0 * trng.uniform();
    const int kind = static_cast<int>(trng.uniform() * 3.0);
    std::vector<double> transformed(chain.size());
    for (std::size_t i = 0; i < chain.size(); ++i) {
      const double y = a * chain[i] + b;
      transformed[i] = kind == 0 ? y : (kind == 1 ? std::exp(y / 4.0)
                                                  : std::atan(y) * 3.0 + y * y * y * 1e-3 + y);
    }
    auto res = raftery_lewis(transformed, 0.5, 0.05, 0.95);
    CHECK(res.burn_in == base.burn_in);
    CHECK(res.n_required == base.n_required);
    CHECK(res.thinning == base.thinning);
  }
}

TEST_CASE("credible interval quantile rule") {
  std::vector<double> chain(100);
  for (int i = 0; i < 100; ++i) chain[i] = i + 1;
  auto ci = credible_interval(chain, 0.95);
  // Linear interpolation between order statistics: h = 99 * 0.025.
  CHECK(ci.lo == doctest::Approx(1.0 + 99.0 * 0.025).epsilon(1e-12));
  CHECK(ci.hi == doctest::Approx(1.0 + 99.0 * 0.975).epsilon(1e-12));

  std::vector<double> constant(10, 3.5);
  auto c2 = credible_interval(constant, 0.9);
  CHECK(c2.lo == 3.5);
  CHECK(c2.hi == 3.5);

  CHECK_THROWS_AS(credible_interval({1.0}, 0.95), InsufficientSamplesError);
}

TEST_CASE("credible interval matches normal quantiles on a large sample") {
  RandomStream rng(305, 0);
  std::vector<double> chain(100000);
  for (auto& x : chain) x = rng.normal();
  auto ci = credible_interval(chain, 0.95);
  CHECK(std::fabs(ci.lo + 1.959964) < 0.05);
  CHECK(std::fabs(ci.hi - 1.959964) < 0.05);
}

TEST_CASE("credible intervals are nested across levels") {
  RandomStream rng(306, 0);
  std::vector<double> chain(5000);
  for (auto& x : chain) x = rng.normal() * 2.0 + 1.0;
  auto c50 = credible_interval(chain, 0.5);
  auto c80 = credible_interval(chain, 0.8);
  auto c95 = credible_interval(chain, 0.95);
  CHECK(c50.lo >= c80.lo);
  CHECK(c80.lo >= c95.lo);
  CHECK(c50.hi <= c80.hi);
  CHECK(c80.hi <= c95.hi);
}

namespace {

ChainTrace trace_with_mean(double value, double jitter_seed) {
  ChainTrace t;
  t.names = {"x"};
  t.draws = Matrix::Zero(200, 1);
  RandomStream rng(static_cast<std::uint64_t>(jitter_seed), 0);
  for (int i = 0; i < 200; ++i) t.draws(i, 0) = value + 0.01 * rng.normal();
  t.burn_in = 50;
  return t;
}

}  // namespace

TEST_CASE("evaluate_replicates trivial cases") {
  // All posterior means equal the truth: MSE ~ 0, coverage 1.
  std::vector<ChainTrace> exact;
  for (int r = 0; r < 5; ++r) exact.push_back(trace_with_mean(2.0, 400 + r));
  auto rep = evaluate_replicates(exact, {{"x", 2.0}}, "fhm");
  CHECK(rep.stats_for("x").mse < 1e-4);
  CHECK(rep.stats_for("x").coverage == 1.0);

  // Means at truth +- 1: MSE = 1.
  std::vector<ChainTrace> off = {trace_with_mean(3.0, 410),
                                 trace_with_mean(1.0, 411)};
  auto rep2 = evaluate_replicates(off, {{"x", 2.0}}, "fhm");
  CHECK(rep2.stats_for("x").mse == doctest::Approx(1.0).epsilon(0.01));
  CHECK(rep2.stats_for("x").coverage == 0.0);

  CHECK_THROWS_AS(evaluate_replicates(off, {{"missing", 0.0}}, "fhm"),
                  SchemaError);
}

TEST_CASE("evaluate_replicates is permutation invariant") {
  std::vector<ChainTrace> traces;
  for (int r = 0; r < 6; ++r) traces.push_back(trace_with_mean(1.0 + r, 420 + r));
  auto a = evaluate_replicates(traces, {{"x", 3.0}}, "m");
  std::reverse(traces.begin(), traces.end());
  auto b = evaluate_replicates(traces, {{"x", 3.0}}, "m");
  CHECK(a.stats_for("x").mse == doctest::Approx(b.stats_for("x").mse).epsilon(1e-12));
  CHECK(a.stats_for("x").coverage == b.stats_for("x").coverage);
}
