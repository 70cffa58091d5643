#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "hiermc/io.hpp"
#include "hiermc/model.hpp"
#include "testutil.hpp"

using namespace hiermc;

TEST_CASE("summarize_draws two-point case") {
  Matrix d(2, 1);
  d << 1.0, 3.0;
  auto s = summarize_draws(1, d);
  CHECK(s.mean_cache(0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(s.cov_cache.value() == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("summarize_draws constant input gets jitter") {
  Matrix d = Matrix::Constant(50, 1, 4.2);
  auto s = summarize_draws(3, d);
  CHECK(s.mean_cache(0) == doctest::Approx(4.2).epsilon(1e-12));
  CHECK(s.cov_cache.value() == doctest::Approx(1e-9).epsilon(1e-6));
  CHECK_NOTHROW(s.cov_cache.chol_lower());
}

TEST_CASE("summarize_draws rejects fewer than two draws") {
  Matrix d(1, 1);
  d << 1.0;
  CHECK_THROWS_AS(summarize_draws(1, d), InsufficientSamplesError);
}

TEST_CASE("summarize_draws moment check") {
  RandomStream rng(21, 0);
  Matrix d(10000, 1);
  for (int i = 0; i < d.rows(); ++i) d(i, 0) = 2.0 * rng.normal();
  auto s = summarize_draws(1, d);
  CHECK(std::fabs(s.mean_cache(0)) < 0.1);
  CHECK(s.cov_cache.value() == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("summarize_draws caches match the definitions") {
  RandomStream rng(22, 0);
  Matrix d(200, 3);
  for (int i = 0; i < d.rows(); ++i)
    for (int j = 0; j < 3; ++j) d(i, j) = rng.normal() + j;
  auto s = summarize_draws(1, d);
  Vector mean = d.colwise().mean();
  CHECK((s.mean_cache - mean).cwiseAbs().maxCoeff() < 1e-12);
  Matrix centered = d.rowwise() - mean.transpose();
  Matrix cov = centered.transpose() * centered / (d.rows() - 1);
  CHECK((s.cov_cache.entries() - cov).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("generate_example1 shapes, meta and degenerate prior") {
  RandomStream rng(23, 0);
  auto ds = generate_example1(10, 5, 2.0, 3.0, rng);
  CHECK(ds.num_sources() == 10);
  for (const auto& s : ds.sources) CHECK(s.size() == 5);
  CHECK(ds.meta.at("mu") == 2.0);
  CHECK(ds.meta.at("sigma2") == 3.0);
  ds.validate();

  RandomStream rng2(23, 1);
  auto tight = generate_example1(5, 2, 2.0, 1e-30, rng2);
  for (int j = 1; j <= 5; ++j) {
    CHECK(std::fabs(tight.meta.at("theta_" + std::to_string(j)) - 2.0) < 1e-10);
  }
  CHECK_THROWS_AS(generate_example1(1, 5, 0.0, 1.0, rng2), InputError);
}

TEST_CASE("generate_example1 pooled mean is unbiased over replicates") {
  double pooled = 0.0;
  long count = 0;
  for (int rep = 0; rep < 100; ++rep) {
    RandomStream rng(500 + rep, 0);
    auto ds = generate_example1(10, 5, 2.0, 3.0, rng);
    for (const auto& s : ds.sources) {
      for (const auto& x : s.observations) {
        pooled += x(0);
        ++count;
      }
    }
  }
  CHECK(pooled / count == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("generate_example2 moments and domain checks") {
  RandomStream rng(24, 0);
  auto ds = generate_example2(20, 5, 1, MatrixSym::scalar(40.0), 3.0, rng);
  CHECK(ds.num_sources() == 20);
  CHECK(ds.meta.at("phi") == 40.0);

  // kappa = 42 makes the source covariance mean phi/(kappa-2) = 1.
  double sum = 0.0;
  const int reps = 10000;
  RandomStream rng2(25, 0);
  auto big = generate_example2(reps, 1, 1, MatrixSym::scalar(40.0), 42.0, rng2);
  for (int j = 1; j <= reps; ++j) sum += big.meta.at("theta_" + std::to_string(j));
  CHECK(sum / reps == doctest::Approx(1.0).epsilon(0.05));

  RandomStream rng3(26, 0);
  CHECK_THROWS_AS(generate_example2(5, 2, 1, MatrixSym::scalar(1.0), 0.0, rng3),
                  DomainError);

  RandomStream a(27, 0), b(27, 0);
  auto d1 = generate_example2(3, 4, 1, MatrixSym::scalar(40.0), 3.0, a);
  auto d2 = generate_example2(3, 4, 1, MatrixSym::scalar(40.0), 3.0, b);
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 4; ++i) {
      CHECK(d1.sources[j].observations[i] == d2.sources[j].observations[i]);
    }
  }
}

TEST_CASE("generate_example3 degenerate variances and unbiasedness") {
  RandomStream rng(28, 0);
  auto ds = generate_example3(15, 18, 30.0, 10.0, 40.0, rng);
  CHECK(ds.num_sources() == 15);
  ds.validate();

  RandomStream rng2(29, 0);
  auto flat = generate_example3(4, 3, 30.0, 1e-30, 1e-30, rng2);
  for (const auto& s : flat.sources) {
    for (const auto& y : s.observations) CHECK(std::fabs(y(0) - 30.0) < 1e-5);
  }

  double grand = 0.0;
  long count = 0;
  for (int rep = 0; rep < 100; ++rep) {
    RandomStream r(900 + rep, 0);
    auto d = generate_example3(6, 18, 30.0, 10.0, 40.0, r);
    for (const auto& s : d.sources) {
      for (const auto& y : s.observations) {
        grand += y(0);
        ++count;
      }
    }
  }
  CHECK(grand / count == doctest::Approx(30.0).epsilon(0.5 / 30.0));
}

TEST_CASE("dataset CSV round-trips exactly") {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "hiermc_model_test";
  fs::create_directories(dir);

  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    RandomStream rng(seed, 0);
    auto ds = generate_example1(4, 6, -1.0, 2.5, rng);
    const auto path = dir / ("ds_" + std::to_string(seed) + ".csv");
    write_dataset_csv(path, ds);
    auto back = read_dataset_csv(path);
    REQUIRE(back.num_sources() == ds.num_sources());
    for (int j = 0; j < ds.num_sources(); ++j) {
      REQUIRE(back.sources[j].size() == ds.sources[j].size());
      for (int i = 0; i < ds.sources[j].size(); ++i) {
        CHECK(std::fabs(back.sources[j].observations[i](0) -
                        ds.sources[j].observations[i](0)) < 1e-12);
      }
    }
  }
  fs::remove_all(dir);
}

TEST_CASE("trace validation catches bad burn-in") {
  ChainTrace t;
  t.names = {"x"};
  t.draws = Matrix::Zero(10, 1);
  t.burn_in = 10;
  CHECK_THROWS_AS(t.validate(), InputError);
  t.burn_in = 2;
  CHECK_NOTHROW(t.validate());
  CHECK_THROWS_AS(t.col("missing"), SchemaError);
}
