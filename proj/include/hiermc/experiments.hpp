#pragma once

// Replicated-experiment protocol: run-length calibration by the
// Raftery-Lewis criterion over pilot runs, replicate loops with common
// random numbers across grid points, coverage/MSE evaluation, and the
// timing series (mean seconds against number of sources; accumulated
// samples against MSE).

#include <cstdint>
#include <map>
#include <vector>

#include "hiermc/diagnostics.hpp"
#include "hiermc/fhm.hpp"
#include "hiermc/mba.hpp"

namespace hiermc {

struct RLSettings {
  double q = 0.5;
  double r = 0.05;
  double s = 0.95;
  int pilots = 10;
  int pilot_iters = 4000;
  int pilot_burn = 200;
};

struct RunLengths {
  int burn_in = 0;
  int post = 0;
  int total() const { return burn_in + post; }
};

struct MethodChoice {
  bool fhm = true;
  bool mba = true;
};

struct MethodResult {
  ExperimentReport report;
  RunLengths lengths;     // main-chain lengths from the pilot protocol
  int stage_one_draws = 0;  // L (MBA only)
};

struct ExperimentResult {
  std::map<std::string, MethodResult> methods;  // "fhm" / "mba"
  std::vector<ExperimentReport> reports() const;
};

struct Example1Setup {
  int J = 10;
  int n_j = 5;
  double mu = 2.0;
  double sigma2 = 3.0;
  Example1Prior prior;
  double stage1_mu = 0.0;
  double stage1_sigma2 = 1.0;
  int replicates = 100;
  std::uint64_t seed = 1;
  int workers = 0;
  RLSettings rl;
};

struct Example2Setup {
  int J = 20;
  int n_j = 5;
  double phi_true = 40.0;
  double kappa_true = 3.0;
  Example2Prior prior;  // experiment configs use a vague V
  double stage1_phi = 1.0;
  double stage1_kappa = 3.0;
  int replicates = 100;
  std::uint64_t seed = 1;
  int workers = 0;
  RLSettings rl;
};

struct Example3Setup {
  int J = 15;
  int n_j = 18;
  double beta0 = 30.0;
  double sigma_u2 = 10.0;
  double sigma_v2 = 40.0;
  Example3Prior prior;  // shared by both methods where parameters overlap
  // Wishart hyperprior on the scale of the source-variance level.
  double v_tau = 1e6;
  double m_tau = 3.0;
  double kappa_tau = 3.0;
  double stage1_beta0 = 0.0;
  double stage1_sigma_u2 = 1.0;
  double stage1_sigma_v2 = 1.0;
  double stage1_kappa = 3.0;
  int replicates = 100;
  std::uint64_t seed = 1;
  int workers = 0;
  RLSettings rl;
};

ExperimentResult run_example1(const Example1Setup& setup,
                              const MethodChoice& methods = {});

/// One run per n_j value; replicate datasets are nested across the grid
/// (the same replicate seed generates the widest dataset, truncated per
/// grid point) so error comparisons across n_j share randomness.
std::map<int, ExperimentResult> run_example2_grid(const Example2Setup& setup,
                                                  const std::vector<int>& n_js,
                                                  const MethodChoice& methods = {});

/// One run per J value; replicate datasets share sources across the grid.
std::map<int, ExperimentResult> run_example3_grid(const Example3Setup& setup,
                                                  const std::vector<int>& Js,
                                                  const MethodChoice& methods = {});

struct TimingRow {
  int J = 0;
  std::string method;
  double mean_seconds = 0.0;
};

/// Mean wall-clock per method as the number of sources grows.
std::vector<TimingRow> time_vs_sources(const Example1Setup& base,
                                       const std::vector<int>& Js,
                                       int replicates);

struct MseSeriesRow {
  std::string method;
  long accumulated_samples = 0;
  double mean_seconds = 0.0;
  double mse = 0.0;  // mean over evaluated parameters
};

/// Running MSE of the posterior-mean estimate as post-burn-in samples
/// accumulate (full-model chain), plus the single point for the
/// combination scheme.
std::vector<MseSeriesRow> mse_vs_samples(const Example3Setup& setup,
                                         const std::vector<long>& checkpoints);

}  // namespace hiermc
