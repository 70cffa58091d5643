#pragma once

// Run-length control and accuracy metrics: the Raftery-Lewis criterion,
// equal-tailed credible intervals, and coverage / mean-squared-error
// summaries over replicated experiments.

#include <map>
#include <string>
#include <vector>

#include "hiermc/model.hpp"

namespace hiermc {

struct RafteryLewisResult {
  long burn_in = 0;     // M, in iterations of the original chain
  long n_required = 0;  // N, post-burn-in iterations
  int thinning = 1;     // k
  long n_min = 0;       // independence-chain minimum
  double dependence_factor = 0.0;  // (M + N) / n_min
};

/// Raftery-Lewis run-length diagnostic for estimating the q-quantile to
/// within +-r with probability s. The chain is binarized at its
/// q-quantile, thinned until first-order Markov dependence is adequate,
/// and the transition estimates give burn-in and required length.
/// Throws NeedsLongerPilotError when the pilot chain is shorter than the
/// minimum n_min, and InputError when the quantile indicator is constant.
RafteryLewisResult raftery_lewis(const std::vector<double>& chain, double q,
                                 double r, double s);

struct CredibleInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const { return lo <= x && x <= hi; }
};

/// Equal-tailed interval from the (1-level)/2 and 1-(1-level)/2 quantiles
/// (linear interpolation between order statistics).
CredibleInterval credible_interval(const std::vector<double>& chain,
                                   double level);

/// Linearly interpolated sample quantile.
double quantile(std::vector<double> values, double q);

struct ParamStats {
  std::string parameter;
  double coverage = 0.0;
  double mse = 0.0;
};

struct ReplicateRecord {
  std::map<std::string, double> post_mean;
  std::map<std::string, CredibleInterval> ci;
  double seconds = 0.0;
};

struct ExperimentReport {
  std::string method;
  std::vector<ParamStats> params;
  double avg_seconds = 0.0;
  std::vector<ReplicateRecord> replicates;

  double mse_sum() const;
  double mse_mean() const;
  const ParamStats& stats_for(const std::string& parameter) const;
};

/// Posterior means, 95% intervals and wall time of one trace, for the
/// parameters named in truths (SchemaError when one is absent).
ReplicateRecord summarize_replicate(const ChainTrace& trace,
                                    const std::map<std::string, double>& truths);

/// Aggregate per-replicate records into coverage and MSE per parameter.
ExperimentReport report_from_records(std::vector<ReplicateRecord> records,
                                     const std::map<std::string, double>& truths,
                                     const std::string& method);

/// Coverage of the 95% interval and MSE of the posterior-mean estimate,
/// per parameter, across replicate traces. Every trace must expose every
/// evaluated parameter (SchemaError otherwise).
ExperimentReport evaluate_replicates(const std::vector<ChainTrace>& traces,
                                     const std::map<std::string, double>& truths,
                                     const std::string& method);

}  // namespace hiermc
