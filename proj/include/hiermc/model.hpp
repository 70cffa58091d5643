#pragma once

// Shared domain types: hierarchical data sets, hyperparameter states,
// posterior traces and per-source draw summaries.

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hiermc/matrix.hpp"
#include "hiermc/rng.hpp"

namespace hiermc {

struct SourceData {
  int source_id = 0;
  std::vector<Vector> observations;             // n_j vectors of dimension d
  std::optional<std::vector<Vector>> covariates;

  int size() const { return static_cast<int>(observations.size()); }
  int obs_dim() const;
  void validate() const;

  /// Sum of observations (d = 1 gives the usual scalar sum).
  Vector sum() const;
  /// Sum of x x' over observations.
  Matrix sum_outer() const;
};

struct HierarchicalDataset {
  std::vector<SourceData> sources;
  // True generating values when synthetic; empty otherwise.
  std::map<std::string, double> meta;

  int num_sources() const { return static_cast<int>(sources.size()); }
  void validate() const;
};

struct NormalHyper {
  Vector mu;
  MatrixSym sigma;
};

struct IWHyper {
  MatrixSym phi;
  double kappa = 0.0;
};

struct VCHyper {
  double beta0 = 0.0;
  double sigma_u2 = 1.0;
  double sigma_v2 = 1.0;
};

struct NIWHyper {
  Vector mu;
  MatrixSym sigma;
};

using HyperState = std::variant<NormalHyper, IWHyper, VCHyper, NIWHyper>;

/// Ordered posterior draws of all tracked parameters. Rows cover every
/// iteration; analyses use the rows at and after burn_in.
struct ChainTrace {
  std::vector<std::string> names;
  Matrix draws;  // iterations x parameters
  int burn_in = 0;
  double wall_clock_seconds = 0.0;

  int iterations() const { return static_cast<int>(draws.rows()); }
  int col(const std::string& name) const;  // SchemaError if absent
  /// Post-burn-in draws of one parameter.
  Vector retained(const std::string& name) const;
  Matrix retained_rows() const { return draws.bottomRows(iterations() - burn_in); }
  void validate() const;
};

/// Per-source posterior sample set with cached mean and covariance.
/// `draws` may be empty when the object was built from summaries alone;
/// the caches are sufficient for the combination step.
struct SourceDraws {
  int source_id = 0;
  Matrix draws;  // L x q
  int num_draws = 0;
  Vector mean_cache;
  MatrixSym cov_cache;
  std::optional<double> nu;
  std::optional<double> acceptance_rate;

  int dim() const { return static_cast<int>(mean_cache.size()); }
};

/// Cache mean and sample covariance (denominator L - 1) of an L x q draw
/// matrix; a rank-deficient covariance is repaired with diagonal jitter.
SourceDraws summarize_draws(int source_id, const Matrix& draws);

/// Summary-only construction for the meta-analysis workflow.
SourceDraws source_draws_from_summary(int source_id, const Vector& mean,
                                      const MatrixSym& cov, int num_draws,
                                      std::optional<double> nu);

// Synthetic data generators. True values are recorded in dataset meta.

/// theta_j ~ N(mu, sigma2), X_ji ~ N(theta_j, 1).
HierarchicalDataset generate_example1(int J, int n_j, double mu, double sigma2,
                                      RandomStream& rng);

/// Theta_j ~ IW_p(phi, kappa), X_ji ~ N_p(0, Theta_j).
HierarchicalDataset generate_example2(int J, int n_j, int p,
                                      const MatrixSym& phi, double kappa,
                                      RandomStream& rng);

/// y_ji = beta0 + u_j + v_ji with u_j ~ N(0, sigma_u2), v_ji ~ N(0, sigma_v2).
HierarchicalDataset generate_example3(int J, int n_j, double beta0,
                                      double sigma_u2, double sigma_v2,
                                      RandomStream& rng);

}  // namespace hiermc
