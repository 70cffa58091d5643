#include "hiermc/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hiermc/distributions.hpp"

namespace hiermc {

int SourceData::obs_dim() const {
  if (observations.empty()) throw InputError("SourceData: no observations");
  return static_cast<int>(observations.front().size());
}

void SourceData::validate() const {
  if (observations.empty()) {
    throw InputError("SourceData: source " + std::to_string(source_id) +
                     " has no observations");
  }
  const int d = obs_dim();
  for (const auto& x : observations) {
    if (x.size() != d) {
      throw InputError("SourceData: observation dimension mismatch in source " +
                       std::to_string(source_id));
    }
    if (!x.allFinite()) {
      throw InputError("SourceData: non-finite observation in source " +
                       std::to_string(source_id));
    }
  }
  if (covariates && covariates->size() != observations.size()) {
    throw InputError("SourceData: covariate count differs from observations");
  }
}

Vector SourceData::sum() const {
  Vector s = Vector::Zero(obs_dim());
  for (const auto& x : observations) s += x;
  return s;
}

Matrix SourceData::sum_outer() const {
  const int d = obs_dim();
  Matrix s = Matrix::Zero(d, d);
  for (const auto& x : observations) s += x * x.transpose();
  return s;
}

void HierarchicalDataset::validate() const {
  if (sources.size() < 2) {
    throw InputError("HierarchicalDataset: needs at least two sources");
  }
  for (std::size_t j = 0; j < sources.size(); ++j) {
    if (sources[j].source_id != static_cast<int>(j) + 1) {
      throw InputError("HierarchicalDataset: source ids must be 1..J without gaps");
    }
    sources[j].validate();
  }
}

int ChainTrace::col(const std::string& name) const {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) {
    throw SchemaError("ChainTrace: no parameter named '" + name + "'");
  }
  return static_cast<int>(it - names.begin());
}

Vector ChainTrace::retained(const std::string& name) const {
  const int c = col(name);
  return draws.col(c).tail(iterations() - burn_in);
}

void ChainTrace::validate() const {
  if (burn_in >= iterations()) {
    throw InputError("ChainTrace: burn_in must be below iteration count");
  }
  if (!draws.allFinite()) {
    throw InputError("ChainTrace: non-finite draw");
  }
}

SourceDraws summarize_draws(int source_id, const Matrix& draws) {
  const int L = static_cast<int>(draws.rows());
  if (L < 2) {
    throw InsufficientSamplesError(
        "summarize_draws: need at least two draws, got " + std::to_string(L));
  }
  if (!draws.allFinite()) {
    throw InputError("summarize_draws: non-finite draw");
  }
  SourceDraws out;
  out.source_id = source_id;
  out.draws = draws;
  out.num_draws = L;
  if (draws.cols() == 1) {
    double mean = 0.0;
    for (int l = 0; l < L; ++l) mean += draws(l, 0);
    mean /= L;
    double ss = 0.0;
    for (int l = 0; l < L; ++l) {
      const double d = draws(l, 0) - mean;
      ss += d * d;
    }
    out.mean_cache = Vector::Constant(1, mean);
    out.cov_cache = repair_spd(Matrix::Constant(1, 1, ss / (L - 1)));
    return out;
  }
  out.mean_cache = draws.colwise().mean();
  Matrix centered = draws.rowwise() - out.mean_cache.transpose();
  Matrix cov = centered.transpose() * centered / (L - 1);
  out.cov_cache = repair_spd(std::move(cov));
  return out;
}

SourceDraws source_draws_from_summary(int source_id, const Vector& mean,
                                      const MatrixSym& cov, int num_draws,
                                      std::optional<double> nu) {
  if (cov.dim() != mean.size()) {
    throw InputError("source_draws_from_summary: mean/cov dimension mismatch");
  }
  SourceDraws out;
  out.source_id = source_id;
  out.num_draws = num_draws;
  out.mean_cache = mean;
  out.cov_cache = cov;
  out.nu = nu;
  return out;
}

HierarchicalDataset generate_example1(int J, int n_j, double mu, double sigma2,
                                      RandomStream& rng) {
  if (J < 2) throw InputError("generate_example1: J must be >= 2");
  if (n_j < 1) throw InputError("generate_example1: n_j must be >= 1");
  if (!(sigma2 > 0.0)) throw InputError("generate_example1: sigma2 must be > 0");
  HierarchicalDataset ds;
  const double sd = std::sqrt(sigma2);
  for (int j = 1; j <= J; ++j) {
    SourceData s;
    s.source_id = j;
    const double theta = mu + sd * rng.normal();
    s.observations.reserve(n_j);
    for (int i = 0; i < n_j; ++i) {
      Vector x(1);
      x(0) = theta + rng.normal();
      s.observations.push_back(std::move(x));
    }
    ds.sources.push_back(std::move(s));
    ds.meta["theta_" + std::to_string(j)] = theta;
  }
  ds.meta["mu"] = mu;
  ds.meta["sigma2"] = sigma2;
  return ds;
}

HierarchicalDataset generate_example2(int J, int n_j, int p,
                                      const MatrixSym& phi, double kappa,
                                      RandomStream& rng) {
  if (J < 2) throw InputError("generate_example2: J must be >= 2");
  if (n_j < 1) throw InputError("generate_example2: n_j must be >= 1");
  if (phi.dim() != p) throw InputError("generate_example2: phi dimension != p");
  if (!(kappa > p - 1)) {
    throw DomainError("generate_example2: kappa must exceed p - 1");
  }
  HierarchicalDataset ds;
  const Vector zero = Vector::Zero(p);
  for (int j = 1; j <= J; ++j) {
    SourceData s;
    s.source_id = j;
    MatrixSym theta = sample_inv_wishart(phi, kappa, rng);
    s.observations.reserve(n_j);
    for (int i = 0; i < n_j; ++i) {
      s.observations.push_back(sample_mvn(zero, theta, rng));
    }
    ds.sources.push_back(std::move(s));
    if (p == 1) ds.meta["theta_" + std::to_string(j)] = theta.value();
  }
  if (p == 1) ds.meta["phi"] = phi.value();
  ds.meta["kappa"] = kappa;
  return ds;
}

HierarchicalDataset generate_example3(int J, int n_j, double beta0,
                                      double sigma_u2, double sigma_v2,
                                      RandomStream& rng) {
  if (J < 2) throw InputError("generate_example3: J must be >= 2");
  if (n_j < 1) throw InputError("generate_example3: n_j must be >= 1");
  if (!(sigma_u2 >= 0.0) || !(sigma_v2 >= 0.0)) {
    throw InputError("generate_example3: variance components must be >= 0");
  }
  HierarchicalDataset ds;
  const double su = std::sqrt(sigma_u2);
  const double sv = std::sqrt(sigma_v2);
  for (int j = 1; j <= J; ++j) {
    SourceData s;
    s.source_id = j;
    const double u = su * rng.normal();
    s.observations.reserve(n_j);
    for (int i = 0; i < n_j; ++i) {
      Vector y(1);
      y(0) = beta0 + u + sv * rng.normal();
      s.observations.push_back(std::move(y));
    }
    ds.sources.push_back(std::move(s));
    ds.meta["theta_" + std::to_string(j)] = beta0 + u;
  }
  ds.meta["beta0"] = beta0;
  ds.meta["sigma_u2"] = sigma_u2;
  ds.meta["sigma_v2"] = sigma_v2;
  return ds;
}

}  // namespace hiermc
