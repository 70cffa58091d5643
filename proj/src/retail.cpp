#include "hiermc/retail.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "hiermc/distributions.hpp"
#include "hiermc/independent.hpp"
#include "hiermc/io.hpp"

namespace hiermc {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
using Clock = std::chrono::steady_clock;

double stage_one_logpost(const Vector& state,
                         const std::vector<RetailRecord>& records,
                         const RetailPriors& priors) {
  const Vector beta = state.head(3);
  const double log_r = state(3);
  double lp = retail_loglik(beta, log_r, records);
  if (lp == kNegInf) return kNegInf;
  const double sd = priors.beta_prior_sd;
  lp += -0.5 * beta.squaredNorm() / (sd * sd);
  // Half-Cauchy on r plus the Jacobian of the log transform.
  const double r = std::exp(log_r);
  lp += logpdf_half_cauchy(r, priors.half_cauchy_scale) + log_r;
  return lp;
}

}  // namespace

double retail_loglik(const Vector& beta, double log_r,
                     const std::vector<RetailRecord>& records) {
  if (records.empty()) throw InputError("retail_loglik: no records");
  if (beta.size() != 3) throw InputError("retail_loglik: beta must have length 3");
  const double r = std::exp(log_r);
  if (!std::isfinite(r) || r <= 0.0) return kNegInf;
  const double lgr = std::lgamma(r);
  double acc = 0.0;
  for (const auto& rec : records) {
    const double log_lambda =
        beta(0) + beta(1) * rec.log_price + beta(2) * rec.display_pct;
    // rate = r / lambda; density evaluated on the log scale.
    const double log_rate = log_r - log_lambda;
    if (!std::isfinite(log_rate)) return kNegInf;
    const double rate_v = std::exp(log_rate) * rec.volume;
    if (!std::isfinite(rate_v)) return kNegInf;
    acc += r * log_rate - lgr + (r - 1.0) * std::log(rec.volume) - rate_v;
  }
  return std::isfinite(acc) ? acc : kNegInf;
}

SourceDraws retail_stage_one(const std::vector<RetailRecord>& store, int L,
                             int burn_in, RandomStream& rng,
                             const RetailPriors& priors) {
  if (store.empty()) throw InputError("retail_stage_one: no records");
  double mean_vol = 0.0;
  for (const auto& rec : store) mean_vol += rec.volume;
  mean_vol /= static_cast<double>(store.size());

  Vector init(4);
  init << std::log(std::max(mean_vol, 1e-6)), 0.0, 0.0, 0.0;
  Matrix step = Matrix::Identity(4, 4) * 0.01;
  auto target = [&](const Vector& s) {
    return stage_one_logpost(s, store, priors);
  };
  SourceDraws joint =
      rw_metropolis(target, init, MatrixSym(step), L, burn_in, rng);

  SourceDraws betas = summarize_draws(store.front().store_id,
                                      joint.draws.leftCols(3));
  betas.acceptance_rate = joint.acceptance_rate;
  return betas;
}

ChainTrace retail_mba(const std::vector<SourceDraws>& all_draws,
                      const RetailPriors& priors, int iters, int burn_in,
                      RandomStream& rng) {
  SubstituteSpec spec;
  spec.family = Family::MVNormal;
  spec.sources = all_draws;
  spec.normal_prior = {priors.mu0, priors.sigma0, priors.v, priors.m};
  return run_mba(spec, iters, burn_in, rng);
}

ChainTrace retail_fhm_baseline(const std::vector<std::vector<RetailRecord>>& stores,
                               const RetailPriors& priors, int iters,
                               int burn_in, RandomStream& rng) {
  if (stores.size() < 2) {
    throw InputError("retail_fhm_baseline: needs at least two stores");
  }
  if (burn_in < 0 || iters <= burn_in) {
    throw InputError("retail_fhm_baseline: chain length must exceed burn-in");
  }
  const auto start = Clock::now();
  const int J = static_cast<int>(stores.size());

  // State: per store (beta_j, log r_j); hyper (mu, Sigma).
  std::vector<Vector> state(J);
  std::vector<double> lp(J);
  std::vector<double> log_scale(J, 0.0);
  NormalHyper hyper{priors.mu0, MatrixSym::identity(3)};

  for (int j = 0; j < J; ++j) {
    if (stores[j].empty()) {
      throw InputError("retail_fhm_baseline: empty store");
    }
    double mean_vol = 0.0;
    for (const auto& rec : stores[j]) mean_vol += rec.volume;
    mean_vol /= static_cast<double>(stores[j].size());
    Vector s(4);
    s << std::log(std::max(mean_vol, 1e-6)), 0.0, 0.0, 0.0;
    state[j] = s;
  }

  auto logpost_j = [&](int j, const Vector& s) {
    const Vector beta = s.head(3);
    double v = retail_loglik(beta, s(3), stores[j]);
    if (v == kNegInf) return kNegInf;
    v += logpdf_mvn(beta, hyper.mu, hyper.sigma);
    const double r = std::exp(s(3));
    v += logpdf_half_cauchy(r, priors.half_cauchy_scale) + s(3);
    return v;
  };
  for (int j = 0; j < J; ++j) lp[j] = logpost_j(j, state[j]);

  ChainTrace trace;
  for (int a = 1; a <= 3; ++a) trace.names.push_back("mu_" + std::to_string(a));
  for (int b = 1; b <= 3; ++b)
    for (int a = 1; a <= 3; ++a)
      trace.names.push_back("Sigma_" + std::to_string(a) + "_" + std::to_string(b));
  for (int j = 1; j <= J; ++j) {
    for (int a = 1; a <= 3; ++a)
      trace.names.push_back("beta_" + std::to_string(j) + "_" + std::to_string(a));
    trace.names.push_back("log_r_" + std::to_string(j));
  }
  trace.draws.resize(iters, static_cast<int>(trace.names.size()));
  trace.burn_in = burn_in;

  NormalHyperPrior hyper_prior{priors.mu0, priors.sigma0, priors.v, priors.m};
  const int inner_moves = 3;

  for (int t = 0; t < iters; ++t) {
    std::vector<Vector> betas(J);
    for (int j = 0; j < J; ++j) betas[j] = state[j].head(3);
    hyper = hyper_update_normal(betas, hyper_prior, hyper, rng);
    // The hyper state moved, so the cached per-store posteriors are stale.
    for (int j = 0; j < J; ++j) lp[j] = logpost_j(j, state[j]);

    for (int j = 0; j < J; ++j) {
      for (int move = 0; move < inner_moves; ++move) {
        Vector z(4);
        for (int i = 0; i < 4; ++i) z(i) = rng.normal();
        Vector prop = state[j] + std::exp(log_scale[j]) * 0.05 * z;
        const double lp_prop = logpost_j(j, prop);
        const bool accept = std::log(rng.uniform()) < lp_prop - lp[j];
        if (accept) {
          state[j] = std::move(prop);
          lp[j] = lp_prop;
        }
        if (t < burn_in) {
          log_scale[j] += std::pow(static_cast<double>(t * inner_moves + move) + 1.0,
                                   -0.6) *
                          ((accept ? 1.0 : 0.0) - 0.3);
        }
      }
    }

    int c = 0;
    for (int a = 0; a < 3; ++a) trace.draws(t, c++) = hyper.mu(a);
    for (int b = 0; b < 3; ++b)
      for (int a = 0; a < 3; ++a) trace.draws(t, c++) = hyper.sigma(a, b);
    for (int j = 0; j < J; ++j) {
      for (int a = 0; a < 3; ++a) trace.draws(t, c++) = state[j](a);
      trace.draws(t, c++) = state[j](3);
    }
  }
  trace.wall_clock_seconds =
      std::chrono::duration<double>(Clock::now() - start).count();
  trace.validate();
  return trace;
}

std::vector<std::vector<RetailRecord>> generate_retail(int num_stores,
                                                       int num_weeks,
                                                       RandomStream& rng,
                                                       RetailTruth* truth) {
  if (num_stores < 2 || num_weeks < 1) {
    throw InputError("generate_retail: need >= 2 stores and >= 1 week");
  }
  Vector mu(3);
  mu << 4.0, -2.0, 1.0;
  Matrix sigma = Matrix::Identity(3, 3) * 0.09;
  MatrixSym sigma_sym(sigma);

  std::vector<std::vector<RetailRecord>> stores(num_stores);
  if (truth) {
    truth->mu = mu;
    truth->sigma = sigma_sym;
    truth->betas.clear();
    truth->shapes.clear();
  }
  for (int j = 0; j < num_stores; ++j) {
    Vector beta = sample_mvn(mu, sigma_sym, rng);
    const double r = 2.0 + 4.0 * rng.uniform();
    if (truth) {
      truth->betas.push_back(beta);
      truth->shapes.push_back(r);
    }
    stores[j].reserve(num_weeks);
    for (int t = 0; t < num_weeks; ++t) {
      RetailRecord rec;
      rec.store_id = j + 1;
      rec.week = t + 1;
      rec.log_price = std::log(2.5) + 0.2 * rng.normal();
      rec.display_pct = rng.uniform() * 0.8;
      const double lambda =
          std::exp(beta(0) + beta(1) * rec.log_price + beta(2) * rec.display_pct);
      rec.volume = sample_gamma(r, r / lambda, rng);
      stores[j].push_back(rec);
    }
  }
  return stores;
}

RetailIngestion read_retail_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot open: " + path.string());
  std::string line;
  if (!std::getline(in, line)) {
    throw IngestionError("empty retail file: " + path.string());
  }
  std::map<int, std::vector<RetailRecord>> by_store;
  std::map<int, int> week_counter;
  double max_display = 0.0;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 4) {
      throw IngestionError("retail row " + std::to_string(line_no) +
                           " must have 4 columns (store,volume,price,display)");
    }
    RetailRecord rec;
    try {
      rec.store_id = std::stoi(cells[0]);
      rec.volume = std::stod(cells[1]);
      const double price = std::stod(cells[2]);
      if (price <= 0.0) throw std::invalid_argument("price");
      rec.log_price = std::log(price);
      rec.display_pct = std::stod(cells[3]);
    } catch (const std::exception&) {
      throw IngestionError("bad retail row " + std::to_string(line_no));
    }
    if (rec.volume <= 0.0) {
      throw IngestionError("retail row " + std::to_string(line_no) +
                           ": volume must be strictly positive");
    }
    rec.week = ++week_counter[rec.store_id];
    max_display = std::max(max_display, rec.display_pct);
    by_store[rec.store_id].push_back(rec);
  }
  if (by_store.empty()) throw IngestionError("retail file has no rows");

  RetailIngestion out;
  out.percent_scale_detected = max_display > 1.5;
  for (auto& [sid, records] : by_store) {
    if (out.percent_scale_detected) {
      for (auto& rec : records) rec.display_pct /= 100.0;
    }
    out.stores.push_back(std::move(records));
  }
  return out;
}

void write_retail_csv(const std::filesystem::path& path,
                      const std::vector<std::vector<RetailRecord>>& stores) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open for writing: " + path.string());
  out << "store,volume,price,display\n";
  for (const auto& store : stores) {
    for (const auto& rec : store) {
      out << rec.store_id << ',' << format_double(rec.volume) << ','
          << format_double(std::exp(rec.log_price)) << ','
          << format_double(rec.display_pct) << '\n';
    }
  }
}

}  // namespace hiermc
