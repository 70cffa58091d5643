#include "hiermc/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "hiermc/distributions.hpp"
#include "hiermc/independent.hpp"
#include "hiermc/parallel.hpp"

namespace hiermc {

namespace {

void rl_update(RunLengths& len, const Vector& chain, const RLSettings& rl) {
  std::vector<double> v(chain.data(), chain.data() + chain.size());
  const auto res = raftery_lewis(v, rl.q, rl.r, rl.s);
  len.burn_in = std::max(len.burn_in, static_cast<int>(res.burn_in));
  len.post = std::max(len.post, static_cast<int>(res.n_required));
}

HierarchicalDataset slice_obs(const HierarchicalDataset& ds, int n) {
  HierarchicalDataset out;
  out.meta = ds.meta;
  for (const auto& s : ds.sources) {
    SourceData trimmed;
    trimmed.source_id = s.source_id;
    trimmed.observations.assign(s.observations.begin(),
                                s.observations.begin() + n);
    out.sources.push_back(std::move(trimmed));
  }
  return out;
}

HierarchicalDataset slice_sources(const HierarchicalDataset& ds, int J) {
  HierarchicalDataset out;
  out.meta = ds.meta;
  out.sources.assign(ds.sources.begin(), ds.sources.begin() + J);
  return out;
}

// ---------------------------------------------------------------------
// Example 1

ParallelResult ex1_stage_one(const HierarchicalDataset& ds,
                             const Example1Setup& setup, int L,
                             std::uint64_t seed) {
  TaskPlan plan;
  plan.base_seed = seed;
  plan.workers = setup.workers;
  for (const auto& src : ds.sources) {
    plan.tasks.push_back(
        {src.source_id, [&src, &setup, L](RandomStream& rng) {
           return indep_normal(src, setup.stage1_mu, setup.stage1_sigma2, L,
                               rng);
         }});
  }
  return run_parallel(plan);
}

SubstituteSpec ex1_spec(std::vector<SourceDraws> draws,
                        const Example1Setup& setup) {
  SubstituteSpec spec;
  spec.family = Family::MVNormal;
  spec.sources = std::move(draws);
  spec.normal_prior = NormalHyperPrior::univariate(
      setup.prior.mu0, setup.prior.sigma0_2, setup.prior.omega, setup.prior.k);
  return spec;
}

// ---------------------------------------------------------------------
// Example 2

ParallelResult ex2_stage_one(const HierarchicalDataset& ds,
                             const Example2Setup& setup, int L,
                             std::uint64_t seed) {
  TaskPlan plan;
  plan.base_seed = seed;
  plan.workers = setup.workers;
  const MatrixSym phi_fix = MatrixSym::scalar(setup.stage1_phi);
  for (const auto& src : ds.sources) {
    plan.tasks.push_back(
        {src.source_id, [&src, phi_fix, &setup, L](RandomStream& rng) {
           return indep_invwishart(src, phi_fix, setup.stage1_kappa, L, rng);
         }});
  }
  return run_parallel(plan);
}

SubstituteSpec ex2_spec(std::vector<SourceDraws> draws,
                        const Example2Setup& setup) {
  SubstituteSpec spec;
  spec.family = Family::InvWishart;
  spec.sources = std::move(draws);
  spec.kappa = setup.prior.kappa;
  spec.wishart_prior = {setup.prior.v, setup.prior.m};
  return spec;
}

// ---------------------------------------------------------------------
// Example 3

struct Ex3StageOne {
  std::vector<SourceDraws> theta_draws;
  std::vector<SourceDraws> tau_draws;
  double wall_seconds = 0.0;
};

Ex3StageOne ex3_stage_one(const HierarchicalDataset& ds,
                          const Example3Setup& setup, int L,
                          std::uint64_t seed_theta, std::uint64_t seed_tau) {
  Ex3StageOne out;
  TaskPlan plan;
  plan.base_seed = seed_theta;
  plan.workers = setup.workers;
  for (const auto& src : ds.sources) {
    plan.tasks.push_back(
        {src.source_id, [&src, &setup, L](RandomStream& rng) {
           return indep_normal(src, setup.stage1_beta0, setup.stage1_sigma_u2,
                               L, rng);
         }});
  }
  auto theta_res = run_parallel(plan);

  // Residuals for the variance stage are centered at the plug-in
  // per-source posterior means from the first pass.
  TaskPlan plan_tau;
  plan_tau.base_seed = seed_tau;
  plan_tau.workers = setup.workers;
  for (std::size_t j = 0; j < ds.sources.size(); ++j) {
    const auto& src = ds.sources[j];
    const double center = theta_res.draws[j].mean_cache(0);
    plan_tau.tasks.push_back(
        {src.source_id, [&src, center, &setup, L](RandomStream& rng) {
           return indep_variance(src, center, setup.stage1_sigma_v2,
                                 setup.stage1_kappa, L, rng);
         }});
  }
  auto tau_res = run_parallel(plan_tau);

  out.theta_draws = std::move(theta_res.draws);
  out.tau_draws = std::move(tau_res.draws);
  out.wall_seconds = theta_res.wall_seconds + tau_res.wall_seconds;
  return out;
}

SubstituteSpec ex3_theta_spec(std::vector<SourceDraws> draws,
                              const Example3Setup& setup) {
  SubstituteSpec spec;
  spec.family = Family::MVNormal;
  spec.sources = std::move(draws);
  spec.normal_prior = NormalHyperPrior::univariate(
      setup.prior.beta0_mean, setup.prior.beta0_var, setup.prior.omega_u,
      setup.prior.k_u);
  return spec;
}

SubstituteSpec ex3_tau_spec(std::vector<SourceDraws> draws,
                            const Example3Setup& setup) {
  SubstituteSpec spec;
  spec.family = Family::InvWishart;
  spec.sources = std::move(draws);
  spec.kappa = setup.kappa_tau;
  spec.wishart_prior = {MatrixSym::scalar(setup.v_tau), setup.m_tau};
  return spec;
}

// Combined trace over (beta0, sigma_u2, sigma_v2) from the two
// combination chains. sigma_v2 is the population mean of the per-source
// variances, i.e. the row mean of the psi columns; the scale parameter of
// their hierarchy is kept as phi_tau for reference.
ChainTrace ex3_merge(const ChainTrace& theta_chain, const ChainTrace& tau_chain,
                     int J) {
  ChainTrace out;
  out.burn_in = theta_chain.burn_in;
  out.names = {"beta0", "sigma_u2", "sigma_v2", "phi_tau"};
  const int rows = theta_chain.iterations();
  out.draws.resize(rows, 4);
  out.draws.col(0) = theta_chain.draws.col(theta_chain.col("mu"));
  out.draws.col(1) = theta_chain.draws.col(theta_chain.col("sigma2"));
  Vector psi_mean = Vector::Zero(rows);
  for (int j = 1; j <= J; ++j) {
    psi_mean += tau_chain.draws.col(tau_chain.col("psi_" + std::to_string(j)));
  }
  out.draws.col(2) = psi_mean / static_cast<double>(J);
  out.draws.col(3) = tau_chain.draws.col(tau_chain.col("phi"));
  out.wall_clock_seconds =
      theta_chain.wall_clock_seconds + tau_chain.wall_clock_seconds;
  return out;
}

// ---------------------------------------------------------------------
// Shared protocol driver

struct Ex1Like {
  // Hooks specializing the protocol per example.
  std::function<ChainTrace(const HierarchicalDataset&, int iters, int burn,
                           RandomStream&)>
      run_fhm;
  // Returns (trace with stage-one seconds already added, stage-one length).
  std::function<ChainTrace(const HierarchicalDataset&, int L, int iters,
                           int burn, std::uint64_t salt, RandomStream&)>
      run_mba_full;
  // Stage-one pilot: returns draws for RL inspection of every column.
  std::function<std::vector<SourceDraws>(const HierarchicalDataset&, int L,
                                         std::uint64_t seed)>
      pilot_stage_one;
  std::vector<std::string> fhm_params;
  std::vector<std::string> mba_params;
  std::map<std::string, double> truths;
};

ExperimentResult run_protocol(const Ex1Like& hooks,
                              const std::vector<HierarchicalDataset>& pilot_data,
                              const std::vector<HierarchicalDataset>& rep_data,
                              std::uint64_t seed, const RLSettings& rl,
                              const MethodChoice& methods) {
  RandomStream base(seed);
  ExperimentResult result;

  RunLengths fhm_len, mba_len;
  int stage_one_L = 0;

  for (std::size_t p = 0; p < pilot_data.size(); ++p) {
    const auto& ds = pilot_data[p];
    if (methods.fhm) {
      RandomStream rng = base.reseeded(2000 + p);
      ChainTrace tr = hooks.run_fhm(ds, rl.pilot_iters, rl.pilot_burn, rng);
      for (const auto& name : hooks.fhm_params) {
        rl_update(fhm_len, tr.retained(name), rl);
      }
    }
    if (methods.mba) {
      auto draws = hooks.pilot_stage_one(ds, rl.pilot_iters,
                                         base.reseeded(3000 + p).seed());
      RunLengths s1;
      for (const auto& sd : draws) {
        for (int c = 0; c < sd.draws.cols(); ++c) {
          rl_update(s1, sd.draws.col(c), rl);
        }
      }
      stage_one_L = std::max(stage_one_L, s1.total());
      RandomStream rng = base.reseeded(4000 + p);
      ChainTrace tr = hooks.run_mba_full(ds, rl.pilot_iters, rl.pilot_iters,
                                         rl.pilot_burn, p, rng);
      for (const auto& name : hooks.mba_params) {
        rl_update(mba_len, tr.retained(name), rl);
      }
    }
  }

  std::vector<ReplicateRecord> fhm_records, mba_records;
  fhm_records.reserve(rep_data.size());
  mba_records.reserve(rep_data.size());
  for (std::size_t rep = 0; rep < rep_data.size(); ++rep) {
    const auto& ds = rep_data[rep];
    if (methods.fhm) {
      RandomStream rng = base.reseeded(200000 + rep);
      ChainTrace tr = hooks.run_fhm(ds, fhm_len.total(), fhm_len.burn_in, rng);
      fhm_records.push_back(summarize_replicate(tr, hooks.truths));
    }
    if (methods.mba) {
      RandomStream rng = base.reseeded(400000 + rep);
      ChainTrace tr = hooks.run_mba_full(ds, stage_one_L, mba_len.total(),
                                         mba_len.burn_in, 100000 + rep, rng);
      mba_records.push_back(summarize_replicate(tr, hooks.truths));
    }
  }

  if (methods.fhm) {
    MethodResult mr;
    mr.report = report_from_records(std::move(fhm_records), hooks.truths, "fhm");
    mr.lengths = fhm_len;
    result.methods.emplace("fhm", std::move(mr));
  }
  if (methods.mba) {
    MethodResult mr;
    mr.report = report_from_records(std::move(mba_records), hooks.truths, "mba");
    mr.lengths = mba_len;
    mr.stage_one_draws = stage_one_L;
    result.methods.emplace("mba", std::move(mr));
  }
  return result;
}

Ex1Like ex1_hooks(const Example1Setup& setup, std::uint64_t base_seed) {
  Ex1Like h;
  h.fhm_params = {"mu", "sigma2"};
  h.mba_params = {"mu", "sigma2"};
  h.truths = {{"mu", setup.mu}, {"sigma2", setup.sigma2}};
  h.run_fhm = [setup](const HierarchicalDataset& ds, int iters, int burn,
                      RandomStream& rng) {
    return fhm_example1(ds, setup.prior, iters, burn, rng);
  };
  h.pilot_stage_one = [setup](const HierarchicalDataset& ds, int L,
                              std::uint64_t seed) {
    return ex1_stage_one(ds, setup, L, seed).draws;
  };
  h.run_mba_full = [setup, base_seed](const HierarchicalDataset& ds, int L,
                                      int iters, int burn, std::uint64_t salt,
                                      RandomStream& rng) {
    auto s1 = ex1_stage_one(ds, setup, L,
                            RandomStream(base_seed).reseeded(300000 + salt).seed());
    ChainTrace tr = run_mba(ex1_spec(std::move(s1.draws), setup), iters, burn, rng);
    tr.wall_clock_seconds += s1.wall_seconds;
    return tr;
  };
  return h;
}

}  // namespace

std::vector<ExperimentReport> ExperimentResult::reports() const {
  std::vector<ExperimentReport> out;
  for (const auto& [name, mr] : methods) out.push_back(mr.report);
  return out;
}

ExperimentResult run_example1(const Example1Setup& setup,
                              const MethodChoice& methods) {
  RandomStream base(setup.seed);
  std::vector<HierarchicalDataset> pilot_data, rep_data;
  for (int p = 0; p < setup.rl.pilots; ++p) {
    RandomStream rng = base.reseeded(1000 + p);
    pilot_data.push_back(
        generate_example1(setup.J, setup.n_j, setup.mu, setup.sigma2, rng));
  }
  for (int rep = 0; rep < setup.replicates; ++rep) {
    RandomStream rng = base.reseeded(100000 + rep);
    rep_data.push_back(
        generate_example1(setup.J, setup.n_j, setup.mu, setup.sigma2, rng));
  }
  return run_protocol(ex1_hooks(setup, setup.seed), pilot_data, rep_data,
                      setup.seed, setup.rl, methods);
}

namespace {

// Replicates share one configuration of source covariances and differ only
// in the observations. With the scale redrawn per replicate the MSE of any
// estimator is dominated by the spread of sum_j 1/Theta_j (a heavy-tailed
// population quantity), not by the inference being evaluated.
HierarchicalDataset ex2_dataset_fixed_theta(const std::vector<double>& theta,
                                            int n_j, double phi_true,
                                            double kappa_true,
                                            RandomStream& rng) {
  HierarchicalDataset ds;
  const int J = static_cast<int>(theta.size());
  for (int j = 1; j <= J; ++j) {
    SourceData s;
    s.source_id = j;
    const double sd = std::sqrt(theta[j - 1]);
    s.observations.reserve(n_j);
    for (int i = 0; i < n_j; ++i) {
      Vector x(1);
      x(0) = sd * rng.normal();
      s.observations.push_back(std::move(x));
    }
    ds.sources.push_back(std::move(s));
    ds.meta["theta_" + std::to_string(j)] = theta[j - 1];
  }
  ds.meta["phi"] = phi_true;
  ds.meta["kappa"] = kappa_true;
  return ds;
}

}  // namespace

std::map<int, ExperimentResult> run_example2_grid(const Example2Setup& setup,
                                                  const std::vector<int>& n_js,
                                                  const MethodChoice& methods) {
  if (n_js.empty()) throw InputError("run_example2_grid: empty grid");
  const int n_max = *std::max_element(n_js.begin(), n_js.end());
  RandomStream base(setup.seed);
  const MatrixSym phi_true = MatrixSym::scalar(setup.phi_true);

  RandomStream theta_rng = base.reseeded(999);
  std::vector<double> theta_true(setup.J);
  for (auto& t : theta_true) {
    t = sample_inv_wishart(phi_true, setup.kappa_true, theta_rng).value();
  }

  std::vector<HierarchicalDataset> pilot_full, rep_full;
  for (int p = 0; p < setup.rl.pilots; ++p) {
    RandomStream rng = base.reseeded(1000 + p);
    pilot_full.push_back(ex2_dataset_fixed_theta(theta_true, n_max,
                                                 setup.phi_true,
                                                 setup.kappa_true, rng));
  }
  for (int rep = 0; rep < setup.replicates; ++rep) {
    RandomStream rng = base.reseeded(100000 + rep);
    rep_full.push_back(ex2_dataset_fixed_theta(theta_true, n_max,
                                               setup.phi_true,
                                               setup.kappa_true, rng));
  }

  std::map<int, ExperimentResult> out;
  for (int n : n_js) {
    std::vector<HierarchicalDataset> pilot_data, rep_data;
    for (const auto& ds : pilot_full) pilot_data.push_back(slice_obs(ds, n));
    for (const auto& ds : rep_full) rep_data.push_back(slice_obs(ds, n));

    Ex1Like h;
    h.fhm_params = {"phi"};
    h.mba_params = {"phi"};
    h.truths = {{"phi", setup.phi_true}};
    h.run_fhm = [setup](const HierarchicalDataset& ds, int iters, int burn,
                        RandomStream& rng) {
      return fhm_example2(ds, setup.prior, iters, burn, rng);
    };
    h.pilot_stage_one = [setup](const HierarchicalDataset& ds, int L,
                                std::uint64_t seed) {
      return ex2_stage_one(ds, setup, L, seed).draws;
    };
    const std::uint64_t base_seed = setup.seed;
    h.run_mba_full = [setup, base_seed](const HierarchicalDataset& ds, int L,
                                        int iters, int burn, std::uint64_t salt,
                                        RandomStream& rng) {
      auto s1 = ex2_stage_one(
          ds, setup, L, RandomStream(base_seed).reseeded(300000 + salt).seed());
      ChainTrace tr =
          run_mba(ex2_spec(std::move(s1.draws), setup), iters, burn, rng);
      tr.wall_clock_seconds += s1.wall_seconds;
      return tr;
    };
    out.emplace(n, run_protocol(h, pilot_data, rep_data,
                                setup.seed + static_cast<std::uint64_t>(n),
                                setup.rl, methods));
  }
  return out;
}

std::map<int, ExperimentResult> run_example3_grid(const Example3Setup& setup,
                                                  const std::vector<int>& Js,
                                                  const MethodChoice& methods) {
  if (Js.empty()) throw InputError("run_example3_grid: empty grid");
  const int j_max = *std::max_element(Js.begin(), Js.end());
  RandomStream base(setup.seed);

  std::vector<HierarchicalDataset> pilot_full, rep_full;
  for (int p = 0; p < setup.rl.pilots; ++p) {
    RandomStream rng = base.reseeded(1000 + p);
    pilot_full.push_back(generate_example3(j_max, setup.n_j, setup.beta0,
                                           setup.sigma_u2, setup.sigma_v2, rng));
  }
  for (int rep = 0; rep < setup.replicates; ++rep) {
    RandomStream rng = base.reseeded(100000 + rep);
    rep_full.push_back(generate_example3(j_max, setup.n_j, setup.beta0,
                                         setup.sigma_u2, setup.sigma_v2, rng));
  }

  std::map<int, ExperimentResult> out;
  for (int J : Js) {
    std::vector<HierarchicalDataset> pilot_data, rep_data;
    for (const auto& ds : pilot_full) pilot_data.push_back(slice_sources(ds, J));
    for (const auto& ds : rep_full) rep_data.push_back(slice_sources(ds, J));

    Ex1Like h;
    h.fhm_params = {"beta0", "sigma_u2", "sigma_v2"};
    h.mba_params = {"beta0", "sigma_u2", "sigma_v2"};
    h.truths = {{"beta0", setup.beta0},
                {"sigma_u2", setup.sigma_u2},
                {"sigma_v2", setup.sigma_v2}};
    h.run_fhm = [setup](const HierarchicalDataset& ds, int iters, int burn,
                        RandomStream& rng) {
      return fhm_example3(ds, setup.prior, iters, burn, rng);
    };
    h.pilot_stage_one = [setup](const HierarchicalDataset& ds, int L,
                                std::uint64_t seed) {
      auto s1 = ex3_stage_one(ds, setup, L, seed, seed + 1);
      std::vector<SourceDraws> all = std::move(s1.theta_draws);
      for (auto& sd : s1.tau_draws) all.push_back(std::move(sd));
      return all;
    };
    const std::uint64_t base_seed = setup.seed;
    h.run_mba_full = [setup, base_seed, J](const HierarchicalDataset& ds, int L,
                                           int iters, int burn,
                                           std::uint64_t salt,
                                           RandomStream& rng) {
      RandomStream seeder(base_seed);
      auto s1 = ex3_stage_one(ds, setup, L,
                              seeder.reseeded(300000 + salt).seed(),
                              seeder.reseeded(350000 + salt).seed());
      ChainTrace theta_chain = run_mba(
          ex3_theta_spec(std::move(s1.theta_draws), setup), iters, burn, rng);
      RandomStream rng_tau = rng.reseeded(7);
      ChainTrace tau_chain = run_mba(
          ex3_tau_spec(std::move(s1.tau_draws), setup), iters, burn, rng_tau);
      ChainTrace merged = ex3_merge(theta_chain, tau_chain, J);
      merged.wall_clock_seconds += s1.wall_seconds;
      return merged;
    };
    out.emplace(J, run_protocol(h, pilot_data, rep_data,
                                setup.seed + static_cast<std::uint64_t>(J),
                                setup.rl, methods));
  }
  return out;
}

std::vector<TimingRow> time_vs_sources(const Example1Setup& base,
                                       const std::vector<int>& Js,
                                       int replicates) {
  std::vector<TimingRow> rows;
  for (int J : Js) {
    Example1Setup setup = base;
    setup.J = J;
    setup.replicates = replicates;
    auto result = run_example1(setup);
    for (const auto& [name, mr] : result.methods) {
      rows.push_back({J, name, mr.report.avg_seconds});
    }
  }
  return rows;
}

std::vector<MseSeriesRow> mse_vs_samples(const Example3Setup& setup,
                                         const std::vector<long>& checkpoints) {
  auto results = run_example3_grid(setup, {setup.J});
  const auto& result = results.at(setup.J);
  std::vector<MseSeriesRow> rows;

  const auto& fhm = result.methods.at("fhm");
  // Rebuild running means from the replicate traces.
  Example3Setup s2 = setup;
  RandomStream base(setup.seed);
  std::vector<ChainTrace> traces;
  for (int rep = 0; rep < setup.replicates; ++rep) {
    RandomStream rng = base.reseeded(100000 + rep);
    auto ds = generate_example3(setup.J, setup.n_j, setup.beta0, setup.sigma_u2,
                                setup.sigma_v2, rng);
    RandomStream chain_rng = RandomStream(setup.seed + setup.J)
                                 .reseeded(200000 + rep);
    traces.push_back(fhm_example3(ds, setup.prior, fhm.lengths.total(),
                                  fhm.lengths.burn_in, chain_rng));
  }
  const std::map<std::string, double> truths = {
      {"beta0", setup.beta0},
      {"sigma_u2", setup.sigma_u2},
      {"sigma_v2", setup.sigma_v2}};
  for (long c : checkpoints) {
    const long n_post = fhm.lengths.post;
    const long use = std::min(c, n_post);
    double mse = 0.0;
    for (const auto& tr : traces) {
      for (const auto& [name, truth] : truths) {
        const double mean = tr.retained(name).head(use).mean();
        mse += (mean - truth) * (mean - truth);
      }
    }
    mse /= static_cast<double>(traces.size()) * truths.size();
    const double frac = static_cast<double>(fhm.lengths.burn_in + use) /
                        fhm.lengths.total();
    rows.push_back({"fhm", use, fhm.report.avg_seconds * frac, mse});
  }

  const auto& mba = result.methods.at("mba");
  MseSeriesRow mba_row;
  mba_row.method = "mba";
  mba_row.accumulated_samples = mba.lengths.post;
  mba_row.mean_seconds = mba.report.avg_seconds;
  mba_row.mse = mba.report.mse_mean();
  rows.push_back(mba_row);
  return rows;
}

}  // namespace hiermc
