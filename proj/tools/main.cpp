// Command-line driver: dataset simulation, replicated experiment runs,
// combination of externally supplied posterior draws, and the retail case
// study. One JSON config describes one run; outputs land in --out.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "hiermc/experiments.hpp"
#include "hiermc/io.hpp"
#include "hiermc/parallel.hpp"
#include "hiermc/retail.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hiermc;

namespace {

constexpr const char* kVersion = "0.1.0";

struct CliOptions {
  std::string config_path;
  std::string out_dir = "out";
  int workers = -1;                    // -1: take from config
  std::optional<std::uint64_t> seed;   // overrides config
  std::vector<int> stores;             // retail subset
};

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config: " + path);
  try {
    json j;
    in >> j;
    return j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
}

// Field accessors with field-level messages.
const json& require_field(const json& j, const std::string& field) {
  if (!j.contains(field)) {
    throw SchemaError("config error: field '" + field + "': missing");
  }
  return j.at(field);
}

double require_number(const json& j, const std::string& field) {
  const json& v = require_field(j, field);
  if (!v.is_number()) {
    throw SchemaError("config error: field '" + field + "': must be a number");
  }
  return v.get<double>();
}

long require_integer(const json& j, const std::string& field) {
  const json& v = require_field(j, field);
  if (!v.is_number_integer()) {
    throw SchemaError("config error: field '" + field + "': must be an integer");
  }
  return v.get<long>();
}

double number_or(const json& j, const std::string& field, double fallback) {
  if (!j.contains(field)) return fallback;
  if (!j.at(field).is_number()) {
    throw SchemaError("config error: field '" + field + "': must be a number");
  }
  return j.at(field).get<double>();
}

long integer_or(const json& j, const std::string& field, long fallback) {
  if (!j.contains(field)) return fallback;
  if (!j.at(field).is_number_integer()) {
    throw SchemaError("config error: field '" + field + "': must be an integer");
  }
  return j.at(field).get<long>();
}

int require_min_int(const json& j, const std::string& field, long min_value) {
  const long v = require_integer(j, field);
  if (v < min_value) {
    throw SchemaError("config error: field '" + field + "': must be >= " +
                      std::to_string(min_value));
  }
  return static_cast<int>(v);
}

RLSettings parse_rl(const json& j) {
  RLSettings rl;
  if (!j.contains("rl")) return rl;
  const json& r = j.at("rl");
  rl.q = number_or(r, "q", rl.q);
  rl.r = number_or(r, "r", rl.r);
  rl.s = number_or(r, "s", rl.s);
  rl.pilots = static_cast<int>(integer_or(r, "pilots", rl.pilots));
  rl.pilot_iters = static_cast<int>(integer_or(r, "pilot_iters", rl.pilot_iters));
  rl.pilot_burn = static_cast<int>(integer_or(r, "pilot_burn", rl.pilot_burn));
  return rl;
}

void write_manifest(const fs::path& out_dir, const std::string& command,
                    const std::string& config_path, std::uint64_t seed) {
  json m;
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(file_hash(config_path)));
  m["config_hash"] = buf;
  m["command"] = command;
  m["seed"] = seed;
  m["version"] = kVersion;
  std::ofstream out(out_dir / "manifest.json");
  out << m.dump(2) << '\n';
}

std::uint64_t effective_seed(const json& cfg, const CliOptions& opt) {
  if (opt.seed) return *opt.seed;
  if (cfg.contains("seed")) {
    if (!cfg.at("seed").is_number_unsigned() && !cfg.at("seed").is_number_integer()) {
      throw SchemaError("config error: field 'seed': must be an integer");
    }
    return cfg.at("seed").get<std::uint64_t>();
  }
  return 1;
}

int effective_workers(const json& cfg, const CliOptions& opt) {
  if (opt.workers >= 0) return opt.workers;
  return static_cast<int>(integer_or(cfg, "workers", 0));
}

// ---------------------------------------------------------------------
// simulate

void simulate_one(const json& cfg, const std::string& example,
                  const std::string& name, int n_j, const fs::path& out_dir,
                  std::uint64_t seed, std::uint64_t stream) {
  RandomStream rng(seed, stream);
  HierarchicalDataset ds;
  if (example == "example1") {
    const json& truth = require_field(cfg, "truth");
    ds = generate_example1(require_min_int(cfg, "J", 2), n_j,
                           require_number(truth, "mu"),
                           require_number(truth, "sigma2"), rng);
  } else if (example == "example2") {
    const json& truth = require_field(cfg, "truth");
    ds = generate_example2(require_min_int(cfg, "J", 2), n_j, 1,
                           MatrixSym::scalar(require_number(truth, "phi")),
                           require_number(truth, "kappa"), rng);
  } else if (example == "example3") {
    const json& truth = require_field(cfg, "truth");
    ds = generate_example3(require_min_int(cfg, "J", 2), n_j,
                           require_number(truth, "beta0"),
                           require_number(truth, "sigma_u2"),
                           require_number(truth, "sigma_v2"), rng);
  } else {
    throw SchemaError("config error: field 'example': unknown value '" +
                      example + "'");
  }
  write_dataset_csv(out_dir / (name + ".csv"), ds);
  write_meta_json(out_dir / (name + "_meta.json"), ds, seed);
}

int cmd_simulate(const CliOptions& opt) {
  const json cfg = load_config(opt.config_path);
  const fs::path out_dir(opt.out_dir);
  fs::create_directories(out_dir);
  const std::uint64_t seed = effective_seed(cfg, opt);
  const std::string example =
      require_field(cfg, "example").get<std::string>();
  const std::string name = cfg.value("name", example);

  if (example == "retail") {
    const int stores = require_min_int(cfg, "stores", 2);
    const int weeks = require_min_int(cfg, "weeks", 1);
    RandomStream rng(seed);
    RetailTruth truth;
    auto data = generate_retail(stores, weeks, rng, &truth);
    write_retail_csv(out_dir / (name + ".csv"), data);
    json meta;
    meta["seed"] = seed;
    meta["mu_true"] = {truth.mu(0), truth.mu(1), truth.mu(2)};
    std::ofstream mout(out_dir / (name + "_meta.json"));
    mout << meta.dump(2) << '\n';
  } else if (cfg.contains("grid")) {
    const json& grid = require_field(cfg.at("grid"), "n_j");
    if (!grid.is_array() || grid.empty()) {
      throw SchemaError("config error: field 'grid.n_j': must be a non-empty array");
    }
    int idx = 0;
    for (const auto& v : grid) {
      if (!v.is_number_integer() || v.get<long>() < 1) {
        throw SchemaError("config error: field 'grid.n_j': entries must be positive integers");
      }
      const int n = v.get<int>();
      simulate_one(cfg, example, name + "_n" + std::to_string(n), n, out_dir,
                   seed, static_cast<std::uint64_t>(idx++));
    }
  } else {
    simulate_one(cfg, example, name, require_min_int(cfg, "n_j", 1), out_dir,
                 seed, 0);
  }
  write_manifest(out_dir, "simulate", opt.config_path, seed);
  std::cout << "wrote datasets to " << out_dir.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------
// run

Example1Setup parse_example1(const json& cfg, std::uint64_t seed, int workers) {
  Example1Setup s;
  s.J = require_min_int(cfg, "J", 2);
  s.n_j = require_min_int(cfg, "n_j", 1);
  const json& truth = require_field(cfg, "truth");
  s.mu = require_number(truth, "mu");
  s.sigma2 = require_number(truth, "sigma2");
  if (cfg.contains("priors")) {
    const json& p = cfg.at("priors");
    s.prior.mu0 = number_or(p, "mu0", s.prior.mu0);
    s.prior.sigma0_2 = number_or(p, "sigma0_2", s.prior.sigma0_2);
    s.prior.omega = number_or(p, "omega", s.prior.omega);
    s.prior.k = number_or(p, "k", s.prior.k);
  }
  if (cfg.contains("stage_one")) {
    const json& p = cfg.at("stage_one");
    s.stage1_mu = number_or(p, "mu", s.stage1_mu);
    s.stage1_sigma2 = number_or(p, "sigma2", s.stage1_sigma2);
  }
  s.replicates = require_min_int(cfg, "replicates", 1);
  s.seed = seed;
  s.workers = workers;
  s.rl = parse_rl(cfg);
  return s;
}

Example2Setup parse_example2(const json& cfg, std::uint64_t seed, int workers) {
  Example2Setup s;
  s.J = require_min_int(cfg, "J", 2);
  s.n_j = static_cast<int>(integer_or(cfg, "n_j", 5));
  const json& truth = require_field(cfg, "truth");
  s.phi_true = require_number(truth, "phi");
  s.kappa_true = require_number(truth, "kappa");
  s.prior.v = MatrixSym::scalar(1e6);  // weak scale unless overridden
  if (cfg.contains("priors")) {
    const json& p = cfg.at("priors");
    s.prior.v = MatrixSym::scalar(number_or(p, "v", 1e6));
    s.prior.m = number_or(p, "m", s.prior.m);
    s.prior.kappa = number_or(p, "kappa", s.prior.kappa);
  }
  if (cfg.contains("stage_one")) {
    const json& p = cfg.at("stage_one");
    s.stage1_phi = number_or(p, "phi", s.stage1_phi);
    s.stage1_kappa = number_or(p, "kappa", s.stage1_kappa);
  }
  s.replicates = require_min_int(cfg, "replicates", 1);
  s.seed = seed;
  s.workers = workers;
  s.rl = parse_rl(cfg);
  return s;
}

Example3Setup parse_example3(const json& cfg, std::uint64_t seed, int workers) {
  Example3Setup s;
  s.J = require_min_int(cfg, "J", 2);
  s.n_j = require_min_int(cfg, "n_j", 1);
  const json& truth = require_field(cfg, "truth");
  s.beta0 = require_number(truth, "beta0");
  s.sigma_u2 = require_number(truth, "sigma_u2");
  s.sigma_v2 = require_number(truth, "sigma_v2");
  s.prior.beta0_var = 1e4;  // weak location prior unless overridden
  if (cfg.contains("priors")) {
    const json& p = cfg.at("priors");
    s.prior.beta0_mean = number_or(p, "beta0_mean", s.prior.beta0_mean);
    s.prior.beta0_var = number_or(p, "beta0_var", s.prior.beta0_var);
    s.prior.omega_u = number_or(p, "omega_u", s.prior.omega_u);
    s.prior.k_u = number_or(p, "k_u", s.prior.k_u);
    s.prior.omega_v = number_or(p, "omega_v", s.prior.omega_v);
    s.prior.k_v = number_or(p, "k_v", s.prior.k_v);
    s.v_tau = number_or(p, "v_tau", s.v_tau);
    s.m_tau = number_or(p, "m_tau", s.m_tau);
    s.kappa_tau = number_or(p, "kappa_tau", s.kappa_tau);
  }
  if (cfg.contains("stage_one")) {
    const json& p = cfg.at("stage_one");
    s.stage1_beta0 = number_or(p, "beta0", s.stage1_beta0);
    s.stage1_sigma_u2 = number_or(p, "sigma_u2", s.stage1_sigma_u2);
    s.stage1_sigma_v2 = number_or(p, "sigma_v2", s.stage1_sigma_v2);
    s.stage1_kappa = number_or(p, "kappa", s.stage1_kappa);
  }
  s.replicates = require_min_int(cfg, "replicates", 1);
  s.seed = seed;
  s.workers = workers;
  s.rl = parse_rl(cfg);
  return s;
}

MethodChoice parse_methods(const json& cfg) {
  MethodChoice m;
  if (!cfg.contains("methods")) return m;
  const json& arr = cfg.at("methods");
  if (!arr.is_array() || arr.empty()) {
    throw SchemaError("config error: field 'methods': must be a non-empty array");
  }
  m.fhm = false;
  m.mba = false;
  for (const auto& v : arr) {
    const std::string name = v.get<std::string>();
    if (name == "fhm") {
      m.fhm = true;
    } else if (name == "mba") {
      m.mba = true;
    } else {
      throw SchemaError("config error: field 'methods': unknown method '" +
                        name + "'");
    }
  }
  return m;
}

void append_reports(std::vector<ExperimentReport>& all,
                    const ExperimentResult& result, const std::string& suffix) {
  for (auto report : result.reports()) {
    if (!suffix.empty()) report.method += suffix;
    all.push_back(std::move(report));
  }
}

int cmd_run(const CliOptions& opt) {
  const json cfg = load_config(opt.config_path);
  const fs::path out_dir(opt.out_dir);
  fs::create_directories(out_dir);
  const std::uint64_t seed = effective_seed(cfg, opt);
  const int workers = effective_workers(cfg, opt);
  const std::string example = require_field(cfg, "example").get<std::string>();
  const MethodChoice methods = parse_methods(cfg);

  if (cfg.contains("dataset")) {
    const std::string ds_path = cfg.at("dataset").get<std::string>();
    if (!fs::exists(ds_path)) {
      throw ConfigError("dataset not found: " + ds_path);
    }
  }

  std::vector<ExperimentReport> all;
  if (example == "example1") {
    Example1Setup setup = parse_example1(cfg, seed, workers);
    if (cfg.contains("series") && cfg.at("series").contains("time_vs_J")) {
      const auto Js = cfg.at("series").at("time_vs_J").get<std::vector<int>>();
      const int reps = static_cast<int>(
          integer_or(cfg.at("series"), "replicates", 20));
      auto rows = time_vs_sources(setup, Js, reps);
      std::ofstream s(out_dir / "time_vs_sources.csv");
      s << "J,method,mean_seconds\n";
      for (const auto& r : rows) {
        s << r.J << ',' << r.method << ',' << format_double(r.mean_seconds)
          << '\n';
      }
    }
    append_reports(all, run_example1(setup, methods), "");
  } else if (example == "example2") {
    Example2Setup setup = parse_example2(cfg, seed, workers);
    std::vector<int> grid = {setup.n_j};
    if (cfg.contains("grid")) {
      grid = require_field(cfg.at("grid"), "n_j").get<std::vector<int>>();
    }
    for (const auto& [n, result] : run_example2_grid(setup, grid, methods)) {
      append_reports(all, result, "_n" + std::to_string(n));
    }
  } else if (example == "example3") {
    Example3Setup setup = parse_example3(cfg, seed, workers);
    std::vector<int> grid = {setup.J};
    if (cfg.contains("grid")) {
      grid = require_field(cfg.at("grid"), "J").get<std::vector<int>>();
    }
    for (const auto& [J, result] : run_example3_grid(setup, grid, methods)) {
      append_reports(all, result, "_J" + std::to_string(J));
    }
    if (cfg.contains("mse_series_checkpoints")) {
      const auto checkpoints =
          cfg.at("mse_series_checkpoints").get<std::vector<long>>();
      auto rows = mse_vs_samples(setup, checkpoints);
      std::ofstream s(out_dir / "mse_vs_samples.csv");
      s << "method,accumulated_samples,mean_seconds,mse\n";
      for (const auto& r : rows) {
        s << r.method << ',' << r.accumulated_samples << ','
          << format_double(r.mean_seconds) << ',' << format_double(r.mse)
          << '\n';
      }
    }
  } else {
    throw SchemaError("config error: field 'example': unknown value '" +
                      example + "'");
  }

  write_report_csv(out_dir / "report.csv", all);
  write_report_json(out_dir / "report.json", all);
  write_manifest(out_dir, "run", opt.config_path, seed);
  std::cout << "wrote report for " << all.size() << " method rows to "
            << out_dir.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------
// combine

int cmd_combine(const CliOptions& opt) {
  const json cfg = load_config(opt.config_path);
  const fs::path out_dir(opt.out_dir);
  fs::create_directories(out_dir);
  const std::uint64_t seed = effective_seed(cfg, opt);

  const std::string family = require_field(cfg, "family").get<std::string>();
  const std::string inputs = require_field(cfg, "inputs").get<std::string>();

  std::vector<SourceDraws> sources;
  if (fs::is_directory(inputs)) {
    sources = read_draws_dir(inputs);
  } else if (fs::path(inputs).extension() == ".json") {
    sources = read_summaries_json(inputs);
  } else {
    sources = read_draws_csv(inputs);
  }
  if (cfg.contains("nu")) {
    const double nu = require_number(cfg, "nu");
    for (auto& s : sources) s.nu = nu;
  }

  SubstituteSpec spec;
  spec.sources = std::move(sources);
  const json& hp = require_field(cfg, "hyperprior");
  if (family == "mvnormal") {
    spec.family = Family::MVNormal;
    const int q = spec.sources.front().dim();
    Vector mu0 = Vector::Constant(q, number_or(hp, "mu0", 0.0));
    spec.normal_prior.mu0 = mu0;
    spec.normal_prior.sigma0 = repair_spd(
        Matrix::Identity(q, q) * number_or(hp, "sigma0", 1.0));
    spec.normal_prior.omega = repair_spd(
        Matrix::Identity(q, q) * number_or(hp, "omega", 1.0));
    spec.normal_prior.k = number_or(hp, "k", q + 3.0);
  } else if (family == "invwishart") {
    spec.family = Family::InvWishart;
    const int q = spec.sources.front().dim();
    const int p = static_cast<int>(std::lround(std::sqrt(double(q))));
    if (p * p != q) {
      throw IngestionError("invwishart family needs square draw dimensionality");
    }
    spec.wishart_prior.v = repair_spd(
        Matrix::Identity(p, p) * number_or(hp, "v", 1e6));
    spec.wishart_prior.m = number_or(hp, "m", p + 2.0);
    spec.kappa = require_number(cfg, "kappa");
  } else {
    throw SchemaError("config error: field 'family': unknown value '" + family +
                      "'");
  }

  const int iters = require_min_int(cfg, "iters", 2);
  const int burn = static_cast<int>(integer_or(cfg, "burn_in", iters / 4));
  RandomStream rng(seed);
  ChainTrace trace = run_mba(spec, iters, burn, rng);
  write_trace_csv(out_dir / "trace.csv", trace);

  json summary = json::object();
  for (const auto& name : trace.names) {
    Vector col = trace.retained(name);
    std::vector<double> vals(col.data(), col.data() + col.size());
    auto ci = credible_interval(vals, 0.95);
    const double mean = col.mean();
    const double sd = std::sqrt(
        (col.array() - mean).square().sum() / std::max<long>(col.size() - 1, 1));
    summary[name] = {{"mean", mean}, {"sd", sd}, {"ci_lo", ci.lo}, {"ci_hi", ci.hi}};
  }
  std::ofstream sout(out_dir / "posterior_summary.json");
  sout << summary.dump(2) << '\n';
  write_manifest(out_dir, "combine", opt.config_path, seed);
  std::cout << "combined " << spec.sources.size() << " sources; trace in "
            << out_dir.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------
// retail

int cmd_retail(const CliOptions& opt) {
  const json cfg = load_config(opt.config_path);
  const fs::path out_dir(opt.out_dir);
  fs::create_directories(out_dir);
  const std::uint64_t seed = effective_seed(cfg, opt);
  const int workers = effective_workers(cfg, opt);

  std::vector<std::vector<RetailRecord>> stores;
  if (cfg.contains("data")) {
    const std::string path = cfg.at("data").get<std::string>();
    if (!fs::exists(path)) throw ConfigError("retail data not found: " + path);
    auto ing = read_retail_csv(path);
    stores = std::move(ing.stores);
    std::cout << "display convention: "
              << (ing.percent_scale_detected ? "percent (0-100), rescaled"
                                             : "fraction (0-1)")
              << "\n";
  } else if (cfg.contains("synthetic")) {
    const json& syn = cfg.at("synthetic");
    RandomStream rng(static_cast<std::uint64_t>(integer_or(syn, "seed", 7)));
    stores = generate_retail(require_min_int(syn, "stores", 2),
                             require_min_int(syn, "weeks", 1), rng);
  } else {
    throw SchemaError("config error: need either 'data' or 'synthetic'");
  }

  std::vector<int> subset = opt.stores;
  if (subset.empty() && cfg.contains("stores")) {
    subset = cfg.at("stores").get<std::vector<int>>();
  }
  if (!subset.empty()) {
    std::vector<std::vector<RetailRecord>> picked;
    for (int sid : subset) {
      bool found = false;
      for (const auto& s : stores) {
        if (!s.empty() && s.front().store_id == sid) {
          picked.push_back(s);
          found = true;
          break;
        }
      }
      if (!found) throw ConfigError("unknown store id " + std::to_string(sid));
    }
    stores = std::move(picked);
  }

  const int L = static_cast<int>(integer_or(cfg, "L", 1000));
  const int stage_burn = static_cast<int>(integer_or(cfg, "stage_burn_in", 1000));
  const int iters = static_cast<int>(integer_or(cfg, "iters", 2000));
  const int burn = static_cast<int>(integer_or(cfg, "burn_in", 1000));
  RetailPriors priors;

  TaskPlan plan;
  plan.base_seed = seed;
  plan.workers = workers;
  for (const auto& store : stores) {
    plan.tasks.push_back({store.front().store_id,
                          [&store, L, stage_burn, &priors](RandomStream& rng) {
                            return retail_stage_one(store, L, stage_burn, rng,
                                                    priors);
                          }});
  }
  auto stage1 = run_parallel(plan);

  RandomStream rng(seed + 1);
  ChainTrace trace = retail_mba(stage1.draws, priors, iters, burn, rng);
  trace.wall_clock_seconds += stage1.wall_seconds;
  write_trace_csv(out_dir / "mba_trace.csv", trace);

  json store_summary = json::array();
  for (std::size_t j = 0; j < stage1.draws.size(); ++j) {
    const auto& sd = stage1.draws[j];
    json item;
    item["store_id"] = sd.source_id;
    item["stage_one_acceptance"] = sd.acceptance_rate.value_or(0.0);
    item["stage_one_seconds"] = stage1.task_seconds[j];
    json beta = json::array();
    for (int a = 1; a <= 3; ++a) {
      const std::string col = "psi_" + std::to_string(sd.source_id) + "_" +
                              std::to_string(a);
      Vector v = trace.retained(col);
      beta.push_back({{"mean", v.mean()},
                      {"stage_one_mean", sd.mean_cache(a - 1)}});
    }
    item["beta"] = beta;
    store_summary.push_back(item);
  }
  std::ofstream sout(out_dir / "store_summary.json");
  sout << store_summary.dump(2) << '\n';

  if (cfg.value("baseline", false)) {
    RandomStream brng(seed + 2);
    ChainTrace baseline = retail_fhm_baseline(stores, priors, iters, burn, brng);
    write_trace_csv(out_dir / "baseline_trace.csv", baseline);
  }
  write_manifest(out_dir, "retail", opt.config_path, seed);
  std::cout << "retail run complete; outputs in " << out_dir.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical Bayesian inference by full-model Gibbs sampling "
               "or by combining independently sampled source posteriors"};
  app.require_subcommand(1);

  CliOptions opt;
  std::uint64_t seed_flag = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "JSON config path")->required();
    sub->add_option("--out", opt.out_dir, "output directory");
    sub->add_option("--workers", opt.workers, "worker count (0 = auto)");
    auto* s = sub->add_option("--seed", seed_flag, "seed override");
    s->each([&](const std::string&) { opt.seed = seed_flag; });
  };

  auto* simulate = app.add_subcommand("simulate", "generate synthetic datasets");
  add_common(simulate);
  auto* run = app.add_subcommand("run", "replicated experiment runs");
  add_common(run);
  auto* combine = app.add_subcommand("combine",
                                     "combine externally sampled posteriors");
  add_common(combine);
  auto* retail = app.add_subcommand("retail", "retail case study");
  add_common(retail);
  retail->add_option("--stores", opt.stores, "subset of store ids");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return cmd_simulate(opt);
    if (run->parsed()) return cmd_run(opt);
    if (combine->parsed()) return cmd_combine(opt);
    if (retail->parsed()) return cmd_retail(opt);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
