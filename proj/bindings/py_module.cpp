// Python bindings for the main operations: distribution kernels, data
// generators, both sampling schemes, the combination step and the
// diagnostics. Matrices cross the boundary as numpy arrays.

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hiermc/diagnostics.hpp"
#include "hiermc/distributions.hpp"
#include "hiermc/experiments.hpp"
#include "hiermc/fhm.hpp"
#include "hiermc/independent.hpp"
#include "hiermc/mba.hpp"
#include "hiermc/retail.hpp"

namespace py = pybind11;
using namespace hiermc;

namespace {

MatrixSym to_sym(const Matrix& m) { return MatrixSym(m); }

SubstituteSpec make_normal_spec(std::vector<SourceDraws> sources, double mu0,
                                double sigma0, double omega, double k) {
  SubstituteSpec spec;
  spec.family = Family::MVNormal;
  spec.sources = std::move(sources);
  const int q = spec.sources.empty() ? 1 : spec.sources.front().dim();
  spec.normal_prior.mu0 = Vector::Constant(q, mu0);
  spec.normal_prior.sigma0 = repair_spd(Matrix::Identity(q, q) * sigma0);
  spec.normal_prior.omega = repair_spd(Matrix::Identity(q, q) * omega);
  spec.normal_prior.k = k;
  return spec;
}

SubstituteSpec make_iw_spec(std::vector<SourceDraws> sources, double v,
                            double m, double kappa) {
  SubstituteSpec spec;
  spec.family = Family::InvWishart;
  spec.sources = std::move(sources);
  const int q = spec.sources.empty() ? 1 : spec.sources.front().dim();
  const int p = static_cast<int>(std::lround(std::sqrt(double(q))));
  spec.wishart_prior.v = repair_spd(Matrix::Identity(p, p) * v);
  spec.wishart_prior.m = m;
  spec.kappa = kappa;
  return spec;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Hierarchical Bayesian inference: full-model Gibbs sampling and "
            "combination of independently sampled source posteriors";

  py::register_exception<DefinitenessError>(m, "DefinitenessError");
  py::register_exception<DomainError>(m, "DomainError");
  py::register_exception<StuckChainError>(m, "StuckChainError");

  py::class_<RandomStream>(m, "RandomStream")
      .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed"),
           py::arg("stream_id") = 0)
      .def_property_readonly("seed", &RandomStream::seed)
      .def_property_readonly("stream_id", &RandomStream::stream_id)
      .def("substream", &RandomStream::substream)
      .def("uniform", &RandomStream::uniform)
      .def("normal", &RandomStream::normal);

  py::class_<SourceDraws>(m, "SourceDraws")
      .def_readonly("source_id", &SourceDraws::source_id)
      .def_readonly("draws", &SourceDraws::draws)
      .def_readonly("num_draws", &SourceDraws::num_draws)
      .def_property_readonly("mean",
                             [](const SourceDraws& s) { return s.mean_cache; })
      .def_property_readonly(
          "cov", [](const SourceDraws& s) { return s.cov_cache.entries(); })
      .def_readwrite("nu", &SourceDraws::nu)
      .def_readonly("acceptance_rate", &SourceDraws::acceptance_rate);

  py::class_<ChainTrace>(m, "ChainTrace")
      .def_readonly("names", &ChainTrace::names)
      .def_readonly("draws", &ChainTrace::draws)
      .def_readonly("burn_in", &ChainTrace::burn_in)
      .def_readonly("wall_clock_seconds", &ChainTrace::wall_clock_seconds)
      .def("retained", &ChainTrace::retained);

  py::class_<SourceData>(m, "SourceData")
      .def_readonly("source_id", &SourceData::source_id)
      .def_property_readonly("observations", [](const SourceData& s) {
        return s.observations;
      });

  py::class_<HierarchicalDataset>(m, "HierarchicalDataset")
      .def_readonly("sources", &HierarchicalDataset::sources)
      .def_readonly("meta", &HierarchicalDataset::meta);

  // Distribution kernels.
  m.def("sample_mvn",
        [](const Vector& mean, const Matrix& cov, RandomStream& rng) {
          return sample_mvn(mean, to_sym(cov), rng);
        },
        py::arg("mean"), py::arg("cov"), py::arg("rng"));
  m.def("logpdf_mvn",
        [](const Vector& x, const Vector& mean, const Matrix& cov) {
          return logpdf_mvn(x, mean, to_sym(cov));
        });
  m.def("sample_wishart",
        [](const Matrix& scale, double dof, RandomStream& rng) {
          return sample_wishart(to_sym(scale), dof, rng).entries();
        });
  m.def("sample_inv_wishart",
        [](const Matrix& scale, double dof, RandomStream& rng) {
          return sample_inv_wishart(to_sym(scale), dof, rng).entries();
        });
  m.def("logpdf_wishart", [](const Matrix& x, const Matrix& scale, double dof) {
    return logpdf_wishart(to_sym(x), to_sym(scale), dof);
  });
  m.def("logpdf_inv_wishart",
        [](const Matrix& x, const Matrix& scale, double dof) {
          return logpdf_inv_wishart(to_sym(x), to_sym(scale), dof);
        });
  m.def("sample_gamma", &sample_gamma, py::arg("shape"), py::arg("rate"),
        py::arg("rng"));
  m.def("logpdf_half_cauchy", &logpdf_half_cauchy, py::arg("x"),
        py::arg("scale"));

  // Model types and generators.
  m.def("summarize_draws", &summarize_draws, py::arg("source_id"),
        py::arg("draws"));
  m.def("generate_example1", &generate_example1, py::arg("J"), py::arg("n_j"),
        py::arg("mu"), py::arg("sigma2"), py::arg("rng"));
  m.def("generate_example2",
        [](int J, int n_j, int p, const Matrix& phi, double kappa,
           RandomStream& rng) {
          return generate_example2(J, n_j, p, to_sym(phi), kappa, rng);
        });
  m.def("generate_example3", &generate_example3, py::arg("J"), py::arg("n_j"),
        py::arg("beta0"), py::arg("sigma_u2"), py::arg("sigma_v2"),
        py::arg("rng"));

  // Full-model Gibbs samplers.
  py::class_<Example1Prior>(m, "Example1Prior")
      .def(py::init<>())
      .def_readwrite("mu0", &Example1Prior::mu0)
      .def_readwrite("sigma0_2", &Example1Prior::sigma0_2)
      .def_readwrite("omega", &Example1Prior::omega)
      .def_readwrite("k", &Example1Prior::k);
  m.def("fhm_example1", &fhm_example1, py::arg("data"), py::arg("prior"),
        py::arg("iters"), py::arg("burn_in"), py::arg("rng"));
  m.def("fhm_example2",
        [](const HierarchicalDataset& data, const Matrix& v, double mm,
           double kappa, int iters, int burn_in, RandomStream& rng) {
          Example2Prior prior{to_sym(v), mm, kappa};
          return fhm_example2(data, prior, iters, burn_in, rng);
        },
        py::arg("data"), py::arg("v"), py::arg("m"), py::arg("kappa"),
        py::arg("iters"), py::arg("burn_in"), py::arg("rng"));
  m.def("fhm_example3",
        [](const HierarchicalDataset& data, double beta0_mean, double beta0_var,
           double omega_u, double k_u, double omega_v, double k_v, int iters,
           int burn_in, RandomStream& rng) {
          Example3Prior prior{beta0_mean, beta0_var, omega_u, k_u, omega_v, k_v};
          return fhm_example3(data, prior, iters, burn_in, rng);
        },
        py::arg("data"), py::arg("beta0_mean") = 0.0,
        py::arg("beta0_var") = 1e4, py::arg("omega_u") = 1.0,
        py::arg("k_u") = 3.0, py::arg("omega_v") = 1.0, py::arg("k_v") = 3.0,
        py::arg("iters") = 2000, py::arg("burn_in") = 500, py::arg("rng"));

  // Stage-one samplers.
  m.def("indep_normal", &indep_normal, py::arg("source"), py::arg("mu"),
        py::arg("sigma2"), py::arg("L"), py::arg("rng"));
  m.def("indep_invwishart",
        [](const SourceData& source, const Matrix& phi, double kappa, int L,
           RandomStream& rng) {
          return indep_invwishart(source, to_sym(phi), kappa, L, rng);
        });
  m.def("indep_variance", &indep_variance, py::arg("source"), py::arg("center"),
        py::arg("sigma_v2"), py::arg("kappa"), py::arg("L"), py::arg("rng"));
  m.def("rw_metropolis",
        [](const std::function<double(const Vector&)>& logpost,
           const Vector& init, const Matrix& step_cov, int L, int burn_in,
           RandomStream& rng) {
          return rw_metropolis(logpost, init, to_sym(step_cov), L, burn_in, rng);
        },
        py::arg("logpost"), py::arg("init"), py::arg("step_cov"), py::arg("L"),
        py::arg("burn_in"), py::arg("rng"));

  // Combination step.
  m.def("scaled_loglik_mvn", &scaled_loglik_mvn, py::arg("psi"),
        py::arg("draws"));
  m.def("scaled_loglik_iw", &scaled_loglik_iw, py::arg("psi"), py::arg("draws"));
  m.def("mvn_full_conditional",
        [](const SourceDraws& draws, const Vector& mu, const Matrix& sigma) {
          auto r = mvn_full_conditional(draws, {mu, to_sym(sigma)});
          return py::make_tuple(r.mean, r.cov.entries());
        },
        py::arg("draws"), py::arg("mu"), py::arg("sigma"));
  m.def("iw_full_conditional",
        [](const SourceDraws& draws, const Matrix& phi, double kappa) {
          auto r = iw_full_conditional(draws, {to_sym(phi), kappa});
          return py::make_tuple(r.scale.entries(), r.dof);
        },
        py::arg("draws"), py::arg("phi"), py::arg("kappa"));
  m.def("run_mba_normal",
        [](std::vector<SourceDraws> sources, double mu0, double sigma0,
           double omega, double k, int iters, int burn_in, RandomStream& rng) {
          return run_mba(make_normal_spec(std::move(sources), mu0, sigma0,
                                          omega, k),
                         iters, burn_in, rng);
        },
        py::arg("sources"), py::arg("mu0") = 0.0, py::arg("sigma0") = 1.0,
        py::arg("omega") = 1.0, py::arg("k") = 3.0, py::arg("iters") = 2000,
        py::arg("burn_in") = 500, py::arg("rng"));
  m.def("run_mba_invwishart",
        [](std::vector<SourceDraws> sources, double v, double mm, double kappa,
           int iters, int burn_in, RandomStream& rng) {
          return run_mba(make_iw_spec(std::move(sources), v, mm, kappa), iters,
                         burn_in, rng);
        },
        py::arg("sources"), py::arg("v") = 1e6, py::arg("m") = 3.0,
        py::arg("kappa") = 3.0, py::arg("iters") = 2000,
        py::arg("burn_in") = 500, py::arg("rng"));

  // Diagnostics.
  py::class_<RafteryLewisResult>(m, "RafteryLewisResult")
      .def_readonly("burn_in", &RafteryLewisResult::burn_in)
      .def_readonly("n_required", &RafteryLewisResult::n_required)
      .def_readonly("thinning", &RafteryLewisResult::thinning)
      .def_readonly("n_min", &RafteryLewisResult::n_min)
      .def_readonly("dependence_factor",
                    &RafteryLewisResult::dependence_factor);
  m.def("raftery_lewis", &raftery_lewis, py::arg("chain"), py::arg("q") = 0.5,
        py::arg("r") = 0.05, py::arg("s") = 0.95);
  m.def("credible_interval",
        [](const std::vector<double>& chain, double level) {
          auto ci = credible_interval(chain, level);
          return py::make_tuple(ci.lo, ci.hi);
        },
        py::arg("chain"), py::arg("level") = 0.95);

  // Retail case study.
  m.def("retail_loglik",
        [](const Vector& beta, double log_r, const Matrix& records) {
          std::vector<RetailRecord> recs;
          for (int i = 0; i < records.rows(); ++i) {
            RetailRecord r;
            r.volume = records(i, 0);
            r.log_price = records(i, 1);
            r.display_pct = records(i, 2);
            recs.push_back(r);
          }
          return retail_loglik(beta, log_r, recs);
        },
        py::arg("beta"), py::arg("log_r"), py::arg("records"),
        "records: rows of (volume, log_price, display)");

#ifdef HIERMC_VERSION
  m.attr("__version__") = HIERMC_VERSION;
#else
  m.attr("__version__") = "dev";
#endif
}
