#include "hiermc/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hiermc {

namespace {

// Inverse standard normal CDF: Acklam's rational approximation refined by
// one Halley step against erfc, good to full double precision here.
double inv_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) throw InputError("inv_normal_cdf: p outside (0,1)");
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    double qq = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * qq + c[1]) * qq + c[2]) * qq + c[3]) * qq + c[4]) * qq + c[5]) /
        ((((d[0] * qq + d[1]) * qq + d[2]) * qq + d[3]) * qq + 1.0);
  } else if (p <= 1.0 - plow) {
    double qq = p - 0.5;
    double rr = qq * qq;
    x = (((((a[0] * rr + a[1]) * rr + a[2]) * rr + a[3]) * rr + a[4]) * rr + a[5]) * qq /
        (((((b[0] * rr + b[1]) * rr + b[2]) * rr + b[3]) * rr + b[4]) * rr + 1.0);
  } else {
    double qq = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * qq + c[1]) * qq + c[2]) * qq + c[3]) * qq + c[4]) * qq + c[5]) /
        ((((d[0] * qq + d[1]) * qq + d[2]) * qq + d[3]) * qq + 1.0);
  }
  // Halley refinement.
  const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
  x = x - u / (1.0 + 0.5 * x * u);
  return x;
}

struct Transitions {
  long n00 = 0, n01 = 0, n10 = 0, n11 = 0;
};

Transitions count_transitions(const std::vector<int>& z, int k) {
  Transitions t;
  for (std::size_t i = k; i < z.size(); i += k) {
    const int from = z[i - k];
    const int to = z[i];
    if (from == 0 && to == 0) ++t.n00;
    if (from == 0 && to == 1) ++t.n01;
    if (from == 1 && to == 0) ++t.n10;
    if (from == 1 && to == 1) ++t.n11;
  }
  return t;
}

// BIC comparison of second- versus first-order Markov dependence on the
// k-thinned indicator chain (negative favors first order).
double markov_bic(const std::vector<int>& z, int k) {
  long n[2][2][2] = {};
  long count = 0;
  for (std::size_t i = 2 * static_cast<std::size_t>(k); i < z.size(); i += k) {
    ++n[z[i - 2 * k]][z[i - k]][z[i]];
    ++count;
  }
  if (count < 8) return -1.0;  // too short to resist thinning further
  double g2 = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double nij_sum = n[i][j][0] + n[i][j][1];
      for (int l = 0; l < 2; ++l) {
        const double njl_sum = n[0][j][l] + n[1][j][l];
        const double nj_sum = static_cast<double>(n[0][j][0]) + n[0][j][1] +
                              n[1][j][0] + n[1][j][1];
        if (n[i][j][l] > 0 && nij_sum > 0 && njl_sum > 0 && nj_sum > 0) {
          const double expected = nij_sum * njl_sum / nj_sum;
          g2 += 2.0 * n[i][j][l] * std::log(n[i][j][l] / expected);
        }
      }
    }
  }
  return g2 - 2.0 * std::log(static_cast<double>(count));
}

}  // namespace

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw InputError("quantile: empty input");
  if (!(q >= 0.0 && q <= 1.0)) throw InputError("quantile: q outside [0,1]");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= values.size()) return values.back();
  const double frac = h - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

RafteryLewisResult raftery_lewis(const std::vector<double>& chain, double q,
                                 double r, double s) {
  if (!(q > 0.0 && q < 1.0)) throw InputError("raftery_lewis: q outside (0,1)");
  if (!(r > 0.0)) throw InputError("raftery_lewis: r must be positive");
  if (!(s > 0.0 && s < 1.0)) throw InputError("raftery_lewis: s outside (0,1)");

  const double z = inv_normal_cdf(0.5 * (1.0 + s));
  const long n_min = static_cast<long>(std::ceil(z * z * q * (1.0 - q) / (r * r)));
  if (static_cast<long>(chain.size()) < n_min) {
    throw NeedsLongerPilotError(
        n_min, "raftery_lewis: pilot chain of length " +
                   std::to_string(chain.size()) +
                   " is shorter than the minimum " + std::to_string(n_min));
  }

  const double u = quantile(chain, q);
  std::vector<int> ind(chain.size());
  long ones = 0;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    ind[i] = chain[i] <= u ? 1 : 0;
    ones += ind[i];
  }
  if (ones == 0 || ones == static_cast<long>(ind.size())) {
    throw InputError("raftery_lewis: quantile indicator has one state "
                     "(degenerate chain)");
  }

  const int k_max = std::max(1, static_cast<int>(ind.size() / 64));
  int k = 1;
  while (k < k_max && markov_bic(ind, k) >= 0.0) ++k;

  Transitions t = count_transitions(ind, k);
  double alpha = 0.0, beta = 0.0;
  for (;;) {
    if (t.n00 + t.n01 == 0 || t.n10 + t.n11 == 0) {
      if (k >= k_max) {
        throw InputError("raftery_lewis: indicator transitions degenerate");
      }
      ++k;
      t = count_transitions(ind, k);
      continue;
    }
    alpha = static_cast<double>(t.n01) / (t.n00 + t.n01);
    beta = static_cast<double>(t.n10) / (t.n10 + t.n11);
    if (alpha <= 0.0 || beta <= 0.0) {
      if (k >= k_max) {
        throw InputError("raftery_lewis: indicator transitions degenerate");
      }
      ++k;
      t = count_transitions(ind, k);
      continue;
    }
    break;
  }

  const double lambda = 1.0 - alpha - beta;
  const double eps = 0.001;
  long m_star = 1;
  if (std::abs(lambda) > 1e-12 && lambda > 0.0) {
    const double num = std::log(eps * (alpha + beta) / std::max(alpha, beta));
    m_star = static_cast<long>(std::ceil(num / std::log(lambda)));
    m_star = std::max<long>(m_star, 1);
  }
  const double zr = z / r;
  const double n_hat =
      alpha * beta * (2.0 - alpha - beta) / std::pow(alpha + beta, 3) * zr * zr;

  RafteryLewisResult out;
  out.thinning = k;
  out.burn_in = m_star * k;
  out.n_required = static_cast<long>(std::ceil(n_hat)) * k;
  out.n_min = n_min;
  out.dependence_factor =
      static_cast<double>(out.burn_in + out.n_required) / n_min;
  return out;
}

CredibleInterval credible_interval(const std::vector<double>& chain,
                                   double level) {
  if (chain.size() < 2) {
    throw InsufficientSamplesError("credible_interval: need at least 2 values");
  }
  if (!(level > 0.0 && level < 1.0)) {
    throw InputError("credible_interval: level outside (0,1)");
  }
  std::vector<double> sorted(chain);
  std::sort(sorted.begin(), sorted.end());
  const double tail = 0.5 * (1.0 - level);
  CredibleInterval ci;
  ci.lo = quantile(sorted, tail);
  ci.hi = quantile(sorted, 1.0 - tail);
  return ci;
}

double ExperimentReport::mse_sum() const {
  double s = 0.0;
  for (const auto& p : params) s += p.mse;
  return s;
}

double ExperimentReport::mse_mean() const {
  return params.empty() ? 0.0 : mse_sum() / static_cast<double>(params.size());
}

const ParamStats& ExperimentReport::stats_for(const std::string& parameter) const {
  for (const auto& p : params) {
    if (p.parameter == parameter) return p;
  }
  throw SchemaError("ExperimentReport: no parameter named '" + parameter + "'");
}

ReplicateRecord summarize_replicate(const ChainTrace& trace,
                                    const std::map<std::string, double>& truths) {
  ReplicateRecord rec;
  rec.seconds = trace.wall_clock_seconds;
  for (const auto& [name, truth] : truths) {
    (void)truth;
    Vector col = trace.retained(name);
    std::vector<double> vals(col.data(), col.data() + col.size());
    rec.post_mean[name] = col.mean();
    rec.ci[name] = credible_interval(vals, 0.95);
  }
  return rec;
}

ExperimentReport report_from_records(std::vector<ReplicateRecord> records,
                                     const std::map<std::string, double>& truths,
                                     const std::string& method) {
  if (records.empty()) throw InputError("report_from_records: no records");
  ExperimentReport report;
  report.method = method;
  double total_seconds = 0.0;
  for (const auto& rec : records) total_seconds += rec.seconds;
  report.avg_seconds = total_seconds / static_cast<double>(records.size());

  for (const auto& [name, truth] : truths) {
    ParamStats stats;
    stats.parameter = name;
    double sq_err = 0.0;
    long covered = 0;
    for (const auto& rec : records) {
      const auto it = rec.post_mean.find(name);
      if (it == rec.post_mean.end()) {
        throw SchemaError("report_from_records: record lacks parameter '" +
                          name + "'");
      }
      sq_err += (it->second - truth) * (it->second - truth);
      covered += rec.ci.at(name).contains(truth) ? 1 : 0;
    }
    stats.mse = sq_err / static_cast<double>(records.size());
    stats.coverage =
        static_cast<double>(covered) / static_cast<double>(records.size());
    report.params.push_back(std::move(stats));
  }
  report.replicates = std::move(records);
  return report;
}

ExperimentReport evaluate_replicates(const std::vector<ChainTrace>& traces,
                                     const std::map<std::string, double>& truths,
                                     const std::string& method) {
  if (traces.empty()) throw InputError("evaluate_replicates: no traces");
  std::vector<ReplicateRecord> records;
  records.reserve(traces.size());
  for (const auto& trace : traces) {
    records.push_back(summarize_replicate(trace, truths));
  }
  return report_from_records(std::move(records), truths, method);
}

}  // namespace hiermc
