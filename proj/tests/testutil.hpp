#pragma once

// Shared oracles for statistical tests: regularized incomplete gamma,
// reference CDFs, chi-square goodness-of-fit and Kolmogorov-Smirnov
// distance. These stay independent of the library implementation so the
// tests can act as oracles for it.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace testutil {

// Regularized lower incomplete gamma P(a, x), series + continued fraction.
inline double gamma_p(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_p domain");
  if (x == 0.0) return 0.0;
  const double gln = std::lgamma(a);
  if (x < a + 1.0) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - gln);
  }
  // Continued fraction for Q(a, x).
  double b = x + 1.0 - a;
  double c = 1e300;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::fabs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-15) break;
  }
  return 1.0 - std::exp(-x + a * std::log(x) - gln) * h;
}

inline double gamma_q(double a, double x) { return 1.0 - gamma_p(a, x); }

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

inline double gamma_cdf(double x, double shape, double rate) {
  return x <= 0.0 ? 0.0 : gamma_p(shape, rate * x);
}

inline double chi_square_cdf(double x, double dof) {
  return gamma_cdf(x, 0.5 * dof, 0.5);
}

// X ~ IW_1(scale, dof): X = scale / chi2_dof, so F(x) = Q(dof/2, scale/(2x)).
inline double inv_wishart1_cdf(double x, double scale, double dof) {
  return x <= 0.0 ? 0.0 : gamma_q(0.5 * dof, 0.5 * scale / x);
}

// Chi-square goodness of fit with equal-probability bins through the
// reference CDF; returns the p-value.
inline double chi2_gof_pvalue(const std::vector<double>& draws,
                              const std::function<double(double)>& cdf,
                              int bins = 40) {
  std::vector<long> counts(bins, 0);
  for (double x : draws) {
    double u = cdf(x);
    int b = std::min(bins - 1, std::max(0, static_cast<int>(u * bins)));
    ++counts[b];
  }
  const double expected = static_cast<double>(draws.size()) / bins;
  double stat = 0.0;
  for (long c : counts) {
    const double d = c - expected;
    stat += d * d / expected;
  }
  return gamma_q(0.5 * (bins - 1), 0.5 * stat);
}

inline double ks_distance(std::vector<double> draws,
                          const std::function<double(double)>& cdf) {
  std::sort(draws.begin(), draws.end());
  const double n = static_cast<double>(draws.size());
  double dmax = 0.0;
  for (std::size_t i = 0; i < draws.size(); ++i) {
    const double f = cdf(draws[i]);
    dmax = std::max(dmax, std::fabs(f - (i + 1) / n));
    dmax = std::max(dmax, std::fabs(f - i / n));
  }
  return dmax;
}

inline double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double var_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

}  // namespace testutil
