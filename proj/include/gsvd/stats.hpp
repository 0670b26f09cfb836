#pragma once

// Kolmogorov-Smirnov tests and mean-vs-target checks on Monte Carlo output.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "gsvd/errors.hpp"
#include "gsvd/samplers.hpp"
#include "gsvd/special.hpp"

namespace gsvd {

struct KsReport {
  double statistic = 0.0;
  double critical_value = 0.0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;  // 0 for a one-sample test
  double alpha_level = 0.0;
  bool pass = false;
};

struct MeanReport {
  double estimate = 0.0;
  double std_error = 0.0;
  double target = 0.0;
  double z_score = 0.0;
  std::size_t n = 0;
  bool pass = false;
};

/// Asymptotic Kolmogorov constant c(alpha): 1.628 at 0.01, 1.358 at 0.05,
/// sqrt(-ln(alpha / 2) / 2) otherwise.
inline double ks_critical_constant(double alpha_level) {
  if (!(alpha_level > 0.0 && alpha_level < 1.0)) throw DomainError("KS: alpha must lie in (0, 1)");
  if (alpha_level == 0.01) return 1.628;
  if (alpha_level == 0.05) return 1.358;
  return std::sqrt(-0.5 * std::log(alpha_level / 2.0));
}

/// sup |ECDF_a - ECDF_b|.
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw DomainError("KS: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = double(a.size()), nb = double(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(double(i) / na - double(j) / nb));
  }
  return d;
}

inline KsReport ks_two_sample(const std::vector<double>& a, const std::vector<double>& b, double alpha_level) {
  KsReport rep;
  rep.statistic = ks_statistic(a, b);
  rep.n1 = a.size();
  rep.n2 = b.size();
  rep.alpha_level = alpha_level;
  const double n1 = double(rep.n1), n2 = double(rep.n2);
  rep.critical_value = ks_critical_constant(alpha_level) * std::sqrt((n1 + n2) / (n1 * n2));
  rep.pass = rep.statistic < rep.critical_value;
  return rep;
}

/// Two-sample test on batches, reduced to one value per draw.
inline KsReport ks_two_sample(const SampleBatch& a, const SampleBatch& b, double alpha_level) {
  return ks_two_sample(scalar_reduce(a), scalar_reduce(b), alpha_level);
}

inline KsReport ks_one_sample(std::vector<double> sample, const std::function<double(double)>& cdf,
                              double alpha_level) {
  if (sample.empty()) throw DomainError("KS: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = double(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    if (!std::isfinite(f)) throw ConsistencyError("KS: CDF evaluation returned a non-finite value");
    d = std::max({d, double(i + 1) / n - f, f - double(i) / n});
  }
  KsReport rep;
  rep.statistic = d;
  rep.n1 = sample.size();
  rep.alpha_level = alpha_level;
  rep.critical_value = ks_critical_constant(alpha_level) / std::sqrt(n);
  rep.pass = rep.statistic < rep.critical_value;
  return rep;
}

inline KsReport ks_one_sample(const SampleBatch& batch, const std::function<double(double)>& cdf,
                              double alpha_level) {
  return ks_one_sample(scalar_reduce(batch), cdf, alpha_level);
}

/// Sample mean with its standard error; passes when |z| <= 3.
inline MeanReport mean_report(std::span<const double> values, double target) {
  if (values.size() < 2) throw DomainError("mean_report: need at least two values");
  CompensatedSum sum;
  for (double v : values) sum.add(v);
  const double n = double(values.size());
  const double mean = sum.value() / n;
  CompensatedSum sq;
  for (double v : values) sq.add((v - mean) * (v - mean));
  MeanReport rep;
  rep.estimate = mean;
  rep.std_error = std::sqrt(sq.value() / (n - 1.0) / n);
  rep.target = target;
  rep.z_score = (mean - target) / rep.std_error;
  rep.n = values.size();
  rep.pass = std::abs(rep.z_score) <= 3.0;
  return rep;
}

}  // namespace gsvd
