#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "gsvd/errors.hpp"

namespace gsvd {

inline double log_gamma(double x) { return boost::math::lgamma(x); }

/// log B(x, y).
inline double log_beta(double x, double y) {
  return boost::math::lgamma(x) + boost::math::lgamma(y) - boost::math::lgamma(x + y);
}

/// log of the complex multivariate gamma function
///   Gamma~_dim(a) = pi^{dim(dim-1)/2} prod_{i=1}^{dim} Gamma(a - i + 1).
inline double log_mvgamma(std::size_t dim, double a) {
  if (dim < 1) throw DomainError("log_mvgamma: dim must be >= 1");
  if (!(a > double(dim) - 1.0)) {
    throw PoleError("log_mvgamma: requires a > dim - 1 (dim=" + std::to_string(dim) +
                    ", a=" + std::to_string(a) + ")");
  }
  const double d = double(dim);
  double out = 0.5 * d * (d - 1.0) * std::log(std::numbers::pi);
  for (std::size_t i = 1; i <= dim; ++i) out += boost::math::lgamma(a - double(i) + 1.0);
  return out;
}

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace gsvd
