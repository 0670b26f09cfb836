#pragma once

// Closed-form laws of the nonzero eigenvalues of L = X^H (Y Y^H)^{-1} X with
// X (m' x p) and Y (m' x n') complex Gaussian, m' <= n':
//
//   f(w_1..w_l) = M prod w_i^{t1} / prod (1 + w_i)^{t2} prod_{i<j} (w_i - w_j)^2
//
// with l = min{p, m'}, t1 = |m' - p|, t2 = p + n'. The density is over the
// unordered eigenvalue collection, so every single-eigenvalue marginal is the
// same function, expanded here as a signed double sum over S_l x S_l.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "gsvd/errors.hpp"
#include "gsvd/special.hpp"
#include "gsvd/structure.hpp"

namespace gsvd {

/// Largest l for which the permutation expansion is built.
inline constexpr std::size_t kMaxPermutationSize = 7;

/// Cancellation residue below this magnitude is clamped to zero.
inline constexpr double kNegativeDensityFloor = 1e-12;

/// One term of the marginal expansion: sign * exp(log_beta_product) *
/// w^exponent / (1 + w)^t2. After merging, a term carries the summed signed
/// weight of every permutation pair that shares its exponent.
struct SignedPermutationTerm {
  int exponent_of_w = 0;
  int sign = 1;
  double log_beta_product = 0.0;
};

/// Permutations of {1..size} with their signs, in lexicographic order.
struct SignedPermutation {
  std::array<std::uint8_t, kMaxPermutationSize> image{};  // 1-based values
  int sign = 1;
};

namespace detail {

inline std::vector<SignedPermutation> signed_permutations(std::size_t size) {
  std::array<std::uint8_t, kMaxPermutationSize> perm{};
  for (std::size_t i = 0; i < size; ++i) perm[i] = std::uint8_t(i + 1);
  std::vector<SignedPermutation> out;
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < size; ++i) {
      for (std::size_t j = i + 1; j < size; ++j) inversions += perm[i] > perm[j];
    }
    out.push_back({perm, inversions % 2 == 0 ? 1 : -1});
  } while (std::next_permutation(perm.begin(), perm.begin() + std::ptrdiff_t(size)));
  return out;
}

inline void require_expansion_size(std::size_t l) {
  if (l > kMaxPermutationSize) {
    throw ComplexityError("marginal expansion needs l <= " + std::to_string(kMaxPermutationSize) +
                          " (got l=" + std::to_string(l) +
                          "); the S_l x S_l sum has (l!)^2 terms");
  }
}

// log B(t1 + 2l - s + 1, t2 - t1 - 2l - 1 + s) for s = sigma1(i) + sigma2(i).
inline std::vector<double> beta_table(std::size_t l, long t1, long t2) {
  const long ll = long(l);
  std::vector<double> table(2 * l + 1, 0.0);
  for (long s = 2; s <= 2 * ll; ++s) {
    const long a = t1 + 2 * ll - s + 1;
    const long b = t2 - t1 - 2 * ll - 1 + s;
    if (a < 1 || b < 1) {
      throw ConsistencyError("marginal expansion: Beta arguments (" + std::to_string(a) + ", " +
                             std::to_string(b) + ") are not both >= 1");
    }
    table[std::size_t(s)] = log_beta(double(a), double(b));
  }
  return table;
}

}  // namespace detail

/// Visits every (sigma1, sigma2) pair of the marginal expansion for the given
/// (l, t1, t2) without merging: visitor(sign, exponent, log_beta_product).
template <typename Visitor>
void enumerate_permutation_terms(std::size_t l, std::size_t t1, std::size_t t2, Visitor&& visitor) {
  if (l < 1) throw DomainError("enumerate_permutation_terms: l must be >= 1");
  detail::require_expansion_size(l);
  const std::vector<double> table = detail::beta_table(l, long(t1), long(t2));
  const std::vector<SignedPermutation> perms = detail::signed_permutations(l);
  const int top = int(t1) + 2 * int(l);
  for (const auto& s1 : perms) {
    for (const auto& s2 : perms) {
      double log_prod = 0.0;
      for (std::size_t i = 0; i + 1 < l; ++i) log_prod += table[s1.image[i] + s2.image[i]];
      const int exponent = top - s1.image[l - 1] - s2.image[l - 1];
      visitor(s1.sign * s2.sign, exponent, log_prod);
    }
  }
}

/// Terms of g'_{l,t1,t2} merged by exponent, ascending in exponent. Buckets
/// that cancel exactly are dropped.
inline std::vector<SignedPermutationTerm> merged_terms(std::size_t l, std::size_t t1, std::size_t t2) {
  detail::require_expansion_size(l);
  const std::vector<double> table = detail::beta_table(l, long(t1), long(t2));
  const double table_max = *std::max_element(table.begin() + 2, table.end());
  const double reference = double(l - 1) * table_max;
  std::vector<CompensatedSum> buckets(2 * l - 1);
  enumerate_permutation_terms(l, t1, t2, [&](int sign, int exponent, double log_prod) {
    buckets[std::size_t(exponent - int(t1))].add(sign * std::exp(log_prod - reference));
  });
  std::vector<SignedPermutationTerm> out;
  for (std::size_t i = 0; i < buckets.size(); ++i) {
    const double v = buckets[i].value();
    if (v == 0.0) continue;
    out.push_back({int(t1 + i), v > 0.0 ? 1 : -1, std::log(std::abs(v)) + reference});
  }
  return out;
}

/// log M for the ratio ensemble with dimensions (m', p, n').
inline double log_norm_constant(const ReducedDims& d) {
  const double log_pi = std::log(std::numbers::pi);
  const double mp = double(d.m_prime), p = double(d.p), np = double(d.n_prime);
  if (d.p >= d.m_prime) {
    return mp * (mp - 1.0) * log_pi + log_mvgamma(d.m_prime, p + np) -
           log_gamma(mp + 1.0) - log_mvgamma(d.m_prime, p) - log_mvgamma(d.m_prime, np) -
           log_mvgamma(d.m_prime, mp);
  }
  return p * (p - 1.0) * log_pi + log_mvgamma(d.p, p + np) - log_gamma(p + 1.0) -
         log_mvgamma(d.p, mp) - log_mvgamma(d.p, p + np - mp) - log_mvgamma(d.p, p);
}

/// Parameters of the joint and marginal laws, with the merged marginal
/// expansions (direct and reciprocal) cached when l <= 7. Immutable; copies
/// share the cached expansions.
class LawParams {
 public:
  explicit LawParams(const ReducedDims& dims)
      : dims_(make_reduced_dims(dims.m_prime, dims.p, dims.n_prime)),
        l_(std::min(dims.p, dims.m_prime)),
        t1_(dims.m_prime > dims.p ? dims.m_prime - dims.p : dims.p - dims.m_prime),
        t2_(dims.p + dims.n_prime),
        t1_reciprocal_(dims.n_prime - dims.m_prime),
        log_m_(log_norm_constant(dims)) {
    if (!std::isfinite(log_m_)) throw ConsistencyError("LawParams: log M is not finite");
    if (l_ <= kMaxPermutationSize) {
      terms_ = std::make_shared<const std::vector<SignedPermutationTerm>>(merged_terms(l_, t1_, t2_));
      reciprocal_terms_ = std::make_shared<const std::vector<SignedPermutationTerm>>(
          t1_reciprocal_ == t1_ ? *terms_ : merged_terms(l_, t1_reciprocal_, t2_));
    }
  }

  const ReducedDims& dims() const noexcept { return dims_; }
  std::size_t m_prime() const noexcept { return dims_.m_prime; }
  std::size_t p() const noexcept { return dims_.p; }
  std::size_t n_prime() const noexcept { return dims_.n_prime; }
  std::size_t l() const noexcept { return l_; }
  std::size_t t1() const noexcept { return t1_; }
  std::size_t t2() const noexcept { return t2_; }
  std::size_t t1_reciprocal() const noexcept { return t1_reciprocal_; }
  double log_M() const noexcept { return log_m_; }

  bool has_expansion() const noexcept { return terms_ != nullptr; }

  const std::vector<SignedPermutationTerm>& terms() const {
    detail::require_expansion_size(l_);
    return *terms_;
  }
  const std::vector<SignedPermutationTerm>& reciprocal_terms() const {
    detail::require_expansion_size(l_);
    return *reciprocal_terms_;
  }

 private:
  ReducedDims dims_;
  std::size_t l_;
  std::size_t t1_;
  std::size_t t2_;
  std::size_t t1_reciprocal_;
  double log_m_;
  std::shared_ptr<const std::vector<SignedPermutationTerm>> terms_;
  std::shared_ptr<const std::vector<SignedPermutationTerm>> reciprocal_terms_;
};

inline double log_norm_constant(const LawParams& params) { return params.log_M(); }

/// Merged marginal expansion for the direct form.
inline const std::vector<SignedPermutationTerm>& marginal_terms(const LawParams& params) {
  return params.terms();
}
const std::vector<SignedPermutationTerm>& marginal_terms(const LawParams&&) = delete;

/// Joint density of the l nonzero eigenvalues (unordered).
inline double joint_pdf(const LawParams& params, std::span<const double> w) {
  if (w.size() != params.l()) {
    throw DimensionError("joint_pdf: expected " + std::to_string(params.l()) + " arguments, got " +
                         std::to_string(w.size()));
  }
  for (double x : w) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("joint_pdf: arguments must be finite and > 0");
  }
  double log_val = params.log_M();
  for (std::size_t i = 0; i < w.size(); ++i) {
    log_val += double(params.t1()) * std::log(w[i]) - double(params.t2()) * std::log1p(w[i]);
    for (std::size_t j = i + 1; j < w.size(); ++j) {
      const double diff = std::abs(w[i] - w[j]);
      if (diff == 0.0) return 0.0;
      log_val += 2.0 * std::log(diff);
    }
  }
  return std::exp(log_val);
}

namespace detail {

inline void require_positive(double w, const char* what) {
  if (!(w > 0.0) || std::isnan(w)) throw DomainError(std::string(what) + ": argument must be > 0");
}

// M * sum_e c_e x^e / (1 + x)^t2 * x^shift, all in log domain per term.
inline double eval_expansion(const std::vector<SignedPermutationTerm>& terms, double log_prefactor,
                             std::size_t t2, double x) {
  const double log_x = std::log(x);
  const double log_1px = std::log1p(x);
  CompensatedSum acc;
  for (const auto& t : terms) {
    acc.add(t.sign * std::exp(log_prefactor + t.log_beta_product + t.exponent_of_w * log_x -
                              double(t2) * log_1px));
  }
  return acc.value();
}

inline double clamp_density(double v, const char* what) {
  if (v >= 0.0) return v;
  if (v >= -kNegativeDensityFloor) return 0.0;
  throw ConsistencyError(std::string(what) + ": evaluated to " + std::to_string(v) +
                         ", below the cancellation floor");
}

}  // namespace detail

/// Marginal density of one eigenvalue.
inline double marginal_pdf(const LawParams& params, double w) {
  detail::require_positive(w, "marginal_pdf");
  const auto& terms = params.terms();
  if (std::isinf(w)) return 0.0;
  return detail::clamp_density(detail::eval_expansion(terms, params.log_M(), params.t2(), w),
                               "marginal_pdf");
}

/// The same marginal density evaluated through the reciprocal expansion
/// M w^{-2} g'_{l,t1',t2}(1/w).
inline double marginal_pdf_reciprocal(const LawParams& params, double w) {
  detail::require_positive(w, "marginal_pdf_reciprocal");
  const auto& terms = params.reciprocal_terms();
  if (std::isinf(w)) return 0.0;
  const double v = detail::eval_expansion(terms, params.log_M() - 2.0 * std::log(w), params.t2(), 1.0 / w);
  return detail::clamp_density(v, "marginal_pdf_reciprocal");
}

/// P(w_i <= w). Each term integrates to a regularized incomplete Beta value
/// under u = t / (1 + t); the upper tail is summed instead once u > 1/2.
inline double marginal_cdf(const LawParams& params, double w) {
  if (std::isnan(w) || w < 0.0) throw DomainError("marginal_cdf: argument must be >= 0");
  const auto& terms = params.terms();
  if (w == 0.0) return 0.0;
  if (std::isinf(w)) return 1.0;
  const double u = w / (1.0 + w);
  const bool lower = u <= 0.5;
  CompensatedSum acc;
  for (const auto& t : terms) {
    const double a = double(t.exponent_of_w) + 1.0;
    const double b = double(params.t2()) - double(t.exponent_of_w) - 1.0;
    const double weight = t.sign * std::exp(params.log_M() + t.log_beta_product + log_beta(a, b));
    acc.add(weight * (lower ? boost::math::ibeta(a, b, u) : boost::math::ibetac(a, b, u)));
  }
  const double v = lower ? acc.value() : 1.0 - acc.value();
  return std::clamp(v, 0.0, 1.0);
}

}  // namespace gsvd
