#pragma once

// Structural parameters of the GSVD of a Gaussian pair A (m x n), C (q x n),
// the reduction to the ratio ensemble L = X^H (Y Y^H)^{-1} X, and the expected
// power of the decomposition matrix Q.

#include <algorithm>
#include <cstddef>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>

#include "gsvd/errors.hpp"

namespace gsvd {

/// Row counts of A and C and their shared column count.
struct ProblemDims {
  std::size_t m = 0;
  std::size_t q = 0;
  std::size_t n = 0;

  friend bool operator==(const ProblemDims&, const ProblemDims&) = default;
};

/// Validates m, q, n >= 1 and q >= m.
inline ProblemDims make_problem_dims(std::size_t m, std::size_t q, std::size_t n) {
  if (m < 1 || q < 1 || n < 1) {
    throw DimensionError("problem dimensions must all be >= 1");
  }
  if (q < m) {
    throw DimensionError("q < m is not supported (got m=" + std::to_string(m) + ", q=" +
                         std::to_string(q) + "); swap A and C so that C has at least as many rows");
  }
  return {m, q, n};
}

enum class Regime {
  TallC,          // q >= n
  Intermediate,   // q < n < q + m
  Deterministic,  // n >= q + m, s = 0
};

inline std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::TallC: return "TALL_C";
    case Regime::Intermediate: return "INTERMEDIATE";
    case Regime::Deterministic: return "DETERMINISTIC";
  }
  return "?";
}

inline std::ostream& operator<<(std::ostream& os, Regime r) { return os << to_string(r); }

struct GsvdStructure {
  std::size_t k = 0;  // rank of the stacked matrix
  std::size_t r = 0;  // count of alpha = 1 (beta = 0)
  std::size_t s = 0;  // count of interior generalized singular values
  Regime regime = Regime::TallC;

  friend bool operator==(const GsvdStructure&, const GsvdStructure&) = default;
};

inline GsvdStructure compute_structure(const ProblemDims& d) {
  const std::size_t k = std::min(d.m + d.q, d.n);
  const std::size_t rank_c = std::min(d.q, d.n);
  const std::size_t rank_a = std::min(d.m, d.n);
  GsvdStructure st;
  st.k = k;
  st.r = k - rank_c;
  st.s = rank_a + rank_c - k;
  if (d.q >= d.n) {
    st.regime = Regime::TallC;
  } else if (d.n < d.q + d.m) {
    st.regime = Regime::Intermediate;
  } else {
    st.regime = Regime::Deterministic;
  }
  return st;
}

/// Dimensions (m', p, n') of X (m' x p) and Y (m' x n').
struct ReducedDims {
  std::size_t m_prime = 0;
  std::size_t p = 0;
  std::size_t n_prime = 0;

  friend bool operator==(const ReducedDims&, const ReducedDims&) = default;
};

/// Validates the ratio-ensemble dimensions: all >= 1 and m' <= n'.
inline ReducedDims make_reduced_dims(std::size_t m_prime, std::size_t p, std::size_t n_prime) {
  if (m_prime < 1 || p < 1 || n_prime < 1) {
    throw DimensionError("reduced dimensions must all be >= 1");
  }
  if (m_prime > n_prime) {
    throw DimensionError("reduced dimensions require m' <= n' (got m'=" + std::to_string(m_prime) +
                         ", n'=" + std::to_string(n_prime) + ")");
  }
  return {m_prime, p, n_prime};
}

/// Returned instead of ReducedDims when n >= q + m: there are no random
/// generalized singular values to describe.
struct DeterministicRegime {
  std::size_t s = 0;
  friend bool operator==(const DeterministicRegime&, const DeterministicRegime&) = default;
};

using Reduction = std::variant<ReducedDims, DeterministicRegime>;

inline Reduction reduced_dims(const ProblemDims& d) {
  const GsvdStructure st = compute_structure(d);
  switch (st.regime) {
    case Regime::TallC: return ReducedDims{d.n, d.m, d.q};
    case Regime::Intermediate: return ReducedDims{d.q, st.s, d.n};
    case Regime::Deterministic: break;
  }
  return DeterministicRegime{st.s};
}

/// Reduced dimensions, or RegimeError in the deterministic regime.
inline ReducedDims require_reduced_dims(const ProblemDims& d) {
  const Reduction red = reduced_dims(d);
  if (const auto* rd = std::get_if<ReducedDims>(&red)) return *rd;
  throw RegimeError("DETERMINISTIC regime (n >= q + m): s = 0, the generalized singular values "
                    "are not random");
}

/// E{trace(Q Q^H)} = min{m+q, n} / |m+q-n| for Gaussian A, C.
inline double expected_q_power(const ProblemDims& d) {
  const std::size_t rows = d.m + d.q;
  if (rows == d.n) {
    throw UndefinedExpectationError("expectation undefined at m+q=n");
  }
  const double gap = rows > d.n ? double(rows - d.n) : double(d.n - rows);
  return double(std::min(rows, d.n)) / gap;
}

}  // namespace gsvd
