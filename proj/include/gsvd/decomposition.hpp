#pragma once

// Numerical GSVD of a complex matrix pair through the CS decomposition of the
// left singular vectors of the stacked matrix B = (A; C).

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "gsvd/ensemble.hpp"
#include "gsvd/errors.hpp"
#include "gsvd/linalg.hpp"
#include "gsvd/structure.hpp"

namespace gsvd {

/// Singular values of the top block above this are classified as one.
inline constexpr double kOneThreshold = 1.0 - 1e-8;
/// Singular values of the top block below this are classified as zero.
inline constexpr double kZeroThreshold = 1e-8;
/// Relative floor on the k-th singular value of B.
inline constexpr double kRankTolerance = 1e-12;

/// The s interior generalized singular value pairs, alpha descending.
struct GsvdSpectrum {
  RealVector alphas;
  RealVector betas;
  RealVector w;  // alpha^2 / beta^2, descending

  Eigen::Index size() const { return w.size(); }
};

/// U A Q = (Sigma_A, O) and V C Q = (Sigma_C, O).
struct GsvdFactors {
  ComplexMatrix U;        // m x m unitary
  ComplexMatrix V;        // q x q unitary
  ComplexMatrix Q;        // n x n
  ComplexMatrix sigma_a;  // m x k: diag(I_r, S_A, O)
  ComplexMatrix sigma_c;  // q x k: diag(O, S_C, I_{k-r-s})
  GsvdStructure structure;

  /// Diagonal of S_A (the interior alphas), descending.
  RealVector alphas() const {
    RealVector out(structure.s);
    for (std::size_t i = 0; i < structure.s; ++i) {
      out(Eigen::Index(i)) = sigma_a(Eigen::Index(structure.r + i), Eigen::Index(structure.r + i)).real();
    }
    return out;
  }
};

namespace detail {

inline ProblemDims pair_dims(const ComplexMatrix& a, const ComplexMatrix& c) {
  if (a.cols() != c.cols()) {
    throw DimensionError("A and C must have the same number of columns (got " +
                         std::to_string(a.cols()) + " and " + std::to_string(c.cols()) + ")");
  }
  return make_problem_dims(std::size_t(a.rows()), std::size_t(c.rows()), std::size_t(a.cols()));
}

inline ComplexMatrix stack(const ComplexMatrix& a, const ComplexMatrix& c) {
  ComplexMatrix b(a.rows() + c.rows(), a.cols());
  b.topRows(a.rows()) = a;
  b.bottomRows(c.rows()) = c;
  return b;
}

enum class CsClass { One, Interior, Zero };

// CS split of the k leading left singular vectors of B. W's columns are
// ordered ones, interior (alpha descending), zeros.
struct CsSplit {
  GsvdStructure structure;
  linalg::SvdResult b_svd;  // B = P diag(sigma) R^H
  ComplexMatrix p1;         // m x k
  ComplexMatrix p2;         // q x k
  linalg::SvdResult p1_svd;  // p1 = U1 D W^H
  std::vector<CsClass> classes;  // length k
};

inline CsSplit cs_split(const ComplexMatrix& a, const ComplexMatrix& c) {
  const ProblemDims dims = pair_dims(a, c);
  if (!a.allFinite() || !c.allFinite()) throw DecompositionError("GSVD: non-finite input");
  CsSplit out;
  out.structure = compute_structure(dims);
  const auto k = Eigen::Index(out.structure.k);
  const auto m = Eigen::Index(dims.m);
  const auto q = Eigen::Index(dims.q);

  out.b_svd = linalg::svd(stack(a, c));
  const RealVector& sv = out.b_svd.singular_values;
  if (sv(0) <= 0.0 || sv(k - 1) <= kRankTolerance * sv(0)) {
    throw DecompositionError("GSVD: stacked matrix B has rank below k = " + std::to_string(k));
  }
  const ComplexMatrix pk = out.b_svd.left.leftCols(k);
  out.p1 = pk.topRows(m);
  out.p2 = pk.bottomRows(q);
  out.p1_svd = linalg::svd(out.p1);

  const RealVector& d = out.p1_svd.singular_values;
  out.classes.assign(std::size_t(k), CsClass::Zero);
  std::size_t ones = 0, interior = 0;
  for (Eigen::Index j = 0; j < d.size(); ++j) {
    if (d(j) > kOneThreshold) {
      out.classes[std::size_t(j)] = CsClass::One;
      ++ones;
    } else if (d(j) >= kZeroThreshold) {
      out.classes[std::size_t(j)] = CsClass::Interior;
      ++interior;
    }
  }
  if (ones != out.structure.r || interior != out.structure.s) {
    throw DegeneracyError("GSVD: classified " + std::to_string(ones) + " unit and " +
                          std::to_string(interior) + " interior values, expected r = " +
                          std::to_string(out.structure.r) + " and s = " +
                          std::to_string(out.structure.s));
  }
  return out;
}

// (alpha, beta) for column j of W, measured on both blocks and normalized.
inline std::pair<double, double> cs_pair(const CsSplit& cs, Eigen::Index j) {
  const auto wj = cs.p1_svd.right.col(j);
  const double a = (cs.p1 * wj).norm();
  const double b = (cs.p2 * wj).norm();
  const double h = std::hypot(a, b);
  return {a / h, b / h};
}

// Fills the columns of `basis` not marked in `filled` so the whole matrix is
// unitary. Modified Gram-Schmidt against candidate unit vectors, two passes.
inline void complete_unitary(ComplexMatrix& basis, std::vector<bool>& filled) {
  const Eigen::Index dim = basis.rows();
  for (Eigen::Index col = 0; col < basis.cols(); ++col) {
    if (filled[std::size_t(col)]) continue;
    // The unit vector with the largest residual; some residual has squared
    // norm >= (dim - filled) / dim, so this never degenerates.
    Eigen::VectorXcd best;
    double best_norm = 0.0;
    for (Eigen::Index candidate = 0; candidate < dim; ++candidate) {
      Eigen::VectorXcd v = Eigen::VectorXcd::Unit(dim, candidate);
      for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index other = 0; other < basis.cols(); ++other) {
          if (!filled[std::size_t(other)]) continue;
          v -= basis.col(other) * basis.col(other).dot(v);
        }
      }
      const double norm = v.norm();
      if (norm > best_norm) {
        best_norm = norm;
        best = std::move(v);
      }
    }
    if (!(best_norm > 1e-3)) throw DecompositionError("GSVD: unitary completion failed");
    basis.col(col) = best / best_norm;
    filled[std::size_t(col)] = true;
  }
}

}  // namespace detail

/// Interior generalized singular values of (A, C) via the stacked SVD.
///
/// Requires q >= m and s >= 1. Each beta is measured directly on the lower
/// block rather than as sqrt(1 - alpha^2), which keeps w accurate when alpha
/// is close to one.
inline GsvdSpectrum gsvd_spectrum(const ComplexMatrix& a, const ComplexMatrix& c) {
  const ProblemDims dims = detail::pair_dims(a, c);
  if (compute_structure(dims).s == 0) {
    throw RegimeError("gsvd_spectrum: DETERMINISTIC regime (n >= q + m), s = 0");
  }
  const detail::CsSplit cs = detail::cs_split(a, c);
  const auto s = Eigen::Index(cs.structure.s);
  const auto r = Eigen::Index(cs.structure.r);
  GsvdSpectrum out{RealVector(s), RealVector(s), RealVector(s)};
  for (Eigen::Index i = 0; i < s; ++i) {
    const auto [alpha, beta] = detail::cs_pair(cs, r + i);
    out.alphas(i) = alpha;
    out.betas(i) = beta;
    out.w(i) = (alpha * alpha) / (beta * beta);
  }
  return out;
}

/// Generalized singular values from the nonzero eigenvalues of
/// A (C^H C)^{-1} A^H. Only valid when q >= n.
inline GsvdSpectrum gsvd_spectrum_direct(const ComplexMatrix& a, const ComplexMatrix& c) {
  const ProblemDims dims = detail::pair_dims(a, c);
  const GsvdStructure st = compute_structure(dims);
  if (st.regime != Regime::TallC) {
    throw RegimeError("gsvd_spectrum_direct: requires q >= n (TALL_C regime)");
  }
  const ComplexMatrix gram_c = c.adjoint() * c;
  const ComplexMatrix solved = linalg::solve_hermitian_posdef(gram_c, a.adjoint());
  ComplexMatrix l = a * solved;
  l = 0.5 * (l + l.adjoint()).eval();
  const RealVector asc = linalg::hermitian_eigenvalues(l);
  const auto s = Eigen::Index(st.s);
  GsvdSpectrum out{RealVector(s), RealVector(s), RealVector(s)};
  for (Eigen::Index i = 0; i < s; ++i) {
    const double w = asc(asc.size() - 1 - i);
    out.w(i) = w;
    out.alphas(i) = std::sqrt(w / (1.0 + w));
    out.betas(i) = std::sqrt(1.0 / (1.0 + w));
  }
  return out;
}

/// Full factorization U A Q = (Sigma_A, O), V C Q = (Sigma_C, O).
///
/// Q = R diag((W^H S)^{-1}, O_{n-k}) where B = P S R^H and W is the right
/// singular basis of the top block of P. Intended for small matrices (each
/// side at most 32).
inline GsvdFactors gsvd_factorize(const ComplexMatrix& a, const ComplexMatrix& c) {
  const ProblemDims dims = detail::pair_dims(a, c);
  if (dims.m > 32 || dims.q > 32 || dims.n > 32) {
    throw DimensionError("gsvd_factorize: each dimension must be <= 32");
  }
  const detail::CsSplit cs = detail::cs_split(a, c);
  const GsvdStructure& st = cs.structure;
  const auto m = Eigen::Index(dims.m);
  const auto q = Eigen::Index(dims.q);
  const auto n = Eigen::Index(dims.n);
  const auto k = Eigen::Index(st.k);
  const ComplexMatrix& w = cs.p1_svd.right;

  GsvdFactors out;
  out.structure = st;
  out.U = cs.p1_svd.left.adjoint();
  out.sigma_a = ComplexMatrix::Zero(m, k);
  out.sigma_c = ComplexMatrix::Zero(q, k);

  // V^H has column (q - k + j) equal to P2 w_j / beta_j for every j >= r.
  ComplexMatrix v_h = ComplexMatrix::Zero(q, q);
  std::vector<bool> filled(std::size_t(q), false);
  for (Eigen::Index j = 0; j < k; ++j) {
    switch (cs.classes[std::size_t(j)]) {
      case detail::CsClass::One:
        out.sigma_a(j, j) = 1.0;
        break;
      case detail::CsClass::Interior: {
        const auto [alpha, beta] = detail::cs_pair(cs, j);
        out.sigma_a(j, j) = alpha;
        const Eigen::Index row = q - k + j;
        out.sigma_c(row, j) = beta;
        const Eigen::VectorXcd col = cs.p2 * w.col(j);
        v_h.col(row) = col / col.norm();
        filled[std::size_t(row)] = true;
        break;
      }
      case detail::CsClass::Zero: {
        const Eigen::Index row = q - k + j;
        out.sigma_c(row, j) = 1.0;
        const Eigen::VectorXcd col = cs.p2 * w.col(j);
        v_h.col(row) = col / col.norm();
        filled[std::size_t(row)] = true;
        break;
      }
    }
  }
  detail::complete_unitary(v_h, filled);
  out.V = v_h.adjoint();

  const RealVector& sv = cs.b_svd.singular_values;
  ComplexMatrix inner = ComplexMatrix::Zero(n, n);
  inner.topLeftCorner(k, k) = sv.head(k).cwiseInverse().asDiagonal() * w;
  out.Q = cs.b_svd.right * inner;
  return out;
}

/// trace(Q Q^H) = sum of reciprocals of the k nonzero eigenvalues of B B^H.
inline double q_power_trace(const ComplexMatrix& a, const ComplexMatrix& c) {
  if (a.cols() != c.cols()) throw DimensionError("q_power_trace: A and C column counts differ");
  const ComplexMatrix b = detail::stack(a, c);
  const Eigen::Index k = std::min(b.rows(), b.cols());
  const RealVector lambda = linalg::top_gram_eigenvalues(b, k);
  if (!(lambda(k - 1) >= 1e-12 * lambda(0)) || lambda(0) <= 0.0) {
    throw DecompositionError("q_power_trace: B B^H is numerically singular");
  }
  double total = 0.0;
  for (Eigen::Index i = k - 1; i >= 0; --i) total += 1.0 / lambda(i);
  return total;
}

}  // namespace gsvd
