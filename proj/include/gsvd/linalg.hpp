#pragma once

// Thin contracts over Eigen's dense decompositions. Everything here returns
// plain values and raises DecompositionError on failure.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "gsvd/ensemble.hpp"
#include "gsvd/errors.hpp"

namespace gsvd::linalg {

struct SvdResult {
  ComplexMatrix left;        // rows x rows unitary
  RealVector singular_values;  // min(rows, cols), descending
  ComplexMatrix right;       // cols x cols unitary; M = left * diag * right^H
};

struct EigResult {
  RealVector eigenvalues;  // ascending
  ComplexMatrix vectors;   // unitary, columns are eigenvectors
};

struct QrResult {
  ComplexMatrix q;  // rows x rows unitary
  ComplexMatrix r;  // rows x cols upper triangular
};

/// Full SVD.
inline SvdResult svd(const ComplexMatrix& m) {
  if (!m.allFinite()) throw DecompositionError("svd: non-finite input");
  Eigen::JacobiSVD<ComplexMatrix> solver(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {solver.matrixU(), solver.singularValues(), solver.matrixV()};
}

/// Singular values only, descending.
inline RealVector singular_values(const ComplexMatrix& m) {
  if (!m.allFinite()) throw DecompositionError("singular_values: non-finite input");
  Eigen::JacobiSVD<ComplexMatrix> solver(m);
  return solver.singularValues();
}

/// Eigendecomposition of a Hermitian matrix. Only the lower triangle is read.
inline EigResult hermitian_eig(const ComplexMatrix& h) {
  if (h.rows() != h.cols()) throw DimensionError("hermitian_eig: matrix is not square");
  if (!h.allFinite()) throw DecompositionError("hermitian_eig: non-finite input");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success) throw DecompositionError("hermitian_eig: no convergence");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

inline RealVector hermitian_eigenvalues(const ComplexMatrix& h) {
  if (h.rows() != h.cols()) throw DimensionError("hermitian_eigenvalues: matrix is not square");
  if (!h.allFinite()) throw DecompositionError("hermitian_eigenvalues: non-finite input");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw DecompositionError("hermitian_eigenvalues: no convergence");
  return solver.eigenvalues();
}

/// Lower Cholesky factor G with H = G G^H.
inline ComplexMatrix cholesky_lower(const ComplexMatrix& h) {
  if (h.rows() != h.cols()) throw DimensionError("cholesky: matrix is not square");
  Eigen::LLT<ComplexMatrix> llt(h);
  if (llt.info() != Eigen::Success) {
    throw DecompositionError("cholesky: matrix is not Hermitian positive definite");
  }
  ComplexMatrix g = llt.matrixL();
  if (!g.allFinite() || (g.diagonal().real().array() <= 0.0).any()) {
    throw DecompositionError("cholesky: matrix is not Hermitian positive definite");
  }
  return g;
}

/// Solves H X = rhs for Hermitian positive definite H.
inline ComplexMatrix solve_hermitian_posdef(const ComplexMatrix& h, const ComplexMatrix& rhs) {
  if (h.rows() != rhs.rows()) throw DimensionError("solve_hermitian_posdef: row mismatch");
  Eigen::LLT<ComplexMatrix> llt(h);
  if (llt.info() != Eigen::Success || (llt.matrixLLT().diagonal().real().array() <= 0.0).any()) {
    throw DecompositionError("solve_hermitian_posdef: matrix is not Hermitian positive definite");
  }
  ComplexMatrix x = llt.solve(rhs);
  if (!x.allFinite()) throw DecompositionError("solve_hermitian_posdef: non-finite solution");
  return x;
}

/// Full QR: M = Q R.
inline QrResult qr(const ComplexMatrix& m) {
  if (!m.allFinite()) throw DecompositionError("qr: non-finite input");
  Eigen::HouseholderQR<ComplexMatrix> solver(m);
  ComplexMatrix q = solver.householderQ() * ComplexMatrix::Identity(m.rows(), m.rows());
  ComplexMatrix r = solver.matrixQR().triangularView<Eigen::Upper>();
  return {std::move(q), std::move(r)};
}

/// Nonzero eigenvalues of Z^H Z (equivalently Z Z^H), largest `count`,
/// descending. Works on whichever Gram matrix is smaller.
inline RealVector top_gram_eigenvalues(const ComplexMatrix& z, Eigen::Index count) {
  const ComplexMatrix gram = z.rows() <= z.cols() ? ComplexMatrix(z * z.adjoint())
                                                  : ComplexMatrix(z.adjoint() * z);
  const RealVector asc = hermitian_eigenvalues(gram);
  if (count > asc.size()) throw DimensionError("top_gram_eigenvalues: count exceeds Gram size");
  RealVector out(count);
  for (Eigen::Index i = 0; i < count; ++i) out(i) = asc(asc.size() - 1 - i);
  return out;
}

}  // namespace gsvd::linalg
