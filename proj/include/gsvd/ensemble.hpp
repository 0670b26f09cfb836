#pragma once

// Dense complex matrices and the seeded random ensembles built on them.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "gsvd/errors.hpp"

namespace gsvd {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

namespace detail {

// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline void require_dims(Eigen::Index rows, Eigen::Index cols, const char* what) {
  if (rows < 1 || cols < 1) {
    throw DimensionError(std::string(what) + ": dimensions must be >= 1, got " +
                         std::to_string(rows) + "x" + std::to_string(cols));
  }
}

}  // namespace detail

/// A reproducible random stream identified by (master_seed, stream_index).
///
/// Two streams with the same identifiers produce the same sequence. Streams
/// with different indices are seeded from different SplitMix64 images of the
/// pair, so they behave as independent generators. substream() derives a child
/// family keyed on this stream's identity, which lets a batch hand one stream
/// per chunk to its workers without coordination.
class RngStream {
 public:
  using Engine = std::mt19937_64;

  explicit RngStream(std::uint64_t master_seed, std::uint64_t stream_index = 0)
      : master_seed_(master_seed), stream_index_(stream_index) {
    const std::uint64_t a = detail::splitmix64(master_seed);
    const std::uint64_t b = detail::splitmix64(a ^ detail::splitmix64(stream_index + 0x632be59bd9b4e019ULL));
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    engine_.seed(seq);
  }

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t stream_index() const noexcept { return stream_index_; }

  /// Child stream i of this stream; independent of how far this stream has
  /// been advanced.
  RngStream substream(std::uint64_t index) const {
    return RngStream(detail::splitmix64(master_seed_ ^ detail::splitmix64(~stream_index_)), index);
  }

  Engine& engine() noexcept { return engine_; }

  /// Standard normal deviate.
  double normal() { return normal_(engine_); }

  /// Uniform integer in [0, bound).
  std::size_t uniform_index(std::size_t bound) {
    std::uniform_int_distribution<std::size_t> dist(0, bound - 1);
    return dist(engine_);
  }

  /// Uniform real in [0, 1).
  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_index_;
  Engine engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// rows x cols matrix of i.i.d. circular complex Gaussians with E|x|^2 = 1
/// (real and imaginary parts each N(0, 1/2)).
inline ComplexMatrix sample_ginibre(Eigen::Index rows, Eigen::Index cols, RngStream& rng) {
  detail::require_dims(rows, cols, "sample_ginibre");
  const double scale = std::sqrt(0.5);
  ComplexMatrix out(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = rng.normal();
      const double im = rng.normal();
      out(i, j) = Complex(scale * re, scale * im);
    }
  }
  return out;
}

/// Haar-distributed dim x dim unitary.
///
/// QR of a Ginibre draw, with each column of Q rotated by the phase of the
/// matching diagonal entry of R so that R has a positive real diagonal. Without
/// the correction the result is unitary but not Haar.
inline ComplexMatrix sample_haar_unitary(Eigen::Index dim, RngStream& rng) {
  detail::require_dims(dim, dim, "sample_haar_unitary");
  const ComplexMatrix z = sample_ginibre(dim, dim, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
  const ComplexMatrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    const Complex phase = mag > 0.0 ? d / mag : Complex(1.0, 0.0);
    q.col(j) *= phase;
  }
  return q;
}

inline bool all_finite(const ComplexMatrix& m) {
  return m.allFinite();
}

}  // namespace gsvd
