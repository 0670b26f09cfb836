#pragma once

// Seeded Monte Carlo samplers for the three constructions of the generalized
// singular value law (GSVD of a Gaussian pair, eigenvalues of the ratio
// matrix L, truncated Haar blocks) and for the power of Q.
//
// A batch of `count` draws is cut into fixed-size chunks; chunk c draws from
// substream c of the batch stream and chunks are concatenated in order. The
// result therefore depends only on (stream, dims, count), never on how many
// workers processed it.

#include <algorithm>
#include <cstdint>
#include <exception>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <variant>
#include <vector>

#include "gsvd/decomposition.hpp"
#include "gsvd/ensemble.hpp"
#include "gsvd/errors.hpp"
#include "gsvd/linalg.hpp"
#include "gsvd/structure.hpp"

namespace gsvd {

enum class SamplerId { GsvdDirect, LMatrix, HaarTruncation, QPower };

inline std::string_view to_string(SamplerId id) {
  switch (id) {
    case SamplerId::GsvdDirect: return "GSVD_DIRECT";
    case SamplerId::LMatrix: return "L_MATRIX";
    case SamplerId::HaarTruncation: return "HAAR_TRUNCATION";
    case SamplerId::QPower: return "Q_POWER";
  }
  return "?";
}

/// Which block of the Haar matrix the truncation sampler reads.
enum class HaarBlock {
  UpperLeft,   // P11, m x n
  LowerRight,  // P22, q x (m + q - n)
};

inline constexpr std::size_t kChunkSize = 1000;
/// Batches abort when more than this fraction of attempted draws fail.
inline constexpr double kMaxFailureRate = 1e-3;

struct SampleBatch {
  SamplerId sampler = SamplerId::GsvdDirect;
  std::variant<ProblemDims, ReducedDims> dims;
  std::uint64_t seed = 0;
  std::uint64_t stream_index = 0;
  std::size_t count = 0;
  std::size_t arity = 0;
  std::vector<double> values;  // count * arity, draw-major
  std::size_t failures = 0;    // degenerate draws discarded and redrawn

  std::span<const double> draw(std::size_t i) const {
    return std::span<const double>(values).subspan(i * arity, arity);
  }
};

struct SamplerOptions {
  unsigned workers = 1;
};

namespace detail {

// draw(rng, out) appends `arity` values or throws a gsvd::Error for a
// degenerate draw.
inline std::vector<double> run_chunked(std::size_t count, std::size_t arity, const RngStream& stream,
                                       unsigned workers, std::size_t& failures,
                                       const std::function<void(RngStream&, double*)>& draw) {
  const std::size_t chunks = (count + kChunkSize - 1) / kChunkSize;
  std::vector<double> values(count * arity);
  std::vector<std::size_t> chunk_failures(chunks, 0);
  std::vector<std::exception_ptr> errors(chunks);
  const std::size_t budget = std::size_t(kMaxFailureRate * double(count));

  auto run_chunk = [&](std::size_t c) {
    try {
      RngStream rng = stream.substream(c);
      const std::size_t begin = c * kChunkSize;
      const std::size_t end = std::min(count, begin + kChunkSize);
      for (std::size_t i = begin; i < end; ++i) {
        for (;;) {
          try {
            draw(rng, values.data() + i * arity);
            break;
          } catch (const DecompositionError&) {
          } catch (const DegeneracyError&) {
          }
          if (++chunk_failures[c] > budget) {
            throw BatchAbortedError("sampler: more than 0.1% of draws were degenerate");
          }
        }
      }
    } catch (...) {
      errors[c] = std::current_exception();
    }
  };

  const unsigned n_workers = std::max(1u, std::min<unsigned>(workers, unsigned(std::max<std::size_t>(chunks, 1))));
  if (n_workers == 1) {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (unsigned w = 0; w < n_workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t c = w; c < chunks; c += n_workers) run_chunk(c);
      });
    }
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  failures = 0;
  for (std::size_t f : chunk_failures) failures += f;
  if (failures > budget) throw BatchAbortedError("sampler: more than 0.1% of draws were degenerate");
  return values;
}

inline SampleBatch make_batch(SamplerId id, std::variant<ProblemDims, ReducedDims> dims,
                              const RngStream& rng, std::size_t count, std::size_t arity) {
  if (count < 1) throw DimensionError("sampler: count must be >= 1");
  SampleBatch b;
  b.sampler = id;
  b.dims = dims;
  b.seed = rng.master_seed();
  b.stream_index = rng.stream_index();
  b.count = count;
  b.arity = arity;
  return b;
}

}  // namespace detail

/// Squared generalized singular values of Ginibre pairs (A, C); arity s.
inline SampleBatch sample_w_gsvd(const ProblemDims& dims, std::size_t count, const RngStream& rng,
                                 SamplerOptions opts = {}) {
  const GsvdStructure st = compute_structure(make_problem_dims(dims.m, dims.q, dims.n));
  if (st.regime == Regime::Deterministic) {
    throw RegimeError("sample_w_gsvd: DETERMINISTIC regime (n >= q + m), s = 0");
  }
  SampleBatch b = detail::make_batch(SamplerId::GsvdDirect, dims, rng, count, st.s);
  const auto m = Eigen::Index(dims.m), q = Eigen::Index(dims.q), n = Eigen::Index(dims.n);
  b.values = detail::run_chunked(count, st.s, rng, opts.workers, b.failures, [&](RngStream& r, double* out) {
    const ComplexMatrix a = sample_ginibre(m, n, r);
    const ComplexMatrix c = sample_ginibre(q, n, r);
    const GsvdSpectrum spec = gsvd_spectrum(a, c);
    for (Eigen::Index i = 0; i < spec.size(); ++i) out[i] = spec.w(i);
  });
  return b;
}

/// Nonzero eigenvalues of L = X^H (Y Y^H)^{-1} X; arity l = min{p, m'}.
inline SampleBatch sample_w_L(const ReducedDims& rdims, std::size_t count, const RngStream& rng,
                              SamplerOptions opts = {}) {
  const ReducedDims rd = make_reduced_dims(rdims.m_prime, rdims.p, rdims.n_prime);
  const std::size_t l = std::min(rd.p, rd.m_prime);
  SampleBatch b = detail::make_batch(SamplerId::LMatrix, rd, rng, count, l);
  const auto mp = Eigen::Index(rd.m_prime), p = Eigen::Index(rd.p), np = Eigen::Index(rd.n_prime);
  b.values = detail::run_chunked(count, l, rng, opts.workers, b.failures, [&](RngStream& r, double* out) {
    const ComplexMatrix x = sample_ginibre(mp, p, r);
    const ComplexMatrix y = sample_ginibre(mp, np, r);
    ComplexMatrix lmat = x.adjoint() * linalg::solve_hermitian_posdef(y * y.adjoint(), x);
    lmat = 0.5 * (lmat + lmat.adjoint()).eval();
    const RealVector asc = linalg::hermitian_eigenvalues(lmat);
    for (std::size_t i = 0; i < l; ++i) {
      const double v = asc(asc.size() - 1 - Eigen::Index(i));
      if (!(v > 0.0)) throw DecompositionError("sample_w_L: nonpositive eigenvalue");
      out[i] = v;
    }
  });
  return b;
}

/// Squared interior singular values (alpha^2) of a truncated block of a Haar
/// unitary of size m + q; arity s. INTERMEDIATE regime only.
inline SampleBatch sample_alpha_haar(const ProblemDims& dims, std::size_t count, const RngStream& rng,
                                     SamplerOptions opts = {}, HaarBlock block = HaarBlock::UpperLeft) {
  const GsvdStructure st = compute_structure(make_problem_dims(dims.m, dims.q, dims.n));
  if (st.regime != Regime::Intermediate) {
    throw RegimeError(std::string("sample_alpha_haar: requires the INTERMEDIATE regime (q < n < q + m), got ") +
                      std::string(to_string(st.regime)));
  }
  SampleBatch b = detail::make_batch(SamplerId::HaarTruncation, dims, rng, count, st.s);
  const auto m = Eigen::Index(dims.m), q = Eigen::Index(dims.q), n = Eigen::Index(dims.n);
  const Eigen::Index size = m + q;
  const std::size_t expected_ones = block == HaarBlock::UpperLeft ? st.r : 0;
  b.values = detail::run_chunked(count, st.s, rng, opts.workers, b.failures, [&](RngStream& r, double* out) {
    const ComplexMatrix haar = sample_haar_unitary(size, r);
    const ComplexMatrix sub = block == HaarBlock::UpperLeft
                                  ? ComplexMatrix(haar.topLeftCorner(m, n))
                                  : ComplexMatrix(haar.bottomRightCorner(q, size - n));
    const RealVector sv = linalg::singular_values(sub);
    std::size_t ones = 0, interior = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      if (sv(i) > kOneThreshold) {
        ++ones;
      } else if (sv(i) >= kZeroThreshold) {
        if (interior < st.s) out[interior] = sv(i) * sv(i);
        ++interior;
      }
    }
    if (ones != expected_ones || interior != st.s) {
      throw DegeneracyError("sample_alpha_haar: singular value classification mismatch");
    }
  });
  return b;
}

/// trace(Q Q^H) of Ginibre pairs; arity 1. Requires m + q != n.
inline SampleBatch sample_q_power(const ProblemDims& dims, std::size_t count, const RngStream& rng,
                                  SamplerOptions opts = {}) {
  if (dims.m < 1 || dims.q < 1 || dims.n < 1) throw DimensionError("sample_q_power: dims must be >= 1");
  if (dims.m + dims.q == dims.n) {
    throw UndefinedExpectationError("sample_q_power: expectation undefined at m+q=n");
  }
  SampleBatch b = detail::make_batch(SamplerId::QPower, dims, rng, count, 1);
  const auto m = Eigen::Index(dims.m), q = Eigen::Index(dims.q), n = Eigen::Index(dims.n);
  b.values = detail::run_chunked(count, 1, rng, opts.workers, b.failures, [&](RngStream& r, double* out) {
    const ComplexMatrix a = sample_ginibre(m, n, r);
    const ComplexMatrix c = sample_ginibre(q, n, r);
    out[0] = q_power_trace(a, c);
  });
  return b;
}

/// alpha^2 -> w = alpha^2 / (1 - alpha^2), elementwise.
inline SampleBatch alpha_squared_to_w(SampleBatch batch) {
  for (double& v : batch.values) v = v / (1.0 - v);
  return batch;
}

/// One uniformly chosen value per draw. The index choice uses a substream
/// reserved for this purpose, so it is a pure function of the batch.
inline std::vector<double> scalar_reduce(const SampleBatch& batch) {
  if (batch.arity == 1) return batch.values;
  RngStream picker = RngStream(batch.seed, batch.stream_index).substream(~std::uint64_t{0});
  std::vector<double> out(batch.count);
  for (std::size_t i = 0; i < batch.count; ++i) {
    out[i] = batch.values[i * batch.arity + picker.uniform_index(batch.arity)];
  }
  return out;
}

}  // namespace gsvd
