#pragma once

// Named verification experiments. Each one draws its batches from fixed
// substreams of RngStream(seed, 0), so a report is a pure function of
// (experiment, dims, samples, seed); worker count only changes wall-clock.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gsvd/errors.hpp"
#include "gsvd/laws.hpp"
#include "gsvd/quadrature.hpp"
#include "gsvd/samplers.hpp"
#include "gsvd/stats.hpp"
#include "gsvd/structure.hpp"

namespace gsvd {

enum class Experiment { Theorem1, Lemma1, Normalization, Corollary2, HaarChain };

inline std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::Theorem1: return "THEOREM1";
    case Experiment::Lemma1: return "LEMMA1";
    case Experiment::Normalization: return "NORMALIZATION";
    case Experiment::Corollary2: return "COROLLARY2";
    case Experiment::HaarChain: return "HAAR_CHAIN";
  }
  return "?";
}

using ExperimentDims = std::variant<ProblemDims, ReducedDims>;

struct ExperimentConfig {
  std::size_t samples = 20000;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  double alpha_level = 0.01;
  double normalization_tolerance = 1e-6;
  /// The trace-mean check needs |m + q - n| at least this large.
  std::size_t min_power_gap = 3;
};

struct NormalizationReport {
  double value = 0.0;
  double target = 1.0;
  double tolerance = 0.0;
  double log_M = 0.0;
  bool pass = false;
};

struct CheckReport {
  std::string name;
  std::variant<KsReport, MeanReport, NormalizationReport> result;

  bool pass() const {
    return std::visit([](const auto& r) { return r.pass; }, result);
  }
};

struct BatchSummary {
  std::string name;
  SamplerId sampler;
  std::uint64_t seed = 0;
  std::uint64_t stream_index = 0;
  std::size_t count = 0;
  std::size_t arity = 0;
  std::size_t failures = 0;
};

struct VerificationReport {
  Experiment experiment = Experiment::Theorem1;
  ExperimentDims dims;
  std::optional<ReducedDims> reduced;
  ExperimentConfig config;
  std::vector<CheckReport> checks;
  std::vector<BatchSummary> batches;
  bool pass = false;
  double wall_seconds = 0.0;  // not part of the deterministic content
};

namespace detail {

// Substream tags under RngStream(seed, 0).
inline constexpr std::uint64_t kStreamGsvd = 1;
inline constexpr std::uint64_t kStreamL = 2;
inline constexpr std::uint64_t kStreamHaarUpper = 3;
inline constexpr std::uint64_t kStreamHaarLower = 4;
inline constexpr std::uint64_t kStreamPower = 5;

inline ProblemDims require_problem_dims(const ExperimentDims& dims, Experiment e) {
  if (const auto* pd = std::get_if<ProblemDims>(&dims)) {
    return make_problem_dims(pd->m, pd->q, pd->n);
  }
  throw RegimeError(std::string(to_string(e)) + " needs problem dimensions (m, q, n)");
}

inline BatchSummary summarize(std::string name, const SampleBatch& b) {
  return {std::move(name), b.sampler, b.seed, b.stream_index, b.count, b.arity, b.failures};
}

}  // namespace detail

/// Runs one named experiment. Throws RegimeError (or a subclass) when the
/// dimensions do not fit the experiment; statistical failures are reported,
/// not thrown.
inline VerificationReport run_experiment(Experiment experiment, const ExperimentDims& dims,
                                         const ExperimentConfig& config = {}) {
  const auto start = std::chrono::steady_clock::now();
  VerificationReport rep;
  rep.experiment = experiment;
  rep.dims = dims;
  rep.config = config;
  const RngStream base(config.seed, 0);
  const SamplerOptions opts{config.workers};
  const std::size_t n = config.samples;

  switch (experiment) {
    case Experiment::Theorem1: {
      const ProblemDims pd = detail::require_problem_dims(dims, experiment);
      const ReducedDims rd = require_reduced_dims(pd);
      rep.reduced = rd;
      const SampleBatch g = sample_w_gsvd(pd, n, base.substream(detail::kStreamGsvd), opts);
      const SampleBatch l = sample_w_L(rd, n, base.substream(detail::kStreamL), opts);
      rep.batches = {detail::summarize("gsvd", g), detail::summarize("L", l)};
      rep.checks.push_back({"ks_gsvd_vs_L", ks_two_sample(g, l, config.alpha_level)});
      break;
    }
    case Experiment::Lemma1: {
      ReducedDims rd;
      std::optional<ProblemDims> pd;
      if (const auto* p = std::get_if<ProblemDims>(&dims)) {
        pd = make_problem_dims(p->m, p->q, p->n);
        rd = require_reduced_dims(*pd);
      } else {
        const auto& r = std::get<ReducedDims>(dims);
        rd = make_reduced_dims(r.m_prime, r.p, r.n_prime);
      }
      rep.reduced = rd;
      const LawParams law(rd);
      (void)law.terms();  // surfaces the l <= 7 limit before any sampling
      auto cdf = [&law](double w) { return marginal_cdf(law, w); };
      if (pd) {
        const SampleBatch g = sample_w_gsvd(*pd, n, base.substream(detail::kStreamGsvd), opts);
        rep.batches.push_back(detail::summarize("gsvd", g));
        rep.checks.push_back({"ks_gsvd_vs_marginal_cdf", ks_one_sample(g, cdf, config.alpha_level)});
      }
      const SampleBatch l = sample_w_L(rd, n, base.substream(detail::kStreamL), opts);
      rep.batches.push_back(detail::summarize("L", l));
      rep.checks.push_back({"ks_L_vs_marginal_cdf", ks_one_sample(l, cdf, config.alpha_level)});
      break;
    }
    case Experiment::Normalization: {
      ReducedDims rd;
      if (const auto* p = std::get_if<ProblemDims>(&dims)) {
        rd = require_reduced_dims(make_problem_dims(p->m, p->q, p->n));
      } else {
        const auto& r = std::get<ReducedDims>(dims);
        rd = make_reduced_dims(r.m_prime, r.p, r.n_prime);
      }
      rep.reduced = rd;
      const LawParams law(rd);
      NormalizationReport nr;
      nr.tolerance = config.normalization_tolerance;
      nr.log_M = law.log_M();
      nr.value = quadrature_integrate([&law](double w) { return marginal_pdf(law, w); }, 1e-10);
      nr.pass = std::abs(nr.value - nr.target) <= nr.tolerance;
      rep.checks.push_back({"marginal_pdf_integral", nr});
      break;
    }
    case Experiment::Corollary2: {
      const ProblemDims pd = detail::require_problem_dims(dims, experiment);
      const double target = expected_q_power(pd);
      const std::size_t rows = pd.m + pd.q;
      const std::size_t gap = rows > pd.n ? rows - pd.n : pd.n - rows;
      if (gap < config.min_power_gap) {
        throw RegimeError("COROLLARY2: |m+q-n| = " + std::to_string(gap) + " < " +
                          std::to_string(config.min_power_gap) +
                          "; the Monte Carlo variance is too large for a 3-sigma check");
      }
      const SampleBatch b = sample_q_power(pd, n, base.substream(detail::kStreamPower), opts);
      rep.batches.push_back(detail::summarize("q_power", b));
      rep.checks.push_back({"mean_q_power", mean_report(b.values, target)});
      break;
    }
    case Experiment::HaarChain: {
      const ProblemDims pd = detail::require_problem_dims(dims, experiment);
      if (compute_structure(pd).regime != Regime::Intermediate) {
        throw RegimeError("HAAR_CHAIN: requires the INTERMEDIATE regime (q < n < q + m)");
      }
      rep.reduced = require_reduced_dims(pd);
      const SampleBatch upper = sample_alpha_haar(pd, n, base.substream(detail::kStreamHaarUpper), opts,
                                                  HaarBlock::UpperLeft);
      const SampleBatch lower = sample_alpha_haar(pd, n, base.substream(detail::kStreamHaarLower), opts,
                                                  HaarBlock::LowerRight);
      const SampleBatch g = sample_w_gsvd(pd, n, base.substream(detail::kStreamGsvd), opts);
      rep.batches = {detail::summarize("haar_upper_left", upper), detail::summarize("haar_lower_right", lower),
                     detail::summarize("gsvd", g)};
      rep.checks.push_back({"ks_haar_upper_vs_lower", ks_two_sample(upper, lower, config.alpha_level)});
      rep.checks.push_back({"ks_haar_vs_gsvd", ks_two_sample(alpha_squared_to_w(upper), g, config.alpha_level)});
      break;
    }
  }

  rep.pass = !rep.checks.empty();
  for (const auto& c : rep.checks) rep.pass = rep.pass && c.pass();
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace gsvd
