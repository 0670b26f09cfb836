#include <gtest/gtest.h>

#include "gsvd/experiments.hpp"
#include "gsvd/report_io.hpp"

namespace gsvd {
namespace {

ExperimentConfig small(std::size_t samples, unsigned workers = 1) {
  ExperimentConfig cfg;
  cfg.samples = samples;
  cfg.seed = 3;
  cfg.workers = workers;
  return cfg;
}

TEST(RunExperiment, Theorem1Tall) {
  const auto rep = run_experiment(Experiment::Theorem1, ProblemDims{4, 5, 3}, small(5000));
  ASSERT_TRUE(rep.reduced);
  EXPECT_EQ(rep.reduced->m_prime, 3u);
  EXPECT_EQ(rep.reduced->p, 4u);
  EXPECT_EQ(rep.reduced->n_prime, 5u);
  ASSERT_EQ(rep.checks.size(), 1u);
  EXPECT_TRUE(rep.pass);
}

TEST(RunExperiment, Lemma1AcceptsEitherDims) {
  const auto full = run_experiment(Experiment::Lemma1, ProblemDims{2, 3, 2}, small(5000));
  EXPECT_EQ(full.checks.size(), 2u);
  EXPECT_TRUE(full.pass);
  const auto reduced = run_experiment(Experiment::Lemma1, ReducedDims{2, 2, 3}, small(5000));
  EXPECT_EQ(reduced.checks.size(), 1u);
  EXPECT_TRUE(reduced.pass);
}

TEST(RunExperiment, Normalization) {
  const auto rep = run_experiment(Experiment::Normalization, ReducedDims{3, 2, 4});
  ASSERT_EQ(rep.checks.size(), 1u);
  const auto& nr = std::get<NormalizationReport>(rep.checks[0].result);
  EXPECT_NEAR(nr.value, 1.0, 1e-6);
  EXPECT_TRUE(rep.pass);
  EXPECT_TRUE(rep.batches.empty());
}

TEST(RunExperiment, Corollary2) {
  const auto rep = run_experiment(Experiment::Corollary2, ProblemDims{2, 2, 8}, small(20000));
  const auto& mr = std::get<MeanReport>(rep.checks.at(0).result);
  EXPECT_EQ(mr.target, 1.0);
  EXPECT_TRUE(rep.pass);
}

TEST(RunExperiment, HaarChain) {
  const auto rep = run_experiment(Experiment::HaarChain, ProblemDims{2, 3, 4}, small(5000));
  EXPECT_EQ(rep.checks.size(), 2u);
  EXPECT_EQ(rep.batches.size(), 3u);
  EXPECT_TRUE(rep.pass);
}

TEST(RunExperiment, RegimeErrors) {
  EXPECT_THROW(run_experiment(Experiment::Theorem1, ProblemDims{2, 3, 6}, small(10)), RegimeError);
  EXPECT_THROW(run_experiment(Experiment::Theorem1, ReducedDims{2, 2, 3}, small(10)), RegimeError);
  EXPECT_THROW(run_experiment(Experiment::HaarChain, ProblemDims{2, 3, 2}, small(10)), RegimeError);
  EXPECT_THROW(run_experiment(Experiment::Corollary2, ProblemDims{2, 2, 4}, small(10)),
               UndefinedExpectationError);
  EXPECT_THROW(run_experiment(Experiment::Corollary2, ProblemDims{2, 2, 5}, small(10)), RegimeError);
  EXPECT_THROW(run_experiment(Experiment::Lemma1, ReducedDims{8, 8, 8}, small(10)), ComplexityError);
}

TEST(RunExperiment, ReportIndependentOfRunAndWorkers) {
  const auto a = io::report_data(run_experiment(Experiment::Theorem1, ProblemDims{3, 4, 5}, small(2500, 1)));
  const auto b = io::report_data(run_experiment(Experiment::Theorem1, ProblemDims{3, 4, 5}, small(2500, 1)));
  const auto c = io::report_data(run_experiment(Experiment::Theorem1, ProblemDims{3, 4, 5}, small(2500, 3)));
  EXPECT_EQ(a.dump(), b.dump());
  EXPECT_EQ(a.dump(), c.dump());
}

TEST(ReportIo, JsonLayout) {
  const auto rep = run_experiment(Experiment::Lemma1, ProblemDims{2, 3, 2}, small(1000));
  const io::Json j = io::to_json(rep);
  ASSERT_TRUE(j.contains("meta"));
  ASSERT_TRUE(j.contains("data"));
  EXPECT_EQ(j["meta"]["command"], "verify");
  EXPECT_EQ(j["meta"]["seed"], 3);
  EXPECT_EQ(j["meta"]["workers"], 1);
  EXPECT_TRUE(j["meta"]["timing"].contains("timestamp"));
  EXPECT_EQ(j["data"]["experiment"], "LEMMA1");
  EXPECT_EQ(j["data"]["reduced_dims"]["m_prime"], 2);
  EXPECT_EQ(j["data"]["checks"].size(), 2u);
  EXPECT_EQ(j["data"]["checks"][0]["kind"], "ks_one_sample");
  EXPECT_EQ(j["data"]["thresholds"]["ks_constant"], 1.628);
  EXPECT_EQ(j["data"]["pass"], rep.pass);
}

TEST(ReportIo, Csv) {
  const auto rep = run_experiment(Experiment::HaarChain, ProblemDims{2, 3, 4}, small(1000));
  const std::string csv = io::to_csv(rep);
  EXPECT_EQ(csv.rfind("experiment,check,kind,statistic,threshold,n1,n2,pass\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}

TEST(ReportIo, DoublesRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, 2.2250738585072014e-308, -2.5}) {
    EXPECT_EQ(std::stod(io::format_double(v)), v);
  }
  EXPECT_EQ(io::csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(io::csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(io::csv_field("plain"), "plain");
}

}  // namespace
}  // namespace gsvd
