#include <gtest/gtest.h>

#include <variant>

#include "gsvd/structure.hpp"

namespace gsvd {
namespace {

TEST(Structure, TallC) {
  EXPECT_EQ(compute_structure({2, 3, 2}), (GsvdStructure{2, 0, 2, Regime::TallC}));
}

TEST(Structure, Intermediate) {
  EXPECT_EQ(compute_structure({2, 3, 4}), (GsvdStructure{4, 1, 1, Regime::Intermediate}));
}

TEST(Structure, Deterministic) {
  EXPECT_EQ(compute_structure({2, 3, 6}), (GsvdStructure{5, 2, 0, Regime::Deterministic}));
  // The boundary n = q + m already has s = 0.
  EXPECT_EQ(compute_structure({2, 3, 5}).regime, Regime::Deterministic);
  EXPECT_EQ(compute_structure({2, 3, 5}).s, 0u);
}

TEST(Structure, ExhaustiveConsistency) {
  for (std::size_t m = 1; m <= 12; ++m) {
    for (std::size_t q = m; q <= 12; ++q) {
      for (std::size_t n = 1; n <= 12; ++n) {
        const GsvdStructure st = compute_structure({m, q, n});
        SCOPED_TRACE(::testing::Message() << m << "," << q << "," << n);
        EXPECT_EQ(st.r + st.s, std::min(m, n));
        EXPECT_EQ(st.k - st.r - st.s, std::min(q, n) - st.s);
        EXPECT_LE(st.r + st.s, st.k);
        EXPECT_EQ(st.s == 0, st.regime == Regime::Deterministic);
        const Reduction red = reduced_dims({m, q, n});
        if (const auto* rd = std::get_if<ReducedDims>(&red)) {
          EXPECT_LE(rd->m_prime, rd->n_prime);
          EXPECT_EQ(std::min(rd->p, rd->m_prime), st.s);
        } else {
          EXPECT_EQ(st.regime, Regime::Deterministic);
        }
      }
    }
  }
}

TEST(ReducedDims, Mapping) {
  EXPECT_EQ(std::get<ReducedDims>(reduced_dims({2, 3, 2})), (ReducedDims{2, 2, 3}));
  EXPECT_EQ(std::get<ReducedDims>(reduced_dims({2, 3, 4})), (ReducedDims{3, 1, 4}));
  EXPECT_EQ(std::get<DeterministicRegime>(reduced_dims({2, 3, 6})).s, 0u);
  EXPECT_EQ(std::get<ReducedDims>(reduced_dims({4, 5, 3})), (ReducedDims{3, 4, 5}));
  EXPECT_EQ(std::get<ReducedDims>(reduced_dims({3, 4, 5})), (ReducedDims{4, 2, 5}));
  EXPECT_THROW(require_reduced_dims({2, 3, 6}), RegimeError);
}

TEST(ProblemDims, Validation) {
  EXPECT_THROW(make_problem_dims(3, 2, 4), DimensionError);
  EXPECT_THROW(make_problem_dims(0, 2, 4), DimensionError);
  EXPECT_NO_THROW(make_problem_dims(2, 2, 4));
  EXPECT_THROW(make_reduced_dims(3, 1, 2), DimensionError);
}

TEST(ExpectedQPower, Values) {
  EXPECT_DOUBLE_EQ(expected_q_power({2, 2, 8}), 1.0);
  EXPECT_DOUBLE_EQ(expected_q_power({3, 3, 2}), 0.5);
  EXPECT_DOUBLE_EQ(expected_q_power({2, 3, 4}), 4.0);
  EXPECT_DOUBLE_EQ(expected_q_power({2, 3, 9}), 1.25);
  EXPECT_THROW(expected_q_power({2, 2, 4}), UndefinedExpectationError);
}

}  // namespace
}  // namespace gsvd
