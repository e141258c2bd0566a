// Copyright 2026 The otm-sdp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "otm/gw_sdp.hpp"
#include "otm/sdp/verify.hpp"

using namespace otm;
using namespace otm::gw;
using protocol::Symbol;

namespace {

ExactRational R(std::int64_t p, std::int64_t q = 1) { return ExactRational(p, q); }

}  // namespace

// ---- exact arithmetic -------------------------------------------------------

TEST(ExactRational, ReducesAndCompares) {
  EXPECT_EQ(R(6, 8), R(3, 4));
  EXPECT_EQ(R(6, 8).str(), "3/4");
  EXPECT_EQ(R(-4, 2).str(), "-2");
  EXPECT_LT(R(1, 3), R(1, 2));
  EXPECT_EQ(R(1, 3) + R(1, 6), R(1, 2));
  EXPECT_THROW(R(1, 2).to_integer(), InvalidArgument);
  EXPECT_EQ(ExactRational::binomial(10, 3), R(120));
  EXPECT_EQ(ExactRational::pow2(100).str(), "1267650600228229401496703205376");
}

// ---- T --------------------------------------------------------------------

TEST(CardinalityT, SmallM) {
  EXPECT_EQ(cardinality_T(1), R(0));
  EXPECT_EQ(cardinality_T(2), R(2));
  EXPECT_EQ(cardinality_T(3), R(18));
  EXPECT_THROW(cardinality_T(0), InvalidArgument);
}

TEST(CardinalityT, MatchesEnumeration) {
  for (std::size_t m = 1; m <= 8; ++m) {
    const auto ts = enumerate_T(m);
    EXPECT_EQ(R(static_cast<std::int64_t>(ts.size())), cardinality_T(m)) << "m=" << m;
    for (const auto& t : ts) EXPECT_TRUE(in_T(t));
  }
  EXPECT_THROW(enumerate_T(9), SizeCapError);
}

TEST(CardinalityT, MEqualsTwoMembers) {
  const auto ts = enumerate_T(2);
  ASSERT_EQ(ts.size(), 2u);
  EXPECT_EQ(ts[0], (std::vector<Symbol>{Symbol::kAcc0, Symbol::kAcc1}));
  EXPECT_EQ(ts[1], (std::vector<Symbol>{Symbol::kAcc1, Symbol::kAcc0}));
}

// ---- |R| and beta ---------------------------------------------------------

TEST(CountR, OracleEquivalence) {
  for (std::size_t n = 1; n <= 3; ++n)
    for (std::size_t m = 1; m <= 3; ++m)
      EXPECT_EQ(count_R_closed(n, m), count_R_brute(n, m)) << "n=" << n << " m=" << m;
}

TEST(CountR, FrozenValues) {
  // Computed by exhaustive enumeration and frozen as regression constants.
  const std::int64_t want[3][3] = {{0, 16, 120}, {0, 128, 2208}, {0, 1024, 38784}};
  for (std::size_t n = 1; n <= 3; ++n)
    for (std::size_t m = 1; m <= 3; ++m) EXPECT_EQ(count_R_closed(n, m), R(want[n - 1][m - 1]));
}

TEST(CountR, ClosedFormIsNonNegativeIntegerAtScale) {
  for (std::size_t n : {1u, 7u, 20u, 64u})
    for (std::size_t m : {1u, 5u, 10u, 64u}) {
      const auto r = count_R_closed(n, m);
      EXPECT_TRUE(r.is_integer());
      EXPECT_GE(r, R(0));
    }
  EXPECT_GT(count_R_closed(50, 10).str().size(), 150u);
}

TEST(CountR, BruteRespectsCap) { EXPECT_THROW(count_R_brute(5, 8), SizeCapError); }

TEST(Beta, KnownValues) {
  EXPECT_EQ(beta(1, 2), R(1, 4));
  EXPECT_EQ(beta(1, 3), R(15, 32));
  EXPECT_DOUBLE_EQ(beta(1, 3).to_double(), 0.46875);
  EXPECT_EQ(beta(4, 1), R(0));
}

TEST(Beta, LargeNIncreasingInM) {
  ExactRational prev = beta(40, 1);
  for (std::size_t m = 2; m <= 10; ++m) {
    const auto b = beta(40, m);
    EXPECT_GT(b, prev);
    EXPECT_LE(b, R(1));
    prev = b;
  }
}

TEST(Heuristic, Values) {
  EXPECT_NEAR(heuristic_bound(40, 5), 5.0 / 1048576.0, 1e-20);
  EXPECT_NEAR(heuristic_bound(1, 2), std::numbers::sqrt2, 1e-15);
}

// ---- Q1 -------------------------------------------------------------------

TEST(Q1, TraceEqualsCountOverFourToN) {
  for (std::size_t n = 1; n <= 3; ++n)
    for (std::size_t m = 1; m <= 3; ++m) {
      const auto q = build_Q1(n, m);
      EXPECT_NEAR(q.trace(), count_R_brute(n, m).to_double() / std::pow(4.0, double(n)), 1e-10);
    }
  EXPECT_NEAR(build_Q1(1, 2).trace(), 4.0, 1e-12);
}

TEST(Q1, EmptyForSingleRound) {
  const auto q = build_Q1(1, 1);
  EXPECT_TRUE(q.blocks().empty());
  EXPECT_EQ(lambda_max_numeric(q), 0.0);
}

TEST(Q1, BlocksArePsdAndOnlyOnT) {
  const auto q = build_Q1(2, 2);
  const auto strides = q.classical().strides();
  for (const auto& [key, blk] : q.blocks()) {
    EXPECT_GE(linalg::min_eig(blk), -1e-12);
    std::vector<Symbol> t;
    for (std::size_t i = 0; i < 2; ++i) t.push_back(static_cast<Symbol>((key / strides[2 + i]) % 4));
    EXPECT_TRUE(in_T(t));
  }
}

TEST(LambdaMax, FormulaValues) {
  EXPECT_NEAR(lambda_max_formula(1), 0.8535533906, 1e-10);
  EXPECT_NEAR(lambda_max_formula(2), 0.3642766953, 1e-10);
  EXPECT_NEAR(lambda_max_formula(1), (1.0 + 1.0 / std::numbers::sqrt2) / 2.0, 1e-15);
}

TEST(LambdaMax, NumericFrozen) {
  // The computed block spectrum peaks at (1 + 1/sqrt 2)^n / 4^n for every
  // m in {2, 3}; frozen as the regression value.
  for (std::size_t n = 1; n <= 3; ++n)
    for (std::size_t m = 2; m <= 3; ++m) {
      const double want = std::pow((1.0 + 1.0 / std::numbers::sqrt2) / 4.0, double(n));
      EXPECT_NEAR(lambda_max_numeric(build_Q1(n, m)), want, 1e-12) << "n=" << n << " m=" << m;
    }
}

TEST(LambdaMax, ExtremalBlockAtN1) {
  // t = (Acc0, Acc1) with y = (0 o 0, 1 o 0) collects |0> and |+>.
  const auto q = build_Q1(1, 2);
  const auto s = q.classical().strides();
  const std::uint64_t key = 0 * s[0] + 2 * s[1] + 0 * s[2] + 1 * s[3];
  const auto& blk = q.blocks().at(key);
  EXPECT_NEAR(linalg::max_eig(blk), (1.0 + 1.0 / std::numbers::sqrt2) / 4.0, 1e-14);
}

TEST(Q1, SecretBitReductionIsSound) {
  for (auto [s0, s1] : {std::pair<int, int>{0, 1}, {1, 1}, {0, 0}}) {
    const auto q4 = build_Q1(1, 2, 4, s0, s1);
    const auto q8 = build_Q1(1, 2, 8, s0, s1);
    auto nonzero = [](const BlockOperator& q) {
      std::vector<double> ev;
      for (const auto& [k, b] : q.blocks())
        for (double v : linalg::hermitian_spectrum(b))
          if (std::abs(v) > 1e-12) ev.push_back(v);
      std::sort(ev.begin(), ev.end());
      return ev;
    };
    const auto a = nonzero(q4), b = nonzero(q8);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-10);
    // Dense route agrees with the blockwise one.
    const auto dense = linalg::hermitian_spectrum(q4.to_dense(1));
    EXPECT_NEAR(dense.back(), a.back(), 1e-12);
  }
}

TEST(Q1, RespectsEnumerationCap) { EXPECT_THROW(build_Q1(6, 4), SizeCapError); }

// ---- primal chains --------------------------------------------------------

TEST(Chain, TrivialFeasiblePassesAtPOne) {
  for (std::size_t n = 1; n <= 3; ++n)
    for (std::size_t m = 1; m <= 3; ++m) {
      const auto c = trivial_feasible(n, m);
      const auto rep = verify_primal_chain(c, build_Q1(n, m));
      EXPECT_TRUE(rep.pass) << "n=" << n << " m=" << m << " " << rep.failure;
      EXPECT_DOUBLE_EQ(c.p, 1.0);
      EXPECT_NEAR(c.R[0].trace(), 1.0, 1e-9);
    }
}

TEST(Chain, LinearBoundFeasible) {
  EXPECT_NEAR(linear_bound_p(1, 2), 2.0 * (1.0 + 1.0 / std::numbers::sqrt2), 1e-12);
  EXPECT_EQ(linear_bound_p(20, 1), 0.0);
  for (std::size_t n = 1; n <= 3; ++n)
    for (std::size_t m = 1; m <= 3; ++m) {
      const auto rep = verify_primal_chain(linear_bound_feasible(n, m), build_Q1(n, m));
      EXPECT_TRUE(rep.pass) << "n=" << n << " m=" << m << " " << rep.failure;
    }
}

TEST(Chain, AsymptoticRate) {
  EXPECT_NEAR(std::log2((1.0 + 1.0 / std::numbers::sqrt2) / 2.0), -0.228, 5e-4);
  EXPECT_NEAR(std::log2((1.0 + 1.0 / std::numbers::sqrt2) / 2.0), -0.2284467, 1e-7);
}

TEST(Chain, HalvedTrivialFails) {
  const auto c = trivial_feasible(1, 2).scaled(0.5);
  const auto rep = verify_primal_chain(c, build_Q1(1, 2));
  EXPECT_FALSE(rep.pass);
  EXPECT_LT(rep.min_eig_gap, -1e-3);
}

TEST(Chain, TrivialChainSatisfiesPrimalInstance) {
  const auto inst = build_primal_instance(1, 2);
  const auto c = trivial_feasible(1, 2);
  const auto rep = sdp::verify_certificate(inst, chain_to_primal_assignment(c), 1e-9);
  EXPECT_TRUE(rep.pass) << rep.worst;
  EXPECT_NEAR(rep.objective, 1.0, 1e-12);
}

// ---- dual -----------------------------------------------------------------

TEST(Dual, UniformIsFeasibleWithExactBeta) {
  for (auto [n, m] : {std::pair<std::size_t, std::size_t>{1, 2}, {1, 3}, {2, 2}, {2, 3}, {3, 2}}) {
    const auto s = dual_uniform(n, m);
    const auto rep = verify_dual(s, build_Q1(n, m));
    EXPECT_TRUE(rep.pass) << rep.failure;
    EXPECT_EQ(rep.beta, beta(n, m));
    EXPECT_NEAR(rep.objective, beta(n, m).to_double(), 1e-12);
    for (double e : rep.constraint_min_eig) EXPECT_NEAR(e, 0.0, 1e-12);
  }
  EXPECT_EQ(beta(2, 2), count_R_closed(2, 2) / R(16 * 64));
}

TEST(Dual, SingleRoundHasZeroObjective) {
  const auto rep = verify_dual(dual_uniform(2, 1), build_Q1(2, 1));
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.objective, 0.0);
}

TEST(Dual, DoubledY1Fails) {
  auto s = dual_uniform(1, 2);
  s.Y[1] = s.Y[1].scaled(2.0);
  const auto rep = verify_dual(s, build_Q1(1, 2));
  EXPECT_FALSE(rep.pass);
  EXPECT_NEAR(rep.objective, 0.5, 1e-12);
  EXPECT_LT(*std::min_element(rep.constraint_min_eig.begin(), rep.constraint_min_eig.end()), -1e-3);
}

TEST(Dual, UniformSatisfiesDualInstance) {
  const auto inst = build_dual_instance(1, 2);
  const auto rep = sdp::verify_certificate(inst, dual_to_assignment(dual_uniform(1, 2)), 1e-12);
  EXPECT_TRUE(rep.pass) << rep.worst;
  EXPECT_NEAR(rep.objective, 0.25, 1e-12);
}

// ---- instances ------------------------------------------------------------

TEST(Instance, PrimalShapes) {
  const auto a = build_primal_instance(1, 2);
  ASSERT_EQ(a.variables.size(), 2u);
  EXPECT_EQ(a.variable_dim(0), 2u);
  EXPECT_EQ(a.variable_dim(1), 32u);
  EXPECT_EQ(a.constraint_dim(0), 8u);
  EXPECT_EQ(a.constraint_dim(1), 128u);
  EXPECT_EQ(build_primal_instance(1, 3).max_constraint_dim(), 2048u);
  EXPECT_NO_THROW(a.validate());
  EXPECT_NO_THROW(build_dual_instance(1, 3).validate());
}

TEST(Instance, SizeCap) {
  EXPECT_THROW(build_primal_instance(3, 3), SizeCapError);
  EXPECT_THROW(build_dual_instance(2, 4), SizeCapError);
}

TEST(BlockOperator, TraceOutMatchesDensePartialTrace) {
  const auto q = build_Q1(1, 2);
  const auto full = q.full_layout(1);
  for (const char* reg : {"Y1", "X1", "X3"}) {
    const auto dense = linalg::partial_trace(q.to_dense(1), full, {std::string(reg)});
    const auto blk = q.traced_out(reg);
    EXPECT_LT(linalg::max_abs_diff(blk.to_dense(1), dense), 1e-14) << reg;
  }
}
