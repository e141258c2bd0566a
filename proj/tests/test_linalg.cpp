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

#include <numeric>

#include "otm/errors.hpp"
#include "support.hpp"

using namespace otm;
using namespace otm::linalg;
using otm::testing::random_hermitian;
using otm::testing::random_matrix;
using otm::testing::random_psd;

TEST(Kron, IdentityTensorIdentityIsIdentity) {
  EXPECT_EQ(max_abs_diff(kron(ComplexMatrix::identity(2), ComplexMatrix::identity(3)),
                         ComplexMatrix::identity(6)),
            0.0);
}

TEST(Kron, LeftFactorIsMostSignificant) {
  const auto a = ComplexMatrix::from_rows({{0, 1}, {0, 0}});
  const auto k = kron(a, ComplexMatrix::identity(2));
  EXPECT_EQ(k(0, 2), cplx(1));
  EXPECT_EQ(k(1, 3), cplx(1));
  EXPECT_EQ(k(0, 1), cplx(0));
}

TEST(Kron, MixedProductProperty) {
  CounterRng rng(11);
  for (int rep = 0; rep < 5; ++rep) {
    const auto a = random_matrix(2, 2, rng), b = random_matrix(3, 3, rng);
    const auto c = random_matrix(2, 2, rng), d = random_matrix(3, 3, rng);
    EXPECT_LT(max_abs_diff(kron(a, b) * kron(c, d), kron(a * c, b * d)), 1e-12);
  }
}

TEST(PartialTrace, OfProductFactorizes) {
  CounterRng rng(3);
  const RegisterLayout l{{"A", 2}, {"B", 3}, {"C", 2}};
  for (int rep = 0; rep < 5; ++rep) {
    const auto a = random_hermitian(2, rng), b = random_hermitian(3, rng), c = random_hermitian(2, rng);
    const auto full = kron(kron(a, b), c);
    auto expect = kron(a, c);
    expect *= b.trace();
    EXPECT_LT(max_abs_diff(partial_trace(full, l, {"B"}), expect), 1e-11);
    auto only_b = b;
    only_b *= a.trace() * c.trace();
    EXPECT_LT(max_abs_diff(partial_trace(full, l, {"A", "C"}), only_b), 1e-10);
  }
}

TEST(PartialTrace, PreservesTraceAndHermiticity) {
  CounterRng rng(5);
  const RegisterLayout l{{"Y1", 4}, {"X1", 2}, {"X2", 4}};
  for (int rep = 0; rep < 5; ++rep) {
    const auto h = random_hermitian(32, rng);
    const auto r = partial_trace(h, l, {"X1"});
    EXPECT_TRUE(r.is_hermitian(1e-12));
    EXPECT_NEAR(std::abs(r.trace() - h.trace()), 0.0, 1e-10);
  }
}

TEST(PartialTrace, OfPsdIsPsd) {
  CounterRng rng(6);
  const RegisterLayout l{{"A", 3}, {"B", 4}};
  for (int rep = 0; rep < 10; ++rep) EXPECT_GE(min_eig(partial_trace(random_psd(12, rng), l, {"A"})), -1e-10);
}

TEST(PartialTrace, RejectsUnknownRegisterAndBadShape) {
  const RegisterLayout l{{"A", 2}, {"B", 2}};
  EXPECT_THROW(partial_trace(ComplexMatrix::identity(4), l, {"Z"}), UnknownRegisterError);
  EXPECT_THROW(partial_trace(ComplexMatrix::identity(3), l, {"A"}), DimensionError);
}

TEST(Embed, IsAdjointOfPartialTrace) {
  // <embed(M), X> = <M, Tr_rest X> for every X.
  CounterRng rng(8);
  const RegisterLayout sub{{"X2", 4}, {"Y1", 2}};
  const RegisterLayout target{{"Y1", 2}, {"X1", 3}, {"X2", 4}};
  for (int rep = 0; rep < 5; ++rep) {
    const auto m = random_hermitian(8, rng);
    const auto x = random_hermitian(24, rng);
    const double lhs = frobenius_inner(embed(m, sub, target), x);
    const auto tr = partial_trace(x, target, {"X1"});
    const RegisterLayout kept{{"Y1", 2}, {"X2", 4}};
    const double rhs = frobenius_inner(embed(m, sub, kept), tr);
    EXPECT_NEAR(lhs, rhs, 1e-9);
  }
}

TEST(Embed, PermutesIntoTargetOrder) {
  CounterRng rng(9);
  const auto a = random_matrix(2, 2, rng), b = random_matrix(3, 3, rng);
  const RegisterLayout ba{{"B", 3}, {"A", 2}};
  const RegisterLayout ab{{"A", 2}, {"B", 3}};
  EXPECT_LT(max_abs_diff(embed(kron(b, a), ba, ab), kron(a, b)), 1e-14);
}

TEST(Spectrum, SumEqualsTraceAndSorted) {
  CounterRng rng(12);
  for (std::size_t dim : {1u, 2u, 5u, 16u}) {
    const auto h = random_hermitian(dim, rng);
    const auto ev = hermitian_spectrum(h);
    ASSERT_EQ(ev.size(), dim);
    EXPECT_TRUE(std::is_sorted(ev.begin(), ev.end()));
    EXPECT_NEAR(std::accumulate(ev.begin(), ev.end(), 0.0), h.trace().real(), 1e-10);
  }
}

TEST(Spectrum, KnownValues) {
  const auto x = ComplexMatrix::from_rows({{0, 1}, {1, 0}});
  const auto ev = hermitian_spectrum(x);
  EXPECT_NEAR(ev[0], -1.0, 1e-15);
  EXPECT_NEAR(ev[1], 1.0, 1e-15);
  const auto y = ComplexMatrix::from_rows({{0, cplx(0, -1)}, {cplx(0, 1), 0}});
  EXPECT_NEAR(max_eig(y), 1.0, 1e-15);
}

TEST(Spectrum, BlockDiagonalMatchesDense) {
  // A matrix that splits into components must give the same spectrum as the
  // concatenation of the component spectra.
  CounterRng rng(13);
  const auto a = random_hermitian(3, rng), b = random_hermitian(2, rng);
  ComplexMatrix m(5, 5);
  const std::size_t ia[] = {0, 2, 4}, ib[] = {1, 3};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m(ia[r], ia[c]) = a(r, c);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) m(ib[r], ib[c]) = b(r, c);
  EXPECT_EQ(connected_blocks(m).size(), 2u);
  auto want = hermitian_spectrum(a);
  const auto wb = hermitian_spectrum(b);
  want.insert(want.end(), wb.begin(), wb.end());
  std::sort(want.begin(), want.end());
  const auto got = hermitian_spectrum(m);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(got[i], want[i], 1e-12);
}

TEST(Spectrum, EigensystemReconstructs) {
  CounterRng rng(14);
  const auto h = random_hermitian(7, rng);
  const auto es = hermitian_eigensystem(h);
  ComplexMatrix d(7, 7);
  for (std::size_t i = 0; i < 7; ++i) d(i, i) = es.values[i];
  EXPECT_LT(max_abs_diff(es.vectors * d * es.vectors.adjoint(), h), 1e-11);
  EXPECT_LT(max_abs_diff(es.vectors.adjoint() * es.vectors, ComplexMatrix::identity(7)), 1e-12);
}

TEST(Spectrum, RejectsNonHermitian) {
  EXPECT_THROW(hermitian_spectrum(ComplexMatrix::from_rows({{0, 1}, {0, 0}})), NotHermitianError);
  EXPECT_THROW(min_eig(ComplexMatrix(2, 3)), DimensionError);
}

TEST(PsdProject, IdempotentNearestAndPsd) {
  CounterRng rng(15);
  for (int rep = 0; rep < 5; ++rep) {
    const auto h = random_hermitian(6, rng);
    const auto p = psd_project(h);
    EXPECT_GE(min_eig(p), -1e-12);
    EXPECT_LT(max_abs_diff(psd_project(p), p), 1e-11);
    // h - p is negative semidefinite and orthogonal to p.
    ComplexMatrix r = h;
    r -= p;
    EXPECT_LE(max_eig(r), 1e-11);
    EXPECT_NEAR(frobenius_inner(r, p), 0.0, 1e-9);
  }
}

TEST(Layout, StridesAndWithout) {
  const RegisterLayout l{{"Y1", 4}, {"X1", 2}, {"X2", 8}};
  EXPECT_EQ(l.total_dim(), 64u);
  EXPECT_EQ(l.strides(), (std::vector<std::size_t>{16, 8, 1}));
  const std::vector<std::string> drop{"X1"};
  EXPECT_EQ(l.without(drop).names(), (std::vector<std::string>{"Y1", "X2"}));
  EXPECT_THROW((RegisterLayout{{"A", 2}, {"A", 2}}), DimensionError);
}
