// SPDX-License-Identifier: Apache-2.0
//
// dris: double-RIS multi-user MIMO transceiver design
// Copyright (C) 2026 The dris authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <dris/dris.hpp>
#include <dris/verify/criteria.hpp>
#include <dris/verify/oracles.hpp>

#include <gtest/gtest.h>

using namespace dris;

namespace
{

double constant_part(const BeamformingState &st, double sigma2)
{
    double c = 0.0;
    for (const CMat &g : st.equalizers)
        c += sigma2 * g.squaredNorm() + static_cast<double>(g.rows());
    return c;
}

} // namespace

TEST(MseMatrix, ZeroEqualizerGivesIdentity)
{
    RandomSource rng(1);
    auto in = verify::generic_instance(rng, 4, 4, 3, 2, 2);
    for (CMat &g : in.st.equalizers)
        g.setZero();
    const CMat psi = mse_matrix(in.ch, in.st, 1, in.cfg.noise_power);
    EXPECT_LT((psi - CMat::Identity(2, 2)).norm(), 1e-15);
    EXPECT_DOUBLE_EQ(sum_mse(in.ch, in.st, in.cfg.noise_power).sum_mse, 4.0);
}

TEST(MseMatrix, ZeroPrecoderLeavesNoiseTerm)
{
    RandomSource rng(2);
    auto in = verify::generic_instance(rng, 4, 4, 3, 2, 2);
    in.st.precoder.setZero();
    for (std::size_t k = 0; k < 2; ++k)
    {
        const CMat &g = in.st.equalizers[k];
        const CMat expect = in.cfg.noise_power * g * g.adjoint() + CMat::Identity(2, 2);
        EXPECT_LT((mse_matrix(in.ch, in.st, k, in.cfg.noise_power) - expect).norm(), 1e-13);
    }
}

TEST(MseMatrix, TraceMatchesMonteCarloExpectation)
{
    RandomSource rng(3);
    auto in = verify::generic_instance(rng, 4, 4, 3, 2, 2);
    in.cfg.noise_power = 0.5;
    const auto hs = effective_channels(in.ch, in.st.theta);
    for (std::size_t k = 0; k < 2; ++k)
    {
        const double exact = mse_matrix(in.ch, in.st, k, in.cfg.noise_power).trace().real();
        const double mc = oracle::mse_monte_carlo(hs[k], in.st.precoder, in.st.equalizers[k],
                                                  in.st.stream_offset(k), in.cfg.noise_power, 100000, rng);
        EXPECT_NEAR(mc, exact, 0.02 * exact) << "user " << k;
    }
}

TEST(MseMatrix, HermitianWithRealTrace)
{
    RandomSource rng(4);
    for (int i = 0; i < 50; ++i)
    {
        const auto in = verify::generic_instance(rng, 5, 4, 3, 2, 2);
        const MseReport rep = sum_mse(in.ch, in.st, in.cfg.noise_power, true);
        ASSERT_TRUE(rep.per_user_matrices.has_value());
        for (const CMat &psi : *rep.per_user_matrices)
        {
            EXPECT_LE((psi - psi.adjoint()).norm(), 1e-12 * psi.norm());
            EXPECT_LE(std::abs(psi.trace().imag()), 1e-12 * std::abs(psi.trace()));
        }
    }
}

TEST(SumMse, NonNegativeEverywhere)
{
    RandomSource rng(5);
    for (int i = 0; i < 100; ++i)
    {
        const auto in = (i % 2) ? verify::physical_instance(rng, 4, 4, 2, 2, 2)
                                : verify::generic_instance(rng, 4, 4, 3, 2, 2);
        const MseReport rep = sum_mse(in.ch, in.st, in.cfg.noise_power);
        EXPECT_GE(rep.sum_mse, 0.0);
        for (double v : rep.per_user_mse)
            EXPECT_GE(v, 0.0);
    }
}

TEST(SumMse, AgreesWithVectorizedFormUpToTheConstant)
{
    RandomSource rng(6);
    for (int i = 0; i < 100; ++i)
    {
        const int m = 2 + i % 7;
        const auto in = verify::generic_instance(rng, m, 4, 3, 2, 2);
        const ReflectionWorkspace ws = build_workspace(in.ch, in.st.precoder, in.st.equalizers);
        const double direct = sum_mse(in.ch, in.st, in.cfg.noise_power).sum_mse;
        const double vec = vectorized_theta_objective(ws, in.st.theta) + constant_part(in.st, in.cfg.noise_power);
        EXPECT_NEAR(vec, direct, 1e-8 * direct);
    }
}

TEST(SumMse, DifferencesAgreeAcrossForms)
{
    RandomSource rng(7);
    for (int i = 0; i < 100; ++i)
    {
        const int m = 2 + i % 7;
        const auto in = (i % 2) ? verify::physical_instance(rng, m, 4, 2, 2, 2)
                                : verify::generic_instance(rng, m, 4, 3, 2, 2);
        const ReflectionWorkspace ws = build_workspace(in.ch, in.st.precoder, in.st.equalizers);
        BeamformingState a = in.st, b = in.st;
        a.theta = rng.random_phases(m);
        b.theta = rng.random_phases(m);
        const double d_direct =
            sum_mse(in.ch, a, in.cfg.noise_power).sum_mse - sum_mse(in.ch, b, in.cfg.noise_power).sum_mse;
        const double d_vec = vectorized_theta_objective(ws, a.theta) - vectorized_theta_objective(ws, b.theta);
        EXPECT_LE(std::abs(d_direct - d_vec), 1e-8 * std::abs(d_direct));
    }
}

TEST(VectorizedObjective, NoInterSurfaceLinkLeavesQuadratic)
{
    RandomSource rng(8);
    auto in = verify::generic_instance(rng, 5, 4, 3, 2, 2);
    in.ch.s.setZero();
    const ReflectionWorkspace ws = build_workspace(in.ch, in.st.precoder, in.st.equalizers);
    EXPECT_EQ(ws.d0.norm(), 0.0);
    EXPECT_EQ(ws.trace_c_tilde, 0.0);
    EXPECT_FALSE(ws.has_quartic());
    const CVec theta = rng.random_phases(5);
    EXPECT_EQ(ws.apply_b(kron_self(theta)).norm(), 0.0);
    const double quad = (theta.dot(ws.a0 * theta)).real() - 2.0 * theta.dot(ws.p.conjugate()).real();
    EXPECT_NEAR(vectorized_theta_objective(ws, theta), quad, 1e-12 * std::abs(quad));
}

TEST(VectorizedObjective, QuarticTermIgnoresCommonPhase)
{
    RandomSource rng(9);
    const auto in = verify::generic_instance(rng, 4, 4, 3, 2, 2);
    const ReflectionWorkspace ws = build_workspace(in.ch, in.st.precoder, in.st.equalizers);
    const CVec theta = rng.random_phases(4);
    const CVec w = kron_self(theta);
    const double base = w.dot(ws.apply_c(w)).real();
    for (double phase : {0.3, 1.7, -2.9})
    {
        const CVec wc = kron_self(std::polar(1.0, phase) * theta);
        EXPECT_NEAR(wc.dot(ws.apply_c(wc)).real(), base, 1e-12 * base);
    }
}

TEST(VectorizedObjective, MatchesDenseExpansion)
{
    RandomSource rng(10);
    for (int i = 0; i < 10; ++i)
    {
        const auto in = verify::generic_instance(rng, 3 + i % 3, 4, 3, 2, 2);
        const ReflectionWorkspace ws = build_workspace(in.ch, in.st.precoder, in.st.equalizers);
        const auto dc = oracle::dense_coefficients(in.ch, in.st.precoder, in.st.equalizers);
        const CVec theta = rng.random_phases(ws.m);
        const double a = vectorized_theta_objective(ws, theta);
        const double b = oracle::dense_theta_objective(dc, theta);
        EXPECT_NEAR(a, b, 1e-10 * std::max(1.0, std::abs(b)));
    }
}

TEST(SumMse, ShapeMismatchIsReported)
{
    RandomSource rng(11);
    auto in = verify::generic_instance(rng, 4, 4, 3, 2, 2);
    BeamformingState bad = in.st;
    bad.theta = CVec::Ones(3);
    EXPECT_THROW(sum_mse(in.ch, bad, 0.1), DimensionError);
    bad = in.st;
    bad.precoder = CMat::Zero(3, 4);
    EXPECT_THROW(sum_mse(in.ch, bad, 0.1), DimensionError);
}
