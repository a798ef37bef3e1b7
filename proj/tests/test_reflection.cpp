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

TEST(Workspace, NoInterSurfaceLink)
{
    RandomSource rng(1);
    auto in = verify::generic_instance(rng, 4, 4, 3, 2, 2);
    in.ch.s.setZero();
    const ReflectionWorkspace ws = build_workspace(in.ch, in.st.precoder, in.st.equalizers);
    EXPECT_EQ(ws.d0.norm(), 0.0);
    EXPECT_EQ(ws.trace_c_tilde, 0.0);
    const CVec w = rng.complex_gaussian(16, 1);
    EXPECT_EQ(ws.apply_b(w).norm(), 0.0);
    EXPECT_EQ(ws.apply_c(w).norm(), 0.0);
    EXPECT_EQ(ws.apply_b_adjoint(rng.complex_gaussian(4, 1)).norm(), 0.0);
}

TEST(Workspace, ZeroPrecoderZeroesEverything)
{
    RandomSource rng(2);
    auto in = verify::generic_instance(rng, 4, 4, 3, 2, 2);
    in.st.precoder.setZero();
    const ReflectionWorkspace ws = build_workspace(in.ch, in.st.precoder, in.st.equalizers);
    EXPECT_EQ(ws.a0.norm(), 0.0);
    EXPECT_EQ(ws.d0.norm(), 0.0);
    EXPECT_EQ(ws.p.norm(), 0.0);
    EXPECT_EQ(ws.trace_a0, 0.0);
    EXPECT_EQ(ws.trace_c_tilde, 0.0);
    EXPECT_EQ(ws.apply_c(rng.complex_gaussian(16, 1)).norm(), 0.0);
}

TEST(Workspace, MatchesDenseKroneckerConstruction)
{
    RandomSource rng(3);
    for (int i = 0; i < 6; ++i)
    {
        const int m = 2 + i % 4;
        const auto in = (i % 2) ? verify::physical_instance(rng, m, 4, 2, 2, 2)
                                : verify::generic_instance(rng, m, 4, 3, 2, 2);
        const ReflectionWorkspace ws = build_workspace(in.ch, in.st.precoder, in.st.equalizers);
        const auto dc = oracle::dense_coefficients(in.ch, in.st.precoder, in.st.equalizers);
        const double scale = dc.w_tilde.cwiseAbs().maxCoeff();
        EXPECT_LE((ws.a0 - dc.a0).cwiseAbs().maxCoeff(), 1e-10 * scale);
        EXPECT_LE((ws.d0 - dc.d0).cwiseAbs().maxCoeff(), 1e-10 * std::max(scale, dc.d0.cwiseAbs().maxCoeff()));
        EXPECT_LE((ws.p - dc.p).cwiseAbs().maxCoeff(), 1e-10 * std::max(scale, dc.p.cwiseAbs().maxCoeff()));
        EXPECT_NEAR(ws.trace_c_tilde, dc.c_tilde.trace().real(), 1e-10 * scale * m * m);
        const CVec w = rng.complex_gaussian(m * m, 1);
        const CVec th = rng.complex_gaussian(m, 1);
        EXPECT_LE((ws.apply_b(w) - dc.b_tilde * w).norm(), 1e-10 * scale * w.norm() * m);
        EXPECT_LE((ws.apply_b_adjoint(th) - dc.b_tilde.adjoint() * th).norm(), 1e-10 * scale * th.norm() * m);
        EXPECT_LE((ws.apply_c(w) - dc.c_tilde * w).norm(), 1e-10 * scale * w.norm() * m * m);
    }
}

TEST(Workspace, ReshapeRoundTrip)
{
    RandomSource rng(4);
    const CVec v = rng.complex_gaussian(9, 1);
    const CMat x = reshape_square(v, 3);
    EXPECT_EQ(x(1, 2), v(7));
    EXPECT_TRUE(vectorize(x) == v);
    const CVec th = rng.complex_gaussian(3, 1);
    EXPECT_LT((kron_self(th) - oracle::kron_vec(th, th)).norm(), 1e-15);
}

TEST(QuarticObjective, AgreesWithVectorizedForm)
{
    RandomSource rng(5);
    const auto in = verify::generic_instance(rng, 5, 4, 3, 2, 2);
    const ReflectionWorkspace ws = build_workspace(in.ch, in.st.precoder, in.st.equalizers);
    for (int i = 0; i < 50; ++i)
    {
        const CVec theta = rng.random_phases(5);
        const double a = quartic_objective(ws, theta);
        const double b = vectorized_theta_objective(ws, theta);
        EXPECT_NEAR(a, b, 1e-9 * std::abs(b));
    }
}

TEST(QuarticObjective, SingleTermReduction)
{
    RandomSource rng(6);
    const auto in = verify::generic_instance(rng, 4, 4, 3, 2, 2);
    ReflectionWorkspace ws = build_workspace(in.ch, in.st.precoder, in.st.equalizers);
    ws.s.setZero();
    ws.d0.setZero();
    ws.p.setZero();
    ws.trace_c_tilde = 0.0;
    CVec theta = CVec::Ones(4);
    theta(0) = std::polar(1.0, 0.7);
    const cdouble expect = theta.dot(ws.a0 * theta);
    EXPECT_LT(std::abs(expect.imag()), 1e-10 * std::abs(expect));
    EXPECT_NEAR(quartic_objective(ws, theta), expect.real(), 1e-12 * std::abs(expect));
}

TEST(Stage1, ZeroWorkspaceIsPureShift)
{
    RandomSource rng(7);
    auto in = verify::generic_instance(rng, 3, 4, 3, 2, 2);
    in.st.precoder.setZero();
    const ReflectionWorkspace ws = build_workspace(in.ch, in.st.precoder, in.st.equalizers);
    const CVec theta = rng.random_phases(3);
    const MajorizerShifts sh{2.5, 1.5};
    const SurrogateState s = mm_stage1(ws, theta, sh);
    EXPECT_LT((s.u_t + 2.5 * theta).norm(), 1e-15);
    EXPECT_LT((s.v_t + 1.5 * kron_self(theta)).norm(), 1e-15);
    EXPECT_TRUE(vectorize(s.v_hat_t) == s.v_t);
}

TEST(Stage1, ReshapeConsistency)
{
    RandomSource rng(8);
    const auto in = verify::generic_instance(rng, 4, 4, 3, 2, 2);
    const ReflectionWorkspace ws = build_workspace(in.ch, in.st.precoder, in.st.equalizers);
    const SurrogateState s = mm_stage1(ws, in.st.theta, trace_shifts(ws));
    EXPECT_TRUE(vectorize(s.v_hat_t) == s.v_t);
    EXPECT_LT((s.v_tilde_t - (s.v_hat_t - ws.d0.conjugate())).norm(), 1e-15);
}

TEST(Stage2, RealLiftIdentity)
{
    RandomSource rng(9);
    const CMat v = rng.complex_gaussian(4, 4);
    const RMat vbar = real_lift(v);
    for (int i = 0; i < 20; ++i)
    {
        const CVec theta = rng.complex_gaussian(4, 1);
        const RVec tb = real_stack(theta);
        const double lhs = theta.dot(v * theta.conjugate()).real();
        const double rhs = tb.dot(vbar * tb);
        EXPECT_NEAR(lhs, rhs, 1e-10 * std::max(1.0, std::abs(lhs)));
    }
}

TEST(Stage2, ZeroQuadraticPartPassesThrough)
{
    RandomSource rng(10);
    SurrogateState s;
    s.u_t = rng.complex_gaussian(3, 1);
    s.v_tilde_t = CMat::Zero(3, 3);
    const CVec f = mm_stage2(s, rng.random_phases(3));
    EXPECT_EQ(s.lift_lambda, 0.0);
    EXPECT_TRUE(f == s.u_t);
}

TEST(Stage2, LiftEigenvalueIsBoundedByTheMatrixNorm)
{
    RandomSource rng(11);
    for (int i = 0; i < 20; ++i)
    {
        SurrogateState s;
        s.u_t = CVec::Zero(4);
        s.v_tilde_t = rng.complex_gaussian(4, 4);
        mm_stage2(s, rng.random_phases(4));
        const double spec = Eigen::JacobiSVD<CMat>(s.v_tilde_t).singularValues()(0);
        EXPECT_GE(s.lift_lambda, 0.0);
        EXPECT_LE(s.lift_lambda, 2.0 * spec * (1.0 + 1e-12));
    }
}

TEST(PhaseUpdate, HandExample)
{
    CVec f(2);
    f << cdouble(1.0, 0.0), cdouble(0.0, 1.0);
    const CVec th = phase_update(f);
    EXPECT_LT(std::abs(th(0) - cdouble(-1.0, 0.0)), 1e-15);
    EXPECT_LT(std::abs(th(1) - cdouble(0.0, -1.0)), 1e-15);
}

TEST(PhaseUpdate, BeatsRandomSearch)
{
    RandomSource rng(12);
    for (int i = 0; i < 5; ++i)
    {
        const CVec f = rng.complex_gaussian(3, 1);
        const CVec th = phase_update(f);
        const double ours = 2.0 * th.dot(f).real();
        EXPECT_LE(ours, oracle::phase_random_search(f, 100000, rng) + 1e-12);
        EXPECT_NEAR(ours, -2.0 * f.cwiseAbs().sum(), 1e-12);
        for (Eigen::Index k = 0; k < 3; ++k)
            EXPECT_NEAR(std::abs(th(k)), 1.0, 1e-15);
    }
}

TEST(PhaseUpdate, ZeroEntryKeepsPreviousPhase)
{
    CVec f(3), prev(3);
    f << cdouble(0.0, 0.0), cdouble(2.0, 0.0), cdouble(0.0, 0.0);
    prev << std::polar(1.0, 0.4), std::polar(1.0, 1.0), std::polar(1.0, -2.0);
    const CVec th = phase_update(f, prev);
    EXPECT_EQ(th(0), prev(0));
    EXPECT_EQ(th(2), prev(2));
    EXPECT_LT(std::abs(th(1) + 1.0), 1e-15);
    EXPECT_THROW(phase_update(f, CVec::Ones(2)), DimensionError);
}

TEST(UpdateReflection, NeverIncreasesTheObjective)
{
    RandomSource rng(13);
    for (int i = 0; i < 100; ++i)
    {
        const auto in = (i % 2) ? verify::physical_instance(rng, 8, 4, 2, 2, 2)
                                : verify::generic_instance(rng, 8, 4, 3, 2, 2);
        for (Majorizer which : {Majorizer::trace, Majorizer::max_eigenvalue})
        {
            BeamformingState st = in.st;
            const double before = sum_mse(in.ch, st, in.cfg.noise_power).sum_mse;
            st.theta = update_reflection(in.ch, st, {which, 1 + i % 3});
            const double after = sum_mse(in.ch, st, in.cfg.noise_power).sum_mse;
            EXPECT_LE(after, before + 1e-9 * std::abs(before));
            for (Eigen::Index k = 0; k < st.theta.size(); ++k)
                EXPECT_NEAR(std::abs(st.theta(k)), 1.0, 1e-15);
        }
    }
}

TEST(UpdateReflection, SingleBounceReducesToQuadraticStep)
{
    RandomSource rng(14);
    auto in = verify::generic_instance(rng, 5, 4, 3, 2, 2);
    in.ch.s.setZero();
    const ReflectionWorkspace ws = build_workspace(in.ch, in.st.precoder, in.st.equalizers);
    SurrogateState surr = mm_stage1(ws, in.st.theta, trace_shifts(ws));
    const CVec f = mm_stage2(surr, in.st.theta);
    const CVec expect = (ws.a0 - ws.trace_a0 * CMat::Identity(5, 5)) * in.st.theta - ws.p.conjugate();
    EXPECT_LT((f - expect).norm(), 1e-12 * expect.norm());

    // with only RIS 1 present the quadratic coefficients match the workspace
    ChannelSet only1 = truncate_channels(in.ch, RisSide::bs);
    const ReflectionWorkspace ws1 = build_workspace(only1, in.st.precoder, in.st.equalizers);
    const std::vector<CMat> zeros(2, CMat::Zero(3, 4));
    const QuadraticReflectionProblem q =
        build_quadratic_problem(only1.r1, only1.t1, zeros, in.st.precoder, in.st.equalizers);
    EXPECT_LT((q.a - ws1.a0).norm(), 1e-12 * ws1.a0.norm());
    EXPECT_LT((q.p - ws1.p).norm(), 1e-12 * ws1.p.norm());
    BeamformingState st = in.st;
    st.theta = update_reflection(only1, in.st, {Majorizer::trace, 1});
    EXPECT_LT((st.theta - quadratic_mm_step(q, in.st.theta, Majorizer::trace)).norm(), 1e-12);
}

TEST(UpdateReflection, FixedPointIsKept)
{
    RandomSource rng(15);
    const CVec theta = rng.random_phases(4);
    // f_t = -theta_t entrywise is already minimal
    EXPECT_LT((phase_update(-3.0 * theta, theta) - theta).norm(), 1e-10);
    const QuadraticReflectionProblem q{CMat::Zero(4, 4), theta.conjugate()};
    EXPECT_LT((quadratic_mm_step(q, theta, Majorizer::trace) - theta).norm(), 1e-10);
}

TEST(UpdateReflection, RejectsBadInnerIterations)
{
    RandomSource rng(16);
    const auto in = verify::generic_instance(rng, 3, 4, 3, 2, 2);
    EXPECT_THROW(update_reflection(in.ch, in.st, {Majorizer::trace, 0}), ConfigError);
}

TEST(MajorizationChain, HoldsForBothShiftChoices)
{
    RandomSource rng(17);
    verify::ChainReport trace_rep, eig_rep;
    for (int m : {2, 3, 4, 5})
        for (int i = 0; i < 3; ++i)
        {
            const auto in = (i % 2) ? verify::physical_instance(rng, m, 4, 2, 2, 2)
                                    : verify::generic_instance(rng, m, 4, 3, 2, 2);
            verify::check_chain(in, Majorizer::trace, rng, 20, trace_rep);
            verify::check_chain(in, Majorizer::max_eigenvalue, rng, 20, eig_rep);
        }
    for (const verify::ChainReport *r : {&trace_rep, &eig_rep})
    {
        EXPECT_LE(r->worst_violation, 1e-9);
        EXPECT_LE(r->worst_equality, 1e-9);
        EXPECT_LE(r->worst_f_offset, 1e-9);
        EXPECT_LE(r->worst_lambda, 1e-9);
        EXPECT_LE(r->worst_shift, 1e-9);
    }
}

TEST(Majorizer, ShiftsCoverTheSpectrum)
{
    RandomSource rng(18);
    const auto in = verify::generic_instance(rng, 3, 4, 3, 2, 2);
    const ReflectionWorkspace ws = build_workspace(in.ch, in.st.precoder, in.st.equalizers);
    const double lmax = lambda_max_w_tilde(in.ch, in.st.precoder, in.st.equalizers);
    const MajorizerShifts tr = trace_shifts(ws);
    EXPECT_GE(tr.theta_block, lmax * (1.0 - 1e-12));
    EXPECT_EQ(tr.theta_block, tr.kron_block);
    const auto dc = oracle::dense_coefficients(in.ch, in.st.precoder, in.st.equalizers);
    EXPECT_NEAR(tr.theta_block, dc.w_tilde.trace().real(), 1e-10 * tr.theta_block);
    EXPECT_EQ(to_string(Majorizer::max_eigenvalue), "max_eigenvalue");
}
