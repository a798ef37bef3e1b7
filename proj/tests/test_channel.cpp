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
#include <dris/verify/oracles.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace dris;

namespace
{

ChannelSet random_set(RandomSource &rng, int m, int nt, int nr, int k)
{
    ChannelSet ch;
    ch.t1 = rng.complex_gaussian(m, nt);
    ch.t2 = rng.complex_gaussian(m, nt);
    ch.s = rng.complex_gaussian(m, m);
    for (int u = 0; u < k; ++u)
    {
        ch.r1.push_back(rng.complex_gaussian(nr, m));
        ch.r2.push_back(rng.complex_gaussian(nr, m));
    }
    return ch;
}

} // namespace

TEST(Channel, PureScatteringHasPathLossCovariance)
{
    const LinkGeometry g = make_link(Point3(1, 0, 5), Point3(0, 0, 2), 1e-3, 2.2);
    RandomSource rng(3);
    const int draws = 10000;
    // 2 x 2 link, four entries per draw -> 4e4 samples of the entry variance
    Eigen::Matrix4cd cov = Eigen::Matrix4cd::Zero();
    for (int i = 0; i < draws; ++i)
    {
        const CMat h = rician_link(g, 2, 2, 0.0, rng);
        const Eigen::Vector4cd v(h(0, 0), h(1, 0), h(0, 1), h(1, 1));
        cov += v * v.adjoint();
    }
    cov /= static_cast<double>(draws);
    const double beta = g.path_loss;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
        {
            const double expect = i == j ? beta : 0.0;
            EXPECT_NEAR(std::abs(cov(i, j) - expect), 0.0, 0.05 * beta) << i << "," << j;
        }
}

TEST(Channel, PureLineOfSightIsRankOne)
{
    SystemConfig c;
    c.n_elements = 8;
    c.n_tx = 4;
    c.n_rx_per_user = 3;
    c.n_streams_per_user = 1;
    c.rician_factor = 1.0;
    c.seed = 5;
    const ChannelSet ch = generate_channels(c);
    std::vector<const CMat *> links{&ch.t1, &ch.t2, &ch.s};
    for (std::size_t k = 0; k < ch.n_users(); ++k)
    {
        links.push_back(&ch.r1[k]);
        links.push_back(&ch.r2[k]);
    }
    for (const CMat *h : links)
    {
        const RVec sv = Eigen::JacobiSVD<CMat>(*h).singularValues();
        EXPECT_LT(sv(1), 1e-10 * sv(0));
    }
}

TEST(Channel, ReferenceLinkPathLoss)
{
    const LinkGeometry g = make_link(Point3(1, 0, 5), Point3(0, 0, 2), 1e-3, 2.2);
    EXPECT_NEAR(g.distance, std::sqrt(10.0), 1e-15);
    EXPECT_NEAR(g.path_loss, 1e-3 * std::pow(10.0, -1.1), 1e-18);
}

TEST(Channel, ShortLinksUseTheSmallerExponent)
{
    const PathLossExponents e;
    EXPECT_LT(e[Link::bs_ris1], e[Link::bs_ris2]);
    EXPECT_LT(e[Link::bs_ris1], e[Link::ris1_ris2]);
    EXPECT_LT(e[Link::ris2_user], e[Link::ris1_user]);
    EXPECT_EQ(e[Link::bs_ris1], 2.2);
    EXPECT_EQ(e[Link::ris2_user], 2.2);
    EXPECT_EQ(e[Link::ris1_ris2], 3.6);
}

TEST(Channel, ZeroDistanceIsRejected)
{
    EXPECT_THROW(make_link(Point3(1, 2, 3), Point3(1, 2, 3), 1e-3, 2.0), ConfigError);
    SystemConfig c;
    c.ris1_position = c.bs_position;
    EXPECT_THROW(generate_channels(c), ConfigError);
}

TEST(Channel, UsersStayInsideTheDisk)
{
    RandomSource rng(9);
    const Point3 center(1, 50, 0);
    double max_r = 0.0;
    double mean_r2 = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i)
    {
        const Point3 u = draw_user_position(center, 2.0, rng);
        EXPECT_EQ(u.z(), 0.0);
        const double r = (u - center).norm();
        max_r = std::max(max_r, r);
        mean_r2 += r * r / n;
    }
    EXPECT_LE(max_r, 2.0);
    // uniform on the disk: E r^2 = R^2 / 2
    EXPECT_NEAR(mean_r2, 2.0, 0.05);
}

TEST(Channel, ArrayResponseHasUnitModulusEntries)
{
    const CVec a = ula_response(7, 0.4);
    for (Eigen::Index i = 0; i < a.size(); ++i)
        EXPECT_NEAR(std::abs(a(i)), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(a(1) / a(0) - std::polar(1.0, std::numbers::pi * std::sin(0.4))), 0.0, 1e-14);
}

TEST(Channel, ShapesFollowConfig)
{
    SystemConfig c;
    c.n_elements = 5;
    c.n_tx = 6;
    c.n_rx_per_user = 3;
    c.n_users = 3;
    c.n_streams_per_user = 1;
    const ChannelSet ch = generate_channels(c);
    EXPECT_EQ(ch.t1.rows(), 5);
    EXPECT_EQ(ch.t1.cols(), 6);
    EXPECT_EQ(ch.s.rows(), 5);
    EXPECT_EQ(ch.s.cols(), 5);
    ASSERT_EQ(ch.r2.size(), 3u);
    EXPECT_EQ(ch.r2[2].rows(), 3);
    EXPECT_EQ(ch.r2[2].cols(), 5);
    EXPECT_NO_THROW(check_channels(ch, c));
}

TEST(Cascaded, IdentityReflectionWithoutSecondSurface)
{
    RandomSource rng(1);
    ChannelSet ch = random_set(rng, 4, 2, 2, 2);
    ch.s.setZero();
    ch.t2.setZero();
    const CMat h = cascaded_channel(ch, CVec::Ones(4), 1);
    EXPECT_LT((h - ch.r1[1] * ch.t1).norm(), 1e-13);
}

TEST(Cascaded, MatchesElementwisePathSum)
{
    RandomSource rng(2);
    for (int rep = 0; rep < 20; ++rep)
    {
        const ChannelSet ch = random_set(rng, 4, 2, 2, 2);
        const CVec theta = rng.complex_gaussian(4, 1);
        for (std::size_t k = 0; k < 2; ++k)
        {
            const CMat fast = cascaded_channel(ch, theta, k);
            const CMat slow = oracle::cascaded_channel_loops(ch, theta, k);
            EXPECT_LT((fast - slow).norm(), 1e-12 * slow.norm());
        }
    }
}

TEST(Cascaded, HomogeneityInTheta)
{
    RandomSource rng(4);
    const ChannelSet ch = random_set(rng, 5, 3, 2, 1);
    const CVec theta = rng.random_phases(5);

    ChannelSet single = ch;
    single.s.setZero();
    ChannelSet dbl = ch;  // only R2 Theta S Theta T1 survives
    dbl.r1[0].setZero();
    dbl.t2.setZero();

    const CMat h1 = cascaded_channel(single, theta, 0);
    const CMat h1c = cascaded_channel(single, 2.0 * theta, 0);
    EXPECT_LT((h1c - 2.0 * h1).norm(), 1e-12 * h1.norm());

    const CMat h2 = cascaded_channel(dbl, theta, 0);
    const CMat h2c = cascaded_channel(dbl, 2.0 * theta, 0);
    EXPECT_LT((h2c - 4.0 * h2).norm(), 1e-12 * h2.norm());

    const CMat full = cascaded_channel(ch, theta, 0);
    const CMat fullc = cascaded_channel(ch, 2.0 * theta, 0);
    EXPECT_LT((fullc - (2.0 * h1 + 4.0 * h2)).norm(), 1e-12 * full.norm());
}

TEST(Cascaded, LinearInEachLink)
{
    RandomSource rng(6);
    const ChannelSet a = random_set(rng, 4, 3, 2, 1);
    const CVec theta = rng.random_phases(4);
    const CMat base = cascaded_channel(a, theta, 0);
    const cdouble alpha(0.3, -1.2);

    auto scaled = [&](int which)
    {
        ChannelSet b = a;
        switch (which)
        {
        case 0: b.r1[0] *= alpha; break;
        case 1: b.r2[0] *= alpha; break;
        case 2: b.t1 *= alpha; break;
        case 3: b.t2 *= alpha; break;
        default: b.s *= alpha; break;
        }
        return b;
    };
    auto zeroed = [&](int which)
    {
        ChannelSet b = a;
        switch (which)
        {
        case 0: b.r1[0].setZero(); break;
        case 1: b.r2[0].setZero(); break;
        case 2: b.t1.setZero(); break;
        case 3: b.t2.setZero(); break;
        default: b.s.setZero(); break;
        }
        return b;
    };
    for (int which = 0; which < 5; ++which)
    {
        // H is affine in each link with the rest fixed: H(a X) = a H(X) + (1 - a) H(0)
        const CMat h0 = cascaded_channel(zeroed(which), theta, 0);
        const CMat ha = cascaded_channel(scaled(which), theta, 0);
        EXPECT_LT((ha - (alpha * base + (1.0 - alpha) * h0)).norm(), 1e-12 * base.norm()) << which;
    }
}

TEST(Cascaded, DimensionErrors)
{
    RandomSource rng(7);
    const ChannelSet ch = random_set(rng, 4, 2, 2, 1);
    EXPECT_THROW(cascaded_channel(ch, CVec::Ones(3), 0), DimensionError);
    EXPECT_THROW(cascaded_channel(ch, CVec::Ones(4), 1), DimensionError);
}

TEST(Channel, DeterministicForFixedSeed)
{
    SystemConfig c;
    c.n_elements = 8;
    c.seed = 77;
    EXPECT_TRUE(generate_channels(c) == generate_channels(c));
}
