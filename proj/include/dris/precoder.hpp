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

#ifndef DRIS_PRECODER_HPP
#define DRIS_PRECODER_HPP

#include "objective.hpp"
#include "types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace dris
{

/// Raised by precoder_for_mu(mu = 0) when the Gram matrix is singular; the
/// caller should fall back to a strictly positive multiplier.
class SingularSystemError : public SolverError
{
public:
    using SolverError::SolverError;
};

inline constexpr double kkt_invertible_ratio = 1e-10;    // lambda_min / lambda_max at mu = 0
inline constexpr double kkt_mu_floor_ratio = 1e-12;      // mu floor relative to lambda_max
inline constexpr double kkt_power_rel_tol = 1e-8;        // |tr(FF^H) - P| <= tol * P
inline constexpr double kkt_slackness_rel_tol = 1e-7;    // mu (P - tr(FF^H)) <= tol * P
inline constexpr int kkt_max_bisection_iters = 200;

/**
 * Everything the transmit-beamformer KKT system needs for fixed {G_k}, theta.
 *
 * gram = sum_i H_i^H G_i^H G_i H_i = U diag(lambda) U^H. The right-hand
 * sides H_k^H G_k^H are kept already rotated into the eigenbasis, and
 * r_matrix = U^H gram U is formed from the rotated factor so that
 * transmit_power() agrees with ||F||_F^2 to rounding.
 */
struct KktContext
{
    CMat gram;
    CMat eigvecs;
    RVec eigvals;
    CMat r_matrix;
    RVec r_diag;
    std::vector<CMat> rhs;   // H_k^H G_k^H, Nt x N_k
    CMat rotated_rhs;        // U^H [rhs_1, ..., rhs_K]

    double lambda_max() const { return eigvals.size() ? eigvals.maxCoeff() : 0.0; }
    double lambda_min() const { return eigvals.size() ? eigvals.minCoeff() : 0.0; }

    bool invertible() const
    {
        const double lmax = lambda_max();
        return lmax > 0.0 && lambda_min() > kkt_invertible_ratio * lmax;
    }
};

inline KktContext make_kkt_context(const std::vector<CMat> &channels, const std::vector<CMat> &equalizers)
{
    if (channels.empty() || channels.size() != equalizers.size())
        throw DimensionError("make_kkt_context: need one equalizer per effective channel");
    const auto nt = channels.front().cols();
    KktContext ctx;
    ctx.gram = CMat::Zero(nt, nt);
    Eigen::Index n_total = 0;
    for (std::size_t k = 0; k < channels.size(); ++k)
    {
        if (channels[k].cols() != nt || equalizers[k].cols() != channels[k].rows())
            throw DimensionError("make_kkt_context: inconsistent channel/equalizer shapes for user " +
                                 std::to_string(k));
        CMat r = channels[k].adjoint() * equalizers[k].adjoint();
        ctx.gram.noalias() += r * r.adjoint();
        n_total += r.cols();
        ctx.rhs.push_back(std::move(r));
    }
    ctx.gram = (0.5 * (ctx.gram + ctx.gram.adjoint())).eval();

    Eigen::SelfAdjointEigenSolver<CMat> eig(ctx.gram);
    if (eig.info() != Eigen::Success)
        throw SolverError("make_kkt_context: eigendecomposition failed");
    ctx.eigvecs = eig.eigenvectors();
    ctx.eigvals = eig.eigenvalues().cwiseMax(0.0);

    CMat stacked(nt, n_total);
    Eigen::Index off = 0;
    for (const CMat &r : ctx.rhs)
    {
        stacked.middleCols(off, r.cols()) = r;
        off += r.cols();
    }
    ctx.rotated_rhs = ctx.eigvecs.adjoint() * stacked;
    ctx.r_matrix = ctx.rotated_rhs * ctx.rotated_rhs.adjoint();
    ctx.r_diag = ctx.r_matrix.diagonal().real();
    return ctx;
}

/// F = (gram + mu I)^-1 [H_1^H G_1^H, ..., H_K^H G_K^H].
inline CMat precoder_for_mu(const KktContext &ctx, double mu)
{
    if (!(mu >= 0.0))
        throw ConfigError("precoder_for_mu: mu must be non-negative");
    if (mu == 0.0 && !ctx.invertible())
        throw SingularSystemError("precoder_for_mu: Gram matrix is singular at mu = 0");
    const RVec inv = (ctx.eigvals.array() + mu).inverse();
    return ctx.eigvecs * (inv.asDiagonal() * ctx.rotated_rhs);
}

/// tr(F F^H) = sum_i R_ii / (lambda_i + mu)^2, O(Nt) per call.
inline double transmit_power(const KktContext &ctx, double mu)
{
    double p = 0.0;
    for (Eigen::Index i = 0; i < ctx.eigvals.size(); ++i)
    {
        const double d = ctx.eigvals(i) + mu;
        if (ctx.r_diag(i) == 0.0)
            continue;
        if (d == 0.0)
            return std::numeric_limits<double>::infinity();
        p += ctx.r_diag(i) / (d * d);
    }
    return p;
}

struct PrecoderSolution
{
    CMat precoder;
    double mu = 0.0;
    int bisection_iters = 0;
};

/// Optimal F under tr(F F^H) <= P: the mu = 0 solution when it is defined
/// and feasible, otherwise bisection on mu until the power matches P.
inline PrecoderSolution solve_precoder(const KktContext &ctx, double tx_power)
{
    if (!(tx_power > 0.0))
        throw ConfigError("solve_precoder: tx_power must be positive");
    const double lmax = ctx.lambda_max();
    if (lmax == 0.0)
        return {CMat::Zero(ctx.rotated_rhs.rows(), ctx.rotated_rhs.cols()), 0.0, 0};

    double lo = 0.0;
    if (ctx.invertible())
    {
        if (transmit_power(ctx, 0.0) <= tx_power)
            return {precoder_for_mu(ctx, 0.0), 0.0, 0};
    }
    else
    {
        lo = kkt_mu_floor_ratio * lmax;
        if (transmit_power(ctx, lo) <= tx_power)
            return {precoder_for_mu(ctx, lo), lo, 0};
    }

    double hi = 1.0;
    for (int i = 0; transmit_power(ctx, hi) >= tx_power; ++i)
    {
        if (i > 2000)
            throw SolverError("solve_precoder: could not bracket the multiplier");
        lo = std::max(lo, hi);
        hi *= 2.0;
    }

    for (int it = 1; it <= kkt_max_bisection_iters; ++it)
    {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi))
            return {precoder_for_mu(ctx, hi), hi, it};  // interval exhausted; hi is feasible
        const double pw = transmit_power(ctx, mid);
        // accept only from the feasible side
        const double gap = tx_power - pw;
        if (gap >= 0.0 && gap <= kkt_power_rel_tol * tx_power && mid * gap <= kkt_slackness_rel_tol * tx_power)
            return {precoder_for_mu(ctx, mid), mid, it};
        (pw > tx_power ? lo : hi) = mid;
    }
    throw SolverError("solve_precoder: bisection on mu did not converge in " +
                      std::to_string(kkt_max_bisection_iters) + " iterations");
}

inline PrecoderSolution update_precoder_for_channels(const std::vector<CMat> &channels,
                                                     const std::vector<CMat> &equalizers, double tx_power)
{
    return solve_precoder(make_kkt_context(channels, equalizers), tx_power);
}

inline CMat update_precoder(const ChannelSet &ch, const BeamformingState &st, double tx_power)
{
    check_state(ch, st);
    return update_precoder_for_channels(effective_channels(ch, st.theta), st.equalizers, tx_power).precoder;
}

} // namespace dris

#endif
