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

#ifndef DRIS_OBJECTIVE_HPP
#define DRIS_OBJECTIVE_HPP

#include "channel.hpp"
#include "types.hpp"
#include "workspace.hpp"

#include <numeric>
#include <optional>
#include <vector>

namespace dris
{

struct MseReport
{
    std::vector<double> per_user_mse;
    double sum_mse = 0.0;
    std::optional<std::vector<CMat>> per_user_matrices;
};

/// MSE matrix of user k for an effective channel h (Nr x Nt):
/// G H F (G H F)^H - (G H F_k + (G H F_k)^H) + sigma^2 G G^H + I.
inline CMat mse_matrix_for_channel(const CMat &h, const CMat &precoder, const CMat &equalizer,
                                   Eigen::Index stream_offset, double noise_power)
{
    const auto nk = equalizer.rows();
    if (h.rows() != equalizer.cols() || h.cols() != precoder.rows() || stream_offset + nk > precoder.cols())
        throw DimensionError("mse_matrix: channel/precoder/equalizer dimensions are inconsistent");
    const CMat ghf = equalizer * h * precoder;
    const CMat ghfk = ghf.middleCols(stream_offset, nk);
    CMat out = ghf * ghf.adjoint() - ghfk - ghfk.adjoint() + noise_power * equalizer * equalizer.adjoint();
    out.diagonal().array() += 1.0;
    return out;
}

inline void check_state(const ChannelSet &ch, const BeamformingState &st)
{
    if (st.equalizers.size() != ch.n_users())
        throw DimensionError("BeamformingState: need one equalizer per user");
    if (st.theta.size() != ch.n_elements())
        throw DimensionError("BeamformingState: theta length must equal M");
    if (st.precoder.rows() != ch.n_tx())
        throw DimensionError("BeamformingState: precoder rows must equal Nt");
    if (st.stream_offset(ch.n_users()) != st.precoder.cols())
        throw DimensionError("BeamformingState: precoder columns must equal total streams");
}

inline CMat mse_matrix(const ChannelSet &ch, const BeamformingState &st, std::size_t k, double noise_power)
{
    check_state(ch, st);
    return mse_matrix_for_channel(cascaded_channel(ch, st.theta, k), st.precoder, st.equalizers[k],
                                  st.stream_offset(k), noise_power);
}

/// Sum MSE given the effective channels H_k directly (any RIS configuration).
inline MseReport sum_mse_for_channels(const std::vector<CMat> &channels, const CMat &precoder,
                                      const std::vector<CMat> &equalizers, double noise_power,
                                      bool keep_matrices = false)
{
    if (channels.size() != equalizers.size())
        throw DimensionError("sum_mse: need one equalizer per effective channel");
    MseReport rep;
    if (keep_matrices)
        rep.per_user_matrices.emplace();
    Eigen::Index off = 0;
    for (std::size_t k = 0; k < channels.size(); ++k)
    {
        CMat psi = mse_matrix_for_channel(channels[k], precoder, equalizers[k], off, noise_power);
        off += equalizers[k].rows();
        rep.per_user_mse.push_back(psi.trace().real());
        if (keep_matrices)
            rep.per_user_matrices->push_back(std::move(psi));
    }
    rep.sum_mse = std::accumulate(rep.per_user_mse.begin(), rep.per_user_mse.end(), 0.0);
    return rep;
}

inline std::vector<CMat> effective_channels(const ChannelSet &ch, const CVec &theta1, const CVec &theta2)
{
    std::vector<CMat> hs;
    hs.reserve(ch.n_users());
    for (std::size_t k = 0; k < ch.n_users(); ++k)
        hs.push_back(cascaded_channel(ch, theta1, theta2, k));
    return hs;
}

inline std::vector<CMat> effective_channels(const ChannelSet &ch, const CVec &theta)
{
    return effective_channels(ch, theta, theta);
}

/// Objective of the joint problem: sum_k tr(Psi_k).
inline MseReport sum_mse(const ChannelSet &ch, const BeamformingState &st, double noise_power,
                         bool keep_matrices = false)
{
    check_state(ch, st);
    return sum_mse_for_channels(effective_channels(ch, st.theta), st.precoder, st.equalizers, noise_power,
                                keep_matrices);
}

/// theta-dependent part of the sum MSE, evaluated term by term from the
/// workspace. Differs from sum_mse by sigma^2 sum_k ||G_k||_F^2 + N.
inline double vectorized_theta_objective(const ReflectionWorkspace &ws, const CVec &theta)
{
    if (theta.size() != ws.m)
        throw DimensionError("vectorized_theta_objective: theta length must equal M");
    const CVec w = kron_self(theta);
    const cdouble quad = theta.dot(ws.a0 * theta);  // dot() conjugates the left operand
    const cdouble cross = theta.dot(ws.apply_b(w));
    const cdouble quartic = w.dot(ws.apply_c(w));
    const cdouble lin = theta.dot(ws.p.conjugate());
    const cdouble dterm = theta.dot(ws.d0.conjugate() * theta.conjugate());
    return quad.real() + 2.0 * cross.real() + quartic.real() - 2.0 * (lin.real() + dterm.real());
}

} // namespace dris

#endif
