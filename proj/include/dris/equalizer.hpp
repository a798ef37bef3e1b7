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

#ifndef DRIS_EQUALIZER_HPP
#define DRIS_EQUALIZER_HPP

#include "objective.hpp"
#include "types.hpp"

#include <vector>

namespace dris
{

/// LMMSE equalizer G_k = F_k^H H_k^H (H_k F F^H H_k^H + sigma^2 I)^-1,
/// solved through a Cholesky factorization of the Hermitian PD matrix.
inline CMat lmmse_equalizer(const CMat &h, const CMat &precoder, Eigen::Index stream_offset, Eigen::Index n_streams,
                            double noise_power)
{
    if (!(noise_power > 0.0))
        throw ConfigError("lmmse_equalizer: noise power must be positive");
    const CMat hf = h * precoder;
    CMat cov = hf * hf.adjoint();
    cov.diagonal().array() += noise_power;
    Eigen::LLT<CMat> llt(cov);
    if (llt.info() != Eigen::Success)
        throw SolverError("lmmse_equalizer: received covariance is not positive definite");
    return llt.solve(hf.middleCols(stream_offset, n_streams)).adjoint();
}

/// Equalizer update for explicit effective channels; stream counts are taken
/// from the current equalizer shapes.
inline std::vector<CMat> update_equalizers_for_channels(const std::vector<CMat> &channels, const CMat &precoder,
                                                        const std::vector<CMat> &current, double noise_power)
{
    if (channels.size() != current.size())
        throw DimensionError("update_equalizers: need one equalizer per user");
    std::vector<CMat> out;
    out.reserve(channels.size());
    Eigen::Index off = 0;
    for (std::size_t k = 0; k < channels.size(); ++k)
    {
        const auto nk = current[k].rows();
        out.push_back(lmmse_equalizer(channels[k], precoder, off, nk, noise_power));
        off += nk;
    }
    return out;
}

inline std::vector<CMat> update_equalizers(const ChannelSet &ch, const BeamformingState &st, double noise_power)
{
    check_state(ch, st);
    return update_equalizers_for_channels(effective_channels(ch, st.theta), st.precoder, st.equalizers,
                                          noise_power);
}

} // namespace dris

#endif
