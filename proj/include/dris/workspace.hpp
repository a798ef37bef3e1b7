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

#ifndef DRIS_WORKSPACE_HPP
#define DRIS_WORKSPACE_HPP

#include "types.hpp"

#include <array>
#include <vector>

namespace dris
{

// Kronecker indexing convention used throughout: for length-M vectors,
// (a (x) b)[i*M + j] = a_i b_j, and a length-M^2 vector w is reshaped
// column-major, W(r, c) = w[c*M + r], so that w = vec(W).

/// theta (x) theta.
inline CVec kron_self(const CVec &theta)
{
    const auto m = theta.size();
    CVec w(m * m);
    for (Eigen::Index i = 0; i < m; ++i)
        w.segment(i * m, m) = theta(i) * theta;
    return w;
}

inline CMat reshape_square(const CVec &w, Eigen::Index m)
{
    return Eigen::Map<const CMat>(w.data(), m, m);
}

inline CVec vectorize(const CMat &x)
{
    return Eigen::Map<const CVec>(x.data(), x.size());
}

/**
 * Coefficient objects of the theta-subproblem for a fixed (F, {G_k}).
 *
 * With Q_ij = T_i F F^H T_j^H and E_ij = sum_k R_j,k^H G_k^H G_k R_i,k the
 * theta-dependent part of the sum MSE is
 *
 *   theta^H A0 theta + 2 Re(theta^H Bt (theta (x) theta))
 *     + (theta (x) theta)^H Ct (theta (x) theta)
 *     - 2 Re(theta^H p^* + theta^H D0^* theta^*)
 *
 * A0 = sum_ij Q_ij^T o E_ij and D0 = S o Z^T are the diagonal-index
 * extractions of the Kronecker forms; Bt and Ct are never formed, only
 * applied through Q, E and S in O(M^3).
 */
struct ReflectionWorkspace
{
    Eigen::Index m = 0;
    std::array<std::array<CMat, 2>, 2> q;  // q[i][j] = Q_ij
    std::array<std::array<CMat, 2>, 2> e;  // e[i][j] = E_ij
    CMat s;
    CMat a0;
    CMat d0;
    CVec p;
    double trace_a0 = 0.0;
    double trace_c_tilde = 0.0;

    /// Bt w: (Bt w)_a = sum_i [E_2i (S o W) Q_1i]_aa.
    CVec apply_b(const CVec &w) const
    {
        const CMat sw = s.cwiseProduct(reshape_square(w, m));
        CVec out = CVec::Zero(m);
        for (int i = 0; i < 2; ++i)
        {
            const CMat left = e[1][i] * sw;  // E_2i (S o W)
            out += left.cwiseProduct(q[0][i].transpose()).rowwise().sum();
        }
        return out;
    }

    /// Bt^H theta = vec(conj(S) o sum_i E_i2 diag(theta) Q_i1).
    CVec apply_b_adjoint(const CVec &theta) const
    {
        CMat acc = CMat::Zero(m, m);
        for (int i = 0; i < 2; ++i)
            acc.noalias() += e[i][1] * (theta.asDiagonal() * q[i][0]);
        return vectorize(s.conjugate().cwiseProduct(acc));
    }

    /// Ct w = vec(conj(S) o (E_22 (S o W) Q_11)).
    CVec apply_c(const CVec &w) const
    {
        const CMat sw = s.cwiseProduct(reshape_square(w, m));
        return vectorize(s.conjugate().cwiseProduct(e[1][1] * sw * q[0][0]));
    }

    /// True unless the theta (x) theta block of W is identically zero
    /// (S = 0, or no energy through the double-bounce path).
    bool has_quartic() const { return trace_c_tilde > 0.0; }
};

/// Builds the workspace for precoder F (Nt x N) and equalizers G_k (N_k x Nr).
inline ReflectionWorkspace build_workspace(const ChannelSet &ch, const CMat &precoder,
                                           const std::vector<CMat> &equalizers)
{
    check_channels(ch);
    const auto m = ch.n_elements();
    const auto n_users = ch.n_users();
    if (equalizers.size() != n_users)
        throw DimensionError("build_workspace: need one equalizer per user");
    if (precoder.rows() != ch.n_tx())
        throw DimensionError("build_workspace: precoder rows must equal Nt");
    Eigen::Index n_total = 0;
    for (std::size_t k = 0; k < n_users; ++k)
    {
        if (equalizers[k].cols() != ch.r1[k].rows())
            throw DimensionError("build_workspace: equalizer columns must equal Nr for user " + std::to_string(k));
        n_total += equalizers[k].rows();
    }
    if (n_total != precoder.cols())
        throw DimensionError("build_workspace: precoder columns must equal total streams");

    ReflectionWorkspace ws;
    ws.m = m;
    ws.s = ch.s;

    const std::array<const CMat *, 2> t{&ch.t1, &ch.t2};
    const std::array<CMat, 2> tf{ch.t1 * precoder, ch.t2 * precoder};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            ws.q[i][j] = tf[i] * tf[j].adjoint();

    // gr[k][i] = G_k R_i,k
    std::vector<std::array<CMat, 2>> gr(n_users);
    for (std::size_t k = 0; k < n_users; ++k)
    {
        gr[k][0] = equalizers[k] * ch.r1[k];
        gr[k][1] = equalizers[k] * ch.r2[k];
    }
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
        {
            ws.e[i][j] = CMat::Zero(m, m);
            for (std::size_t k = 0; k < n_users; ++k)
                ws.e[i][j].noalias() += gr[k][j].adjoint() * gr[k][i];
        }

    ws.a0 = CMat::Zero(m, m);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            ws.a0 += ws.q[i][j].transpose().cwiseProduct(ws.e[i][j]);

    CMat z = CMat::Zero(m, m);
    ws.p = CVec::Zero(m);
    Eigen::Index off = 0;
    for (std::size_t k = 0; k < n_users; ++k)
    {
        const auto nk = equalizers[k].rows();
        const auto fk = precoder.middleCols(off, nk);
        off += nk;
        const CMat t1fk = ch.t1 * fk;
        z.noalias() += t1fk * gr[k][1];
        for (int i = 0; i < 2; ++i)
        {
            const CMat tifk = (i == 0) ? t1fk : CMat(*t[i] * fk);
            // diag((T_i F_k)(G_k R_i,k))
            ws.p += tifk.cwiseProduct(gr[k][i].transpose()).rowwise().sum();
        }
    }
    ws.d0 = ch.s.cwiseProduct(z.transpose());

    ws.trace_a0 = ws.a0.diagonal().real().sum();
    const RVec q11 = ws.q[0][0].diagonal().real();
    const RVec e22 = ws.e[1][1].diagonal().real();
    // tr(Ct) = sum_{b,c} |S_cb|^2 Q11_bb E22_cc
    ws.trace_c_tilde = (e22.transpose() * ch.s.cwiseAbs2() * q11).value();
    return ws;
}

} // namespace dris

#endif
