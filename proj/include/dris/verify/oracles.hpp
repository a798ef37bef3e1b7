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

// Independent reference computations used by the test suites and the
// `verify` command. Nothing here is on the solver path: each routine takes
// a different algebraic route (dense Kronecker products, scalar loops,
// least squares, projected gradient, Monte Carlo, random search) than the
// implementation it checks.

#ifndef DRIS_VERIFY_ORACLES_HPP
#define DRIS_VERIFY_ORACLES_HPP

#include "../random.hpp"
#include "../types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace dris::oracle
{

/// Element-wise path sum of the cascaded channel.
inline CMat cascaded_channel_loops(const ChannelSet &ch, const CVec &theta, std::size_t k)
{
    const auto m = ch.n_elements();
    const auto nt = ch.n_tx();
    const auto nr = ch.r1[k].rows();
    CMat h = CMat::Zero(nr, nt);
    for (Eigen::Index r = 0; r < nr; ++r)
        for (Eigen::Index t = 0; t < nt; ++t)
        {
            cdouble acc = 0.0;
            for (Eigen::Index a = 0; a < m; ++a)
            {
                acc += ch.r1[k](r, a) * theta(a) * ch.t1(a, t);
                acc += ch.r2[k](r, a) * theta(a) * ch.t2(a, t);
                for (Eigen::Index b = 0; b < m; ++b)
                    acc += ch.r2[k](r, a) * theta(a) * ch.s(a, b) * theta(b) * ch.t1(b, t);
            }
            h(r, t) = acc;
        }
    return h;
}

inline CMat kron(const CMat &a, const CMat &b)
{
    CMat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline CVec kron_vec(const CVec &a, const CVec &b)
{
    CVec out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i)
        for (Eigen::Index j = 0; j < b.size(); ++j)
            out(i * b.size() + j) = a(i) * b(j);
    return out;
}

/// Full M^2 x M^2 Kronecker coefficient matrices and their extractions.
struct DenseCoefficients
{
    CMat a, b, c, d;   // M^2 x M^2
    CMat a0, d0;       // M x M
    CMat b0;           // M x M^2, rows (q-1)M+q of B
    CMat b_tilde;      // B0 blkdiag(diag(s_1), ..., diag(s_M))
    CMat c_tilde;      // blocks diag(s_j^H) C_{j,l} diag(s_l)
    CVec p;
    CMat w_tilde;      // [[A0, Bt], [Bt^H, Ct]]
};

inline DenseCoefficients dense_coefficients(const ChannelSet &ch, const CMat &f, const std::vector<CMat> &g)
{
    const auto m = ch.n_elements();
    const std::size_t kk = ch.n_users();
    const CMat *t[2] = {&ch.t1, &ch.t2};
    auto rr = [&](int i, std::size_t k) -> const CMat & { return i == 0 ? ch.r1[k] : ch.r2[k]; };

    DenseCoefficients dc;
    dc.a = CMat::Zero(m * m, m * m);
    dc.b = CMat::Zero(m * m, m * m);
    dc.d = CMat::Zero(m * m, m * m);
    CMat pm = CMat::Zero(m, m);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
        {
            CMat inner = CMat::Zero(m, m);
            for (std::size_t k = 0; k < kk; ++k)
                inner += rr(j, k).adjoint() * g[k].adjoint() * g[k] * rr(i, k);
            dc.a += kron((*t[i] * f * f.adjoint() * t[j]->adjoint()).transpose(), inner);
        }
    for (int i = 0; i < 2; ++i)
    {
        CMat inner = CMat::Zero(m, m);
        for (std::size_t k = 0; k < kk; ++k)
            inner += rr(i, k).adjoint() * g[k].adjoint() * g[k] * ch.r2[k];
        dc.b += kron((ch.t1 * f * f.adjoint() * t[i]->adjoint()).transpose(), inner);
    }
    {
        CMat inner = CMat::Zero(m, m);
        for (std::size_t k = 0; k < kk; ++k)
            inner += ch.r2[k].adjoint() * g[k].adjoint() * g[k] * ch.r2[k];
        dc.c = kron((ch.t1 * f * f.adjoint() * ch.t1.adjoint()).transpose(), inner);
    }
    Eigen::Index off = 0;
    for (std::size_t k = 0; k < kk; ++k)
    {
        const CMat fk = f.middleCols(off, g[k].rows());
        off += g[k].rows();
        dc.d += kron((ch.t1 * fk * g[k] * ch.r2[k]).transpose(), ch.s);
        for (int i = 0; i < 2; ++i)
            pm += *t[i] * fk * g[k] * rr(i, k);
    }
    dc.p = pm.diagonal();

    std::vector<Eigen::Index> idx(static_cast<std::size_t>(m));
    for (Eigen::Index n = 0; n < m; ++n)
        idx[static_cast<std::size_t>(n)] = n * m + n;
    dc.a0.resize(m, m);
    dc.d0.resize(m, m);
    dc.b0.resize(m, m * m);
    for (Eigen::Index n = 0; n < m; ++n)
    {
        for (Eigen::Index q = 0; q < m; ++q)
        {
            dc.a0(n, q) = dc.a(idx[n], idx[q]);
            dc.d0(n, q) = dc.d(idx[n], idx[q]);
        }
        dc.b0.row(n) = dc.b.row(idx[n]);
    }

    // blkdiag(diag(s_1), ..., diag(s_M)) = diag(vec(S))
    const CVec vs = Eigen::Map<const CVec>(ch.s.data(), m * m);
    dc.b_tilde = dc.b0 * vs.asDiagonal();
    dc.c_tilde.resize(m * m, m * m);
    for (Eigen::Index j = 0; j < m; ++j)
        for (Eigen::Index l = 0; l < m; ++l)
            dc.c_tilde.block(j * m, l * m, m, m) =
                ch.s.col(j).conjugate().asDiagonal() * dc.c.block(j * m, l * m, m, m) * ch.s.col(l).asDiagonal();

    dc.w_tilde.resize(m + m * m, m + m * m);
    dc.w_tilde << dc.a0, dc.b_tilde, dc.b_tilde.adjoint(), dc.c_tilde;
    return dc;
}

/// Quartic-subproblem objective from the dense coefficients.
inline double dense_theta_objective(const DenseCoefficients &dc, const CVec &theta)
{
    const auto m = theta.size();
    CVec tt(m + m * m);
    tt << theta, kron_vec(theta, theta);
    const cdouble form = tt.dot(dc.w_tilde * tt);
    const cdouble lin = theta.dot(dc.p.conjugate()) + theta.dot(dc.d0.conjugate() * theta.conjugate());
    return form.real() - 2.0 * lin.real();
}

/// Monte-Carlo estimate of E||x_k - G_k (H_k F x + z_k)||^2.
inline double mse_monte_carlo(const CMat &h, const CMat &f, const CMat &g, Eigen::Index stream_offset,
                              double noise_power, int draws, RandomSource &rng)
{
    const auto n = f.cols();
    const auto nr = h.rows();
    const auto nk = g.rows();
    const CMat ghf = g * h * f;
    const double sn = std::sqrt(noise_power);
    double acc = 0.0;
    CVec x(n), z(nr);
    for (int d = 0; d < draws; ++d)
    {
        for (Eigen::Index i = 0; i < n; ++i)
            x(i) = rng.complex_normal();
        for (Eigen::Index i = 0; i < nr; ++i)
            z(i) = sn * rng.complex_normal();
        const CVec err = x.segment(stream_offset, nk) - (ghf * x + g * z);
        acc += err.squaredNorm();
    }
    return acc / draws;
}

/// min_G ||G [H F, sigma I] - [E_k, 0]||_F^2 via complete orthogonal decomposition.
inline CMat equalizer_least_squares(const CMat &h, const CMat &f, Eigen::Index stream_offset, Eigen::Index nk,
                                    double noise_power)
{
    const auto nr = h.rows();
    const auto n = f.cols();
    CMat x(nr, n + nr);
    x << h * f, std::sqrt(noise_power) * CMat::Identity(nr, nr);
    CMat target = CMat::Zero(nk, n + nr);
    target.block(0, stream_offset, nk, nk).setIdentity();
    // G X = target  <=>  X^H G^H = target^H
    const CMat gh = x.adjoint().completeOrthogonalDecomposition().solve(target.adjoint());
    return gh.adjoint();
}

/// (gram + mu I) F = rhs by full-pivot LU.
inline CMat precoder_linear_solve(const CMat &gram, const CMat &rhs, double mu)
{
    const CMat sys = gram + mu * CMat::Identity(gram.rows(), gram.cols());
    return sys.fullPivLu().solve(rhs);
}

/// sum_k tr(Psi_k) as a function of F for fixed effective channels and G.
inline double precoder_objective(const std::vector<CMat> &hs, const std::vector<CMat> &g, const CMat &f,
                                 double noise_power)
{
    double s = 0.0;
    Eigen::Index off = 0;
    for (std::size_t k = 0; k < hs.size(); ++k)
    {
        const auto nk = g[k].rows();
        const CMat ghf = g[k] * hs[k] * f;
        s += ghf.squaredNorm() - 2.0 * ghf.middleCols(off, nk).trace().real() +
             noise_power * g[k].squaredNorm() + static_cast<double>(nk);
        off += nk;
    }
    return s;
}

/// Accelerated projected gradient on the power ball from several random
/// starts; returns the best objective found.
inline double precoder_projected_gradient(const std::vector<CMat> &hs, const std::vector<CMat> &g, double p,
                                          double noise_power, int starts, int iters, RandomSource &rng)
{
    const auto nt = hs.front().cols();
    Eigen::Index n = 0;
    for (const CMat &gk : g)
        n += gk.rows();
    CMat gram = CMat::Zero(nt, nt);
    CMat lin(nt, n);
    Eigen::Index off = 0;
    for (std::size_t k = 0; k < hs.size(); ++k)
    {
        const CMat r = hs[k].adjoint() * g[k].adjoint();
        gram += r * r.adjoint();
        lin.middleCols(off, g[k].rows()) = r;
        off += g[k].rows();
    }
    // gradient of tr(F^H gram F) - 2 Re tr(lin^H F) is 2 (gram F - lin)
    const double lip = 2.0 * std::max(gram.norm(), 1e-300);
    auto project = [p](CMat x)
    {
        const double nrm = x.norm();
        if (nrm * nrm > p)
            x *= std::sqrt(p) / nrm;
        return x;
    };
    double best = std::numeric_limits<double>::infinity();
    for (int s = 0; s < starts; ++s)
    {
        CMat x = project(rng.complex_gaussian(nt, n));
        CMat y = x;
        double tk = 1.0;
        for (int it = 0; it < iters; ++it)
        {
            const CMat xn = project(y - (2.0 / lip) * (gram * y - lin));
            const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
            y = xn + ((tk - 1.0) / tn) * (xn - x);
            x = xn;
            tk = tn;
        }
        best = std::min(best, precoder_objective(hs, g, x, noise_power));
    }
    return best;
}

/// Best value of 2 Re(theta^H f) over random unit-modulus vectors.
inline double phase_random_search(const CVec &f, int samples, RandomSource &rng)
{
    double best = std::numeric_limits<double>::infinity();
    for (int s = 0; s < samples; ++s)
    {
        const CVec th = rng.random_phases(f.size());
        best = std::min(best, 2.0 * th.dot(f).real());
    }
    return best;
}

/// Central-difference gradient (real and imaginary parts) of tr(Psi_k) in G_k.
inline double equalizer_fd_gradient_norm(const CMat &h, const CMat &f, const CMat &g, Eigen::Index stream_offset,
                                         double noise_power, double step)
{
    auto tr_psi = [&](const CMat &gg)
    {
        const CMat ghf = gg * h * f;
        return ghf.squaredNorm() - 2.0 * ghf.middleCols(stream_offset, gg.rows()).trace().real() +
               noise_power * gg.squaredNorm() + static_cast<double>(gg.rows());
    };
    double sq = 0.0;
    for (Eigen::Index i = 0; i < g.rows(); ++i)
        for (Eigen::Index j = 0; j < g.cols(); ++j)
            for (cdouble dir : {cdouble(1.0, 0.0), cdouble(0.0, 1.0)})
            {
                CMat gp = g, gm = g;
                gp(i, j) += step * dir;
                gm(i, j) -= step * dir;
                const double d = (tr_psi(gp) - tr_psi(gm)) / (2.0 * step);
                sq += d * d;
            }
    return std::sqrt(sq);
}

} // namespace dris::oracle

#endif
