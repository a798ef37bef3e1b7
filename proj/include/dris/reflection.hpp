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

#ifndef DRIS_REFLECTION_HPP
#define DRIS_REFLECTION_HPP

#include "objective.hpp"
#include "types.hpp"
#include "workspace.hpp"

#include <cmath>
#include <string_view>
#include <vector>

namespace dris
{

/// Scalar used for the Lambda of the first (quartic -> quadratic) majorizer.
enum class Majorizer
{
    trace,          // tr(W) = tr(A0) + tr(Ct)
    max_eigenvalue  // lambda_max(W)
};

inline std::string_view to_string(Majorizer m) { return m == Majorizer::trace ? "trace" : "max_eigenvalue"; }

/// Diagonal shifts of Lambda on the theta block and the theta (x) theta block.
struct MajorizerShifts
{
    double theta_block = 0.0;
    double kron_block = 0.0;
};

struct ReflectionOptions
{
    Majorizer majorizer = Majorizer::trace;
    int inner_iters = 1;
};

/**
 * Rows c^T of the low-rank factor of W = [[A0, Bt], [Bt^H, Ct]]:
 * W = sum_rows conj(c) c^T, one row per entry (r, col) of G_k H_k F.
 * With x the theta block and Y = reshape(y) the Kronecker block,
 * c^T [x; y] = [G_k (sum_i R_i,k diag(x) T_i + R_2,k (S o Y) T_1) F]_(r, col).
 */
inline CMat w_tilde_factor(const ChannelSet &ch, const CMat &precoder, const std::vector<CMat> &equalizers)
{
    const auto m = ch.n_elements();
    const auto n = precoder.cols();
    Eigen::Index rows = 0;
    for (const CMat &g : equalizers)
        rows += g.rows() * n;

    const CMat tf1 = ch.t1 * precoder;
    const CMat tf2 = ch.t2 * precoder;
    CMat factor(rows, m + m * m);
    Eigen::Index row = 0;
    for (std::size_t k = 0; k < equalizers.size(); ++k)
    {
        const CMat gr1 = equalizers[k] * ch.r1[k];
        const CMat gr2 = equalizers[k] * ch.r2[k];
        for (Eigen::Index r = 0; r < equalizers[k].rows(); ++r)
            for (Eigen::Index col = 0; col < n; ++col, ++row)
            {
                factor.row(row).head(m) = (gr1.row(r).transpose().cwiseProduct(tf1.col(col)) +
                                           gr2.row(r).transpose().cwiseProduct(tf2.col(col)))
                                              .transpose();
                // entry n*M + m_ of the Kronecker block: GR2[r,m_] S[m_,n] TF1[n,col]
                const CMat blk = gr2.row(r).transpose().asDiagonal() * ch.s * tf1.col(col).asDiagonal();
                factor.row(row).tail(m * m) = vectorize(blk).transpose();
            }
    }
    return factor;
}

/// lambda_max(W) from the (K N_k N)-sized Gram matrix of its factor.
inline double lambda_max_w_tilde(const ChannelSet &ch, const CMat &precoder, const std::vector<CMat> &equalizers)
{
    const CMat factor = w_tilde_factor(ch, precoder, equalizers);
    const CMat gram = factor * factor.adjoint();
    Eigen::SelfAdjointEigenSolver<CMat> eig(gram, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success)
        throw SolverError("lambda_max_w_tilde: eigenvalue computation failed");
    return std::max(0.0, eig.eigenvalues().maxCoeff());
}

/// Trace variant. When the Kronecker block vanishes only A0 needs covering.
inline MajorizerShifts trace_shifts(const ReflectionWorkspace &ws)
{
    if (!ws.has_quartic())
        return {ws.trace_a0, 0.0};
    const double t = ws.trace_a0 + ws.trace_c_tilde;
    return {t, t};
}

inline MajorizerShifts max_eigenvalue_shifts(const ReflectionWorkspace &ws, double lambda_max_w)
{
    return {lambda_max_w, ws.has_quartic() ? lambda_max_w : 0.0};
}

struct SurrogateState
{
    CVec u_t;          // (A0 - La I) theta_t + Bt (theta_t (x) theta_t) - p^*
    CVec v_t;          // Bt^H theta_t + (Ct - Lc I)(theta_t (x) theta_t)
    CMat v_hat_t;      // v_t = vec(v_hat_t)
    CMat v_tilde_t;    // v_hat_t - D0^*
    CVec f_t;
    MajorizerShifts shifts;
    double lift_lambda = 0.0;
};

/// theta-subproblem objective in block form, W theta_tilde applied explicitly.
inline double quartic_objective(const ReflectionWorkspace &ws, const CVec &theta)
{
    if (theta.size() != ws.m)
        throw DimensionError("quartic_objective: theta length must equal M");
    const CVec w = kron_self(theta);
    const CVec top = ws.a0 * theta + ws.apply_b(w);
    const CVec bottom = ws.apply_b_adjoint(theta) + ws.apply_c(w);
    const cdouble form = theta.dot(top) + w.dot(bottom);
    const cdouble lin = theta.dot(ws.p.conjugate()) + theta.dot(ws.d0.conjugate() * theta.conjugate());
    return form.real() - 2.0 * lin.real();
}

/// First majorization: the quartic form becomes 2 Re(theta^H u + theta^H V~ theta^*).
inline SurrogateState mm_stage1(const ReflectionWorkspace &ws, const CVec &theta_t, const MajorizerShifts &shifts)
{
    if (theta_t.size() != ws.m)
        throw DimensionError("mm_stage1: theta length must equal M");
    SurrogateState s;
    s.shifts = shifts;
    const CVec w = kron_self(theta_t);
    if (ws.has_quartic())
    {
        s.u_t = ws.a0 * theta_t - shifts.theta_block * theta_t + ws.apply_b(w) - ws.p.conjugate();
        s.v_t = ws.apply_b_adjoint(theta_t) + ws.apply_c(w) - shifts.kron_block * w;
    }
    else
    {
        s.u_t = ws.a0 * theta_t - shifts.theta_block * theta_t - ws.p.conjugate();
        s.v_t = -shifts.kron_block * w;
    }
    s.v_hat_t = reshape_square(s.v_t, ws.m);
    s.v_tilde_t = s.v_hat_t - ws.d0.conjugate();
    return s;
}

/// Real lift [[Re V, Im V], [Im V, -Re V]] with Re(theta^H V theta^*) = tb^T Vbar tb.
inline RMat real_lift(const CMat &v)
{
    const auto m = v.rows();
    RMat out(2 * m, 2 * m);
    out.topLeftCorner(m, m) = v.real();
    out.topRightCorner(m, m) = v.imag();
    out.bottomLeftCorner(m, m) = v.imag();
    out.bottomRightCorner(m, m) = -v.real();
    return out;
}

inline RVec real_stack(const CVec &theta)
{
    RVec out(2 * theta.size());
    out << theta.real(), theta.imag();
    return out;
}

/// Second majorization (Taylor bound with lambda_max of the real Hessian);
/// fills lift_lambda and f_t = u_t + [I, jI] vbar_t.
inline CVec mm_stage2(SurrogateState &surr, const CVec &theta_t)
{
    const auto m = theta_t.size();
    if (surr.u_t.size() != m || surr.v_tilde_t.rows() != m)
        throw DimensionError("mm_stage2: stage-1 outputs missing or mis-sized");
    const RMat vbar = real_lift(surr.v_tilde_t);
    RMat hess = vbar + vbar.transpose();
    double lambda = 0.0;
    if (!hess.isZero(0.0))
    {
        Eigen::SelfAdjointEigenSolver<RMat> eig(hess, Eigen::EigenvaluesOnly);
        if (eig.info() != Eigen::Success)
            throw SolverError("mm_stage2: eigenvalue computation failed");
        lambda = eig.eigenvalues().maxCoeff();
    }
    surr.lift_lambda = lambda;
    hess.diagonal().array() -= lambda;
    const RVec vb = hess * real_stack(theta_t);
    surr.f_t = surr.u_t;
    surr.f_t.real() += vb.head(m);
    surr.f_t.imag() += vb.tail(m);
    return surr.f_t;
}

/// theta_i = -exp(j arg f_i), the minimizer of 2 Re(theta^H f) over the
/// unit-modulus set. Entries with f_i = 0 keep the previous phase.
inline CVec phase_update(const CVec &f, const CVec &theta_prev)
{
    if (f.size() != theta_prev.size())
        throw DimensionError("phase_update: size mismatch");
    CVec out(f.size());
    for (Eigen::Index i = 0; i < f.size(); ++i)
        out(i) = (f(i) == cdouble(0.0)) ? theta_prev(i) : -std::polar(1.0, std::arg(f(i)));
    return out;
}

inline CVec phase_update(const CVec &f) { return phase_update(f, CVec::Ones(f.size())); }

inline MajorizerShifts choose_shifts(const ReflectionWorkspace &ws, const ChannelSet &ch, const CMat &precoder,
                                     const std::vector<CMat> &equalizers, Majorizer which)
{
    if (which == Majorizer::trace)
        return trace_shifts(ws);
    return max_eigenvalue_shifts(ws, lambda_max_w_tilde(ch, precoder, equalizers));
}

/// One reflection update for fixed (F, {G_k}): workspace -> stage 1 ->
/// stage 2 -> phase update, repeated `inner_iters` times.
inline CVec update_reflection(const ChannelSet &ch, const BeamformingState &st, const ReflectionOptions &opts = {})
{
    check_state(ch, st);
    if (opts.inner_iters < 1)
        throw ConfigError("update_reflection: inner_iters must be >= 1");
    const ReflectionWorkspace ws = build_workspace(ch, st.precoder, st.equalizers);
    const MajorizerShifts shifts = choose_shifts(ws, ch, st.precoder, st.equalizers, opts.majorizer);
    CVec theta = st.theta;
    for (int it = 0; it < opts.inner_iters; ++it)
    {
        SurrogateState surr = mm_stage1(ws, theta, shifts);
        theta = phase_update(mm_stage2(surr, theta), theta);
    }
    return theta;
}

// --- quadratic unit-modulus sub-problems -------------------------------------

/// theta^H A theta - 2 Re(theta^H p^*), the form taken by each block when the
/// two surfaces carry separate patterns (or only one surface is present).
struct QuadraticReflectionProblem
{
    CMat a;
    CVec p;

    double objective(const CVec &theta) const
    {
        return theta.dot(a * theta).real() - 2.0 * theta.dot(p.conjugate()).real();
    }
};

/**
 * Coefficients for H_k = R_k Theta T + D_k with D_k fixed:
 * A = (T F F^H T^H)^T o sum_k R_k^H G_k^H G_k R_k and
 * p = diag(sum_k T (F_k G_k - F F^H D_k^H G_k^H G_k) R_k).
 */
inline QuadraticReflectionProblem build_quadratic_problem(const std::vector<CMat> &r, const CMat &t,
                                                          const std::vector<CMat> &d, const CMat &precoder,
                                                          const std::vector<CMat> &equalizers)
{
    const auto m = t.rows();
    if (r.size() != equalizers.size() || d.size() != equalizers.size())
        throw DimensionError("build_quadratic_problem: need one R_k, D_k per user");
    const CMat tf = t * precoder;
    CMat e = CMat::Zero(m, m);
    CMat pm = CMat::Zero(m, m);
    Eigen::Index off = 0;
    for (std::size_t k = 0; k < equalizers.size(); ++k)
    {
        const CMat gr = equalizers[k] * r[k];
        e.noalias() += gr.adjoint() * gr;
        const auto nk = equalizers[k].rows();
        const CMat gd_f = (equalizers[k] * d[k]) * precoder; // G_k D_k F
        // T (F_k G_k - F F^H D_k^H G_k^H G_k) R_k = (T F_k - T F (G_k D_k F)^H) G_k R_k
        pm.noalias() += (tf.middleCols(off, nk) - tf * gd_f.adjoint()) * gr;
        off += nk;
    }
    return {(tf * tf.adjoint()).transpose().cwiseProduct(e), pm.diagonal()};
}

/// One MM step on a quadratic problem: stage 1 reduces to
/// u = (A - La I) theta_t - p^*, V~ = 0, and stage 2 passes u through.
inline CVec quadratic_mm_step(const QuadraticReflectionProblem &prob, const CVec &theta_t, Majorizer which)
{
    double shift = prob.a.diagonal().real().sum();
    if (which == Majorizer::max_eigenvalue)
    {
        Eigen::SelfAdjointEigenSolver<CMat> eig(prob.a, Eigen::EigenvaluesOnly);
        if (eig.info() != Eigen::Success)
            throw SolverError("quadratic_mm_step: eigenvalue computation failed");
        shift = std::max(0.0, eig.eigenvalues().maxCoeff());
    }
    const auto m = theta_t.size();
    SurrogateState surr;
    surr.shifts = {shift, 0.0};
    surr.u_t = prob.a * theta_t - shift * theta_t - prob.p.conjugate();
    surr.v_t = CVec::Zero(m * m);
    surr.v_hat_t = CMat::Zero(m, m);
    surr.v_tilde_t = CMat::Zero(m, m);
    return phase_update(mm_stage2(surr, theta_t), theta_t);
}

} // namespace dris

#endif
