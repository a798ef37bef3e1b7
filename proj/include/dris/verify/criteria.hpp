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

// Acceptance checks 1-9. Each returns a CriterionResult with a one-line
// verdict; the acceptance test binary and `dris verify` both print them.

#ifndef DRIS_VERIFY_CRITERIA_HPP
#define DRIS_VERIFY_CRITERIA_HPP

#include "../dris.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace dris::verify
{

struct CriterionResult
{
    int id = 0;
    std::string title;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;

    std::string line() const
    {
        char secs[32];
        std::snprintf(secs, sizeof secs, "%.1f s", seconds);
        return "CRITERION " + std::to_string(id) + " " + (pass ? "PASS" : "FAIL") + " " + title + " | " + detail +
               " | " + secs;
    }
};

inline std::string sci(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

/// A small problem instance: channels, a feasible state and its scenario.
struct Instance
{
    SystemConfig cfg;
    ChannelSet ch;
    BeamformingState st;
};

/// Generic instance with CN(0,1) channels, unit power and sigma^2 = 0.1.
/// F is random at full power, G random, theta random unit-modulus.
inline Instance generic_instance(RandomSource &rng, int m, int nt, int nr, int nk, int k)
{
    Instance in;
    in.cfg.n_elements = m;
    in.cfg.n_tx = nt;
    in.cfg.n_rx_per_user = nr;
    in.cfg.n_streams_per_user = nk;
    in.cfg.n_users = k;
    in.cfg.tx_power = 1.0;
    in.cfg.noise_power = 0.1;
    in.ch.t1 = rng.complex_gaussian(m, nt);
    in.ch.t2 = rng.complex_gaussian(m, nt);
    in.ch.s = rng.complex_gaussian(m, m);
    for (int u = 0; u < k; ++u)
    {
        in.ch.r1.push_back(rng.complex_gaussian(nr, m));
        in.ch.r2.push_back(rng.complex_gaussian(nr, m));
    }
    in.st.precoder = rng.complex_gaussian(nt, k * nk);
    in.st.precoder /= in.st.precoder.norm();
    for (int u = 0; u < k; ++u)
        in.st.equalizers.push_back(rng.complex_gaussian(nk, nr));
    in.st.theta = rng.random_phases(m);
    return in;
}

/// Instance with channels from the geometric model (default positions and
/// powers), a full-power random F and the LMMSE equalizers for it.
inline Instance physical_instance(RandomSource &rng, int m, int nt, int nr, int nk, int k)
{
    Instance in;
    in.cfg.n_elements = m;
    in.cfg.n_tx = nt;
    in.cfg.n_rx_per_user = nr;
    in.cfg.n_streams_per_user = nk;
    in.cfg.n_users = k;
    in.cfg.seed = rng.engine()();
    in.ch = generate_channels(in.cfg);
    in.st.precoder = rng.complex_gaussian(nt, k * nk);
    in.st.precoder *= std::sqrt(in.cfg.tx_power) / in.st.precoder.norm();
    in.st.theta = rng.random_phases(m);
    in.st.equalizers.assign(static_cast<std::size_t>(k), CMat::Zero(nk, nr));
    in.st.equalizers = update_equalizers(in.ch, in.st, in.cfg.noise_power);
    return in;
}

class Stopwatch
{
public:
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// ------------------------------------------------------------------ 1

inline CriterionResult criterion_monotone_descent(int instances = 200)
{
    Stopwatch sw;
    constexpr double tol = 1e-9;
    double worst_outer = -std::numeric_limits<double>::infinity();
    double worst_block = -std::numeric_limits<double>::infinity();
    int negative = 0, infeasible = 0, steps = 0;
    const double noise_dbm[] = {-130.0, -120.0, -110.0, -100.0};

    for (int i = 0; i < instances; ++i)
    {
        SystemConfig cfg;
        cfg.n_elements = 8;
        cfg.n_tx = 4;
        cfg.n_rx_per_user = 2;
        cfg.n_streams_per_user = 2;
        cfg.n_users = 2;
        cfg.noise_power = dbm_to_watts(noise_dbm[i % 4]);
        cfg.seed = trial_seed(101, 0, static_cast<std::uint64_t>(i));
        const ChannelSet ch = generate_channels(cfg);

        SolverOptions opts;
        opts.reflection.majorizer = (i % 2) ? Majorizer::max_eigenvalue : Majorizer::trace;
        double prev = std::numeric_limits<double>::quiet_NaN();
        opts.substep_observer = [&](std::string_view, double v)
        {
            if (!std::isnan(prev))
                worst_block = std::max(worst_block, (v - prev) / std::abs(prev));
            prev = v;
        };
        const SolveResult res = solve(ch, cfg, opts);
        const auto &h = res.trace.objective_history;
        for (std::size_t t = 0; t < h.size(); ++t)
        {
            if (h[t] < 0.0)
                ++negative;
            if (t > 0)
            {
                worst_outer = std::max(worst_outer, (h[t] - h[t - 1]) / std::abs(h[t - 1]));
                ++steps;
            }
        }
        if (!state_feasible(res.state, cfg.tx_power))
            ++infeasible;
    }
    CriterionResult r;
    r.id = 1;
    r.title = "monotone descent";
    r.pass = worst_outer <= tol && worst_block <= tol && negative == 0 && infeasible == 0;
    r.detail = std::to_string(instances) + " runs (M=8, Nt=4, Nr=2, K=2), " + std::to_string(steps) +
               " outer steps; worst relative increase outer " + sci(worst_outer) + ", per block " + sci(worst_block) +
               " (tol 1e-9); negative values " + std::to_string(negative) + ", infeasible states " +
               std::to_string(infeasible);
    r.seconds = sw.seconds();
    return r;
}

// ------------------------------------------------------------------ 2

inline CriterionResult criterion_objective_forms(int instances = 100)
{
    Stopwatch sw;
    RandomSource rng(202);
    double worst = 0.0;
    for (int i = 0; i < instances; ++i)
    {
        const int m = 2 + 2 * (i % 4);
        Instance in = (i % 2) ? physical_instance(rng, m, 4, 2, 1, 2) : generic_instance(rng, m, 4, 3, 2, 2);
        const ReflectionWorkspace ws = build_workspace(in.ch, in.st.precoder, in.st.equalizers);
        BeamformingState a = in.st, b = in.st;
        a.theta = rng.random_phases(m);
        b.theta = rng.random_phases(m);
        const double d_direct = sum_mse(in.ch, a, in.cfg.noise_power).sum_mse - sum_mse(in.ch, b, in.cfg.noise_power).sum_mse;
        const double d_vec = vectorized_theta_objective(ws, a.theta) - vectorized_theta_objective(ws, b.theta);
        worst = std::max(worst, std::abs(d_direct - d_vec) / std::abs(d_direct));
    }
    CriterionResult r;
    r.id = 2;
    r.title = "objective forms agree in differences";
    r.pass = worst <= 1e-8;
    r.detail = std::to_string(instances) + " instances, M in {2,4,6,8}; worst |dSumMSE - dVec| / |dSumMSE| = " +
               sci(worst) + " (tol 1e-8)";
    r.seconds = sw.seconds();
    return r;
}

// ------------------------------------------------------------------ 3

inline double max_abs(const CMat &x) { return x.size() ? x.cwiseAbs().maxCoeff() : 0.0; }

/// max |impl - dense| / max(|dense|) (0 when both vanish).
inline double scaled_error(const CMat &impl, const CMat &dense)
{
    const double scale = max_abs(dense);
    const double err = max_abs(impl - dense);
    return scale > 0.0 ? err / scale : err;
}

inline CriterionResult criterion_dense_operators(int per_size = 6)
{
    Stopwatch sw;
    RandomSource rng(303);
    std::map<std::string, double> worst;
    for (int m : {2, 4, 8})
        for (int i = 0; i < per_size; ++i)
        {
            Instance in = (i % 2) ? physical_instance(rng, m, 4, 2, 2, 2) : generic_instance(rng, m, 4, 3, 2, 2);
            const ReflectionWorkspace ws = build_workspace(in.ch, in.st.precoder, in.st.equalizers);
            const oracle::DenseCoefficients dc = oracle::dense_coefficients(in.ch, in.st.precoder, in.st.equalizers);
            auto note = [&](const std::string &what, double e) { worst[what] = std::max(worst[what], e); };
            note("A0", scaled_error(ws.a0, dc.a0));
            note("D0", scaled_error(ws.d0, dc.d0));
            note("p", scaled_error(ws.p, dc.p));
            note("trA0", std::abs(ws.trace_a0 - dc.a0.trace().real()) / std::max(1e-300, std::abs(dc.a0.trace())));
            note("trC", std::abs(ws.trace_c_tilde - dc.c_tilde.trace().real()) /
                            std::max(1e-300, std::abs(dc.c_tilde.trace())));
            for (int probe = 0; probe < 3; ++probe)
            {
                const CVec w = rng.complex_gaussian(m * m, 1);
                const CVec th = rng.complex_gaussian(m, 1);
                note("Bt", scaled_error(ws.apply_b(w), dc.b_tilde * w));
                note("Bt^H", scaled_error(ws.apply_b_adjoint(th), dc.b_tilde.adjoint() * th));
                note("Ct", scaled_error(ws.apply_c(w), dc.c_tilde * w));
            }
        }
    double overall = 0.0;
    std::string parts;
    for (const auto &[k, v] : worst)
    {
        overall = std::max(overall, v);
        parts += (parts.empty() ? "" : ", ") + k + " " + sci(v);
    }
    CriterionResult r;
    r.id = 3;
    r.title = "dense Kronecker vs operator coefficients";
    r.pass = overall <= 1e-10;
    r.detail = "M in {2,4,8}, " + std::to_string(per_size) +
               " instances each, errors scaled by the largest dense entry: " + parts + " (tol 1e-10)";
    r.seconds = sw.seconds();
    return r;
}

// ------------------------------------------------------------------ 4

struct ChainReport
{
    double worst_violation = 0.0;  // relative to the term scale
    double worst_equality = 0.0;
    double worst_f_offset = 0.0;   // spread of u2 - 2Re(theta^H f_t) over probes
    double worst_lambda = 0.0;     // lift lambda vs dense
    double worst_shift = 0.0;      // implementation shift vs dense tr / lambda_max of W
};

/// Majorization chain at one expansion point, every surrogate evaluated from
/// dense W~ and a dense real Hessian.
inline void check_chain(const Instance &in, Majorizer which, RandomSource &rng, int probes, ChainReport &rep)
{
    const auto m = in.ch.n_elements();
    const CVec theta_t = in.st.theta;
    const oracle::DenseCoefficients dc = oracle::dense_coefficients(in.ch, in.st.precoder, in.st.equalizers);
    const ReflectionWorkspace ws = build_workspace(in.ch, in.st.precoder, in.st.equalizers);
    const MajorizerShifts shifts = choose_shifts(ws, in.ch, in.st.precoder, in.st.equalizers, which);

    // shifts vs dense
    const bool quartic = dc.c_tilde.cwiseAbs().maxCoeff() > 0.0;
    double dense_shift;
    if (which == Majorizer::trace)
        dense_shift = quartic ? dc.w_tilde.trace().real() : dc.a0.trace().real();
    else
    {
        Eigen::SelfAdjointEigenSolver<CMat> eig(quartic ? dc.w_tilde : dc.a0, Eigen::EigenvaluesOnly);
        dense_shift = eig.eigenvalues().maxCoeff();
    }
    rep.worst_shift = std::max(rep.worst_shift, std::abs(shifts.theta_block - dense_shift) / std::abs(dense_shift));

    const double la = shifts.theta_block, lc = shifts.kron_block;
    auto tilde = [&](const CVec &th)
    {
        CVec t(m + m * m);
        t << th, oracle::kron_vec(th, th);
        return t;
    };
    auto lin_part = [&](const CVec &th)
    { return 2.0 * (th.dot(dc.p.conjugate()) + th.dot(dc.d0.conjugate() * th.conjugate())).real(); };
    RVec lam_diag(m + m * m);
    lam_diag.head(m).setConstant(la);
    lam_diag.tail(m * m).setConstant(lc);
    const CMat lam_minus_w = CMat(lam_diag.cast<cdouble>().asDiagonal()) - dc.w_tilde;
    const CVec tt_t = tilde(theta_t);

    auto h = [&](const CVec &th) { return oracle::dense_theta_objective(dc, th); };
    auto u1 = [&](const CVec &th)
    {
        const CVec tt = tilde(th);
        const CVec d = tt - tt_t;
        return (tt.dot(dc.w_tilde * tt) + d.dot(lam_minus_w * d)).real() - lin_part(th);
    };

    // dense stage-1 quadratic part and its real Hessian
    const CVec w_t = oracle::kron_vec(theta_t, theta_t);
    const CVec v = dc.b_tilde.adjoint() * theta_t + dc.c_tilde * w_t - lc * w_t;
    CMat v_tilde(m, m);
    for (Eigen::Index a = 0; a < m; ++a)
        for (Eigen::Index b = 0; b < m; ++b)
            v_tilde(a, b) = v(a * m + b) - std::conj(dc.d0(a, b));
    RMat hess(2 * m, 2 * m);
    hess << v_tilde.real(), v_tilde.imag(), v_tilde.imag(), -v_tilde.real();
    hess = (hess + hess.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<RMat> heig(hess, Eigen::EigenvaluesOnly);
    const double lam = heig.eigenvalues().maxCoeff();
    auto bar = [](const CVec &th)
    {
        RVec b(2 * th.size());
        b << th.real(), th.imag();
        return b;
    };
    const RVec tb_t = bar(theta_t);
    auto u2 = [&](const CVec &th)
    {
        const RVec tb = bar(th);
        const double quad = tb.dot(hess * tb);
        const double bound = lam * tb.squaredNorm() + 2.0 * tb.dot(hess * tb_t - lam * tb_t) +
                             lam * tb_t.squaredNorm() - tb_t.dot(hess * tb_t);
        return u1(th) - quad + bound;
    };

    // implementation stage 1 + 2
    SurrogateState surr = mm_stage1(ws, theta_t, shifts);
    const CVec f_t = mm_stage2(surr, theta_t);
    rep.worst_lambda = std::max(rep.worst_lambda, std::abs(surr.lift_lambda - lam) / std::max(1.0, std::abs(lam)));

    const double scale = std::max({std::abs(h(theta_t)), la * m + lc * m * m, std::abs(lam) * m, 1e-300});
    auto viol = [&](double lhs, double rhs) { return std::max(0.0, (lhs - rhs) / scale); };

    const double h_t = h(theta_t), u1_t = u1(theta_t), u2_t = u2(theta_t);
    rep.worst_equality = std::max({rep.worst_equality, std::abs(u1_t - h_t) / scale, std::abs(u2_t - u1_t) / scale});
    const double off_t = u2_t - 2.0 * theta_t.dot(f_t).real();

    for (int p = 0; p < probes; ++p)
    {
        const CVec th = rng.random_phases(m);
        rep.worst_violation = std::max({rep.worst_violation, viol(h(th), u1(th)), viol(u1(th), u2(th))});
        rep.worst_f_offset =
            std::max(rep.worst_f_offset, std::abs(u2(th) - 2.0 * th.dot(f_t).real() - off_t) / scale);
    }
    const CVec next = phase_update(f_t, theta_t);
    rep.worst_violation = std::max({rep.worst_violation, viol(h(next), u1(next)), viol(u1(next), u2(next)),
                                    viol(u2(next), u2_t)});
}

inline CriterionResult criterion_majorization_chain(int per_case = 4, int probes = 20)
{
    Stopwatch sw;
    RandomSource rng(404);
    ChainReport trace_rep, eig_rep;
    for (int m = 2; m <= 6; ++m)
        for (int i = 0; i < per_case; ++i)
        {
            Instance in = (i % 2) ? physical_instance(rng, m, 4, 2, 2, 2) : generic_instance(rng, m, 4, 3, 2, 2);
            check_chain(in, Majorizer::trace, rng, probes, trace_rep);
            check_chain(in, Majorizer::max_eigenvalue, rng, probes, eig_rep);
        }
    auto ok = [](const ChainReport &c)
    {
        return c.worst_violation <= 1e-9 && c.worst_equality <= 1e-9 && c.worst_f_offset <= 1e-9 &&
               c.worst_lambda <= 1e-9 && c.worst_shift <= 1e-9;
    };
    auto describe = [](const char *name, const ChainReport &c)
    {
        return std::string(name) + ": violation " + sci(c.worst_violation) + ", equality gap " +
               sci(c.worst_equality) + ", f_t offset spread " + sci(c.worst_f_offset) + ", lift lambda " +
               sci(c.worst_lambda) + ", shift " + sci(c.worst_shift);
    };
    CriterionResult r;
    r.id = 4;
    r.title = "majorization chain (both Lambda variants)";
    r.pass = ok(trace_rep) && ok(eig_rep);
    r.detail = "M in 2..6, " + std::to_string(per_case) + " instances x " + std::to_string(probes) +
               " probes each; " + describe("trace", trace_rep) + "; " + describe("max-eig", eig_rep) +
               " (all relative to term scale, tol 1e-9)";
    r.seconds = sw.seconds();
    return r;
}

// ------------------------------------------------------------------ 5

inline CriterionResult criterion_kkt(int instances = 100)
{
    Stopwatch sw;
    RandomSource rng(505);
    double worst_power = 0.0, worst_slack = 0.0, worst_resid = 0.0;
    int non_decreasing = 0, active = 0;
    for (int i = 0; i < instances; ++i)
    {
        const int k = 2, nk = 1 + i % 2, nr = 2;
        const int nt = (i % 3 == 0) ? k * nk : k * nk + 2;  // invertible vs singular Gram
        std::vector<CMat> hs, gs;
        for (int u = 0; u < k; ++u)
        {
            hs.push_back(rng.complex_gaussian(nr, nt));
            gs.push_back(rng.complex_gaussian(nk, nr));
        }
        const double p = std::pow(10.0, rng.uniform(-3.0, 3.0));
        const KktContext ctx = make_kkt_context(hs, gs);
        const PrecoderSolution sol = solve_precoder(ctx, p);
        const double pw = transmit_power_of(sol.precoder);
        if (sol.mu > kkt_mu_floor_ratio * ctx.lambda_max())
            ++active;
        worst_power = std::max(worst_power, (pw - p) / p);
        worst_slack = std::max(worst_slack, std::abs(sol.mu * (pw - p)) / p);
        const CMat resid = ctx.gram * sol.precoder + sol.mu * sol.precoder -
                           [&]
                           {
                               CMat rhs(nt, k * nk);
                               for (int u = 0; u < k; ++u)
                                   rhs.middleCols(u * nk, nk) = ctx.rhs[static_cast<std::size_t>(u)];
                               return rhs;
                           }();
        double rhs_norm = 0.0;
        for (const CMat &r : ctx.rhs)
            rhs_norm += r.squaredNorm();
        worst_resid = std::max(worst_resid, resid.norm() / std::sqrt(rhs_norm));
        double prev = std::numeric_limits<double>::infinity();
        for (int j = -6; j <= 6; ++j)
        {
            const double pj = transmit_power(ctx, ctx.lambda_max() * std::pow(10.0, j));
            if (!(pj < prev))
                ++non_decreasing;
            prev = pj;
        }
    }
    CriterionResult r;
    r.id = 5;
    r.title = "precoder KKT suite";
    r.pass = worst_power <= 1e-8 && worst_slack <= 1e-6 && worst_resid <= 1e-8 && non_decreasing == 0;
    r.detail = std::to_string(instances) + " instances (" + std::to_string(active) +
               " with active power constraint); worst (tr(FF^H)-P)/P " + sci(worst_power) + " (tol 1e-8), |mu(tr-P)|/P " +
               sci(worst_slack) + " (tol 1e-6), KKT residual " + sci(worst_resid) +
               " (tol 1e-8), transmit_power monotonicity violations " + std::to_string(non_decreasing);
    r.seconds = sw.seconds();
    return r;
}

// ------------------------------------------------------------------ 6

inline CriterionResult criterion_equalizer(int instances = 100)
{
    Stopwatch sw;
    RandomSource rng(606);
    double worst_grad = 0.0, worst_increase = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < instances; ++i)
    {
        Instance in = (i % 2) ? physical_instance(rng, 4, 4, 3, 2, 2) : generic_instance(rng, 4, 4, 3, 2, 2);
        if (i % 2)
            for (CMat &g : in.st.equalizers)
                g += rng.complex_gaussian(g.rows(), g.cols()) * g.norm();  // move off the optimum first
        const double before = sum_mse(in.ch, in.st, in.cfg.noise_power).sum_mse;
        BeamformingState st = in.st;
        st.equalizers = update_equalizers(in.ch, in.st, in.cfg.noise_power);
        const double after = sum_mse(in.ch, st, in.cfg.noise_power).sum_mse;
        worst_increase = std::max(worst_increase, (after - before) / std::abs(before));
        for (std::size_t k = 0; k < st.equalizers.size(); ++k)
        {
            const CMat h = cascaded_channel(in.ch, st.theta, k);
            worst_grad = std::max(worst_grad, oracle::equalizer_fd_gradient_norm(h, st.precoder, st.equalizers[k],
                                                                                 st.stream_offset(k),
                                                                                 in.cfg.noise_power, 1e-6));
        }
    }
    CriterionResult r;
    r.id = 6;
    r.title = "equalizer optimality";
    r.pass = worst_grad <= 1e-4 && worst_increase <= 1e-9;
    r.detail = std::to_string(instances) + " instances; worst finite-difference gradient norm " + sci(worst_grad) +
               " (tol 1e-4), worst relative change in sum MSE " + sci(worst_increase) + " (must be <= 1e-9)";
    r.seconds = sw.seconds();
    return r;
}

// ------------------------------------------------------------------ 7

inline CriterionResult criterion_phase_update(int instances = 50, int candidates = 100000)
{
    Stopwatch sw;
    RandomSource rng(707);
    int beaten = 0;
    double worst_margin = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < instances; ++i)
    {
        const CVec f = rng.complex_gaussian(3, 1);
        const CVec th = phase_update(f);
        const double ours = 2.0 * th.dot(f).real();
        const double best = oracle::phase_random_search(f, candidates, rng);
        // positive margin means the random search lost
        worst_margin = std::max(worst_margin, (ours - best) / f.cwiseAbs().sum());
        if (ours > best + 1e-12 * f.cwiseAbs().sum())
            ++beaten;
    }
    CriterionResult r;
    r.id = 7;
    r.title = "phase update optimality";
    r.pass = beaten == 0;
    r.detail = std::to_string(instances) + " instances at M=3 vs " + std::to_string(candidates) +
               " random unit-modulus candidates each; instances where a candidate did better: " +
               std::to_string(beaten) + "; worst (ours - best)/||f||_1 = " + sci(worst_margin);
    r.seconds = sw.seconds();
    return r;
}

// ------------------------------------------------------------------ 8

inline CriterionResult criterion_convergence_speed(const ConfigFile &full, int trials = 20)
{
    Stopwatch sw;
    int fast = 0, init_close = 0;
    std::vector<int> first_hit;
    double worst_gap = 0.0;
    for (int t = 0; t < trials; ++t)
    {
        SystemConfig cfg = full.system;
        cfg.seed = trial_seed(full.system.seed, 0, static_cast<std::uint64_t>(t));
        const ChannelSet ch = generate_channels(cfg);

        SolverOptions o30 = solver_options(full.run);
        o30.max_iters = 30;
        o30.rel_tol = 1e-300;  // run all 30, judge from the trace
        const SolveResult r30 = solve(ch, cfg, o30);
        const auto &h = r30.trace.objective_history;
        int hit = -1;
        for (std::size_t i = 1; i < h.size() && hit < 0; ++i)
            if (std::abs(h[i] - h[i - 1]) < 1e-4 * std::abs(h[i - 1]))
                hit = static_cast<int>(i) + 1;
        first_hit.push_back(hit);
        if (hit > 0)
            ++fast;

        SolverOptions od = solver_options(full.run);
        const double a = solve(ch, cfg, od).trace.objective_history.back();
        od.init_scheme = InitScheme::random_phase;
        od.init_seed = cfg.seed;
        const double b = solve(ch, cfg, od).trace.objective_history.back();
        const double gap = std::abs(a - b) / std::min(a, b);
        worst_gap = std::max(worst_gap, gap);
        if (gap <= 0.05)
            ++init_close;
    }
    const int need = static_cast<int>(std::ceil(0.9 * trials));
    std::string hits;
    for (int v : first_hit)
        hits += (hits.empty() ? "" : ",") + (v > 0 ? std::to_string(v) : std::string("-"));
    CriterionResult r;
    r.id = 8;
    r.title = "convergence speed at full scale";
    r.pass = fast >= need && init_close >= need;
    r.detail = "M=64, Nt=16, K=2, " + std::to_string(trials) + " trials; relative change < 1e-4 within 30 iterations on " +
               std::to_string(fast) + "/" + std::to_string(trials) + " (need " + std::to_string(need) +
               "; first iteration reaching it: " + hits + "); paper_default vs random_phase init within 5% on " +
               std::to_string(init_close) + "/" + std::to_string(trials) + " (need " + std::to_string(need) +
               ", worst gap " + sci(worst_gap) + ")";
    r.seconds = sw.seconds();
    return r;
}

// ------------------------------------------------------------------ 9

inline const std::vector<double> &criterion9_noise_grid()
{
    static const std::vector<double> grid{-130.0, -120.0, -110.0, -100.0};
    return grid;
}

inline CriterionResult criterion_scheme_ordering(const ConfigFile &desk, unsigned workers, int trials = 50)
{
    Stopwatch sw;
    SweepSpec spec;
    spec.schemes = {all_schemes.begin(), all_schemes.end()};
    spec.trials = trials;
    spec.base = desk;
    spec.workers = workers;
    spec.keep_traces = false;
    spec.variable = SweepVariable::noise_power;
    spec.values = criterion9_noise_grid();
    const auto noise = summarize(run_sweep(spec));
    spec.variable = SweepVariable::n_elements;
    spec.values = {8.0, 16.0, 32.0};
    const auto elems = summarize(run_sweep(spec));

    auto med = [](const std::vector<SummaryRow> &rows, SchemeId s, double v)
    {
        for (const SummaryRow &r : rows)
            if (r.scheme == s && r.sweep_value == v)
                return r.median_mse;
        throw std::logic_error("missing summary row");
    };

    std::ostringstream d;
    bool ordering = true;
    d << "desk M=" << desk.system.n_elements << ", " << trials << " paired trials; medians [sep/common/bs/ue]";
    for (double v : criterion9_noise_grid())
    {
        const double sep = med(noise, SchemeId::double_separate, v), com = med(noise, SchemeId::double_common, v);
        const double bs = med(noise, SchemeId::single_bs, v), ue = med(noise, SchemeId::single_ue, v);
        const bool ok = sep <= com && com <= std::min(bs, ue);
        ordering = ordering && ok;
        d << " " << format_double(v) << "dBm: " << sci(sep) << "/" << sci(com) << "/" << sci(bs) << "/" << sci(ue)
          << (ok ? "" : " (order broken)");
    }
    const double lowest = criterion9_noise_grid().front();
    const double gap = med(noise, SchemeId::double_common, lowest) / med(noise, SchemeId::double_separate, lowest) - 1.0;
    const bool gap_ok = gap <= 0.10;
    d << "; common vs separate at " << format_double(lowest) << " dBm: +" << sci(100.0 * gap) << "% (tol 10%)";

    bool monotone = true;
    d << "; M sweep 8/16/32:";
    for (SchemeId s : all_schemes)
    {
        const double a = med(elems, s, 8.0), b = med(elems, s, 16.0), c = med(elems, s, 32.0);
        const bool ok = a > b && b > c;
        monotone = monotone && ok;
        d << " " << to_string(s) << " " << sci(a) << ">" << sci(b) << ">" << sci(c) << (ok ? "" : " (not decreasing)");
    }
    d << "; ordering " << (ordering ? "ok" : "FAILED") << ", gap " << (gap_ok ? "ok" : "FAILED") << ", M-monotone "
      << (monotone ? "ok" : "FAILED");

    CriterionResult r;
    r.id = 9;
    r.title = "scheme ordering and element-count trend";
    r.pass = ordering && gap_ok && monotone;
    r.detail = d.str();
    r.seconds = sw.seconds();
    return r;
}

} // namespace dris::verify

#endif
