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

#ifndef DRIS_BASELINES_HPP
#define DRIS_BASELINES_HPP

#include "solver.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace dris
{

enum class SchemeId
{
    double_common,
    single_bs,
    single_ue,
    double_separate
};

inline constexpr std::array<SchemeId, 4> all_schemes{SchemeId::double_common, SchemeId::single_bs,
                                                     SchemeId::single_ue, SchemeId::double_separate};

inline std::string_view to_string(SchemeId s)
{
    switch (s)
    {
    case SchemeId::double_common: return "double_common";
    case SchemeId::single_bs: return "single_bs";
    case SchemeId::single_ue: return "single_ue";
    case SchemeId::double_separate: return "double_separate";
    }
    return "?";
}

inline std::optional<SchemeId> parse_scheme(std::string_view name)
{
    for (SchemeId s : all_schemes)
        if (to_string(s) == name)
            return s;
    return std::nullopt;
}

enum class RisSide
{
    bs,  // keep RIS 1 only
    ue   // keep RIS 2 only
};

/// Channel set with every link through the removed surface (and S) zeroed.
inline ChannelSet truncate_channels(const ChannelSet &ch, RisSide side)
{
    ChannelSet out = ch;
    out.s.setZero();
    if (side == RisSide::bs)
    {
        out.t2.setZero();
        for (CMat &r : out.r2)
            r.setZero();
    }
    else
    {
        out.t1.setZero();
        for (CMat &r : out.r1)
            r.setZero();
    }
    return out;
}

/// Single-RIS benchmark: the same AO loop on H_k = R1,k Theta T1 (bs) or
/// R2,k Theta T2 (ue); the theta step reduces to the quadratic case.
inline SolveResult solve_single_ris(const ChannelSet &ch, const SystemConfig &cfg, const SolverOptions &opts,
                                    RisSide side)
{
    return solve(truncate_channels(ch, side), cfg, opts);
}

/// Coefficients of the theta1 block for fixed theta2:
/// H_k = (R1,k + R2,k Theta2 S) Theta1 T1 + R2,k Theta2 T2.
inline QuadraticReflectionProblem separate_theta1_problem(const ChannelSet &ch, const CVec &theta2,
                                                          const BeamformingState &st)
{
    std::vector<CMat> r, d;
    for (std::size_t k = 0; k < ch.n_users(); ++k)
    {
        const CMat r2th = ch.r2[k] * theta2.asDiagonal();
        r.push_back(ch.r1[k] + r2th * ch.s);
        d.push_back(r2th * ch.t2);
    }
    return build_quadratic_problem(r, ch.t1, d, st.precoder, st.equalizers);
}

/// Coefficients of the theta2 block for fixed theta1:
/// H_k = R2,k Theta2 (T2 + S Theta1 T1) + R1,k Theta1 T1.
inline QuadraticReflectionProblem separate_theta2_problem(const ChannelSet &ch, const CVec &theta1,
                                                          const BeamformingState &st)
{
    const CMat th1_t1 = theta1.asDiagonal() * ch.t1;
    const CMat t_eff = ch.t2 + ch.s * th1_t1;
    std::vector<CMat> d;
    for (std::size_t k = 0; k < ch.n_users(); ++k)
        d.push_back(ch.r1[k] * th1_t1);
    return build_quadratic_problem(ch.r2, t_eff, d, st.precoder, st.equalizers);
}

/// Double-RIS benchmark with independent patterns: block-coordinate AO over
/// (G, F, theta1, theta2); each theta block is a quadratic unit-modulus MM
/// step. The result's state.theta holds theta1, theta2 is returned alongside.
inline SolveResult solve_double_separate(const ChannelSet &ch, const SystemConfig &cfg, const SolverOptions &opts)
{
    validate_config(cfg);
    check_channels(ch, cfg);
    validate_options(opts);

    SolveResult res;
    res.state = initial_state(cfg, opts);
    BeamformingState &st = res.state;
    CVec theta2 = st.theta;
    ConvergenceMonitor monitor(opts);
    const double sigma2 = cfg.noise_power;

    auto objective = [&]
    {
        return sum_mse_for_channels(effective_channels(ch, st.theta, theta2), st.precoder, st.equalizers, sigma2)
            .sum_mse;
    };
    auto observe = [&](std::string_view name)
    {
        if (opts.substep_observer)
            opts.substep_observer(name, objective());
    };
    auto mm_block = [&](const QuadraticReflectionProblem &prob, CVec theta)
    {
        for (int i = 0; i < opts.reflection.inner_iters; ++i)
            theta = quadratic_mm_step(prob, theta, opts.reflection.majorizer);
        return theta;
    };

    for (int t = 1; t <= opts.max_iters; ++t)
    {
        const std::vector<CMat> hs = effective_channels(ch, st.theta, theta2);
        st.equalizers = update_equalizers_for_channels(hs, st.precoder, st.equalizers, sigma2);
        observe("G");
        st.precoder = update_precoder_for_channels(hs, st.equalizers, cfg.tx_power).precoder;
        observe("F");
        st.theta = mm_block(separate_theta1_problem(ch, theta2, st), st.theta);
        observe("theta1");
        theta2 = mm_block(separate_theta2_problem(ch, st.theta, st), theta2);
        observe("theta2");

        res.iterations = t;
        if (monitor.record(t, objective(), res.trace))
            break;
    }
    res.theta2 = std::move(theta2);
    return res;
}

inline SolveResult run_scheme(SchemeId scheme, const ChannelSet &ch, const SystemConfig &cfg,
                              const SolverOptions &opts)
{
    switch (scheme)
    {
    case SchemeId::double_common: return solve(ch, cfg, opts);
    case SchemeId::single_bs: return solve_single_ris(ch, cfg, opts, RisSide::bs);
    case SchemeId::single_ue: return solve_single_ris(ch, cfg, opts, RisSide::ue);
    case SchemeId::double_separate: return solve_double_separate(ch, cfg, opts);
    }
    throw ConfigError("run_scheme: unknown scheme");
}

} // namespace dris

#endif
