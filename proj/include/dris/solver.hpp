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

#ifndef DRIS_SOLVER_HPP
#define DRIS_SOLVER_HPP

#include "equalizer.hpp"
#include "objective.hpp"
#include "precoder.hpp"
#include "random.hpp"
#include "reflection.hpp"
#include "types.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <string_view>

namespace dris
{

enum class InitScheme
{
    paper_default,  // Theta = I, F_k = [I; 0]
    random_phase,   // uniform random phases, F_k = [I; 0]
    custom          // SolverOptions::custom_theta
};

struct SolverOptions
{
    int max_iters = 100;
    double rel_tol = 1e-5;
    bool record_trace = true;
    InitScheme init_scheme = InitScheme::paper_default;
    std::uint64_t init_seed = 0;          // random_phase
    std::optional<CVec> custom_theta;     // custom
    ReflectionOptions reflection{};

    /// Called after every block update with the block name ("G", "F",
    /// "theta", "theta1", "theta2") and the objective at that point.
    /// Costs one extra objective evaluation per block when set.
    std::function<void(std::string_view, double)> substep_observer;
};

inline void validate_options(const SolverOptions &opts)
{
    if (opts.max_iters < 1)
        throw ConfigError("SolverOptions: max_iters must be >= 1");
    if (!(opts.rel_tol > 0.0))
        throw ConfigError("SolverOptions: rel_tol must be > 0");
    if (opts.reflection.inner_iters < 1)
        throw ConfigError("SolverOptions: inner MM iterations must be >= 1");
}

struct SolveResult
{
    BeamformingState state;
    IterationTrace trace;
    int iterations = 0;
    std::optional<CVec> theta2;  // second surface, separate-pattern scheme only
};

/// F_k = [I_{N_k}; 0] for every user, scaled by sqrt(P/N) when tr(F F^H) = N exceeds P.
inline CMat initial_precoder(const SystemConfig &cfg)
{
    const Eigen::Index nt = cfg.n_tx;
    const Eigen::Index nk = cfg.n_streams_per_user;
    const Eigen::Index n = cfg.total_streams();
    CMat f = CMat::Zero(nt, n);
    for (Eigen::Index k = 0; k < cfg.n_users; ++k)
        f.block(0, k * nk, nk, nk).setIdentity();
    if (static_cast<double>(n) > cfg.tx_power)
        f *= std::sqrt(cfg.tx_power / static_cast<double>(n));
    return f;
}

inline CVec initial_theta(Eigen::Index m, const SolverOptions &opts)
{
    switch (opts.init_scheme)
    {
    case InitScheme::paper_default:
        return CVec::Ones(m);
    case InitScheme::random_phase:
    {
        RandomSource rng(opts.init_seed);
        return rng.random_phases(m);
    }
    case InitScheme::custom:
        if (!opts.custom_theta || opts.custom_theta->size() != m)
            throw ConfigError("SolverOptions: custom init requires custom_theta of length M");
        return *opts.custom_theta;
    }
    return CVec::Ones(m);
}

inline BeamformingState initial_state(const SystemConfig &cfg, const SolverOptions &opts)
{
    BeamformingState st;
    st.precoder = initial_precoder(cfg);
    st.equalizers.assign(static_cast<std::size_t>(cfg.n_users), CMat::Zero(cfg.n_streams_per_user, cfg.n_rx_per_user));
    st.theta = initial_theta(cfg.n_elements, opts);
    return st;
}

/// Bookkeeping shared by every AO variant: trace recording and the
/// relative-change stopping rule |f_t - f_{t-1}| <= rel_tol |f_{t-1}|.
class ConvergenceMonitor
{
public:
    explicit ConvergenceMonitor(const SolverOptions &opts)
        : opts_(opts), start_(std::chrono::steady_clock::now())
    {
    }

    /// Records iteration `t` (1-based); returns true when converged.
    bool record(int t, double objective, IterationTrace &trace)
    {
        if (opts_.record_trace)
        {
            trace.objective_history.push_back(objective);
            trace.wall_times.push_back(
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count());
        }
        const bool done = prev_ && std::abs(objective - *prev_) <= opts_.rel_tol * std::abs(*prev_);
        prev_ = objective;
        if (done)
            trace.converged_at = t;
        return done;
    }

    double last() const { return prev_.value_or(0.0); }

private:
    const SolverOptions &opts_;
    std::chrono::steady_clock::time_point start_;
    std::optional<double> prev_;
};

/// Alternating optimization with the common reflection pattern: per outer
/// iteration the equalizers, then the precoder, then theta.
inline SolveResult solve(const ChannelSet &ch, const SystemConfig &cfg, const SolverOptions &opts = {})
{
    validate_config(cfg);
    check_channels(ch, cfg);
    validate_options(opts);

    SolveResult res;
    res.state = initial_state(cfg, opts);
    BeamformingState &st = res.state;
    ConvergenceMonitor monitor(opts);
    const double sigma2 = cfg.noise_power;

    auto observe = [&](std::string_view name)
    {
        if (opts.substep_observer)
            opts.substep_observer(name, sum_mse(ch, st, sigma2).sum_mse);
    };

    for (int t = 1; t <= opts.max_iters; ++t)
    {
        const std::vector<CMat> hs = effective_channels(ch, st.theta);
        st.equalizers = update_equalizers_for_channels(hs, st.precoder, st.equalizers, sigma2);
        observe("G");
        st.precoder = update_precoder_for_channels(hs, st.equalizers, cfg.tx_power).precoder;
        observe("F");
        st.theta = update_reflection(ch, st, opts.reflection);
        observe("theta");

        res.iterations = t;
        if (monitor.record(t, sum_mse(ch, st, sigma2).sum_mse, res.trace))
            break;
    }
    return res;
}

/// Per-run cost model I (K (N_k^3 + M^3 + N_r^3) + 8 M^3).
inline double flop_estimate(const SystemConfig &cfg, int iters)
{
    const double m3 = std::pow(static_cast<double>(cfg.n_elements), 3);
    const double nk3 = std::pow(static_cast<double>(cfg.n_streams_per_user), 3);
    const double nr3 = std::pow(static_cast<double>(cfg.n_rx_per_user), 3);
    return static_cast<double>(iters) * (cfg.n_users * (nk3 + m3 + nr3) + 8.0 * m3);
}

} // namespace dris

#endif
