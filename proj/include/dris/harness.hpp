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

#ifndef DRIS_HARNESS_HPP
#define DRIS_HARNESS_HPP

#include "baselines.hpp"
#include "channel.hpp"
#include "config_io.hpp"
#include "container.hpp"
#include "random.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace dris
{

enum class SweepVariable
{
    none,
    noise_power,  // values in dBm
    n_elements
};

inline std::string_view to_string(SweepVariable v)
{
    switch (v)
    {
    case SweepVariable::none: return "none";
    case SweepVariable::noise_power: return "noise_power";
    case SweepVariable::n_elements: return "n_elements";
    }
    return "?";
}

inline SweepVariable parse_sweep_variable(std::string_view name)
{
    if (name == "none")
        return SweepVariable::none;
    if (name == "noise_power" || name == "noise")
        return SweepVariable::noise_power;
    if (name == "n_elements" || name == "M")
        return SweepVariable::n_elements;
    throw ConfigError("unknown sweep variable '" + std::string(name) + "' (none, noise_power, n_elements)");
}

struct SweepSpec
{
    std::vector<SchemeId> schemes{SchemeId::double_common};
    SweepVariable variable = SweepVariable::none;
    std::vector<double> values;     // empty for SweepVariable::none
    int trials = 1;
    ConfigFile base;
    std::string out_dir = "out";
    unsigned workers = 1;
    bool record_timing = true;      // false writes wall_time = 0 for byte-stable output
    bool keep_traces = true;
};

struct ResultRow
{
    SchemeId scheme = SchemeId::double_common;
    double sweep_value = 0.0;
    int trial = 0;
    std::uint64_t seed = 0;
    double final_mse = 0.0;
    int iters = 0;
    double wall_time = 0.0;
    std::uint64_t channel_hash = 0;  // not part of results.csv unless requested
    std::vector<double> trace;

    bool operator==(const ResultRow &) const = default;
};

class TrialError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

inline void validate_sweep(const SweepSpec &spec)
{
    if (spec.trials < 1)
        throw ConfigError("sweep: trials must be >= 1");
    if (spec.schemes.empty())
        throw ConfigError("sweep: at least one scheme required");
    if (spec.variable == SweepVariable::none)
    {
        if (!spec.values.empty())
            throw ConfigError("sweep: values given but sweep variable is none");
    }
    else
    {
        if (spec.values.empty())
            throw ConfigError("sweep: sweep values must be nonempty");
        if (!std::is_sorted(spec.values.begin(), spec.values.end()))
            throw ConfigError("sweep: sweep values must be sorted");
    }
    validate_config(spec.base.system);
}

/// Applies one sweep value to a copy of the base scenario.
inline SystemConfig sweep_config(const SystemConfig &base, SweepVariable var, double value)
{
    SystemConfig cfg = base;
    switch (var)
    {
    case SweepVariable::none: break;
    case SweepVariable::noise_power: cfg.noise_power = dbm_to_watts(value); break;
    case SweepVariable::n_elements:
        if (value != std::floor(value) || value < 1)
            throw ConfigError("sweep: n_elements values must be positive integers");
        cfg.n_elements = static_cast<int>(value);
        break;
    }
    return cfg;
}

inline SolverOptions solver_options(const RunSettings &run)
{
    SolverOptions o;
    o.max_iters = run.max_iters;
    o.rel_tol = run.rel_tol;
    o.reflection.majorizer = run.majorizer;
    o.reflection.inner_iters = run.inner_mm_iters;
    return o;
}

inline std::uint64_t channel_hash(const ChannelSet &ch)
{
    std::ostringstream buf;
    write_channels(buf, ch);
    return fnv1a(buf.str());
}

/// Worker count from DRIS_WORKERS, else the hardware concurrency.
inline unsigned default_workers()
{
    if (const char *env = std::getenv("DRIS_WORKERS"))
    {
        const int n = std::atoi(env);
        if (n >= 1)
            return static_cast<unsigned>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs every (scheme, sweep value, trial). Channels are drawn once per
/// (sweep value, trial) and shared by all schemes. Rows come back sorted by
/// (scheme order in spec, sweep index, trial) whatever the worker count.
inline std::vector<ResultRow> run_sweep(const SweepSpec &spec)
{
    validate_sweep(spec);
    const std::vector<double> values =
        spec.variable == SweepVariable::none ? std::vector<double>{0.0} : spec.values;
    const std::size_t n_values = values.size();
    const std::size_t n_trials = static_cast<std::size_t>(spec.trials);
    const std::size_t n_schemes = spec.schemes.size();
    const std::size_t n_tasks = n_values * n_trials;
    const SolverOptions opts = solver_options(spec.base.run);

    std::vector<ResultRow> rows(n_tasks * n_schemes);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex err_mu;
    std::string first_error;
    std::size_t first_error_task = n_tasks;

    auto worker = [&]
    {
        for (std::size_t task = next++; task < n_tasks && !failed; task = next++)
        {
            const std::size_t v = task / n_trials;
            const std::size_t t = task % n_trials;
            const std::uint64_t seed = trial_seed(spec.base.system.seed, v, t);
            std::size_t s = 0;
            try
            {
                SystemConfig cfg = sweep_config(spec.base.system, spec.variable, values[v]);
                cfg.seed = seed;
                const ChannelSet ch = generate_channels(cfg);
                const std::uint64_t chash = channel_hash(ch);
                for (; s < n_schemes; ++s)
                {
                    const auto t0 = std::chrono::steady_clock::now();
                    const SolveResult res = run_scheme(spec.schemes[s], ch, cfg, opts);
                    const auto t1 = std::chrono::steady_clock::now();
                    ResultRow &row = rows[(s * n_values + v) * n_trials + t];
                    row.scheme = spec.schemes[s];
                    row.sweep_value = values[v];
                    row.trial = static_cast<int>(t);
                    row.seed = cfg.seed;
                    row.final_mse = res.trace.objective_history.back();
                    row.iters = res.iterations;
                    row.wall_time = spec.record_timing ? std::chrono::duration<double>(t1 - t0).count() : 0.0;
                    row.channel_hash = chash;
                    if (spec.keep_traces)
                        row.trace = res.trace.objective_history;
                }
            }
            catch (const std::exception &e)
            {
                std::lock_guard lock(err_mu);
                if (task < first_error_task)
                {
                    first_error_task = task;
                    first_error = "trial failed (scheme=" +
                                  std::string(to_string(spec.schemes[std::min(s, n_schemes - 1)])) +
                                  ", sweep_value=" + format_double(values[v]) + ", trial=" + std::to_string(t) +
                                  ", seed=" + std::to_string(seed) + "): " + e.what();
                }
                failed = true;
            }
        }
    };

    const unsigned n_workers = std::max(1u, std::min<unsigned>(spec.workers, static_cast<unsigned>(n_tasks)));
    if (n_workers == 1)
        worker();
    else
    {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < n_workers; ++i)
            pool.emplace_back(worker);
        for (std::thread &th : pool)
            th.join();
    }
    if (failed)
        throw TrialError(first_error);
    return rows;
}

// ---------------------------------------------------------------- outputs

inline const char *results_header = "scheme,sweep_value,trial,seed,final_mse,iters,wall_time";

struct SummaryRow
{
    SchemeId scheme = SchemeId::double_common;
    double sweep_value = 0.0;
    int trials = 0;
    double median_mse = 0.0;
    double q1_mse = 0.0;
    double q3_mse = 0.0;
    double median_iters = 0.0;
};

/// Linear-interpolation quantile (Hyndman-Fan type 7) of unsorted data.
inline double quantile(std::vector<double> x, double q)
{
    if (x.empty())
        throw std::invalid_argument("quantile of empty data");
    std::sort(x.begin(), x.end());
    const double h = (static_cast<double>(x.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, x.size() - 1);
    return x[lo] + (h - static_cast<double>(lo)) * (x[hi] - x[lo]);
}

inline double median(std::vector<double> x) { return quantile(std::move(x), 0.5); }

/// One row per (scheme, sweep value), in first-appearance order.
inline std::vector<SummaryRow> summarize(const std::vector<ResultRow> &rows)
{
    std::vector<SummaryRow> out;
    std::vector<std::vector<double>> mse, iters;
    for (const ResultRow &r : rows)
    {
        std::size_t i = 0;
        while (i < out.size() && !(out[i].scheme == r.scheme && out[i].sweep_value == r.sweep_value))
            ++i;
        if (i == out.size())
        {
            out.push_back({r.scheme, r.sweep_value});
            mse.emplace_back();
            iters.emplace_back();
        }
        mse[i].push_back(r.final_mse);
        iters[i].push_back(static_cast<double>(r.iters));
    }
    for (std::size_t i = 0; i < out.size(); ++i)
    {
        out[i].trials = static_cast<int>(mse[i].size());
        out[i].median_mse = median(mse[i]);
        out[i].q1_mse = quantile(mse[i], 0.25);
        out[i].q3_mse = quantile(mse[i], 0.75);
        out[i].median_iters = median(iters[i]);
    }
    return out;
}

inline std::string format_results_csv(const std::vector<ResultRow> &rows, bool with_channel_hash = false)
{
    std::ostringstream o;
    o << results_header << (with_channel_hash ? ",channel_hash" : "") << "\n";
    for (const ResultRow &r : rows)
    {
        o << to_string(r.scheme) << ',' << format_double(r.sweep_value) << ',' << r.trial << ',' << r.seed << ','
          << format_double(r.final_mse) << ',' << r.iters << ',' << format_double(r.wall_time);
        if (with_channel_hash)
            o << ',' << r.channel_hash;
        o << "\n";
    }
    return o.str();
}

inline std::vector<ResultRow> parse_results_csv(const std::string &text)
{
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind(results_header, 0) != 0)
        throw FormatError("results.csv: unexpected header");
    const bool with_hash = line.size() > std::string_view(results_header).size();
    std::vector<ResultRow> rows;
    while (std::getline(in, line))
    {
        if (line.empty())
            continue;
        std::vector<std::string> f;
        std::stringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');)
            f.push_back(cell);
        if (f.size() != (with_hash ? 8u : 7u))
            throw FormatError("results.csv: wrong field count in '" + line + "'");
        ResultRow r;
        const auto scheme = parse_scheme(f[0]);
        if (!scheme)
            throw FormatError("results.csv: unknown scheme '" + f[0] + "'");
        r.scheme = *scheme;
        r.sweep_value = parse_double(f[1], "sweep_value");
        r.trial = parse_integer<int>(f[2], "trial");
        r.seed = parse_integer<std::uint64_t>(f[3], "seed");
        r.final_mse = parse_double(f[4], "final_mse");
        r.iters = parse_integer<int>(f[5], "iters");
        r.wall_time = parse_double(f[6], "wall_time");
        if (with_hash)
            r.channel_hash = parse_integer<std::uint64_t>(f[7], "channel_hash");
        rows.push_back(std::move(r));
    }
    return rows;
}

inline std::string format_summary_csv(const std::vector<SummaryRow> &rows)
{
    std::ostringstream o;
    o << "scheme,sweep_value,trials,median_mse,q1_mse,q3_mse,median_iters\n";
    for (const SummaryRow &s : rows)
        o << to_string(s.scheme) << ',' << format_double(s.sweep_value) << ',' << s.trials << ','
          << format_double(s.median_mse) << ',' << format_double(s.q1_mse) << ',' << format_double(s.q3_mse) << ','
          << format_double(s.median_iters) << "\n";
    return o.str();
}

inline std::string format_traces_csv(const std::vector<ResultRow> &rows)
{
    std::ostringstream o;
    o << "scheme,sweep_value,trial,iter,objective\n";
    for (const ResultRow &r : rows)
        for (std::size_t i = 0; i < r.trace.size(); ++i)
            o << to_string(r.scheme) << ',' << format_double(r.sweep_value) << ',' << r.trial << ',' << i + 1 << ','
              << format_double(r.trace[i]) << "\n";
    return o.str();
}

inline std::string plot_script(SweepVariable var)
{
    std::string xlabel = "scheme";
    if (var == SweepVariable::noise_power)
        xlabel = "noise power (dBm)";
    else if (var == SweepVariable::n_elements)
        xlabel = "number of elements per RIS, M";

    std::string s = R"PY(#!/usr/bin/env python3
# Renders the sweep outputs in this directory. Needs pandas and matplotlib.
import os
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd

here = os.path.dirname(os.path.abspath(__file__))
labels = {
    "double_common": "Double-RIS, common pattern",
    "double_separate": "Double-RIS, separate patterns",
    "single_bs": "Single RIS (BS side)",
    "single_ue": "Single RIS (UE side)",
}
summary = pd.read_csv(os.path.join(here, "summary.csv"))
XLABEL = "@XLABEL@"

fig, ax = plt.subplots(figsize=(6, 4))
for scheme, grp in summary.groupby("scheme", sort=False):
    grp = grp.sort_values("sweep_value")
    x = grp["sweep_value"]
    ax.plot(x, grp["median_mse"], marker="o", label=labels.get(scheme, scheme))
    ax.fill_between(x, grp["q1_mse"], grp["q3_mse"], alpha=0.15)
ax.set_yscale("log")
ax.set_xlabel(XLABEL)
ax.set_ylabel("sum MSE (median, IQR shaded)")
if XLABEL.startswith("noise"):
    # lower noise power on the right reads as higher SNR
    ax.invert_xaxis()
    ax.set_title("higher SNR to the right")
ax.grid(True, which="both", alpha=0.3)
ax.legend()
fig.tight_layout()
fig.savefig(os.path.join(here, "mse.png"), dpi=150)

traces_path = os.path.join(here, "traces.csv")
if os.path.exists(traces_path):
    tr = pd.read_csv(traces_path)
    fig, ax = plt.subplots(figsize=(6, 4))
    first_value = tr["sweep_value"].iloc[0]
    sub = tr[tr["sweep_value"] == first_value]
    for scheme, grp in sub.groupby("scheme", sort=False):
        curve = grp.groupby("iter")["objective"].median()
        ax.plot(curve.index, curve.values, marker=".", label=labels.get(scheme, scheme))
    ax.set_xlabel("iteration")
    ax.set_ylabel("sum MSE (median over trials)")
    ax.set_yscale("log")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(os.path.join(here, "convergence.png"), dpi=150)

sys.exit(0)
)PY";
    s.replace(s.find("@XLABEL@"), 8, xlabel);
    return s;
}

inline void write_text_file(const std::filesystem::path &path, const std::string &text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw FormatError("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out)
        throw FormatError("write failed for '" + path.string() + "'");
}

struct EmitOptions
{
    bool with_channel_hash = false;
    bool traces = true;
};

/// Writes results.csv, summary.csv, traces.csv (optional) and plot.py.
inline void emit_outputs(const std::vector<ResultRow> &rows, const std::string &out_dir, SweepVariable var,
                         const EmitOptions &eo = {})
{
    if (rows.empty())
        throw ConfigError("emit_outputs: no rows");
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec)
        throw FormatError("cannot create output directory '" + out_dir + "': " + ec.message());
    const fs::path dir(out_dir);
    write_text_file(dir / "results.csv", format_results_csv(rows, eo.with_channel_hash));
    write_text_file(dir / "summary.csv", format_summary_csv(summarize(rows)));
    if (eo.traces)
        write_text_file(dir / "traces.csv", format_traces_csv(rows));
    write_text_file(dir / "plot.py", plot_script(var));
}

} // namespace dris

#endif
