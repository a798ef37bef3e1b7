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

// Command-line front end.
//
//   dris solve         one run on one channel draw, prints the objective trace
//   dris sweep         seeded Monte-Carlo sweep, writes results/summary CSV and plot.py
//   dris dump-channels write a ChannelSet container (or describe an existing one)
//   dris verify        run the acceptance checks against the independent oracles

#include <dris/dris.hpp>
#include <dris/verify/criteria.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#ifndef DRIS_CONFIG_DIR
#define DRIS_CONFIG_DIR "configs"
#endif

namespace
{

using namespace dris;

ConfigFile load_or_default(const std::string &path)
{
    return path.empty() ? ConfigFile{} : load_config(path);
}

std::vector<SchemeId> parse_schemes(const std::vector<std::string> &names)
{
    std::vector<SchemeId> out;
    for (const std::string &n : names)
    {
        if (n == "all")
        {
            out.insert(out.end(), all_schemes.begin(), all_schemes.end());
            continue;
        }
        const auto s = parse_scheme(n);
        if (!s)
            throw ConfigError("unknown scheme '" + n +
                              "' (double_common, single_bs, single_ue, double_separate, all)");
        out.push_back(*s);
    }
    return out;
}

struct SolveArgs
{
    std::string config;
    std::string scheme = "double_common";
    std::optional<std::uint64_t> seed;
    std::optional<int> max_iters;
    std::string init = "paper_default";
    std::string channels;
    std::string state_out;
};

int run_solve(const SolveArgs &a)
{
    ConfigFile cf = load_or_default(a.config);
    if (a.seed)
        cf.system.seed = *a.seed;
    if (a.max_iters)
        cf.run.max_iters = *a.max_iters;
    const SchemeId scheme = parse_schemes({a.scheme}).at(0);

    ChannelSet ch;
    if (a.channels.empty())
        ch = generate_channels(cf.system);
    else
    {
        ContainerHeader h;
        ch = load_channels(a.channels, &h);
        if (h.config_hash != 0 && h.config_hash != config_hash(cf.system))
            std::cerr << "warning: channel file was written for a different scenario\n";
    }

    SolverOptions opts = solver_options(cf.run);
    if (a.init == "random_phase")
    {
        opts.init_scheme = InitScheme::random_phase;
        opts.init_seed = cf.system.seed;
    }
    else if (a.init != "paper_default")
        throw ConfigError("--init must be paper_default or random_phase");

    const SolveResult res = run_scheme(scheme, ch, cf.system, opts);
    std::cout << "iter,objective,wall_time\n";
    const auto &h = res.trace.objective_history;
    for (std::size_t i = 0; i < h.size(); ++i)
        std::cout << i + 1 << ',' << format_double(h[i]) << ',' << format_double(res.trace.wall_times[i]) << '\n';
    std::cout << "# scheme=" << to_string(scheme) << " iterations=" << res.iterations
              << " converged=" << (res.trace.converged_at ? "yes" : "no") << " final_mse=" << format_double(h.back())
              << " tx_power=" << format_double(transmit_power_of(res.state.precoder))
              << " flops~" << format_double(flop_estimate(cf.system, res.iterations)) << '\n';

    if (!a.state_out.empty())
    {
        std::ofstream out(a.state_out, std::ios::binary);
        if (!out)
            throw FormatError("cannot open '" + a.state_out + "' for writing");
        write_state(out, res.state, cf.system.seed, config_hash(cf.system));
    }
    return 0;
}

struct SweepArgs
{
    std::string config;
    std::vector<std::string> schemes{"double_common"};
    std::string sweep = "none";
    std::vector<double> values;
    std::optional<int> trials;
    std::optional<std::uint64_t> seed;
    std::string out = "out";
    std::optional<unsigned> workers;
    bool no_timing = false;
    bool channel_hash = false;
    bool no_traces = false;
};

int run_sweep_cmd(const SweepArgs &a)
{
    SweepSpec spec;
    spec.base = load_or_default(a.config);
    if (a.seed)
        spec.base.system.seed = *a.seed;
    spec.schemes = parse_schemes(a.schemes);
    spec.variable = parse_sweep_variable(a.sweep);
    spec.values = a.values;
    spec.trials = a.trials.value_or(spec.base.run.trials);
    spec.out_dir = a.out;
    spec.workers = a.workers.value_or(default_workers());
    spec.record_timing = !a.no_timing;
    spec.keep_traces = !a.no_traces;

    const std::vector<ResultRow> rows = run_sweep(spec);
    emit_outputs(rows, spec.out_dir, spec.variable, {a.channel_hash, !a.no_traces});
    for (const SummaryRow &s : summarize(rows))
        std::cout << to_string(s.scheme) << " " << to_string(spec.variable) << "=" << format_double(s.sweep_value)
                  << " median_mse=" << format_double(s.median_mse) << " [" << format_double(s.q1_mse) << ", "
                  << format_double(s.q3_mse) << "] median_iters=" << format_double(s.median_iters) << '\n';
    std::cout << rows.size() << " trials written to " << spec.out_dir << "/results.csv\n";
    return 0;
}

struct DumpArgs
{
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string describe;
};

void describe_channels(const std::string &path)
{
    ContainerHeader h;
    const ChannelSet ch = load_channels(path, &h);
    std::cout << path << ": M=" << h.n_elements << " Nt=" << h.n_tx << " K=" << h.n_users
              << " Nr=" << ch.r1.front().rows() << " seed=" << h.seed << " config_hash=" << h.config_hash
              << " channel_hash=" << channel_hash(ch) << "\n";
    std::cout << "  ||T1||_F=" << format_double(ch.t1.norm()) << " ||T2||_F=" << format_double(ch.t2.norm())
              << " ||S||_F=" << format_double(ch.s.norm()) << "\n";
}

int run_dump(const DumpArgs &a)
{
    if (!a.describe.empty())
    {
        describe_channels(a.describe);
        return 0;
    }
    if (a.out.empty())
        throw ConfigError("dump-channels: --out or --describe is required");
    ConfigFile cf = load_or_default(a.config);
    if (a.seed)
        cf.system.seed = *a.seed;
    const ChannelSet ch = generate_channels(cf.system);
    save_channels(a.out, ch, cf.system.seed, config_hash(cf.system));
    describe_channels(a.out);
    return 0;
}

int run_verify(const std::vector<int> &ids, const std::string &config_dir, std::optional<unsigned> workers)
{
    using namespace dris::verify;
    std::vector<int> wanted = ids;
    if (wanted.empty())
        wanted = {1, 2, 3, 4, 5, 6, 7, 8, 9};
    for (int id : wanted)
        if (id < 1 || id > 9)
            throw ConfigError("unknown criterion " + std::to_string(id) + " (1-9)");
    bool all_pass = true;
    for (int id : wanted)
    {
        CriterionResult r;
        try
        {
            switch (id)
            {
            case 1: r = criterion_monotone_descent(); break;
            case 2: r = criterion_objective_forms(); break;
            case 3: r = criterion_dense_operators(); break;
            case 4: r = criterion_majorization_chain(); break;
            case 5: r = criterion_kkt(); break;
            case 6: r = criterion_equalizer(); break;
            case 7: r = criterion_phase_update(); break;
            case 8: r = criterion_convergence_speed(load_config(config_dir + "/paper.cfg")); break;
            case 9:
                r = criterion_scheme_ordering(load_config(config_dir + "/desk.cfg"),
                                              workers.value_or(default_workers()));
                break;
            }
        }
        catch (const std::exception &e)
        {
            r.id = id;
            r.title = "raised an exception";
            r.pass = false;
            r.detail = e.what();
        }
        std::cout << r.line() << std::endl;
        all_pass = all_pass && r.pass;
    }
    return all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"dris: double-RIS multi-user MIMO sum-MSE transceiver design"};
    app.require_subcommand(1);

    SolveArgs solve_args;
    auto *solve = app.add_subcommand("solve", "run one solve and print the objective trace");
    solve->add_option("-c,--config", solve_args.config, "config file (key = value)");
    solve->add_option("--scheme", solve_args.scheme, "double_common, single_bs, single_ue, double_separate");
    solve->add_option("--seed", solve_args.seed, "channel seed (overrides the config)");
    solve->add_option("--max-iters", solve_args.max_iters, "outer iteration cap");
    solve->add_option("--init", solve_args.init, "paper_default or random_phase");
    solve->add_option("--channels", solve_args.channels, "use a ChannelSet container instead of drawing channels");
    solve->add_option("--state-out", solve_args.state_out, "write the final state container here");

    SweepArgs sweep_args;
    auto *sweep = app.add_subcommand("sweep", "Monte-Carlo sweep over noise power or element count");
    sweep->add_option("-c,--config", sweep_args.config, "base config file");
    sweep->add_option("--scheme", sweep_args.schemes, "schemes (comma separated, or 'all')")->delimiter(',');
    sweep->add_option("--sweep", sweep_args.sweep, "none, noise_power (dBm values) or n_elements");
    sweep->add_option("--values", sweep_args.values, "sorted sweep values, comma separated")->delimiter(',');
    sweep->add_option("--trials", sweep_args.trials, "trials per sweep value (default from config)");
    sweep->add_option("--seed", sweep_args.seed, "base seed (overrides the config)");
    sweep->add_option("--out", sweep_args.out, "output directory");
    sweep->add_option("-j,--workers", sweep_args.workers, "worker threads (default: DRIS_WORKERS or all cores)");
    sweep->add_flag("--no-timing", sweep_args.no_timing, "write wall_time = 0 so output bytes are reproducible");
    sweep->add_flag("--channel-hash", sweep_args.channel_hash, "append a channel_hash column to results.csv");
    sweep->add_flag("--no-traces", sweep_args.no_traces, "skip traces.csv");

    DumpArgs dump_args;
    auto *dump = app.add_subcommand("dump-channels", "write or describe a ChannelSet container");
    dump->add_option("-c,--config", dump_args.config, "config file");
    dump->add_option("--seed", dump_args.seed, "channel seed (overrides the config)");
    dump->add_option("-o,--out", dump_args.out, "output container path");
    dump->add_option("--describe", dump_args.describe, "print the header and norms of an existing container");

    std::vector<int> verify_ids;
    std::string config_dir = DRIS_CONFIG_DIR;
    std::optional<unsigned> verify_workers;
    auto *verify = app.add_subcommand("verify", "run the acceptance checks (all by default)");
    verify->add_option("criteria", verify_ids, "criterion numbers 1-9");
    verify->add_option("--config-dir", config_dir, "directory holding paper.cfg and desk.cfg");
    verify->add_option("-j,--workers", verify_workers, "worker threads for the sweep-based check");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (solve->parsed())
            return run_solve(solve_args);
        if (sweep->parsed())
            return run_sweep_cmd(sweep_args);
        if (dump->parsed())
            return run_dump(dump_args);
        if (verify->parsed())
            return run_verify(verify_ids, config_dir, verify_workers);
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
