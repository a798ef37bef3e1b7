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

// Flat key=value configuration files.
//
//   # comment
//   n_elements = 16
//   tx_power_dbm = 30          (or tx_power = 1 in watts)
//   noise_power_dbm = -120
//   ref_path_loss_db = -30
//   bs_position = 1,0,5
//   gamma_t1 = 2.2
//
// Keys ending in _dbm are converted with P[W] = 10^((x - 30) / 10), keys
// ending in _db with 10^(x / 10). Unknown keys are rejected.

#ifndef DRIS_CONFIG_IO_HPP
#define DRIS_CONFIG_IO_HPP

#include "reflection.hpp"
#include "types.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>

namespace dris
{

/// Run-level settings that live next to the scenario in config files.
struct RunSettings
{
    int trials = 50;
    int max_iters = 100;
    double rel_tol = 1e-5;
    Majorizer majorizer = Majorizer::trace;
    int inner_mm_iters = 1;

    bool operator==(const RunSettings &) const = default;
};

struct ConfigFile
{
    SystemConfig system;
    RunSettings run;
};

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// Shortest decimal text that parses back to the identical double.
inline std::string format_double(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text, std::string_view key)
{
    double v = 0.0;
    const auto *end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end)
        throw ConfigError("config: key '" + std::string(key) + "' expects a number, got '" + std::string(text) + "'");
    return v;
}

template <typename Int>
Int parse_integer(std::string_view text, std::string_view key)
{
    Int v{};
    const auto *end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end)
        throw ConfigError("config: key '" + std::string(key) + "' expects an integer, got '" + std::string(text) +
                          "'");
    return v;
}

namespace detail
{

inline std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline Point3 parse_point(std::string_view text, std::string_view key)
{
    Point3 p;
    for (int i = 0; i < 3; ++i)
    {
        const auto comma = text.find(',');
        if ((i < 2) == (comma == std::string_view::npos))
            throw ConfigError("config: key '" + std::string(key) + "' expects three comma-separated numbers");
        p(i) = parse_double(trim(text.substr(0, comma)), key);
        text = i < 2 ? text.substr(comma + 1) : std::string_view{};
    }
    return p;
}

inline std::string format_point(const Point3 &p)
{
    return format_double(p(0)) + "," + format_double(p(1)) + "," + format_double(p(2));
}

} // namespace detail

/// Applies one key/value pair; throws ConfigError for unknown keys or bad values.
inline void apply_config_entry(ConfigFile &cf, std::string_view key, std::string_view value)
{
    SystemConfig &c = cf.system;
    RunSettings &r = cf.run;
    auto num = [&] { return parse_double(value, key); };
    auto integer = [&] { return parse_integer<int>(value, key); };

    if (key == "n_tx") c.n_tx = integer();
    else if (key == "n_rx_per_user") c.n_rx_per_user = integer();
    else if (key == "n_streams_per_user") c.n_streams_per_user = integer();
    else if (key == "n_users") c.n_users = integer();
    else if (key == "n_elements") c.n_elements = integer();
    else if (key == "tx_power") c.tx_power = num();
    else if (key == "tx_power_dbm") c.tx_power = dbm_to_watts(num());
    else if (key == "noise_power") c.noise_power = num();
    else if (key == "noise_power_dbm") c.noise_power = dbm_to_watts(num());
    else if (key == "bs_position") c.bs_position = detail::parse_point(value, key);
    else if (key == "ris1_position") c.ris1_position = detail::parse_point(value, key);
    else if (key == "ris2_position") c.ris2_position = detail::parse_point(value, key);
    else if (key == "user_center") c.user_center = detail::parse_point(value, key);
    else if (key == "user_radius") c.user_radius = num();
    else if (key == "rician_factor") c.rician_factor = num();
    else if (key == "ref_path_loss") c.ref_path_loss = num();
    else if (key == "ref_path_loss_db") c.ref_path_loss = db_to_linear(num());
    else if (key == "seed") c.seed = parse_integer<std::uint64_t>(value, key);
    else if (key == "trials") r.trials = integer();
    else if (key == "max_iters") r.max_iters = integer();
    else if (key == "rel_tol") r.rel_tol = num();
    else if (key == "inner_mm_iters") r.inner_mm_iters = integer();
    else if (key == "majorizer")
    {
        if (value == "trace") r.majorizer = Majorizer::trace;
        else if (value == "max_eigenvalue") r.majorizer = Majorizer::max_eigenvalue;
        else throw ConfigError("config: majorizer must be 'trace' or 'max_eigenvalue'");
    }
    else
    {
        for (std::size_t l = 0; l < link_count; ++l)
            if (key == std::string("gamma_") + link_name(static_cast<Link>(l)))
            {
                c.ploss_exponents.gamma[l] = num();
                return;
            }
        throw ConfigError("config: unknown key '" + std::string(key) + "'");
    }
}

inline ConfigFile parse_config(std::istream &in, const std::string &origin = "<stream>")
{
    ConfigFile cf;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line))
    {
        ++lineno;
        std::string_view sv = line;
        if (const auto hash = sv.find('#'); hash != std::string_view::npos)
            sv = sv.substr(0, hash);
        sv = detail::trim(sv);
        if (sv.empty())
            continue;
        const auto eq = sv.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        try
        {
            apply_config_entry(cf, detail::trim(sv.substr(0, eq)), detail::trim(sv.substr(eq + 1)));
        }
        catch (const ConfigError &e)
        {
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return cf;
}

inline ConfigFile parse_config_text(const std::string &text)
{
    std::istringstream in(text);
    return parse_config(in);
}

inline ConfigFile load_config(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in, path);
}

/// Scenario keys only, linear units, in a fixed order.
inline std::string format_system_config(const SystemConfig &c)
{
    std::ostringstream o;
    o << "n_tx = " << c.n_tx << "\n"
      << "n_rx_per_user = " << c.n_rx_per_user << "\n"
      << "n_streams_per_user = " << c.n_streams_per_user << "\n"
      << "n_users = " << c.n_users << "\n"
      << "n_elements = " << c.n_elements << "\n"
      << "tx_power = " << format_double(c.tx_power) << "\n"
      << "noise_power = " << format_double(c.noise_power) << "\n"
      << "bs_position = " << detail::format_point(c.bs_position) << "\n"
      << "ris1_position = " << detail::format_point(c.ris1_position) << "\n"
      << "ris2_position = " << detail::format_point(c.ris2_position) << "\n"
      << "user_center = " << detail::format_point(c.user_center) << "\n"
      << "user_radius = " << format_double(c.user_radius) << "\n"
      << "rician_factor = " << format_double(c.rician_factor) << "\n"
      << "ref_path_loss = " << format_double(c.ref_path_loss) << "\n";
    for (std::size_t l = 0; l < link_count; ++l)
        o << "gamma_" << link_name(static_cast<Link>(l)) << " = " << format_double(c.ploss_exponents.gamma[l]) << "\n";
    o << "seed = " << c.seed << "\n";
    return o.str();
}

inline std::string format_config(const ConfigFile &cf)
{
    std::ostringstream o;
    o << format_system_config(cf.system) << "trials = " << cf.run.trials << "\n"
      << "max_iters = " << cf.run.max_iters << "\n"
      << "rel_tol = " << format_double(cf.run.rel_tol) << "\n"
      << "majorizer = " << to_string(cf.run.majorizer) << "\n"
      << "inner_mm_iters = " << cf.run.inner_mm_iters << "\n";
    return o.str();
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL)
{
    for (unsigned char ch : bytes)
    {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t config_hash(const SystemConfig &c) { return fnv1a(format_system_config(c)); }

} // namespace dris

#endif
