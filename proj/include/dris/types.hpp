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

#ifndef DRIS_TYPES_HPP
#define DRIS_TYPES_HPP

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dris
{

using cdouble = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using Point3 = Eigen::Vector3d;

/// Thrown when matrix shapes or antenna/stream counts are inconsistent.
class DimensionError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown for out-of-range scalar parameters and malformed config input.
class ConfigError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when a numerical routine fails (non-convergence, eigen failure).
class SolverError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// The five propagation links of the double-RIS topology.
enum class Link : std::size_t
{
    bs_ris1 = 0,  // T1
    bs_ris2,      // T2
    ris1_ris2,    // S
    ris1_user,    // R1,k
    ris2_user,    // R2,k
};
inline constexpr std::size_t link_count = 5;

inline const char *link_name(Link l)
{
    switch (l)
    {
    case Link::bs_ris1: return "t1";
    case Link::bs_ris2: return "t2";
    case Link::ris1_ris2: return "s";
    case Link::ris1_user: return "r1";
    case Link::ris2_user: return "r2";
    }
    return "?";
}

/// Path-loss exponent per link, indexed by Link.
struct PathLossExponents
{
    std::array<double, link_count> gamma{2.2, 3.6, 3.6, 3.6, 2.2};

    double operator[](Link l) const { return gamma[static_cast<std::size_t>(l)]; }
    double &operator[](Link l) { return gamma[static_cast<std::size_t>(l)]; }
    bool operator==(const PathLossExponents &) const = default;
};

/// All scalar parameters of one scenario. Powers are linear (watts); the
/// defaults reproduce the reference deployment (BS at (1,0,5), RIS 1 at
/// (0,0,2), RIS 2 at (0,50,2), users around (1,50,0), P = 0 dBm,
/// sigma^2 = -120 dBm, beta0 = -30 dB, kappa = 0.75).
struct SystemConfig
{
    int n_tx = 16;
    int n_rx_per_user = 4;
    int n_streams_per_user = 2;
    int n_users = 2;
    int n_elements = 64;

    double tx_power = 1e-3;
    double noise_power = 1e-15;

    Point3 bs_position{1.0, 0.0, 5.0};
    Point3 ris1_position{0.0, 0.0, 2.0};
    Point3 ris2_position{0.0, 50.0, 2.0};
    Point3 user_center{1.0, 50.0, 0.0};
    double user_radius = 2.0;

    double rician_factor = 0.75;
    double ref_path_loss = 1e-3;
    PathLossExponents ploss_exponents{};

    std::uint64_t seed = 0;

    int total_streams() const { return n_users * n_streams_per_user; }

    bool operator==(const SystemConfig &) const = default;
};

/// Throws DimensionError / ConfigError naming the first violated invariant.
inline void validate_config(const SystemConfig &cfg)
{
    auto require_positive = [](int v, const char *name)
    {
        if (v <= 0)
            throw DimensionError(std::string(name) + " must be positive (got " + std::to_string(v) + ")");
    };
    require_positive(cfg.n_tx, "n_tx");
    require_positive(cfg.n_rx_per_user, "n_rx_per_user");
    require_positive(cfg.n_streams_per_user, "n_streams_per_user");
    require_positive(cfg.n_users, "n_users");
    require_positive(cfg.n_elements, "n_elements");

    if (cfg.n_streams_per_user > cfg.n_rx_per_user)
        throw DimensionError("n_streams_per_user (" + std::to_string(cfg.n_streams_per_user) +
                             ") exceeds n_rx_per_user (" + std::to_string(cfg.n_rx_per_user) + ")");
    if (cfg.total_streams() > cfg.n_tx)
        throw DimensionError("total streams N = n_users * n_streams_per_user (" +
                             std::to_string(cfg.total_streams()) + ") exceeds n_tx (" +
                             std::to_string(cfg.n_tx) + ")");

    if (!(cfg.tx_power > 0.0))
        throw ConfigError("tx_power must be > 0");
    if (!(cfg.noise_power > 0.0))
        throw ConfigError("noise_power must be > 0");
    if (!(cfg.rician_factor >= 0.0 && cfg.rician_factor <= 1.0))
        throw ConfigError("rician_factor must lie in [0, 1]");
    if (!(cfg.ref_path_loss > 0.0))
        throw ConfigError("ref_path_loss must be > 0");
    if (!(cfg.user_radius >= 0.0))
        throw ConfigError("user_radius must be >= 0");
}

/// One channel realization: T1, T2 (M x Nt), S (M x M), R1[k], R2[k] (Nr x M).
struct ChannelSet
{
    CMat t1;
    CMat t2;
    CMat s;
    std::vector<CMat> r1;
    std::vector<CMat> r2;

    Eigen::Index n_elements() const { return s.rows(); }
    Eigen::Index n_tx() const { return t1.cols(); }
    std::size_t n_users() const { return r1.size(); }

    bool operator==(const ChannelSet &o) const
    {
        return t1 == o.t1 && t2 == o.t2 && s == o.s && r1 == o.r1 && r2 == o.r2;
    }
};

inline void check_channels(const ChannelSet &ch)
{
    const auto m = ch.s.rows();
    const auto nt = ch.t1.cols();
    if (ch.s.cols() != m || ch.t1.rows() != m || ch.t2.rows() != m || ch.t2.cols() != nt)
        throw DimensionError("ChannelSet: T1, T2 must be M x Nt and S must be M x M");
    if (ch.r1.size() != ch.r2.size() || ch.r1.empty())
        throw DimensionError("ChannelSet: R1 and R2 must hold one matrix per user");
    for (std::size_t k = 0; k < ch.r1.size(); ++k)
    {
        if (ch.r1[k].cols() != m || ch.r2[k].cols() != m || ch.r1[k].rows() != ch.r2[k].rows())
            throw DimensionError("ChannelSet: R1[k], R2[k] must be Nr x M for user " + std::to_string(k));
    }
}

inline void check_channels(const ChannelSet &ch, const SystemConfig &cfg)
{
    check_channels(ch);
    if (ch.n_elements() != cfg.n_elements || ch.n_tx() != cfg.n_tx ||
        static_cast<int>(ch.n_users()) != cfg.n_users || ch.r1.front().rows() != cfg.n_rx_per_user)
        throw DimensionError("ChannelSet dimensions do not match SystemConfig");
}

inline bool all_finite(const ChannelSet &ch)
{
    auto ok = [](const CMat &m) { return m.allFinite(); };
    if (!ok(ch.t1) || !ok(ch.t2) || !ok(ch.s))
        return false;
    for (std::size_t k = 0; k < ch.r1.size(); ++k)
        if (!ok(ch.r1[k]) || !ok(ch.r2[k]))
            return false;
    return true;
}

/// Current iterate (F, {G_k}, theta). Stream block k of the precoder starts
/// at column sum_{i<k} G_i.rows().
struct BeamformingState
{
    CMat precoder;
    std::vector<CMat> equalizers;
    CVec theta;

    Eigen::Index stream_offset(std::size_t k) const
    {
        Eigen::Index off = 0;
        for (std::size_t i = 0; i < k; ++i)
            off += equalizers[i].rows();
        return off;
    }

    auto user_precoder(std::size_t k) const
    {
        return precoder.middleCols(stream_offset(k), equalizers[k].rows());
    }

    bool operator==(const BeamformingState &o) const
    {
        return precoder == o.precoder && equalizers == o.equalizers && theta == o.theta;
    }
};

inline double transmit_power_of(const CMat &precoder) { return precoder.squaredNorm(); }

/// True when |theta_i| = 1 (to `tol`) and tr(F F^H) <= P (1 + 1e-8).
inline bool state_feasible(const BeamformingState &st, double tx_power, double tol = 1e-12)
{
    for (Eigen::Index i = 0; i < st.theta.size(); ++i)
        if (std::abs(std::abs(st.theta(i)) - 1.0) > tol)
            return false;
    return transmit_power_of(st.precoder) <= tx_power * (1.0 + 1e-8);
}

struct IterationTrace
{
    std::vector<double> objective_history;
    std::vector<double> wall_times;
    std::optional<int> converged_at;
};

} // namespace dris

#endif
