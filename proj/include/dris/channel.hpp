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

#ifndef DRIS_CHANNEL_HPP
#define DRIS_CHANNEL_HPP

#include "random.hpp"
#include "types.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace dris
{

/// Large-scale parameters of one link: beta = beta0 * d^(-gamma).
struct LinkGeometry
{
    Point3 tx_pos;
    Point3 rx_pos;
    double distance = 0.0;
    double ploss_exponent = 0.0;
    double path_loss = 0.0;

    // Horizontal-plane azimuths of the departure (at tx) and arrival (at rx) directions.
    double departure_azimuth() const
    {
        const Point3 d = rx_pos - tx_pos;
        return std::atan2(d.y(), d.x());
    }
    double arrival_azimuth() const
    {
        const Point3 d = tx_pos - rx_pos;
        return std::atan2(d.y(), d.x());
    }
};

inline LinkGeometry make_link(const Point3 &tx, const Point3 &rx, double ref_path_loss, double gamma)
{
    LinkGeometry g{tx, rx, (rx - tx).norm(), gamma, 0.0};
    if (!(g.distance > 0.0))
        throw ConfigError("degenerate link geometry: zero distance between endpoints");
    g.path_loss = ref_path_loss * std::pow(g.distance, -gamma);
    return g;
}

/// Half-wavelength ULA response with unit-modulus entries, exp(j*pi*n*sin(phi)).
inline CVec ula_response(Eigen::Index n, double azimuth)
{
    CVec a(n);
    const double s = std::sin(azimuth);
    for (Eigen::Index i = 0; i < n; ++i)
        a(i) = std::polar(1.0, std::numbers::pi * static_cast<double>(i) * s);
    return a;
}

/// sqrt(beta) * (sqrt(kappa) a_rx a_tx^H + sqrt(1-kappa) H_NLoS), H_NLoS ~ CN(0, I).
/// The NLoS draw is consumed even at kappa = 1 so the stream layout does not
/// depend on kappa.
inline CMat rician_link(const LinkGeometry &g, Eigen::Index n_rx, Eigen::Index n_tx, double kappa,
                        RandomSource &rng)
{
    const CMat nlos = rng.complex_gaussian(n_rx, n_tx);
    const CMat los = ula_response(n_rx, g.arrival_azimuth()) * ula_response(n_tx, g.departure_azimuth()).adjoint();
    return std::sqrt(g.path_loss) * (std::sqrt(kappa) * los + std::sqrt(1.0 - kappa) * nlos);
}

/// Uniform draw in the horizontal disk of `radius` about `center`.
inline Point3 draw_user_position(const Point3 &center, double radius, RandomSource &rng)
{
    const double r = radius * std::sqrt(rng.uniform());
    const double phi = rng.uniform(-std::numbers::pi, std::numbers::pi);
    return center + Point3(r * std::cos(phi), r * std::sin(phi), 0.0);
}

/// Draw order: user positions, T1, T2, S, then (R1[k], R2[k]) per user.
inline ChannelSet generate_channels(const SystemConfig &cfg, RandomSource &rng)
{
    validate_config(cfg);
    const Eigen::Index m = cfg.n_elements;
    const Eigen::Index nt = cfg.n_tx;
    const Eigen::Index nr = cfg.n_rx_per_user;
    const double kappa = cfg.rician_factor;
    const auto &gam = cfg.ploss_exponents;

    std::vector<Point3> users;
    users.reserve(static_cast<std::size_t>(cfg.n_users));
    for (int k = 0; k < cfg.n_users; ++k)
        users.push_back(draw_user_position(cfg.user_center, cfg.user_radius, rng));

    ChannelSet ch;
    ch.t1 = rician_link(make_link(cfg.bs_position, cfg.ris1_position, cfg.ref_path_loss, gam[Link::bs_ris1]),
                        m, nt, kappa, rng);
    ch.t2 = rician_link(make_link(cfg.bs_position, cfg.ris2_position, cfg.ref_path_loss, gam[Link::bs_ris2]),
                        m, nt, kappa, rng);
    ch.s = rician_link(make_link(cfg.ris1_position, cfg.ris2_position, cfg.ref_path_loss, gam[Link::ris1_ris2]),
                       m, m, kappa, rng);
    for (const Point3 &u : users)
    {
        ch.r1.push_back(
            rician_link(make_link(cfg.ris1_position, u, cfg.ref_path_loss, gam[Link::ris1_user]), nr, m, kappa, rng));
        ch.r2.push_back(
            rician_link(make_link(cfg.ris2_position, u, cfg.ref_path_loss, gam[Link::ris2_user]), nr, m, kappa, rng));
    }
    return ch;
}

inline ChannelSet generate_channels(const SystemConfig &cfg)
{
    RandomSource rng(cfg.seed);
    return generate_channels(cfg, rng);
}

/// H_k = R1,k Theta1 T1 + R2,k Theta2 T2 + R2,k Theta2 S Theta1 T1.
inline CMat cascaded_channel(const ChannelSet &ch, const CVec &theta1, const CVec &theta2, std::size_t k)
{
    const auto m = ch.n_elements();
    if (theta1.size() != m || theta2.size() != m)
        throw DimensionError("cascaded_channel: theta length " + std::to_string(theta1.size()) +
                             " does not match M = " + std::to_string(m));
    if (k >= ch.n_users())
        throw DimensionError("cascaded_channel: user index out of range");
    check_channels(ch);

    const CMat th1_t1 = theta1.asDiagonal() * ch.t1;  // Theta1 T1
    const CMat r2_th2 = ch.r2[k] * theta2.asDiagonal(); // R2 Theta2
    return ch.r1[k] * th1_t1 + r2_th2 * ch.t2 + r2_th2 * (ch.s * th1_t1);
}

/// Common reflection pattern: theta1 = theta2 = theta.
inline CMat cascaded_channel(const ChannelSet &ch, const CVec &theta, std::size_t k)
{
    return cascaded_channel(ch, theta, theta, k);
}

} // namespace dris

#endif
