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

#ifndef DRIS_RANDOM_HPP
#define DRIS_RANDOM_HPP

#include "types.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace dris
{

/// Seeded random source (mt19937_64). One instance per Monte-Carlo trial;
/// not thread-safe.
class RandomSource
{
public:
    explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

    double normal() { return normal_(engine_); }

    double uniform(double lo = 0.0, double hi = 1.0)
    {
        return lo + (hi - lo) * std::generate_canonical<double, 53>(engine_);
    }

    /// CN(0, 1): real and imaginary parts i.i.d. N(0, 1/2).
    cdouble complex_normal()
    {
        constexpr double s = std::numbers::sqrt2 / 2.0;
        const double re = normal_(engine_);
        const double im = normal_(engine_);
        return {s * re, s * im};
    }

    CMat complex_gaussian(Eigen::Index rows, Eigen::Index cols)
    {
        CMat m(rows, cols);
        // column-major fill order is part of the determinism contract
        for (Eigen::Index c = 0; c < cols; ++c)
            for (Eigen::Index r = 0; r < rows; ++r)
                m(r, c) = complex_normal();
        return m;
    }

    /// Unit-modulus vector with i.i.d. uniform phases.
    CVec random_phases(Eigen::Index n)
    {
        CVec v(n);
        for (Eigen::Index i = 0; i < n; ++i)
            v(i) = std::polar(1.0, uniform(-std::numbers::pi, std::numbers::pi));
        return v;
    }

    std::mt19937_64 &engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

inline RandomSource seeded_rng(std::uint64_t seed) { return RandomSource(seed); }

/// splitmix64 finalizer.
inline constexpr std::uint64_t mix64(std::uint64_t z)
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// seed_trial = mix64(mix64(mix64(base) ^ sweep_index) ^ trial_index).
inline constexpr std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t sweep_index,
                                          std::uint64_t trial_index)
{
    return mix64(mix64(mix64(base_seed) ^ sweep_index) ^ trial_index);
}

} // namespace dris

#endif
