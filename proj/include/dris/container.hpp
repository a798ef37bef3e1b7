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

// Binary container for ChannelSet and BeamformingState.
//
// All integers are little-endian, all doubles are IEEE-754 binary64 stored
// little-endian, so a dump/load cycle reproduces every bit.
//
//   offset  size  field
//   0       8     magic "DRISBIN\0"
//   8       4     u32 format version (1)
//   12      4     u32 payload kind (1 = ChannelSet, 2 = BeamformingState)
//   16      8     u64 seed
//   24      8     u64 config hash (FNV-1a of the scenario keys, 0 if unknown)
//   32      4     u32 M
//   36      4     u32 Nt
//   40      4     u32 K
//   44      4     u32 reserved (0)
//   48      ...   matrices
//
// Each matrix is u32 rows, u32 cols, then rows*cols (re, im) pairs in
// column-major order. ChannelSet: T1, T2, S, R1[0..K), R2[0..K).
// BeamformingState: F, G[0..K), theta (as an M x 1 matrix).

#ifndef DRIS_CONTAINER_HPP
#define DRIS_CONTAINER_HPP

#include "types.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

namespace dris
{

class FormatError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::array<char, 8> container_magic{'D', 'R', 'I', 'S', 'B', 'I', 'N', '\0'};
inline constexpr std::uint32_t container_version = 1;

enum class PayloadKind : std::uint32_t
{
    channel_set = 1,
    beamforming_state = 2
};

struct ContainerHeader
{
    std::uint32_t version = container_version;
    PayloadKind kind = PayloadKind::channel_set;
    std::uint64_t seed = 0;
    std::uint64_t config_hash = 0;
    std::uint32_t n_elements = 0;
    std::uint32_t n_tx = 0;
    std::uint32_t n_users = 0;
};

namespace detail
{

template <typename T>
void put_le(std::ostream &out, T v)
{
    unsigned char b[sizeof(T)];
    for (std::size_t i = 0; i < sizeof(T); ++i)
        b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    out.write(reinterpret_cast<const char *>(b), sizeof b);
}

template <typename T>
T get_le(std::istream &in)
{
    unsigned char b[sizeof(T)];
    if (!in.read(reinterpret_cast<char *>(b), sizeof b))
        throw FormatError("container: unexpected end of data");
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i)
        v |= static_cast<T>(b[i]) << (8 * i);
    return v;
}

inline void put_double(std::ostream &out, double d) { put_le(out, std::bit_cast<std::uint64_t>(d)); }
inline double get_double(std::istream &in) { return std::bit_cast<double>(get_le<std::uint64_t>(in)); }

inline void put_matrix(std::ostream &out, const CMat &m)
{
    put_le(out, static_cast<std::uint32_t>(m.rows()));
    put_le(out, static_cast<std::uint32_t>(m.cols()));
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
        {
            put_double(out, m(i, j).real());
            put_double(out, m(i, j).imag());
        }
}

inline CMat get_matrix(std::istream &in)
{
    const auto rows = get_le<std::uint32_t>(in);
    const auto cols = get_le<std::uint32_t>(in);
    if (static_cast<std::uint64_t>(rows) * cols > (std::uint64_t{1} << 32))
        throw FormatError("container: implausible matrix size");
    CMat m(rows, cols);
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
        {
            const double re = get_double(in);
            const double im = get_double(in);
            m(i, j) = cdouble(re, im);
        }
    return m;
}

inline void put_header(std::ostream &out, const ContainerHeader &h)
{
    out.write(container_magic.data(), container_magic.size());
    put_le(out, h.version);
    put_le(out, static_cast<std::uint32_t>(h.kind));
    put_le(out, h.seed);
    put_le(out, h.config_hash);
    put_le(out, h.n_elements);
    put_le(out, h.n_tx);
    put_le(out, h.n_users);
    put_le(out, std::uint32_t{0});
}

inline ContainerHeader get_header(std::istream &in, PayloadKind expected)
{
    std::array<char, 8> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != container_magic)
        throw FormatError("container: bad magic");
    ContainerHeader h;
    h.version = get_le<std::uint32_t>(in);
    if (h.version != container_version)
        throw FormatError("container: unsupported version " + std::to_string(h.version));
    h.kind = static_cast<PayloadKind>(get_le<std::uint32_t>(in));
    if (h.kind != expected)
        throw FormatError("container: payload kind mismatch");
    h.seed = get_le<std::uint64_t>(in);
    h.config_hash = get_le<std::uint64_t>(in);
    h.n_elements = get_le<std::uint32_t>(in);
    h.n_tx = get_le<std::uint32_t>(in);
    h.n_users = get_le<std::uint32_t>(in);
    (void)get_le<std::uint32_t>(in);
    return h;
}

} // namespace detail

inline void write_channels(std::ostream &out, const ChannelSet &ch, std::uint64_t seed = 0,
                           std::uint64_t cfg_hash = 0)
{
    check_channels(ch);
    ContainerHeader h;
    h.kind = PayloadKind::channel_set;
    h.seed = seed;
    h.config_hash = cfg_hash;
    h.n_elements = static_cast<std::uint32_t>(ch.n_elements());
    h.n_tx = static_cast<std::uint32_t>(ch.n_tx());
    h.n_users = static_cast<std::uint32_t>(ch.n_users());
    detail::put_header(out, h);
    detail::put_matrix(out, ch.t1);
    detail::put_matrix(out, ch.t2);
    detail::put_matrix(out, ch.s);
    for (const CMat &r : ch.r1)
        detail::put_matrix(out, r);
    for (const CMat &r : ch.r2)
        detail::put_matrix(out, r);
    if (!out)
        throw FormatError("container: write failed");
}

inline ChannelSet read_channels(std::istream &in, ContainerHeader *header = nullptr)
{
    const ContainerHeader h = detail::get_header(in, PayloadKind::channel_set);
    ChannelSet ch;
    ch.t1 = detail::get_matrix(in);
    ch.t2 = detail::get_matrix(in);
    ch.s = detail::get_matrix(in);
    for (std::uint32_t k = 0; k < h.n_users; ++k)
        ch.r1.push_back(detail::get_matrix(in));
    for (std::uint32_t k = 0; k < h.n_users; ++k)
        ch.r2.push_back(detail::get_matrix(in));
    check_channels(ch);
    if (ch.n_elements() != h.n_elements || ch.n_tx() != h.n_tx)
        throw FormatError("container: header dimensions disagree with payload");
    if (header)
        *header = h;
    return ch;
}

inline void write_state(std::ostream &out, const BeamformingState &st, std::uint64_t seed = 0,
                        std::uint64_t cfg_hash = 0)
{
    ContainerHeader h;
    h.kind = PayloadKind::beamforming_state;
    h.seed = seed;
    h.config_hash = cfg_hash;
    h.n_elements = static_cast<std::uint32_t>(st.theta.size());
    h.n_tx = static_cast<std::uint32_t>(st.precoder.rows());
    h.n_users = static_cast<std::uint32_t>(st.equalizers.size());
    detail::put_header(out, h);
    detail::put_matrix(out, st.precoder);
    for (const CMat &g : st.equalizers)
        detail::put_matrix(out, g);
    detail::put_matrix(out, st.theta);
    if (!out)
        throw FormatError("container: write failed");
}

inline BeamformingState read_state(std::istream &in, ContainerHeader *header = nullptr)
{
    const ContainerHeader h = detail::get_header(in, PayloadKind::beamforming_state);
    BeamformingState st;
    st.precoder = detail::get_matrix(in);
    for (std::uint32_t k = 0; k < h.n_users; ++k)
        st.equalizers.push_back(detail::get_matrix(in));
    const CMat th = detail::get_matrix(in);
    if (th.cols() != 1 || th.rows() != h.n_elements)
        throw FormatError("container: theta must be an M x 1 matrix");
    st.theta = th.col(0);
    if (header)
        *header = h;
    return st;
}

inline void save_channels(const std::string &path, const ChannelSet &ch, std::uint64_t seed = 0,
                          std::uint64_t cfg_hash = 0)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw FormatError("cannot open '" + path + "' for writing");
    write_channels(out, ch, seed, cfg_hash);
}

inline ChannelSet load_channels(const std::string &path, ContainerHeader *header = nullptr)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FormatError("cannot open '" + path + "'");
    return read_channels(in, header);
}

} // namespace dris

#endif
