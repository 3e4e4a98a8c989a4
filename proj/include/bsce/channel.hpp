// SPDX-License-Identifier: Apache-2.0
//
// bsce - beamspace channel estimation for hybrid mmWave massive MIMO
// Copyright (C) 2026 The bsce authors
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

#ifndef BSCE_CHANNEL_HPP
#define BSCE_CHANNEL_HPP

#include "beamspace.hpp"
#include "linalg.hpp"

#include <random>
#include <utility>
#include <vector>

namespace bsce
{
    struct ChannelPath
    {
        Complex gain;
        double aoa = 0.0; // normalized, [-1, 1]
        double aod = 0.0; // normalized, [-1, 1]
    };

    /*!MD
    # ChannelRealization
    Saleh-Valenzuela narrowband channel between an `n_a`-antenna BS and an
    `m_a`-antenna user:

        H = sqrt(n_a*m_a/L) * sum_i g_i * a(n_a, aoa_i) * a(m_a, aod_i)^H

    Path 0 is the line-of-sight path. The dense matrix is assembled once at
    construction and is always recomputable from `paths()`.
    MD!*/
    class ChannelRealization
    {
    public:
        ChannelRealization(long n_a, long m_a, std::vector<ChannelPath> paths)
            : n_a_(n_a), m_a_(m_a), paths_(std::move(paths))
        {
            if (n_a_ < 1 || m_a_ < 1)
                throw InvalidDimension("channel: antenna counts must be >= 1");
            if (paths_.empty())
                throw InvalidDimension("channel: at least one path is required");
            for (const auto &p : paths_)
                if (!(p.aoa >= -1.0 && p.aoa <= 1.0 && p.aod >= -1.0 && p.aod <= 1.0))
                    throw DomainError("channel: path angles must lie in [-1, 1]");
            matrix_ = assemble(n_a_, m_a_, paths_);
        }

        long n_a() const { return n_a_; }
        long m_a() const { return m_a_; }
        const std::vector<ChannelPath> &paths() const { return paths_; }
        const CMatrix &matrix() const { return matrix_; }

        static CMatrix assemble(long n_a, long m_a, const std::vector<ChannelPath> &paths)
        {
            CMatrix h = CMatrix::Zero(n_a, m_a);
            for (const auto &p : paths)
                h += p.gain * steering_vector(n_a, p.aoa) * steering_vector(m_a, p.aod).adjoint();
            h *= std::sqrt(static_cast<double>(n_a * m_a) / static_cast<double>(paths.size()));
            return h;
        }

    private:
        long n_a_;
        long m_a_;
        std::vector<ChannelPath> paths_;
        CMatrix matrix_;
    };

    // LOS gain ~ CN(0,1), NLOS gains ~ CN(0, nlos_var); physical angles
    // uniform on [-pi, pi] mapped through sin().
    inline ChannelRealization generate_channel(long n_a, long m_a, long l, std::uint64_t rng_seed,
                                               double nlos_var = 0.01)
    {
        if (l < 1)
            throw InvalidDimension("generate_channel: path count must be >= 1");
        if (nlos_var < 0.0)
            throw DomainError("generate_channel: NLOS variance must be non-negative");
        std::mt19937_64 rng(rng_seed);
        std::uniform_real_distribution<double> phys(-pi, pi);
        std::normal_distribution<double> nd(0.0, 1.0);
        std::vector<ChannelPath> paths;
        paths.reserve(static_cast<std::size_t>(l));
        for (long i = 0; i < l; ++i)
        {
            const double sd = std::sqrt((i == 0 ? 1.0 : nlos_var) / 2.0);
            const double re = nd(rng) * sd;
            const double im = nd(rng) * sd;
            const double aoa = std::sin(phys(rng));
            const double aod = std::sin(phys(rng));
            paths.push_back({Complex(re, im), aoa, aod});
        }
        return ChannelRealization(n_a, m_a, std::move(paths));
    }

    inline std::pair<double, double> los_truth(const ChannelRealization &ch)
    {
        const auto &p = ch.paths().front();
        return {p.aoa, p.aod};
    }
}

#endif
