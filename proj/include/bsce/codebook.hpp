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

#ifndef BSCE_CODEBOOK_HPP
#define BSCE_CODEBOOK_HPP

#include "channel.hpp"
#include "linalg.hpp"

#include <cmath>
#include <random>
#include <utility>
#include <vector>

namespace bsce
{
    struct Interval
    {
        double lo = 0.0;
        double hi = 0.0;
        double width() const { return hi - lo; }
        bool contains(double x) const { return x >= lo && x <= hi; }
    };

    /*!MD
    # HierarchicalCodebook
    Layer s = 1..S (S = log2 n) holds 2^s codewords. Codeword (s, c) is the
    integral of alpha(n, theta) over its coverage interval
    [-1 + c/2^{s-1}, -1 + (c+1)/2^{s-1}], in closed form:

        v[0] = 1/sqrt(n) * 1/2^{s-1}
        v[m] = 1/sqrt(n) * j/(pi m) * exp(-j pi m w2) * (1 - exp(j pi m / 2^{s-1}))
    MD!*/
    class HierarchicalCodebook
    {
    public:
        HierarchicalCodebook() = default;

        explicit HierarchicalCodebook(long n) : n_(n)
        {
            if (n < 2 || (n & (n - 1)) != 0)
                throw InvalidDimension("HierarchicalCodebook: n must be a power of 2 and >= 2, got " +
                                       std::to_string(n));
            layers_ = 0;
            while ((1L << layers_) < n)
                ++layers_;
            words_.resize(static_cast<std::size_t>(layers_));
            for (int s = 1; s <= layers_; ++s)
            {
                auto &layer = words_[static_cast<std::size_t>(s - 1)];
                for (long c = 0; c < (1L << s); ++c)
                    layer.push_back(make_codeword(s, c));
            }
        }

        long n() const { return n_; }
        int layers() const { return layers_; }
        long size(int s) const { return 1L << s; }

        const CVector &codeword(int s, long c) const
        {
            check(s, c);
            return words_[static_cast<std::size_t>(s - 1)][static_cast<std::size_t>(c)];
        }

        Interval coverage(int s, long c) const
        {
            check(s, c);
            const double w = 1.0 / static_cast<double>(1L << (s - 1));
            return {-1.0 + static_cast<double>(c) * w, -1.0 + static_cast<double>(c + 1) * w};
        }

        // Last-layer cell covering theta; theta = +1 belongs to the last cell.
        long covering_cell(double theta) const
        {
            if (!(theta >= -1.0 && theta <= 1.0))
                throw DomainError("covering_cell: angle outside [-1, 1]");
            const long cells = size(layers_);
            const long c = static_cast<long>(std::floor((theta + 1.0) * static_cast<double>(cells) / 2.0));
            return std::min(c, cells - 1);
        }

    private:
        void check(int s, long c) const
        {
            if (s < 1 || s > layers_ || c < 0 || c >= size(s))
                throw InvalidDimension("HierarchicalCodebook: codeword index out of range");
        }

        CVector make_codeword(int s, long c) const
        {
            const double inv = 1.0 / std::sqrt(static_cast<double>(n_));
            const double span = static_cast<double>(1L << (s - 1));
            const double w2 = -1.0 + static_cast<double>(c + 1) / span;
            CVector v(n_);
            v(0) = Complex(inv / span, 0.0);
            for (long m = 1; m < n_; ++m)
            {
                const double md = static_cast<double>(m);
                v(m) = inv * (j_unit / (pi * md)) * std::exp(-j_unit * (pi * md * w2)) *
                       (1.0 - std::exp(j_unit * (pi * md / span)));
            }
            return v;
        }

        long n_ = 0;
        int layers_ = 0;
        std::vector<std::vector<CVector>> words_;
    };

    inline HierarchicalCodebook build_codebook(long n) { return HierarchicalCodebook(n); }

    struct CoarseEstimate
    {
        long n_w = 0;
        long n_f = 0;
        Interval aoa_interval;
        Interval aod_interval;
        long measurements = 0;
    };

    struct TrainingPower
    {
        double p_f = 1.0;
    };

    namespace detail
    {
        // Ties resolved towards the lower index.
        inline bool strictly_greater(double a, double b) { return a > b * (1.0 + 1e-12) && a > b; }
    }

    /*!MD
    # beam_train
    Staged hierarchical descent. While both codebooks still have layers,
    each layer probes the 2 x 2 children of the current (BS, user) pair and
    each side keeps the child with the larger summed energy; afterwards the side with more layers descends alone
    with 2 probes per layer. Finally each side compares its last-layer cell
    with the two circular neighbours (3 probes per side). Each probe is y = w^H (H f + n) with
    w = c_bs/||c_bs||, f = sqrt(p_f) c_ue/||c_ue||, n ~ CN(0, noise_var I).
    MD!*/
    inline CoarseEstimate beam_train(const ChannelRealization &ch, const HierarchicalCodebook &cb_bs,
                                     const HierarchicalCodebook &cb_ue, double noise_var, std::uint64_t rng_seed,
                                     TrainingPower power = {})
    {
        if (cb_bs.n() != ch.n_a() || cb_ue.n() != ch.m_a())
            throw InvalidDimension("beam_train: codebook sizes must match the channel dimensions");
        if (noise_var < 0.0)
            throw DomainError("beam_train: noise variance must be non-negative");
        const CMatrix &h = ch.matrix();
        std::mt19937_64 rng(rng_seed);
        CoarseEstimate est;

        auto measure = [&](int s_bs, long c_bs, int s_ue, long c_ue)
        {
            const CVector &w = cb_bs.codeword(s_bs, c_bs);
            const CVector &f = cb_ue.codeword(s_ue, c_ue);
            CVector rx = h * (f * (std::sqrt(power.p_f) / f.norm()));
            if (noise_var > 0.0)
                rx += linalg::complex_gaussian(h.rows(), 1, noise_var, rng);
            ++est.measurements;
            return std::norm(w.dot(rx) / w.norm());
        };

        const int s_n = cb_bs.layers();
        const int s_m = cb_ue.layers();
        const int joint = std::min(s_n, s_m);
        long c_w = 0;
        long c_f = 0;
        for (int s = 1; s <= joint; ++s)
        {
            double e[2][2];
            for (long dw = 0; dw < 2; ++dw)
                for (long df = 0; df < 2; ++df)
                    e[dw][df] = measure(s, 2 * c_w + dw, s, 2 * c_f + df);
            c_w = 2 * c_w + (detail::strictly_greater(e[1][0] + e[1][1], e[0][0] + e[0][1]) ? 1 : 0);
            c_f = 2 * c_f + (detail::strictly_greater(e[0][1] + e[1][1], e[0][0] + e[1][0]) ? 1 : 0);
        }
        for (int s = joint + 1; s <= s_n; ++s)
        {
            const double e0 = measure(s, 2 * c_w, s_m, c_f);
            const double e1 = measure(s, 2 * c_w + 1, s_m, c_f);
            c_w = detail::strictly_greater(e1, e0) ? 2 * c_w + 1 : 2 * c_w;
        }
        for (int s = joint + 1; s <= s_m; ++s)
        {
            const double e0 = measure(s_n, c_w, s, 2 * c_f);
            const double e1 = measure(s_n, c_w, s, 2 * c_f + 1);
            c_f = detail::strictly_greater(e1, e0) ? 2 * c_f + 1 : 2 * c_f;
        }
        // Neighbour check on the last layer, circularly, so that cells on
        // either side of a coarse-layer boundary (including the +-1 seam)
        // stay reachable.
        auto refine = [&](long &cell, long cells, auto probe)
        {
            const long left = (cell + cells - 1) % cells;
            const long right = (cell + 1) % cells;
            long best = cell;
            double best_e = probe(cell);
            for (long cand : {left, right})
            {
                const double e = probe(cand);
                if (detail::strictly_greater(e, best_e))
                {
                    best_e = e;
                    best = cand;
                }
            }
            cell = best;
        };
        refine(c_w, cb_bs.size(s_n), [&](long c) { return measure(s_n, c, s_m, c_f); });
        refine(c_f, cb_ue.size(s_m), [&](long c) { return measure(s_n, c_w, s_m, c); });

        est.n_w = c_w;
        est.n_f = c_f;
        est.aoa_interval = cb_bs.coverage(s_n, c_w);
        est.aod_interval = cb_ue.coverage(s_m, c_f);
        return est;
    }

    // Number of probes beam_train spends for the given codebook sizes.
    inline long beam_training_measurements(long n_bs, long n_ue)
    {
        auto lg = [](long n)
        {
            long s = 0;
            while ((1L << s) < n)
                ++s;
            return s;
        };
        const long s_n = lg(n_bs);
        const long s_m = lg(n_ue);
        const long joint = std::min(s_n, s_m);
        return 4 * joint + 2 * (std::max(s_n, s_m) - joint) + 6;
    }
}

#endif
