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

#ifndef BSCE_ZO_DESIGN_HPP
#define BSCE_ZO_DESIGN_HPP

#include "beamspace.hpp"
#include "ia_design.hpp"

#include <cmath>
#include <string>

namespace bsce
{
    enum class Layout
    {
        Scattered,
        Concentrated
    };

    inline std::string to_string(Layout l) { return l == Layout::Scattered ? "scattered" : "concentrated"; }

    // Diagonal gram with `active` nonzero entries of value `scale`.
    struct ZoGram
    {
        long dim = 0;
        long active = 0;
        Layout layout = Layout::Concentrated;
        double scale = 0.0;
        CMatrix matrix;

        std::vector<long> support() const
        {
            std::vector<long> idx;
            idx.reserve(static_cast<std::size_t>(active));
            const long step = layout == Layout::Scattered ? dim / active : 1;
            for (long i = 0; i < active; ++i)
                idx.push_back(i * step);
            return idx;
        }
    };

    inline ZoGram build_zo_gram(long dim, long active, Layout layout, double gamma = 1.0)
    {
        if (dim < 1 || active < 1)
            throw InvalidDimension("build_zo_gram: dim and active must be >= 1");
        if (active > dim)
            throw InvalidDimension("build_zo_gram: active must not exceed dim");
        if (layout == Layout::Scattered && dim % active != 0)
            throw InvalidDimension("build_zo_gram: scattered layout needs dim divisible by active (" +
                                   std::to_string(dim) + " % " + std::to_string(active) + " != 0)");
        if (!(gamma > 0.0))
            throw DomainError("build_zo_gram: gamma must be positive");
        ZoGram g;
        g.dim = dim;
        g.active = active;
        g.layout = layout;
        g.scale = gamma * std::sqrt(static_cast<double>(dim) / static_cast<double>(active));
        g.matrix = CMatrix::Zero(dim, dim);
        for (long i : g.support())
            g.matrix(i, i) = g.scale;
        return g;
    }

    // Precoder orientation: dim x active, X X^H = G.
    // Combiner orientation: active x dim, X^H X = G.
    inline CMatrix factor_gram(const ZoGram &g, Orientation orientation)
    {
        CMatrix x = CMatrix::Zero(g.dim, g.active);
        const double v = std::sqrt(g.scale);
        const auto idx = g.support();
        for (long i = 0; i < g.active; ++i)
            x(idx[static_cast<std::size_t>(i)], i) = v;
        if (orientation == Orientation::Rows)
            return x.transpose();
        return x;
    }

    // Per-slot power of the factor: ||column||^2 = scale. The gamma that gives
    // each column (row block) power p.
    inline double zo_gamma_for_power(long dim, long active, double p)
    {
        return p * std::sqrt(static_cast<double>(active) / static_cast<double>(dim));
    }

    // |alpha(dim, -1 + 2 k_index / k)^H G alpha(dim, truth)|
    inline double predicted_lobe_magnitude(const ZoGram &g, GridIndex k_index, double truth_angle, long k)
    {
        const CVector a = steering_vector(g.dim, k_index.angle(k));
        const CVector b = steering_vector(g.dim, truth_angle);
        return std::abs(a.dot(g.matrix * b));
    }

    // Wraps a factored ZO gram as a hybrid design with every slot's digital
    // part set to the identity (no phase-shifter constraint on ZO designs).
    inline HybridCombiner zo_combiner(const ZoGram &g, long n_r)
    {
        if (g.active % n_r != 0)
            throw InvalidDimension("zo_combiner: active rows must be a multiple of N_R");
        const CMatrix w = factor_gram(g, Orientation::Rows);
        HybridCombiner out;
        for (long t = 0; t < g.active / n_r; ++t)
            out.slots.push_back({CMatrix::Identity(n_r, n_r), w.middleRows(t * n_r, n_r)});
        out.stacked = w;
        return out;
    }

    inline HybridPrecoder zo_precoder(const ZoGram &g)
    {
        const CMatrix f = factor_gram(g, Orientation::Columns);
        HybridPrecoder out;
        for (long t = 0; t < g.active; ++t)
            out.slots.push_back({f.col(t), CMatrix::Identity(1, 1)});
        out.effective = f;
        return out;
    }
}

#endif
