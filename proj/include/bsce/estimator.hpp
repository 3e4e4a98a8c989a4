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

#ifndef BSCE_ESTIMATOR_HPP
#define BSCE_ESTIMATOR_HPP

#include "beamspace.hpp"
#include "channel.hpp"
#include "codebook.hpp"
#include "ia_design.hpp"
#include "zo_design.hpp"

#include <cmath>
#include <optional>
#include <random>

namespace bsce
{
    /*!MD
    # MeasurementMatrix
    R = W H F + N~ (T_3 x T_1) together with the effective combiner W
    (T_3 x N_A) and precoder F (M_A x T_1) that produced it. `projected`
    caches W^H R F^H (N_A x M_A) so that a beamspace entry costs two
    length-N_A/M_A inner products.
    MD!*/
    struct MeasurementMatrix
    {
        CMatrix data;
        CMatrix combiner;
        CMatrix precoder;
        CMatrix projected;
        long user = 0;

        long n_a() const { return combiner.cols(); }
        long m_a() const { return precoder.rows(); }
    };

    inline MeasurementMatrix make_measurement(CMatrix data, CMatrix combiner, CMatrix precoder, long user = 0)
    {
        if (data.rows() != combiner.rows() || data.cols() != precoder.cols())
            throw InvalidDimension("make_measurement: data must be T_3 x T_1 matching the designs");
        MeasurementMatrix m{std::move(data), std::move(combiner), std::move(precoder), CMatrix(), user};
        m.projected = m.combiner.adjoint() * m.data * m.precoder.adjoint();
        return m;
    }

    // Noise column t_1 stacks W^{t_2} n over the combiner slots, with a fresh
    // n ~ CN(0, noise_var I_{N_A}) per (t_1, t_2).
    inline MeasurementMatrix simulate_pilot_phase(const ChannelRealization &ch, const HybridCombiner &w,
                                                  const HybridPrecoder &f, double noise_var,
                                                  std::uint64_t rng_seed, long user = 0)
    {
        if (w.stacked.cols() != ch.n_a() || f.effective.rows() != ch.m_a())
            throw InvalidDimension("simulate_pilot_phase: design and channel dimensions differ");
        if (noise_var < 0.0)
            throw DomainError("simulate_pilot_phase: noise variance must be non-negative");
        CMatrix data = w.stacked * ch.matrix() * f.effective;
        if (noise_var > 0.0)
        {
            std::mt19937_64 rng(rng_seed);
            const Eigen::Index t_1 = f.effective.cols();
            const Eigen::Index rows = static_cast<Eigen::Index>(w.slots.empty() ? w.stacked.rows()
                                                                                : w.slots.front().digital.rows());
            const Eigen::Index blocks = w.stacked.rows() / rows;
            for (Eigen::Index t1 = 0; t1 < t_1; ++t1)
                for (Eigen::Index t2 = 0; t2 < blocks; ++t2)
                {
                    const CMatrix n = linalg::complex_gaussian(ch.n_a(), 1, noise_var, rng);
                    data.block(t2 * rows, t1, rows, 1) += w.stacked.middleRows(t2 * rows, rows) * n;
                }
        }
        return make_measurement(std::move(data), w.stacked, f.effective, user);
    }

    // [D(N_A,K)^H W^H R F^H D(M_A,K)](p, q), indices taken modulo K.
    inline Complex beamspace_entry(const MeasurementMatrix &m, GridIndex p, GridIndex q, long k,
                                   long *evaluations = nullptr)
    {
        if (k < 1)
            throw InvalidDimension("beamspace_entry: K must be >= 1");
        const CVector a = steering_vector(m.n_a(), grid_angle(wrap_index(p.value, k), k));
        const CVector b = steering_vector(m.m_a(), grid_angle(wrap_index(q.value, k), k));
        if (evaluations != nullptr)
            ++*evaluations;
        return a.dot(m.projected * b);
    }

    struct SearchRegion
    {
        Interval gamma;   // AoA
        Interval upsilon; // AoD
    };

    // Half-open run of grid indices [lo, hi) covering an angle interval.
    // Indices are unwrapped; evaluate modulo K.
    struct IndexRange
    {
        long lo = 0;
        long hi = 0;
        long count() const { return hi - lo; }
    };

    inline IndexRange grid_range(const Interval &iv, long k)
    {
        const double kd = static_cast<double>(k);
        return {std::lround(kd * (iv.lo + 1.0) / 2.0), std::lround(kd * (iv.hi + 1.0) / 2.0)};
    }

    struct AngleEstimate
    {
        double aoa_hat = 0.0;
        double aod_hat = 0.0;
        GridIndex aoa_index{0};
        GridIndex aod_index{0};
        long entry_evaluations = 0;
        Scheme scheme = Scheme::IA;
    };

    namespace detail
    {
        inline AngleEstimate make_estimate(long p, long q, long k, long evals, Scheme scheme)
        {
            AngleEstimate e;
            e.aoa_index = GridIndex{wrap_index(p, k)};
            e.aod_index = GridIndex{wrap_index(q, k)};
            e.aoa_hat = grid_angle(e.aoa_index.value, k);
            e.aod_hat = grid_angle(e.aod_index.value, k);
            e.entry_evaluations = evals;
            e.scheme = scheme;
            return e;
        }

        inline long best_adjacent_pair(const RVector &energy)
        {
            long best = 0;
            double best_val = -1.0;
            for (Eigen::Index i = 0; i + 1 < energy.size(); ++i)
            {
                const double v = energy(i) + energy(i + 1);
                if (v > best_val)
                {
                    best_val = v;
                    best = static_cast<long>(i);
                }
            }
            return best;
        }
    }

    /*!MD
    # stage1_main_lobe
    Non-oversampled beamspace Rbar = D(N_A,N_A)^H W^H R F^H D(M_A,M_A).
    The adjacent column pair (s_q, s_q+1) and row pair (s_p, s_p+1) with the
    largest Frobenius norm give

        Gamma   = [-1 + 2(s_p - 1/2)/N_A, -1 + 2(s_p + 3/2)/N_A]
        Upsilon = [-1 + 2(s_q - 1/2)/M_A, -1 + 2(s_q + 3/2)/M_A]

    The bounds may fall slightly outside [-1, 1]; angles are 2-periodic.
    MD!*/
    inline SearchRegion stage1_main_lobe(const MeasurementMatrix &m)
    {
        const long n = m.n_a();
        const long mm = m.m_a();
        const CMatrix rbar = sampling_matrix(n, n).columns.adjoint() * m.projected * sampling_matrix(mm, mm).columns;
        const RVector rows = rbar.rowwise().squaredNorm();
        const RVector cols = rbar.colwise().squaredNorm().transpose();
        const long s_p = n > 1 ? detail::best_adjacent_pair(rows) : 0;
        const long s_q = mm > 1 ? detail::best_adjacent_pair(cols) : 0;
        auto interval = [](long s, long dim)
        {
            const double d = static_cast<double>(dim);
            return Interval{-1.0 + 2.0 * (static_cast<double>(s) - 0.5) / d,
                            -1.0 + 2.0 * (static_cast<double>(s) + 1.5) / d};
        };
        return {interval(s_p, n), interval(s_q, mm)};
    }

    /*!MD
    # stage2_trichotomy
    Discrete trichotomy over the grid points of the region. For an axis with
    inclusive index range [lo, hi] and d = hi - lo the probes are
    m1 = lo + floor(d/3), m2 = hi - floor(d/3). With both axes open the four
    corner products Q1..Q4 = (m1,m1), (m1,m2), (m2,m1), (m2,m2) are
    evaluated; on each axis the third containing the smallest corner is
    deleted together with the probe. Once one axis is down to a single
    point the other continues with two probes per step.
    MD!*/
    inline AngleEstimate stage2_trichotomy(const MeasurementMatrix &m, const SearchRegion &region, long k,
                                           Scheme scheme = Scheme::IA)
    {
        const IndexRange rp = grid_range(region.gamma, k);
        const IndexRange rq = grid_range(region.upsilon, k);
        if (rp.count() <= 1 && rq.count() <= 1)
            return detail::make_estimate(rp.lo, rq.lo, k, 0, scheme);

        long evals = 0;
        auto mag = [&](long p, long q) { return std::abs(beamspace_entry(m, GridIndex{p}, GridIndex{q}, k, &evals)); };

        long lo_p = rp.lo, hi_p = std::max(rp.lo, rp.hi - 1);
        long lo_q = rq.lo, hi_q = std::max(rq.lo, rq.hi - 1);
        while (hi_p > lo_p && hi_q > lo_q)
        {
            const long sp = (hi_p - lo_p) / 3;
            const long sq = (hi_q - lo_q) / 3;
            const long p[2] = {lo_p + sp, hi_p - sp};
            const long q[2] = {lo_q + sq, hi_q - sq};
            int min_i = 0, min_j = 0;
            double min_v = 0.0;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                {
                    const double v = mag(p[i], q[j]);
                    if ((i == 0 && j == 0) || v < min_v)
                    {
                        min_v = v;
                        min_i = i;
                        min_j = j;
                    }
                }
            if (min_i == 0)
                lo_p = p[0] + 1;
            else
                hi_p = p[1] - 1;
            if (min_j == 0)
                lo_q = q[0] + 1;
            else
                hi_q = q[1] - 1;
        }
        while (hi_p > lo_p)
        {
            const long s = (hi_p - lo_p) / 3;
            const long a = lo_p + s, b = hi_p - s;
            if (mag(a, lo_q) <= mag(b, lo_q))
                lo_p = a + 1;
            else
                hi_p = b - 1;
        }
        while (hi_q > lo_q)
        {
            const long s = (hi_q - lo_q) / 3;
            const long a = lo_q + s, b = hi_q - s;
            if (mag(lo_p, a) <= mag(lo_p, b))
                lo_q = a + 1;
            else
                hi_q = b - 1;
        }
        return detail::make_estimate(lo_p, lo_q, k, evals, scheme);
    }

    // Brute-force argmax of |beamspace_entry| over the region's grid points;
    // ties keep the first point in (p, q) order.
    inline AngleEstimate exhaustive_argmax(const MeasurementMatrix &m, const SearchRegion &region, long k,
                                           Scheme scheme = Scheme::IA)
    {
        const IndexRange rp = grid_range(region.gamma, k);
        const IndexRange rq = grid_range(region.upsilon, k);
        long evals = 0;
        long bp = rp.lo, bq = rq.lo;
        double best = -1.0;
        for (long p = rp.lo; p < rp.hi; ++p)
        {
            const CVector a = steering_vector(m.n_a(), grid_angle(wrap_index(p, k), k));
            const CVector left = m.projected.adjoint() * a;
            for (long q = rq.lo; q < rq.hi; ++q)
            {
                const CVector b = steering_vector(m.m_a(), grid_angle(wrap_index(q, k), k));
                ++evals;
                const double v = std::abs(left.dot(b));
                if (v > best)
                {
                    best = v;
                    bp = p;
                    bq = q;
                }
            }
        }
        return detail::make_estimate(bp, bq, k, evals, scheme);
    }

    inline AngleEstimate estimate_ia(const ChannelRealization &ch, const HybridCombiner &w, const HybridPrecoder &f,
                                     double noise_var, long k, std::uint64_t rng_seed)
    {
        const auto m = simulate_pilot_phase(ch, w, f, noise_var, rng_seed);
        return stage2_trichotomy(m, stage1_main_lobe(m), k, Scheme::IA);
    }

    inline AngleEstimate estimate_random(const ChannelRealization &ch, const HybridCombiner &w,
                                         const HybridPrecoder &f, double noise_var, long k, std::uint64_t rng_seed)
    {
        auto e = estimate_ia(ch, w, f, noise_var, k, rng_seed);
        e.scheme = Scheme::RandomBaseline;
        return e;
    }

    inline AngleEstimate estimate_czo(const ChannelRealization &ch, const ZoGram &w_gram, const ZoGram &f_gram,
                                      long n_r, double noise_var, long k, std::uint64_t rng_seed)
    {
        if (w_gram.layout != Layout::Concentrated || f_gram.layout != Layout::Concentrated)
            throw InvalidDimension("estimate_czo: grams must use the concentrated layout");
        const auto m = simulate_pilot_phase(ch, zo_combiner(w_gram, n_r), zo_precoder(f_gram), noise_var, rng_seed);
        return stage2_trichotomy(m, stage1_main_lobe(m), k, Scheme::CZO);
    }

    // Region handed to stage 2 after beam training: the selected cells,
    // closed on both ends.
    inline SearchRegion coarse_region(const CoarseEstimate &c, long k)
    {
        const double step = 2.0 / static_cast<double>(k);
        return {{c.aoa_interval.lo, c.aoa_interval.hi + step}, {c.aod_interval.lo, c.aod_interval.hi + step}};
    }

    struct SzoResult
    {
        AngleEstimate estimate;
        CoarseEstimate coarse;
    };

    inline SzoResult estimate_szo_detailed(const ChannelRealization &ch, const ZoGram &w_gram, const ZoGram &f_gram,
                                           const HierarchicalCodebook &cb_bs, const HierarchicalCodebook &cb_ue,
                                           long n_r, double noise_var, long k, std::uint64_t rng_seed,
                                           double p_f = 1.0)
    {
        if (w_gram.layout != Layout::Scattered || f_gram.layout != Layout::Scattered)
            throw InvalidDimension("estimate_szo: grams must use the scattered layout");
        const auto coarse = beam_train(ch, cb_bs, cb_ue, noise_var, derive_seed(rng_seed, 0xB7), {p_f});
        const auto m = simulate_pilot_phase(ch, zo_combiner(w_gram, n_r), zo_precoder(f_gram), noise_var, rng_seed);
        return {stage2_trichotomy(m, coarse_region(coarse, k), k, Scheme::SZO), coarse};
    }

    inline AngleEstimate estimate_szo(const ChannelRealization &ch, const ZoGram &w_gram, const ZoGram &f_gram,
                                      const HierarchicalCodebook &cb_bs, const HierarchicalCodebook &cb_ue, long n_r,
                                      double noise_var, long k, std::uint64_t rng_seed, double p_f = 1.0)
    {
        return estimate_szo_detailed(ch, w_gram, f_gram, cb_bs, cb_ue, n_r, noise_var, k, rng_seed, p_f).estimate;
    }
}

#endif
