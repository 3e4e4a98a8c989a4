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

#ifndef BSCE_HARNESS_HPP
#define BSCE_HARNESS_HPP

#include "config.hpp"
#include "estimator.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <locale>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

namespace bsce
{
    namespace detail
    {
        inline bool is_power_of_two(long n) { return n >= 1 && (n & (n - 1)) == 0; }

        inline long log2_exact(long n)
        {
            long s = 0;
            while ((1L << s) < n)
                ++s;
            return s;
        }
    }

    // Fixed pilot dimensions of the scattered scheme.
    inline constexpr long szo_t_1 = 2;
    inline constexpr long szo_t_2 = 1;

    struct SlotDims
    {
        long t_1 = 0;
        long t_2 = 0;
    };

    // T_1 = T_2 = floor(sqrt(T / U)).
    inline SlotDims slots_for_total(long total, long u)
    {
        const long side = static_cast<long>(std::floor(std::sqrt(static_cast<double>(total) / static_cast<double>(u)) + 1e-12));
        return {side, side};
    }

    inline std::vector<std::string> validate(const SystemConfig &c)
    {
        std::vector<std::string> v;
        auto need = [&](bool ok, const std::string &msg)
        {
            if (!ok)
                v.push_back(msg);
        };
        need(c.n_a >= 1, "n_a must be >= 1");
        need(c.m_a >= 1, "m_a must be >= 1");
        need(c.n_r >= 1, "n_r must be >= 1");
        need(c.m_r >= 1, "m_r must be >= 1");
        need(c.u >= 1, "u must be >= 1");
        need(c.t_1 >= 1, "t_1 must be >= 1");
        need(c.t_2 >= 1, "t_2 must be >= 1");
        need(c.bs_bits >= 1 && c.bs_bits <= 30, "bs_bits must be in [1, 30]");
        need(c.ue_bits >= 1 && c.ue_bits <= 30, "ue_bits must be in [1, 30]");
        need(c.l_paths >= 1, "l_paths must be >= 1");
        need(c.nlos_var >= 0.0, "nlos_var must be >= 0");
        need(!c.snr_db_list.empty(), "snr_db_list must not be empty");
        for (double s : c.snr_db_list)
            need(std::isfinite(s), "snr_db_list entries must be finite");
        need(c.trials >= 1, "trials must be >= 1");
        need(c.delta > 0.0, "delta must be > 0");
        need(!c.schemes.empty(), "schemes must not be empty");
        need(c.p_w > 0.0, "p_w must be > 0");
        need(c.p_f > 0.0, "p_f must be > 0");
        need(c.max_iters >= 1, "max_iters must be >= 1");
        need(c.k >= std::max(c.n_a, c.m_a), "k must be >= max(n_a, m_a)");
        need(c.n_r <= c.n_a, "n_r must not exceed n_a");
        need(c.m_r <= c.m_a, "m_r must not exceed m_a");
        if (!v.empty())
            return v;

        std::vector<SlotDims> dims;
        if (c.sweep == SweepKind::Snr)
            dims.push_back({c.t_1, c.t_2});
        else
        {
            need(!c.total_slots_list.empty(), "total_slots_list must not be empty for a slots sweep");
            for (long t : c.total_slots_list)
            {
                const auto d = slots_for_total(t, c.u);
                need(d.t_1 >= 1, "total slots " + std::to_string(t) + " gives T_1 = T_2 = 0");
                if (d.t_1 >= 1)
                    dims.push_back(d);
            }
        }

        for (Scheme s : c.schemes)
        {
            const std::string name = to_string(s);
            if (s == Scheme::SZO)
            {
                need(detail::is_power_of_two(c.n_a), "szo: n_a must be a power of 2");
                need(detail::is_power_of_two(c.m_a) && c.m_a >= 2, "szo: m_a must be a power of 2 and >= 2");
                need(c.m_a % szo_t_1 == 0, "szo: m_a must be divisible by T_1 = 2");
                need(c.n_a % (szo_t_2 * c.n_r) == 0, "szo: n_a must be divisible by N_R");
                continue;
            }
            for (const auto &d : dims)
            {
                const std::string at = " (T_1=" + std::to_string(d.t_1) + ", T_2=" + std::to_string(d.t_2) + ")";
                if (s == Scheme::CZO)
                {
                    need(d.t_2 * c.n_r <= c.n_a, name + ": t_2 * n_r must be <= n_a" + at);
                    need(d.t_1 <= c.m_a, name + ": t_1 must be <= m_a" + at);
                }
                else
                {
                    need(d.t_2 * c.n_r < c.n_a, name + ": t_2 * n_r must be < n_a" + at);
                    need(d.t_1 < c.m_a, name + ": t_1 must be < m_a" + at);
                }
            }
        }
        return v;
    }

    inline void validate_or_throw(const SystemConfig &c)
    {
        const auto v = validate(c);
        if (v.empty())
            return;
        std::string msg = "invalid configuration:";
        for (const auto &s : v)
            msg += "\n  - " + s;
        throw ConfigError(msg);
    }

    struct SlotCount
    {
        long slots = 0;
        std::optional<std::string> warning;
    };

    // U (5 log2 M_A + 2 log2(N_A / M_A) + 2) for the scattered scheme,
    // U T_1 T_2 otherwise.
    inline SlotCount training_slots(const SystemConfig &c, Scheme s)
    {
        if (s != Scheme::SZO)
            return {c.u * c.t_1 * c.t_2, std::nullopt};
        const long lm = detail::log2_exact(c.m_a);
        const long ln = detail::log2_exact(std::max<long>(1, c.n_a / c.m_a));
        const long slots = c.u * (5 * lm + 2 * ln + 2);
        std::string w = "szo slot count " + std::to_string(slots) +
                        " follows the closed-form formula; the numeric value quoted for U=4, M_A=16, N_A=64 is 144"
                        " while the formula gives 104";
        return {slots, w};
    }

    inline double nmse(const std::vector<AngleEstimate> &est, const std::vector<std::pair<double, double>> &truth)
    {
        if (est.empty())
            throw MetricError("nmse: empty input");
        if (est.size() != truth.size())
            throw MetricError("nmse: estimate and truth counts differ");
        double sum = 0.0;
        for (std::size_t i = 0; i < est.size(); ++i)
            sum += std::hypot(angle_distance(est[i].aoa_hat, truth[i].first),
                              angle_distance(est[i].aod_hat, truth[i].second));
        return sum / static_cast<double>(est.size());
    }

    // log2(1 + snr |alpha(N_A, aoa)^H H alpha(M_A, aod)|^2) for one user.
    inline double link_rate(const ChannelRealization &ch, double aoa, double aod, double snr_linear)
    {
        const CVector a = steering_vector(ch.n_a(), aoa);
        const CVector b = steering_vector(ch.m_a(), aod);
        return std::log2(1.0 + snr_linear * std::norm(a.dot(ch.matrix() * b)));
    }

    inline double sum_rate(const std::vector<ChannelRealization> &chs, const std::vector<AngleEstimate> &est,
                           double snr_linear)
    {
        if (chs.size() != est.size())
            throw MetricError("sum_rate: channel and estimate counts differ");
        if (!(snr_linear > 0.0))
            throw MetricError("sum_rate: snr must be positive");
        double r = 0.0;
        for (std::size_t i = 0; i < chs.size(); ++i)
            r += link_rate(chs[i], est[i].aoa_hat, est[i].aod_hat, snr_linear);
        return r;
    }

    struct ResultRow
    {
        Scheme scheme = Scheme::IA;
        std::string sweep_var;
        double sweep_value = 0.0;
        long trials = 0;
        double mean_nmse = 0.0;
        double mean_sum_rate = 0.0;
        double mean_entry_evals = 0.0;
        long training_slots = 0;
        std::uint64_t seed = 0;
    };

    struct ExperimentResult
    {
        std::vector<ResultRow> rows;
        std::vector<std::string> warnings;
    };

    /*!MD
    # SchemeSetup
    Everything a scheme needs before the Monte Carlo loop: designs are made
    once per sweep point and reused for all trials and SNR values.
    MD!*/
    class SchemeSetup
    {
    public:
        SchemeSetup(const SystemConfig &c, Scheme s, SlotDims d) : cfg_(c), scheme_(s), dims_(d)
        {
            const std::uint64_t base = derive_seed(c.seed, 0xDE5, static_cast<long>(s), d.t_1, d.t_2);
            switch (s)
            {
            case Scheme::IA:
                combiner_ = design_combiner(c.n_a, c.n_r, d.t_2, c.bs_bits, c.p_w, {c.delta, c.max_iters}, base);
                for (long u = 0; u < c.u; ++u)
                    precoders_.push_back(design_precoder(c.m_a, c.m_r, d.t_1, c.ue_bits, c.p_f,
                                                         {c.delta, c.max_iters}, derive_seed(base, u)));
                break;
            case Scheme::RandomBaseline:
                combiner_ = random_combiner(c.n_a, c.n_r, d.t_2, c.bs_bits, c.p_w, base);
                for (long u = 0; u < c.u; ++u)
                    precoders_.push_back(random_precoder(c.m_a, c.m_r, d.t_1, c.ue_bits, c.p_f, derive_seed(base, u)));
                break;
            case Scheme::CZO:
                w_gram_ = build_zo_gram(c.n_a, d.t_2 * c.n_r, Layout::Concentrated,
                                        zo_gamma_for_power(c.n_a, d.t_2 * c.n_r, c.p_w / static_cast<double>(c.n_r)));
                f_gram_ = build_zo_gram(c.m_a, d.t_1, Layout::Concentrated, zo_gamma_for_power(c.m_a, d.t_1, c.p_f));
                break;
            case Scheme::SZO:
                dims_ = {szo_t_1, szo_t_2};
                w_gram_ = build_zo_gram(c.n_a, szo_t_2 * c.n_r, Layout::Scattered,
                                        zo_gamma_for_power(c.n_a, szo_t_2 * c.n_r, c.p_w / static_cast<double>(c.n_r)));
                f_gram_ = build_zo_gram(c.m_a, szo_t_1, Layout::Scattered, zo_gamma_for_power(c.m_a, szo_t_1, c.p_f));
                cb_bs_ = build_codebook(c.n_a);
                cb_ue_ = build_codebook(c.m_a);
                break;
            }
        }

        Scheme scheme() const { return scheme_; }
        SlotDims dims() const { return dims_; }
        const HybridCombiner &combiner() const { return combiner_; }
        const std::vector<HybridPrecoder> &precoders() const { return precoders_; }

        bool designs_converged() const
        {
            bool ok = combiner_.converged;
            for (const auto &p : precoders_)
                ok = ok && p.converged;
            return ok;
        }

        AngleEstimate estimate(const ChannelRealization &ch, long user, double noise_var, std::uint64_t seed) const
        {
            switch (scheme_)
            {
            case Scheme::IA:
                return estimate_ia(ch, combiner_, precoders_[static_cast<std::size_t>(user)], noise_var, cfg_.k, seed);
            case Scheme::RandomBaseline:
                return estimate_random(ch, combiner_, precoders_[static_cast<std::size_t>(user)], noise_var, cfg_.k,
                                       seed);
            case Scheme::CZO:
                return estimate_czo(ch, *w_gram_, *f_gram_, cfg_.n_r, noise_var, cfg_.k, seed);
            case Scheme::SZO:
                return estimate_szo(ch, *w_gram_, *f_gram_, cb_bs_, cb_ue_, cfg_.n_r, noise_var, cfg_.k, seed,
                                    cfg_.p_f);
            }
            throw std::logic_error("unknown scheme");
        }

    private:
        SystemConfig cfg_;
        Scheme scheme_;
        SlotDims dims_;
        HybridCombiner combiner_;
        std::vector<HybridPrecoder> precoders_;
        std::optional<ZoGram> w_gram_;
        std::optional<ZoGram> f_gram_;
        HierarchicalCodebook cb_bs_;
        HierarchicalCodebook cb_ue_;
    };

    inline ChannelRealization trial_channel(const SystemConfig &c, long trial, long user)
    {
        return generate_channel(c.n_a, c.m_a, c.l_paths, derive_seed(c.seed, 0xC4A, trial, user), c.nlos_var);
    }

    inline double noise_variance(double snr_db, double p_f) { return p_f * std::pow(10.0, -snr_db / 10.0); }

    namespace detail
    {
        inline ResultRow run_point(const SystemConfig &c, const SchemeSetup &setup, double snr_db, long point,
                                   const std::string &sweep_var, double sweep_value, long slots)
        {
            const double nv = noise_variance(snr_db, c.p_f);
            const double snr_lin = std::pow(10.0, snr_db / 10.0);
            double err = 0.0, rate = 0.0, evals = 0.0;
            for (long t = 0; t < c.trials; ++t)
            {
                for (long u = 0; u < c.u; ++u)
                {
                    const auto ch = trial_channel(c, t, u);
                    const auto truth = los_truth(ch);
                    const auto e = setup.estimate(ch, u, nv, derive_seed(c.seed, 0x401, point, t, u));
                    err += std::hypot(angle_distance(e.aoa_hat, truth.first), angle_distance(e.aod_hat, truth.second));
                    rate += link_rate(ch, e.aoa_hat, e.aod_hat, snr_lin);
                    evals += static_cast<double>(e.entry_evaluations);
                }
            }
            const double n = static_cast<double>(c.trials * c.u);
            ResultRow r;
            r.scheme = setup.scheme();
            r.sweep_var = sweep_var;
            r.sweep_value = sweep_value;
            r.trials = c.trials;
            r.mean_nmse = err / n;
            r.mean_sum_rate = rate / static_cast<double>(c.trials);
            r.mean_entry_evals = evals / n;
            r.training_slots = slots;
            r.seed = c.seed;
            return r;
        }
    }

    /*!MD
    # run_experiment
    SNR sweep: one row per (scheme, SNR). Slots sweep: one row per
    (scheme, total slots T) at the first SNR of the list, with
    T_1 = T_2 = floor(sqrt(T/U)); the reported sweep value is the realized
    U T_1 T_2. The scattered scheme has a fixed slot budget and is left out
    of slots sweeps. Channels depend on (seed, trial, user) only, so every
    scheme and sweep point sees the same realizations.
    MD!*/
    inline ExperimentResult run_experiment(const SystemConfig &c)
    {
        validate_or_throw(c);
        ExperimentResult res;
        for (Scheme s : c.schemes)
        {
            if (c.sweep == SweepKind::Snr)
            {
                const SchemeSetup setup(c, s, {c.t_1, c.t_2});
                SystemConfig eff = c;
                eff.t_1 = setup.dims().t_1;
                eff.t_2 = setup.dims().t_2;
                const auto sc = training_slots(eff, s);
                if (sc.warning)
                    res.warnings.push_back(*sc.warning);
                if (!setup.designs_converged())
                    res.warnings.push_back(to_string(s) + ": alternating design did not reach delta within max_iters");
                for (std::size_t i = 0; i < c.snr_db_list.size(); ++i)
                    res.rows.push_back(detail::run_point(c, setup, c.snr_db_list[i], static_cast<long>(i), "snr_db",
                                                         c.snr_db_list[i], sc.slots));
            }
            else
            {
                if (s == Scheme::SZO)
                {
                    res.warnings.push_back("szo: fixed training length, skipped in slots sweep");
                    continue;
                }
                for (std::size_t i = 0; i < c.total_slots_list.size(); ++i)
                {
                    const auto d = slots_for_total(c.total_slots_list[i], c.u);
                    const SchemeSetup setup(c, s, d);
                    SystemConfig eff = c;
                    eff.t_1 = d.t_1;
                    eff.t_2 = d.t_2;
                    const long slots = training_slots(eff, s).slots;
                    if (slots != c.total_slots_list[i])
                        res.warnings.push_back("total slots " + std::to_string(c.total_slots_list[i]) +
                                               " realized as " + std::to_string(slots));
                    if (!setup.designs_converged())
                        res.warnings.push_back(to_string(s) + ": alternating design did not reach delta at T=" +
                                               std::to_string(slots));
                    res.rows.push_back(detail::run_point(c, setup, c.snr_db_list.front(), static_cast<long>(i),
                                                         "total_slots", static_cast<double>(slots), slots));
                }
            }
        }
        return res;
    }

    // 12 significant digits, locale independent.
    inline std::string format_number(double v)
    {
        char buf[64];
        const auto r = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 12);
        if (r.ec != std::errc())
            throw std::runtime_error("format_number: conversion failed");
        return std::string(buf, r.ptr);
    }

    inline double parse_number(const std::string &s)
    {
        double v = 0.0;
        const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
        if (r.ec != std::errc() || r.ptr != s.data() + s.size())
            throw std::runtime_error("parse_number: not a number: " + s);
        return v;
    }

    inline const char *csv_header()
    {
        return "scheme,sweep_var,sweep_value,trials,mean_nmse,mean_sum_rate,mean_entry_evals,training_slots,seed";
    }

    inline std::string results_csv(const ExperimentResult &r)
    {
        std::ostringstream os;
        os.imbue(std::locale::classic());
        os << csv_header() << '\n';
        for (const auto &row : r.rows)
            os << to_string(row.scheme) << ',' << row.sweep_var << ',' << format_number(row.sweep_value) << ','
               << std::to_string(row.trials) << ',' << format_number(row.mean_nmse) << ',' << format_number(row.mean_sum_rate) << ','
               << format_number(row.mean_entry_evals) << ',' << std::to_string(row.training_slots) << ',' << std::to_string(row.seed) << '\n';
        return os.str();
    }
}

#endif
