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

#ifndef BSCE_SERIALIZATION_HPP
#define BSCE_SERIALIZATION_HPP

#include "codebook.hpp"
#include "harness.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <string>

namespace bsce
{
    using json = nlohmann::json;

    enum class OutputFormat
    {
        Csv,
        Json
    };

    inline OutputFormat format_from_string(const std::string &s)
    {
        if (s == "csv")
            return OutputFormat::Csv;
        if (s == "json")
            return OutputFormat::Json;
        throw ConfigError("unknown output format '" + s + "' (expected csv or json)");
    }

    // Rounded to the 12 significant digits used by every emitted number.
    inline double rounded(double v) { return parse_number(format_number(v)); }

    // {"rows": r, "cols": c, "re": [...], "im": [...]}, row-major.
    inline json matrix_to_json(const CMatrix &m)
    {
        json re = json::array();
        json im = json::array();
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            for (Eigen::Index c = 0; c < m.cols(); ++c)
            {
                re.push_back(rounded(m(r, c).real()));
                im.push_back(rounded(m(r, c).imag()));
            }
        return {{"rows", m.rows()}, {"cols", m.cols()}, {"re", re}, {"im", im}};
    }

    inline CMatrix matrix_from_json(const json &j)
    {
        const auto rows = j.at("rows").get<Eigen::Index>();
        const auto cols = j.at("cols").get<Eigen::Index>();
        const auto &re = j.at("re");
        const auto &im = j.at("im");
        if (rows < 0 || cols < 0 || re.size() != static_cast<std::size_t>(rows * cols) || im.size() != re.size())
            throw InvalidDimension("matrix_from_json: inconsistent matrix shape");
        CMatrix m(rows, cols);
        for (Eigen::Index r = 0; r < rows; ++r)
            for (Eigen::Index c = 0; c < cols; ++c)
            {
                const auto i = static_cast<std::size_t>(r * cols + c);
                m(r, c) = Complex(re[i].get<double>(), im[i].get<double>());
            }
        return m;
    }

    inline json to_json(const ChannelRealization &ch)
    {
        json paths = json::array();
        for (const auto &p : ch.paths())
            paths.push_back({{"gain_re", rounded(p.gain.real())},
                             {"gain_im", rounded(p.gain.imag())},
                             {"aoa", rounded(p.aoa)},
                             {"aod", rounded(p.aod)}});
        return {{"n_a", ch.n_a()}, {"m_a", ch.m_a()}, {"paths", paths}};
    }

    inline ChannelRealization channel_from_json(const json &j)
    {
        std::vector<ChannelPath> paths;
        for (const auto &p : j.at("paths"))
            paths.push_back({Complex(p.at("gain_re").get<double>(), p.at("gain_im").get<double>()),
                             p.at("aoa").get<double>(), p.at("aod").get<double>()});
        return ChannelRealization(j.at("n_a").get<long>(), j.at("m_a").get<long>(), std::move(paths));
    }

    inline json to_json(const HybridCombiner &w)
    {
        json slots = json::array();
        for (const auto &s : w.slots)
            slots.push_back({{"digital", matrix_to_json(s.digital)}, {"analog", matrix_to_json(s.analog)}});
        json eps = json::array();
        for (const auto &e : w.epsilon)
        {
            json trace = json::array();
            for (double x : e)
                trace.push_back(rounded(x));
            eps.push_back(trace);
        }
        return {{"kind", "combiner"},       {"converged", w.converged}, {"exact", w.exact},
                {"slots", slots},           {"epsilon", eps},           {"stacked", matrix_to_json(w.stacked)}};
    }

    inline json to_json(const HybridPrecoder &f)
    {
        json slots = json::array();
        for (const auto &s : f.slots)
            slots.push_back({{"analog", matrix_to_json(s.analog)}, {"digital", matrix_to_json(s.digital)}});
        json eps = json::array();
        for (const auto &e : f.epsilon)
        {
            json trace = json::array();
            for (double x : e)
                trace.push_back(rounded(x));
            eps.push_back(trace);
        }
        return {{"kind", "precoder"},         {"converged", f.converged}, {"exact", f.exact},
                {"slots", slots},             {"epsilon", eps},           {"effective", matrix_to_json(f.effective)}};
    }

    inline json to_json(const ZoGram &g)
    {
        return {{"dim", g.dim},
                {"active", g.active},
                {"layout", to_string(g.layout)},
                {"scale", rounded(g.scale)},
                {"support", g.support()}};
    }

    // Codewords per layer plus the normalized beam pattern |c^H alpha(n, theta)|
    // on `pattern_points` angles in [-1, 1).
    inline json to_json(const HierarchicalCodebook &cb, long pattern_points = 256)
    {
        json layers = json::array();
        for (int s = 1; s <= cb.layers(); ++s)
        {
            json words = json::array();
            for (long c = 0; c < cb.size(s); ++c)
            {
                const CVector &v = cb.codeword(s, c);
                const auto cov = cb.coverage(s, c);
                json pattern = json::array();
                for (long i = 0; i < pattern_points; ++i)
                {
                    const double th = grid_angle(i, pattern_points);
                    pattern.push_back(rounded(std::abs(v.dot(steering_vector(cb.n(), th))) / v.norm()));
                }
                words.push_back({{"index", c},
                                 {"coverage", {rounded(cov.lo), rounded(cov.hi)}},
                                 {"codeword", matrix_to_json(v)},
                                 {"pattern", pattern}});
            }
            layers.push_back({{"layer", s}, {"codewords", words}});
        }
        json grid = json::array();
        for (long i = 0; i < pattern_points; ++i)
            grid.push_back(rounded(grid_angle(i, pattern_points)));
        return {{"n", cb.n()}, {"layers", layers}, {"pattern_angles", grid}};
    }

    inline json to_json(const AngleEstimate &e)
    {
        return {{"scheme", to_string(e.scheme)},
                {"aoa_hat", rounded(e.aoa_hat)},
                {"aod_hat", rounded(e.aod_hat)},
                {"aoa_index", e.aoa_index.value},
                {"aod_index", e.aod_index.value},
                {"entry_evaluations", e.entry_evaluations}};
    }

    inline json to_json(const SystemConfig &c)
    {
        json schemes = json::array();
        for (Scheme s : c.schemes)
            schemes.push_back(to_string(s));
        return {{"n_a", c.n_a},
                {"m_a", c.m_a},
                {"n_r", c.n_r},
                {"m_r", c.m_r},
                {"u", c.u},
                {"k", c.k},
                {"t_1", c.t_1},
                {"t_2", c.t_2},
                {"bs_bits", c.bs_bits},
                {"ue_bits", c.ue_bits},
                {"l_paths", c.l_paths},
                {"nlos_var", c.nlos_var},
                {"snr_db_list", c.snr_db_list},
                {"trials", c.trials},
                {"delta", c.delta},
                {"seed", c.seed},
                {"schemes", schemes},
                {"p_w", c.p_w},
                {"p_f", c.p_f},
                {"max_iters", c.max_iters},
                {"sweep", c.sweep == SweepKind::Snr ? "snr" : "slots"},
                {"total_slots_list", c.total_slots_list}};
    }

    /*!MD
    # config_from_json
    Starts from the defaults and overrides every field present. Unknown keys
    and type mismatches are collected and reported together as a
    ConfigError.
    MD!*/
    inline SystemConfig config_from_json(const json &j, SystemConfig c = {})
    {
        if (!j.is_object())
            throw ConfigError("config: top-level JSON value must be an object");
        std::vector<std::string> errors;
        auto field = [&](const char *name, auto &dst)
        {
            if (!j.contains(name))
                return;
            try
            {
                dst = j.at(name).get<std::remove_reference_t<decltype(dst)>>();
            }
            catch (const json::exception &e)
            {
                errors.push_back(std::string(name) + ": " + e.what());
            }
        };
        field("n_a", c.n_a);
        field("m_a", c.m_a);
        field("n_r", c.n_r);
        field("m_r", c.m_r);
        field("u", c.u);
        field("k", c.k);
        field("t_1", c.t_1);
        field("t_2", c.t_2);
        field("bs_bits", c.bs_bits);
        field("ue_bits", c.ue_bits);
        field("l_paths", c.l_paths);
        field("nlos_var", c.nlos_var);
        field("snr_db_list", c.snr_db_list);
        field("trials", c.trials);
        field("delta", c.delta);
        field("seed", c.seed);
        field("p_w", c.p_w);
        field("p_f", c.p_f);
        field("max_iters", c.max_iters);
        field("total_slots_list", c.total_slots_list);
        if (j.contains("schemes"))
        {
            try
            {
                std::vector<Scheme> s;
                for (const auto &x : j.at("schemes"))
                    s.push_back(scheme_from_string(x.get<std::string>()));
                c.schemes = s;
            }
            catch (const std::exception &e)
            {
                errors.push_back(std::string("schemes: ") + e.what());
            }
        }
        if (j.contains("sweep"))
        {
            const auto &v = j.at("sweep");
            if (v == "snr")
                c.sweep = SweepKind::Snr;
            else if (v == "slots")
                c.sweep = SweepKind::Slots;
            else
                errors.push_back("sweep: expected \"snr\" or \"slots\"");
        }
        static const std::set<std::string> known{"n_a",     "m_a",     "n_r",       "m_r",    "u",      "k",
                                                 "t_1",     "t_2",     "bs_bits",   "ue_bits", "l_paths", "nlos_var",
                                                 "snr_db_list", "trials", "delta",  "seed",   "schemes", "p_w",
                                                 "p_f",     "max_iters", "sweep",   "total_slots_list"};
        for (auto it = j.begin(); it != j.end(); ++it)
            if (!known.count(it.key()))
                errors.push_back("unknown field '" + it.key() + "'");
        if (!errors.empty())
        {
            std::string msg = "invalid configuration:";
            for (const auto &e : errors)
                msg += "\n  - " + e;
            throw ConfigError(msg);
        }
        return c;
    }

    inline SystemConfig load_config(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw std::runtime_error("cannot open config file '" + path + "'");
        json j;
        try
        {
            in >> j;
        }
        catch (const json::parse_error &e)
        {
            throw ConfigError("config '" + path + "': " + e.what());
        }
        return config_from_json(j);
    }

    inline json results_to_json(const ExperimentResult &r)
    {
        json rows = json::array();
        for (const auto &row : r.rows)
            rows.push_back({{"scheme", to_string(row.scheme)},
                            {"sweep_var", row.sweep_var},
                            {"sweep_value", rounded(row.sweep_value)},
                            {"trials", row.trials},
                            {"mean_nmse", rounded(row.mean_nmse)},
                            {"mean_sum_rate", rounded(row.mean_sum_rate)},
                            {"mean_entry_evals", rounded(row.mean_entry_evals)},
                            {"training_slots", row.training_slots},
                            {"seed", row.seed}});
        return {{"rows", rows}, {"warnings", r.warnings}};
    }

    inline ExperimentResult results_from_json(const json &j)
    {
        ExperimentResult r;
        for (const auto &x : j.at("rows"))
        {
            ResultRow row;
            row.scheme = scheme_from_string(x.at("scheme").get<std::string>());
            row.sweep_var = x.at("sweep_var").get<std::string>();
            row.sweep_value = x.at("sweep_value").get<double>();
            row.trials = x.at("trials").get<long>();
            row.mean_nmse = x.at("mean_nmse").get<double>();
            row.mean_sum_rate = x.at("mean_sum_rate").get<double>();
            row.mean_entry_evals = x.at("mean_entry_evals").get<double>();
            row.training_slots = x.at("training_slots").get<long>();
            row.seed = x.at("seed").get<std::uint64_t>();
            r.rows.push_back(row);
        }
        if (j.contains("warnings"))
            r.warnings = j.at("warnings").get<std::vector<std::string>>();
        return r;
    }

    inline std::string render_results(const ExperimentResult &r, OutputFormat fmt)
    {
        if (fmt == OutputFormat::Csv)
            return results_csv(r);
        return results_to_json(r).dump(2) + "\n";
    }

    inline void write_text(const std::string &path, const std::string &text)
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot open '" + path + "' for writing");
        out << text;
        out.flush();
        if (!out)
            throw std::runtime_error("write to '" + path + "' failed");
    }

    inline void emit_results(const ExperimentResult &r, const std::string &path, OutputFormat fmt)
    {
        write_text(path, render_results(r, fmt));
    }
}

#endif
