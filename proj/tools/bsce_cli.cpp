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

#include <bsce/bsce.hpp>

#include <CLI11.hpp>

#include <iostream>
#include <optional>

using namespace bsce;

namespace
{
    struct Options
    {
        std::string config;
        std::optional<std::uint64_t> seed;
        std::string out;
        std::string format = "json";
        std::string scheme;
        std::vector<double> snr;
        std::optional<long> trials;
    };

    void add_common(CLI::App *cmd, Options &o)
    {
        cmd->add_option("--config", o.config, "JSON configuration file");
        cmd->add_option("--out", o.out, "output file (default: stdout)");
        cmd->add_option("--scheme", o.scheme, "ia, szo, czo or random")
            ->check(CLI::IsMember({"ia", "szo", "czo", "random"}));
        cmd->add_option("--snr", o.snr, "comma separated SNR list in dB")->delimiter(',');
        cmd->add_option("--trials", o.trials, "Monte Carlo trials per point");
    }

    SystemConfig resolve(const Options &o)
    {
        SystemConfig c = o.config.empty() ? SystemConfig{} : load_config(o.config);
        if (o.seed)
            c.seed = *o.seed;
        if (!o.scheme.empty())
            c.schemes = {scheme_from_string(o.scheme)};
        if (!o.snr.empty())
            c.snr_db_list = o.snr;
        if (o.trials)
            c.trials = *o.trials;
        validate_or_throw(c);
        return c;
    }

    void emit(const Options &o, const std::string &text)
    {
        if (o.out.empty())
            std::cout << text << std::flush;
        else
            write_text(o.out, text);
    }

    json design_json(const SystemConfig &c, Scheme s)
    {
        const SchemeSetup setup(c, s, {c.t_1, c.t_2});
        json j{{"scheme", to_string(s)}, {"seed", c.seed}, {"t_1", setup.dims().t_1}, {"t_2", setup.dims().t_2}};
        if (s == Scheme::IA || s == Scheme::RandomBaseline)
        {
            j["combiner"] = to_json(setup.combiner());
            json pre = json::array();
            for (const auto &f : setup.precoders())
                pre.push_back(to_json(f));
            j["precoders"] = pre;
            return j;
        }
        const Layout l = s == Scheme::SZO ? Layout::Scattered : Layout::Concentrated;
        const long t3 = setup.dims().t_2 * c.n_r;
        const auto wg = build_zo_gram(c.n_a, t3, l, zo_gamma_for_power(c.n_a, t3, c.p_w / static_cast<double>(c.n_r)));
        const auto fg = build_zo_gram(c.m_a, setup.dims().t_1, l, zo_gamma_for_power(c.m_a, setup.dims().t_1, c.p_f));
        j["combiner_gram"] = to_json(wg);
        j["precoder_gram"] = to_json(fg);
        j["combiner"] = to_json(zo_combiner(wg, c.n_r));
        j["precoders"] = json::array({to_json(zo_precoder(fg))});
        return j;
    }

    int run_design(const Options &o)
    {
        const auto c = resolve(o);
        json out = json::array();
        for (Scheme s : c.schemes)
            out.push_back(design_json(c, s));
        emit(o, (out.size() == 1 ? out[0] : out).dump(2) + "\n");
        return 0;
    }

    int run_estimate(const Options &o)
    {
        const auto c = resolve(o);
        const double snr = c.snr_db_list.front();
        const auto ch = trial_channel(c, 0, 0);
        const auto [aoa, aod] = los_truth(ch);
        json results = json::array();
        for (Scheme s : c.schemes)
        {
            const SchemeSetup setup(c, s, {c.t_1, c.t_2});
            const auto e = setup.estimate(ch, 0, noise_variance(snr, c.p_f), derive_seed(c.seed, 0x401, 0, 0, 0));
            json j = to_json(e);
            j["error"] = rounded(std::hypot(angle_distance(e.aoa_hat, aoa), angle_distance(e.aod_hat, aod)));
            results.push_back(j);
        }
        const json out{{"seed", c.seed},
                       {"snr_db", snr},
                       {"truth", {{"aoa", rounded(aoa)}, {"aod", rounded(aod)}}},
                       {"channel", to_json(ch)},
                       {"estimates", results}};
        emit(o, out.dump(2) + "\n");
        return 0;
    }

    int run_experiment_cmd(const Options &o)
    {
        const auto c = resolve(o);
        const auto r = run_experiment(c);
        for (const auto &w : r.warnings)
            std::cerr << "warning: " << w << '\n';
        emit(o, render_results(r, format_from_string(o.format)));
        return 0;
    }

    int run_codebook(const Options &o)
    {
        const auto c = resolve(o);
        const json out{{"bs", to_json(build_codebook(c.n_a))}, {"ue", to_json(build_codebook(c.m_a))}};
        emit(o, out.dump(2) + "\n");
        return 0;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Beamspace channel estimation for hybrid mmWave massive MIMO"};
    app.require_subcommand(1);
    Options o;

    auto *design = app.add_subcommand("design", "emit combiner/precoder designs as JSON");
    add_common(design, o);
    design->add_option("--seed", o.seed, "experiment seed");

    auto *estimate = app.add_subcommand("estimate", "single estimation run, prints the angle estimate as JSON");
    add_common(estimate, o);
    estimate->add_option("--seed", o.seed, "experiment seed");

    auto *experiment = app.add_subcommand("experiment", "Monte Carlo sweep, CSV or JSON results");
    add_common(experiment, o);
    experiment->add_option("--seed", o.seed, "experiment seed")->required();
    experiment->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    auto *codebook = app.add_subcommand("codebook", "emit hierarchical codebooks and beam patterns as JSON");
    add_common(codebook, o);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::Success &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return 2;
    }

    try
    {
        if (*design)
            return run_design(o);
        if (*estimate)
            return run_estimate(o);
        if (*experiment)
            return run_experiment_cmd(o);
        return run_codebook(o);
    }
    catch (const ConfigError &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
