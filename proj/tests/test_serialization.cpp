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

#include <bsce/serialization.hpp>

#include <gtest/gtest.h>

#include <clocale>
#include <filesystem>

using namespace bsce;

namespace
{
    ResultRow sample_row()
    {
        ResultRow r;
        r.scheme = Scheme::SZO;
        r.sweep_var = "snr_db";
        r.sweep_value = 15.0;
        r.trials = 300;
        r.mean_nmse = 0.0123456789012345;
        r.mean_sum_rate = 41.25;
        r.mean_entry_evals = 27.5;
        r.training_slots = 104;
        r.seed = 2026;
        return r;
    }
}

TEST(Numbers, TwelveSignificantDigits)
{
    EXPECT_EQ(format_number(0.0123456789012345), "0.0123456789012");
    EXPECT_EQ(format_number(15.0), "15");
    EXPECT_EQ(format_number(1e-20), "1e-20");
    EXPECT_DOUBLE_EQ(parse_number("0.5"), 0.5);
    EXPECT_THROW(parse_number("0,5"), std::runtime_error);
}

TEST(Numbers, IgnoreGlobalLocale)
{
    const std::string before = format_number(3.25);
    if (std::setlocale(LC_ALL, "de_DE.UTF-8") != nullptr)
    {
        EXPECT_EQ(format_number(3.25), before);
        ExperimentResult r;
        r.rows.push_back(sample_row());
        EXPECT_NE(results_csv(r).find(",15,300,0.0123456789012,41.25,"), std::string::npos);
        std::setlocale(LC_ALL, "C");
    }
    EXPECT_EQ(before, "3.25");
}

TEST(Csv, RowLayout)
{
    ExperimentResult r;
    r.rows.push_back(sample_row());
    EXPECT_EQ(results_csv(r), std::string(csv_header()) + "\nszo,snr_db,15,300,0.0123456789012,41.25,27.5,104,2026\n");
}

TEST(Json, ResultsRoundTrip)
{
    ExperimentResult r;
    r.rows.push_back(sample_row());
    r.warnings.push_back("w");
    const auto back = results_from_json(json::parse(render_results(r, OutputFormat::Json)));
    ASSERT_EQ(back.rows.size(), 1u);
    EXPECT_EQ(back.rows[0].scheme, Scheme::SZO);
    EXPECT_DOUBLE_EQ(back.rows[0].mean_nmse, rounded(0.0123456789012345));
    EXPECT_EQ(back.rows[0].training_slots, 104);
    EXPECT_EQ(back.rows[0].seed, 2026u);
    EXPECT_EQ(back.warnings, r.warnings);
    EXPECT_EQ(results_csv(back), results_csv(r));
}

TEST(Json, FormatNames)
{
    EXPECT_EQ(format_from_string("csv"), OutputFormat::Csv);
    EXPECT_EQ(format_from_string("json"), OutputFormat::Json);
    EXPECT_THROW(format_from_string("xml"), ConfigError);
}

TEST(Json, MatrixRoundTrip)
{
    CMatrix m(2, 3);
    m << Complex(1, 2), Complex(3, 4), Complex(5, 6), Complex(-1, 0), Complex(0, -0.5), Complex(0.25, 0.125);
    EXPECT_EQ(matrix_from_json(matrix_to_json(m)), m);
    json bad = matrix_to_json(m);
    bad["rows"] = 3;
    EXPECT_THROW(matrix_from_json(bad), InvalidDimension);
}

TEST(Json, ChannelRoundTrip)
{
    const auto ch = generate_channel(16, 8, 3, 4);
    const auto back = channel_from_json(json::parse(to_json(ch).dump()));
    ASSERT_EQ(back.paths().size(), 3u);
    EXPECT_LT((back.matrix() - ch.matrix()).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Json, DesignsSerialize)
{
    const auto w = design_combiner(16, 2, 2, 6, 1.0, {}, 3);
    const auto jw = to_json(w);
    ASSERT_EQ(jw.at("slots").size(), 2u);
    EXPECT_LT((matrix_from_json(jw.at("slots")[0].at("analog")) - w.slots[0].analog).cwiseAbs().maxCoeff(), 1e-11);
    const auto f = design_precoder(8, 1, 2, 4, 1.0, {}, 3);
    EXPECT_EQ(to_json(f).at("slots").size(), 2u);
    const auto g = to_json(build_zo_gram(16, 2, Layout::Scattered));
    EXPECT_EQ(g.at("layout"), "scattered");
    const auto cb = to_json(build_codebook(8), 16);
    EXPECT_EQ(cb.at("layers").size(), 3u);
}

TEST(Config, DefaultsRoundTrip)
{
    const SystemConfig c;
    const auto back = config_from_json(to_json(c));
    EXPECT_EQ(to_json(back), to_json(c));
}

TEST(Config, OverridesFields)
{
    const auto c = config_from_json(json::parse(R"({"n_a": 32, "schemes": ["czo", "ia"], "sweep": "slots"})"));
    EXPECT_EQ(c.n_a, 32);
    EXPECT_EQ(c.m_a, 16);
    ASSERT_EQ(c.schemes.size(), 2u);
    EXPECT_EQ(c.schemes[0], Scheme::CZO);
    EXPECT_EQ(c.sweep, SweepKind::Slots);
}

TEST(Config, ReportsAllProblems)
{
    try
    {
        config_from_json(json::parse(R"({"n_a": "big", "colour": 1, "schemes": ["omp"]})"));
        FAIL() << "expected ConfigError";
    }
    catch (const ConfigError &e)
    {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("n_a"), std::string::npos);
        EXPECT_NE(msg.find("unknown field 'colour'"), std::string::npos);
        EXPECT_NE(msg.find("omp"), std::string::npos);
    }
    EXPECT_THROW(config_from_json(json::array()), ConfigError);
}

TEST(Config, LoadFromFile)
{
    const auto dir = std::filesystem::temp_directory_path() / "bsce_serialization_test";
    std::filesystem::create_directories(dir);
    write_text((dir / "ok.json").string(), R"({"trials": 7})");
    EXPECT_EQ(load_config((dir / "ok.json").string()).trials, 7);
    write_text((dir / "broken.json").string(), "{ not json");
    EXPECT_THROW(load_config((dir / "broken.json").string()), ConfigError);
    EXPECT_THROW(load_config((dir / "missing.json").string()), std::runtime_error);
    std::filesystem::remove_all(dir);
}
