// xlsat: near-field XL-MIMO capacity saturation and beamforming toolkit
// Copyright (C) 2026 The xlsat authors
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

#include "xlsat/experiments.hpp"
#include "xlsat/capacity.hpp"
#include "xlsat/saturation.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace xlsat;
using nlohmann::json;

namespace
{
    SweepSpec parse(ExperimentKind kind, const char *text) { return parse_sweep_spec(kind, json::parse(text)); }

    ErrorCode code_of(auto &&fn)
    {
        try
        {
            fn();
        }
        catch (const Error &e)
        {
            return e.code();
        }
        FAIL("expected an xlsat::Error");
        return ErrorCode::numeric;
    }
}

TEST_CASE("experiment names round-trip")
{
    for (auto k : {ExperimentKind::capacity_sweep, ExperimentKind::beamformer_compare, ExperimentKind::gap_study,
                   ExperimentKind::oracle_validation})
        CHECK(parse_experiment_kind(experiment_name(k)) == k);
    CHECK(code_of([] { parse_experiment_kind("nope"); }) == ErrorCode::invalid_argument);
}

TEST_CASE("defaults per experiment")
{
    const auto cap = default_sweep_spec(ExperimentKind::capacity_sweep);
    CHECK(cap.users == 100);
    CHECK(cap.snr_db == std::vector<double>{0, 200});
    const auto bf = default_sweep_spec(ExperimentKind::beamformer_compare);
    CHECK(bf.rect.x_max == 2.0);
    CHECK(bf.users == 10);
    CHECK(bf.target_snr_db == 33.0);
    const auto gap = default_sweep_spec(ExperimentKind::gap_study);
    CHECK(gap.k_grid == std::vector<std::uint64_t>{10, 50, 100, 200, 500, 1000});
    CHECK(gap.parameter_sources.at("seed") == "default");
}

TEST_CASE("precedence: explicit over scenario over default")
{
    const auto s = parse(ExperimentKind::capacity_sweep, R"({
        "scenario": {"frequency_hz": 28e9,
                     "user_rect": {"x_min": 1, "x_max": 3, "y_min": -2, "y_max": 2, "count": 7, "seed": 5},
                     "transmit_power_w": 2},
        "seed": 9, "m_grid": [10, 20]})");
    CHECK(s.frequency_hz == 28e9);
    CHECK(s.users == 7);
    CHECK(s.seed == 9);
    CHECK(s.transmit_power_w == 2.0);
    CHECK(s.m_grid == std::vector<std::uint64_t>{10, 20});
    CHECK(s.parameter_sources.at("frequency_hz") == "config");
    CHECK(s.parameter_sources.at("seed") == "flag");
    CHECK(s.parameter_sources.at("m_grid") == "flag");
    CHECK(s.parameter_sources.at("threshold") == "default");
}

TEST_CASE("spec validation")
{
    auto bad = [](const char *text) { return code_of([&] { parse(ExperimentKind::gap_study, text); }); };
    CHECK(bad(R"({"bogus": 1})") == ErrorCode::validation);
    CHECK(bad(R"({"k_grid": [10, 5]})") == ErrorCode::validation);
    CHECK(bad(R"({"k_grid": [0, 5]})") == ErrorCode::validation);
    CHECK(bad(R"({"trials": 0})") == ErrorCode::validation);
    CHECK(bad(R"({"threshold": 1.5})") == ErrorCode::validation);
    CHECK(bad(R"({"experiment": "capacity_sweep"})") == ErrorCode::validation);
    CHECK(bad(R"({"seed": "x"})") == ErrorCode::validation);
    CHECK(bad(R"({"pairs": [[1, 0, 2]]})") == ErrorCode::validation);
    CHECK(bad(R"({"scenario": {"users": [{"x": 1, "y": 0}], "transmit_power_w": 1}})") == ErrorCode::validation);
    CHECK(bad(R"([])") == ErrorCode::validation);
}

TEST_CASE("csv formatting")
{
    Table t;
    t.columns = {"a", "b", "c"};
    t.rows.push_back({std::int64_t{3}, 0.1, std::monostate{}});
    t.rows.push_back({std::int64_t{-1}, 1e300, std::numeric_limits<double>::infinity()});
    CHECK(to_csv(t) == "a,b,c\n3,0.1,nan\n-1,1e+300,nan\n");
}

TEST_CASE("log grid")
{
    const auto g = log_grid(100, 10000, 3, {555});
    CHECK(g == std::vector<std::uint64_t>{100, 555, 1000, 10000});
    CHECK(log_grid(5, 5, 4) == std::vector<std::uint64_t>{5});
}

TEST_CASE("capacity sweep rows, normalization and determinism")
{
    auto spec = parse(ExperimentKind::capacity_sweep, R"({"users": 4, "m_grid": [50, 200, 800], "trials": 2,
                                                          "snr_db": [0, 30]})");
    const auto a = capacity_sweep(spec);
    REQUIRE_FALSE(a.error);
    REQUIRE(a.table.rows.size() == 6);
    CHECK(a.table.columns == std::vector<std::string>{"M", "snr_db", "capacity_bits", "normalized_capacity",
                                                       "predicted_saturation_M"});
    CHECK(std::get<double>(a.table.rows[4][3]) == 1.0);
    CHECK(std::get<double>(a.table.rows[0][3]) < 1.0);
    CHECK(a.manifest.at("row_count") == 6);
    CHECK(a.manifest.at("predicted_saturation_M") ==
          ergodic_summary(UserRect{}, Threshold(0.9), 4, CarrierSpec(100e9).wavelength()).expected_element_count);

    // the first trial's users are stream 0 of the seed
    Scenario s;
    s.geometry.element_count = 50;
    const auto d0 = sample_users(UserRect{}, 4, spec.seed, 0);
    const auto d1 = sample_users(UserRect{}, 4, spec.seed, 1);
    s.users = d0;
    double c = shannon_capacity(exact_gram(channel_matrix(s)), 1.0);
    s.users = d1;
    c += shannon_capacity(exact_gram(channel_matrix(s)), 1.0);
    CHECK(std::get<double>(a.table.rows[0][2]) == doctest::Approx(c / 2).epsilon(1e-12));

    spec.jobs = 3;
    const auto b = capacity_sweep(spec);
    CHECK(to_csv(a.table) == to_csv(b.table));
}

TEST_CASE("a failing grid point keeps the completed prefix")
{
    // M * K beyond the channel guard on the last point
    const auto spec = parse(ExperimentKind::capacity_sweep, R"({"users": 10, "m_grid": [20, 40, 100000000],
                                                                "snr_db": [0]})");
    const auto r = capacity_sweep(spec);
    REQUIRE(r.error);
    CHECK(r.error_code == ErrorCode::resource);
    CHECK(r.table.rows.size() == 2);
    CHECK(std::holds_alternative<std::monostate>(r.table.rows[0][3])); // no anchor, no normalization
    CHECK(r.manifest.at("error").at("code") == "resource");
}

TEST_CASE("beamformer comparison")
{
    const auto spec = parse(ExperimentKind::beamformer_compare, R"({"m_grid": [100, 20000], "users": 4})");
    const auto r = beamformer_compare(spec);
    REQUIRE_FALSE(r.error);
    REQUIRE(r.table.rows.size() == 2);
    const auto &last = r.table.rows[1];
    const double cap = std::get<double>(last[1]), mrc = std::get<double>(last[2]), zf = std::get<double>(last[3]),
                 mmse = std::get<double>(last[4]), mzf = std::get<double>(last[5]);
    CHECK(cap >= mmse);
    CHECK(mmse >= zf);
    CHECK(zf >= mrc);
    CHECK(std::abs(mzf - zf) / zf < 0.01);
    const double P = r.manifest.at("transmit_power_w");
    CHECK(P == doctest::Approx(calibrate_power(33, {1.5, 0}, CarrierSpec(100e9), 1, 1)));
}

TEST_CASE("gap study")
{
    const auto spec = parse(ExperimentKind::gap_study, R"({"k_grid": [5, 20], "trials": 4})");
    const auto r = gap_study(spec);
    REQUIRE(r.table.rows.size() == 2);
    CHECK(r.manifest.at("checks").at("det_R_le_1") == true);
    CHECK(r.manifest.at("checks").at("gap_nonnegative") == true);
    double mean = 0;
    for (std::uint64_t d = 0; d < 4; ++d)
        mean += normalized_gap_bound(sample_users(UserRect{}, 20, spec.seed, (20ull << 24) + d),
                                     CarrierSpec(100e9).wavelength())
                    .value;
    CHECK(std::get<double>(r.table.rows[1][1]) == doctest::Approx(mean / 4).epsilon(1e-12));
}

TEST_CASE("oracle validation marks degenerate pairs")
{
    const auto spec = parse(ExperimentKind::oracle_validation,
                            R"({"m_grid": [100, 1000], "pairs": [[2, 0, 2.0001, 1], [1, 0, 5, 1]]})");
    const auto r = oracle_validation(spec);
    REQUIRE(r.table.rows.size() == 4);
    CHECK(std::get<std::int64_t>(r.table.rows[0][5]) == 1);
    CHECK(std::holds_alternative<std::monostate>(r.table.rows[0][2]));
    CHECK(std::get<std::int64_t>(r.table.rows[3][5]) == 0);
    CHECK(std::get<double>(r.table.rows[3][2]) < 0.05);
    CHECK(r.manifest.at("degenerate_cells") == 2);
}

TEST_CASE("results are written to disk")
{
    const auto dir = std::filesystem::temp_directory_path() / "xlsat_test_results";
    std::filesystem::remove_all(dir);
    const auto spec = parse(ExperimentKind::gap_study, R"({"k_grid": [3], "trials": 2})");
    const auto r = gap_study(spec);
    write_result(r, dir);
    std::ifstream csv(dir / "gap_study.csv");
    std::stringstream ss;
    ss << csv.rdbuf();
    CHECK(ss.str() == to_csv(r.table));
    std::ifstream man(dir / "gap_study.manifest.json");
    CHECK(json::parse(man).at("experiment") == "gap_study");
    std::filesystem::remove_all(dir);
}
