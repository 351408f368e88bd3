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

#pragma once

#include "xlsat/scenario.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>

namespace xlsat
{
    /// Users drawn from a rectangle rather than listed explicitly.
    struct RectSampling
    {
        UserRect rect;
        std::size_t count = 1;
        std::uint64_t seed = 0;
    };

    /// Parsed scenario config document (see docs/scenario_config.schema.json).
    ///
    /// Exactly one of `users` / `user_rect` is set, and exactly one of
    /// `transmit_power_w` / `target_snr_db` (the latter with `ref_position`).
    struct ScenarioConfig
    {
        double frequency_hz = 100e9;
        std::optional<std::vector<UserPosition>> users;
        std::optional<RectSampling> user_rect;
        std::optional<double> transmit_power_w;
        std::optional<double> target_snr_db;
        std::optional<UserPosition> ref_position;
        double noise_power_w = 1.0;
        double beta0 = 1.0;
        std::size_t element_count = 1000;
    };

    /// Parses and validates; unknown keys and unit-less dB keys are rejected.
    ScenarioConfig parse_scenario_config(const nlohmann::json &doc);
    ScenarioConfig load_scenario_config(const std::filesystem::path &path);

    /// Normalized echo with every default filled in.
    nlohmann::json to_json(const ScenarioConfig &config);

    /// Resolves sampling and power calibration into a concrete scenario.
    Scenario build_scenario(const ScenarioConfig &config);
}
