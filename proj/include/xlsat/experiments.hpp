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

#include "xlsat/error.hpp"
#include "xlsat/scenario.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace xlsat
{
    enum class ExperimentKind
    {
        capacity_sweep,
        beamformer_compare,
        gap_study,
        oracle_validation
    };

    const char *experiment_name(ExperimentKind kind) noexcept;
    ExperimentKind parse_experiment_kind(const std::string &name);

    /// Inputs of one experiment run. Empty grids select the documented defaults.
    struct SweepSpec
    {
        ExperimentKind kind = ExperimentKind::capacity_sweep;
        double frequency_hz = 100e9;
        UserRect rect;
        std::size_t users = 100; // K (capacity_sweep, beamformer_compare)
        double threshold = 0.9;
        std::vector<std::uint64_t> m_grid;
        std::vector<std::uint64_t> k_grid;
        std::vector<double> snr_db;
        /// User draws per grid point (capacity_sweep, beamformer_compare, gap_study)
        /// or number of sampled pairs (oracle_validation).
        std::uint64_t trials = 1;
        std::uint64_t seed = 1;
        double noise_power_w = 1.0;
        double beta0 = 1.0;
        std::optional<double> transmit_power_w;
        double target_snr_db = 33.0;
        UserPosition ref_position{1.5, 0.0};
        unsigned jobs = 1;
        bool exact_degenerate_fallback = false;
        double eigen_floor = 1e-12;
        std::vector<std::array<UserPosition, 2>> pairs; // oracle_validation; sampled when empty
        nlohmann::json parameter_sources = nlohmann::json::object();

        void validate() const;
    };

    SweepSpec default_sweep_spec(ExperimentKind kind);

    /// Builds a spec from a request document. Top-level keys are explicit
    /// settings; an optional "scenario" key holds a scenario config whose
    /// frequency, user rectangle, power and noise settings apply where no
    /// explicit setting exists. Precedence: explicit > scenario > default,
    /// recorded in parameter_sources.
    SweepSpec parse_sweep_spec(ExperimentKind kind, const nlohmann::json &request);

    nlohmann::json to_json(const SweepSpec &spec);

    /// Integer, real or missing (written as "nan").
    using Cell = std::variant<std::int64_t, double, std::monostate>;

    struct Table
    {
        std::vector<std::string> columns;
        std::vector<std::vector<Cell>> rows;
    };

    /// Header row then one line per row; doubles in shortest round-trip form.
    std::string to_csv(const Table &table);

    struct ExperimentResult
    {
        std::string name;
        Table table;
        nlohmann::json manifest;
        std::optional<std::string> error; // set when the run stopped early
        ErrorCode error_code = ErrorCode::numeric;
    };

    ExperimentResult capacity_sweep(const SweepSpec &spec);
    ExperimentResult beamformer_compare(const SweepSpec &spec);
    ExperimentResult gap_study(const SweepSpec &spec);
    ExperimentResult oracle_validation(const SweepSpec &spec);
    ExperimentResult run_experiment(const SweepSpec &spec);

    /// Writes <dir>/<name>.csv and <dir>/<name>.manifest.json.
    void write_result(const ExperimentResult &result, const std::filesystem::path &dir);

    /// Default capacity-sweep grid: `points` log-spaced values in [lo, hi]
    /// rounded to integers, deduplicated, plus any `extra` values.
    std::vector<std::uint64_t> log_grid(std::uint64_t lo, std::uint64_t hi, std::size_t points,
                                        std::initializer_list<std::uint64_t> extra = {});
}
