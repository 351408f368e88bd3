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

#include "xlsat/scenario_config.hpp"
#include "xlsat/error.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace xlsat
{
    using nlohmann::json;

    namespace
    {
        const std::set<std::string> known_keys = {
            "frequency_hz", "users", "user_rect", "transmit_power_w", "target_snr_db",
            "ref_position", "noise_power_w", "beta0", "element_count",
            "derived"}; // "derived" is informational and recomputed on load

        double number_at(const json &obj, const char *key)
        {
            const auto it = obj.find(key);
            if (it == obj.end())
                fail(ErrorCode::validation, std::string("missing key '") + key + "'");
            if (!it->is_number())
                fail(ErrorCode::validation, std::string("key '") + key + "' must be a number");
            return it->get<double>();
        }

        UserPosition parse_position(const json &j, const std::string &where)
        {
            if (!j.is_object())
                fail(ErrorCode::validation, where + " must be an object {x, y}");
            UserPosition p{number_at(j, "x"), number_at(j, "y")};
            try
            {
                p.validate();
            }
            catch (const Error &e)
            {
                fail(ErrorCode::validation, where + ": " + e.what());
            }
            return p;
        }

        std::uint64_t unsigned_at(const json &obj, const char *key)
        {
            const auto it = obj.find(key);
            if (it == obj.end())
                fail(ErrorCode::validation, std::string("missing key '") + key + "'");
            if (!it->is_number_unsigned())
                fail(ErrorCode::validation, std::string("key '") + key + "' must be a non-negative integer");
            return it->get<std::uint64_t>();
        }
    }

    ScenarioConfig parse_scenario_config(const json &doc)
    {
        if (!doc.is_object())
            fail(ErrorCode::validation, "scenario config must be a JSON object");
        for (const auto &[key, value] : doc.items())
            if (!known_keys.contains(key))
                fail(ErrorCode::validation, "unknown config key '" + key + "'");

        ScenarioConfig cfg;
        if (doc.contains("frequency_hz"))
            cfg.frequency_hz = number_at(doc, "frequency_hz");
        if (doc.contains("noise_power_w"))
            cfg.noise_power_w = number_at(doc, "noise_power_w");
        if (doc.contains("beta0"))
            cfg.beta0 = number_at(doc, "beta0");
        if (doc.contains("element_count"))
        {
            cfg.element_count = unsigned_at(doc, "element_count");
            if (cfg.element_count < 1)
                fail(ErrorCode::validation, "element_count must be >= 1");
        }

        const bool has_users = doc.contains("users");
        const bool has_rect = doc.contains("user_rect");
        if (has_users == has_rect)
            fail(ErrorCode::validation, "exactly one of 'users' or 'user_rect' is required");
        if (has_users)
        {
            const auto &arr = doc.at("users");
            if (!arr.is_array() || arr.empty())
                fail(ErrorCode::validation, "'users' must be a non-empty array of {x, y}");
            std::vector<UserPosition> users;
            for (std::size_t i = 0; i < arr.size(); ++i)
                users.push_back(parse_position(arr[i], "users[" + std::to_string(i) + "]"));
            cfg.users = std::move(users);
        }
        else
        {
            const auto &r = doc.at("user_rect");
            if (!r.is_object())
                fail(ErrorCode::validation, "'user_rect' must be an object");
            RectSampling s;
            s.rect = UserRect{number_at(r, "x_min"), number_at(r, "x_max"), number_at(r, "y_min"), number_at(r, "y_max")};
            s.rect.validate();
            s.count = unsigned_at(r, "count");
            if (s.count < 1)
                fail(ErrorCode::validation, "user_rect.count must be >= 1");
            s.seed = r.contains("seed") ? unsigned_at(r, "seed") : 0;
            cfg.user_rect = s;
        }

        const bool has_power = doc.contains("transmit_power_w");
        const bool has_target = doc.contains("target_snr_db");
        if (has_power == has_target)
            fail(ErrorCode::validation, "exactly one of 'transmit_power_w' or 'target_snr_db' is required");
        if (has_power)
        {
            cfg.transmit_power_w = number_at(doc, "transmit_power_w");
            if (doc.contains("ref_position"))
                fail(ErrorCode::validation, "'ref_position' only applies together with 'target_snr_db'");
        }
        else
        {
            cfg.target_snr_db = number_at(doc, "target_snr_db");
            if (!doc.contains("ref_position"))
                fail(ErrorCode::validation, "'target_snr_db' requires 'ref_position'");
            cfg.ref_position = parse_position(doc.at("ref_position"), "ref_position");
        }

        // Fails early on the remaining scalar invariants.
        build_scenario(cfg).validate();
        return cfg;
    }

    ScenarioConfig load_scenario_config(const std::filesystem::path &path)
    {
        std::ifstream in(path);
        if (!in)
            fail(ErrorCode::io, "cannot open config file '" + path.string() + "'");
        json doc;
        try
        {
            in >> doc;
        }
        catch (const json::parse_error &e)
        {
            fail(ErrorCode::validation, "config '" + path.string() + "' is not valid JSON: " + e.what());
        }
        return parse_scenario_config(doc);
    }

    json to_json(const ScenarioConfig &cfg)
    {
        const CarrierSpec carrier(cfg.frequency_hz);
        json j;
        j["frequency_hz"] = cfg.frequency_hz;
        j["element_count"] = cfg.element_count;
        j["noise_power_w"] = cfg.noise_power_w;
        j["beta0"] = cfg.beta0;
        if (cfg.users)
        {
            j["users"] = json::array();
            for (const auto &u : *cfg.users)
                j["users"].push_back({{"x", u.x}, {"y", u.y}});
        }
        if (cfg.user_rect)
        {
            const auto &s = *cfg.user_rect;
            j["user_rect"] = {{"x_min", s.rect.x_min}, {"x_max", s.rect.x_max}, {"y_min", s.rect.y_min},
                              {"y_max", s.rect.y_max}, {"count", s.count}, {"seed", s.seed}};
        }
        json derived{{"wavelength_m", carrier.wavelength()}};
        if (cfg.target_snr_db)
        {
            j["target_snr_db"] = *cfg.target_snr_db;
            j["ref_position"] = {{"x", cfg.ref_position->x}, {"y", cfg.ref_position->y}};
            derived["transmit_power_w"] =
                calibrate_power(*cfg.target_snr_db, *cfg.ref_position, carrier, cfg.noise_power_w, cfg.beta0);
            derived["power_calibration"] = "power_limit";
        }
        else
        {
            j["transmit_power_w"] = *cfg.transmit_power_w;
            derived["transmit_power_w"] = *cfg.transmit_power_w;
            derived["power_calibration"] = "explicit";
        }
        j["derived"] = derived;
        return j;
    }

    Scenario build_scenario(const ScenarioConfig &cfg)
    {
        Scenario s;
        s.carrier = CarrierSpec(cfg.frequency_hz);
        s.geometry.element_count = cfg.element_count;
        if (cfg.users)
            s.users = *cfg.users;
        else if (cfg.user_rect)
            s.users = sample_users(cfg.user_rect->rect, cfg.user_rect->count, cfg.user_rect->seed);
        s.budget.noise_power = cfg.noise_power_w;
        s.budget.beta0 = cfg.beta0;
        if (cfg.transmit_power_w)
            s.budget.transmit_power = *cfg.transmit_power_w;
        else if (cfg.target_snr_db && cfg.ref_position)
            s.budget.transmit_power = calibrate_power(*cfg.target_snr_db, *cfg.ref_position, s.carrier,
                                                      cfg.noise_power_w, cfg.beta0);
        s.validate();
        return s;
    }
}
