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

#include "xlsat/report_json.hpp"
#include "xlsat/error.hpp"

namespace xlsat
{
    using nlohmann::json;

    json to_json(const UserRect &r)
    {
        return {{"x_min", r.x_min}, {"x_max", r.x_max}, {"y_min", r.y_min}, {"y_max", r.y_max}};
    }

    UserRect rect_from_json(const json &j)
    {
        if (!j.is_object())
            fail(ErrorCode::validation, "rectangle must be an object {x_min, x_max, y_min, y_max}");
        UserRect r;
        try
        {
            r = UserRect{j.at("x_min").get<double>(), j.at("x_max").get<double>(), j.at("y_min").get<double>(),
                         j.at("y_max").get<double>()};
        }
        catch (const json::exception &e)
        {
            fail(ErrorCode::validation, std::string("bad rectangle: ") + e.what());
        }
        r.validate();
        return r;
    }

    json to_json(const ErgodicEstimate &e)
    {
        json j{{"E_y_up", e.value}, {"K", e.K}, {"method", ergodic_method_name(e.method)}};
        if (e.method == ErgodicMethod::monte_carlo)
            j["std_error"] = e.std_error;
        if (e.method == ErgodicMethod::numeric)
            j["error_estimate"] = e.error_estimate;
        if (e.terms)
        {
            const auto &t = *e.terms;
            j["closed_form_terms"] = {{"R2", t.R2}, {"T2", t.T2}, {"T3", t.T3}, {"T4_base", t.T4_base},
                                      {"T5", t.T5}, {"value_without_T4", t.value}, {"quadrature", t.quadrature},
                                      {"T4_note", "T4 carries an undefined (2N+1) divisor; excluded from the value"}};
            j["closed_form_terms"]["implied_T4_divisor"] =
                t.implied_anomalous_factor ? json(*t.implied_anomalous_factor) : json(nullptr);
        }
        return j;
    }

    json to_json(const ErgodicSummary &s)
    {
        json j = to_json(s.y_up);
        j["E_y_down"] = s.y_down;
        j["expected_element_count"] = s.expected_element_count;
        return j;
    }

    json to_json(const SaturationReport &r)
    {
        json per_user = json::array();
        for (const auto &b : r.per_user)
            per_user.push_back({{"y_up", b.y_up}, {"y_down", b.y_down}});
        json j{{"threshold", r.threshold},
               {"wavelength_m", r.wavelength},
               {"per_user", per_user},
               {"y_up", r.aggregate.y_up},
               {"y_down", r.aggregate.y_down},
               {"element_count", r.element_count}};
        if (r.ergodic)
            j["ergodic"] = to_json(*r.ergodic);
        return j;
    }

    json to_json(const ReceiverRates &r)
    {
        json j{{"sinr", r.sinr}, {"sum_rate_bits", r.sum_rate}};
        if (r.clipped_users)
            j["clipped_users"] = r.clipped_users;
        if (!r.degenerate_pairs.empty())
        {
            json pairs = json::array();
            for (const auto &p : r.degenerate_pairs)
                pairs.push_back({{"i", p.i}, {"j", p.j}, {"radial_gap", p.radial_gap}});
            j["degenerate_pairs"] = pairs;
        }
        return j;
    }

    json to_json(const RateReport &r)
    {
        return {{"capacity_bits", r.capacity_bits},
                {"mrc", to_json(r.mrc)},
                {"zf", to_json(r.zf)},
                {"mmse", to_json(r.mmse)},
                {"modified_zf", to_json(r.modified_zf)},
                {"clamped_eigenvalues", r.diagnostics.clamped_eigenvalues}};
    }

    json to_json(const BoundReport &b)
    {
        return {{"log2_upper", b.log2_upper},
                {"log2_lower", b.log2_lower},
                {"diagonal_loads", b.diagonal_loads},
                {"correlation_det", b.correlation_det},
                {"normalized_gap", b.normalized_gap}};
    }
}
