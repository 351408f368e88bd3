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

#include "xlsat/capacity.hpp"
#include "xlsat/saturation.hpp"

#include <json.hpp>

namespace xlsat
{
    nlohmann::json to_json(const UserRect &rect);
    nlohmann::json to_json(const ErgodicEstimate &estimate);
    nlohmann::json to_json(const ErgodicSummary &summary);
    nlohmann::json to_json(const SaturationReport &report);
    nlohmann::json to_json(const ReceiverRates &rates);
    nlohmann::json to_json(const RateReport &report);
    nlohmann::json to_json(const BoundReport &report);

    UserRect rect_from_json(const nlohmann::json &j);
}
