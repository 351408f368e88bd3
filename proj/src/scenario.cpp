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

#include "xlsat/scenario.hpp"
#include "xlsat/error.hpp"
#include "xlsat/rng.hpp"

#include <cmath>
#include <string>

namespace xlsat
{
    const char *error_code_name(ErrorCode code) noexcept
    {
        switch (code)
        {
        case ErrorCode::invalid_argument:
            return "invalid_argument";
        case ErrorCode::index:
            return "index";
        case ErrorCode::validation:
            return "validation";
        case ErrorCode::domain:
            return "domain";
        case ErrorCode::rank_deficient:
            return "rank_deficient";
        case ErrorCode::resource:
            return "resource";
        case ErrorCode::numeric:
            return "numeric";
        case ErrorCode::io:
            return "io";
        }
        return "unknown";
    }

    namespace
    {
        bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }
    }

    CarrierSpec::CarrierSpec(double frequency_hz)
    {
        if (!positive_finite(frequency_hz))
            fail(ErrorCode::validation, "carrier frequency must be positive and finite, got " + std::to_string(frequency_hz));
        frequency_ = frequency_hz;
        wavelength_ = speed_of_light / frequency_hz;
    }

    CarrierSpec CarrierSpec::from_wavelength(double wavelength_m)
    {
        if (!positive_finite(wavelength_m))
            fail(ErrorCode::validation, "wavelength must be positive and finite, got " + std::to_string(wavelength_m));
        return CarrierSpec(speed_of_light / wavelength_m, wavelength_m);
    }

    void ArrayGeometry::validate() const
    {
        if (element_count < 1)
            fail(ErrorCode::validation, "array needs at least one element");
    }

    void UserPosition::validate() const
    {
        if (!std::isfinite(x) || !std::isfinite(y))
            fail(ErrorCode::validation, "user coordinates must be finite");
        if (!(x > 0.0))
            fail(ErrorCode::validation,
                 "user x must be > 0 (all users on the same side of the array), got " + std::to_string(x));
    }

    void UserRect::validate() const
    {
        if (!std::isfinite(x_min) || !std::isfinite(x_max) || !std::isfinite(y_min) || !std::isfinite(y_max))
            fail(ErrorCode::validation, "user rectangle bounds must be finite");
        if (!(x_min > 0.0 && x_min < x_max))
            fail(ErrorCode::validation, "user rectangle needs 0 < x_min < x_max");
        if (!(y_min < y_max))
            fail(ErrorCode::validation, "user rectangle needs y_min < y_max");
    }

    void LinkBudget::validate() const
    {
        if (!positive_finite(transmit_power))
            fail(ErrorCode::validation, "transmit power must be > 0");
        if (!positive_finite(noise_power))
            fail(ErrorCode::validation, "noise power must be > 0");
        if (!positive_finite(beta0))
            fail(ErrorCode::validation, "beta0 must be > 0");
    }

    void Scenario::validate() const
    {
        geometry.validate();
        budget.validate();
        if (users.empty())
            fail(ErrorCode::validation, "scenario needs at least one user");
        for (std::size_t i = 0; i < users.size(); ++i)
        {
            try
            {
                users[i].validate();
            }
            catch (const Error &e)
            {
                fail(e.code(), "user " + std::to_string(i) + ": " + e.what());
            }
        }
    }

    double element_y_coordinate(std::size_t m, const ArrayGeometry &geometry, const CarrierSpec &carrier)
    {
        const std::size_t M = geometry.element_count;
        if (m < 1 || m > M)
            fail(ErrorCode::index, "element index " + std::to_string(m) + " outside [1, " + std::to_string(M) + "]");
        // 2m - (M+1) is an exact integer, so mirrored elements cancel exactly
        const double twice_offset = 2.0 * static_cast<double>(m) - (static_cast<double>(M) + 1.0);
        return twice_offset * 0.25 * carrier.wavelength();
    }

    std::vector<UserPosition> sample_users(const UserRect &rect, std::size_t count, std::uint64_t seed)
    {
        return sample_users(rect, count, seed, 0);
    }

    std::vector<UserPosition> sample_users(const UserRect &rect, std::size_t count, std::uint64_t seed,
                                           std::uint64_t stream)
    {
        rect.validate();
        if (count < 1)
            fail(ErrorCode::validation, "user count must be >= 1");

        Rng rng(seed, stream);
        std::vector<UserPosition> users(count);
        for (auto &u : users)
        {
            u.x = rng.uniform(rect.x_min, rect.x_max);
            u.y = rng.uniform(rect.y_min, rect.y_max);
        }
        return users;
    }

    double calibrate_power(double target_snr_db, const UserPosition &position,
                           const CarrierSpec &carrier, double noise_power, double beta0)
    {
        if (std::isnan(target_snr_db) || target_snr_db == INFINITY)
            fail(ErrorCode::invalid_argument, "target SNR must be finite");
        position.validate();
        if (!positive_finite(noise_power) || !positive_finite(beta0))
            fail(ErrorCode::invalid_argument, "noise power and beta0 must be > 0");
        return db_to_linear(target_snr_db) * noise_power * carrier.wavelength() * position.x / (4.0 * beta0);
    }
}
