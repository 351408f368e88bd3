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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace xlsat
{
    inline constexpr double speed_of_light = 299792458.0; // m/s

    /// Carrier frequency and the derived wavelength. Elements sit at lambda/2.
    class CarrierSpec
    {
    public:
        explicit CarrierSpec(double frequency_hz);

        /// Builds a carrier from an exact wavelength (frequency is derived).
        static CarrierSpec from_wavelength(double wavelength_m);

        double frequency() const noexcept { return frequency_; }
        double wavelength() const noexcept { return wavelength_; }
        double element_spacing() const noexcept { return 0.5 * wavelength_; }

    private:
        CarrierSpec(double frequency_hz, double wavelength_m) noexcept
            : frequency_(frequency_hz), wavelength_(wavelength_m) {}

        double frequency_;
        double wavelength_;
    };

    /// Uniform linear array on the y-axis, centered at the origin.
    struct ArrayGeometry
    {
        std::size_t element_count = 1;

        void validate() const;
    };

    struct UserPosition
    {
        double x = 1.0; // > 0, all users on the same side of the array
        double y = 0.0;

        void validate() const;
    };

    struct UserRect
    {
        double x_min = 1.0;
        double x_max = 10.0;
        double y_min = -7.5;
        double y_max = 7.5;

        void validate() const;
        double area() const noexcept { return (x_max - x_min) * (y_max - y_min); }
    };

    struct LinkBudget
    {
        double transmit_power = 1.0; // W
        double noise_power = 1.0;    // W
        double beta0 = 1.0;

        void validate() const;
        double snr() const noexcept { return transmit_power / noise_power; }
    };

    struct Scenario
    {
        CarrierSpec carrier{100e9};
        ArrayGeometry geometry;
        std::vector<UserPosition> users;
        LinkBudget budget;

        void validate() const;
        std::size_t user_count() const noexcept { return users.size(); }
    };

    /// y-coordinate of element m (1-based): (m - (M+1)/2) * lambda/2.
    double element_y_coordinate(std::size_t m, const ArrayGeometry &geometry, const CarrierSpec &carrier);

    /// K users drawn uniformly from the rectangle using stream (seed, 0).
    /// x is drawn before y for each user, users in order.
    std::vector<UserPosition> sample_users(const UserRect &rect, std::size_t count, std::uint64_t seed);

    /// Same, drawing from stream (seed, stream) so independent draws can be
    /// generated in any order.
    std::vector<UserPosition> sample_users(const UserRect &rect, std::size_t count, std::uint64_t seed,
                                           std::uint64_t stream);

    /// Transmit power that puts the power-limit SNR of a user at `position`
    /// at target_snr_db: P * 4*beta0 / (lambda*x) / noise = 10^(dB/10).
    double calibrate_power(double target_snr_db, const UserPosition &position,
                           const CarrierSpec &carrier, double noise_power, double beta0 = 1.0);

    inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
}
