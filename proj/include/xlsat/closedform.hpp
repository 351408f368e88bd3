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

#include "xlsat/channel.hpp"
#include "xlsat/scenario.hpp"

#include <complex>
#include <span>

namespace xlsat
{
    /// Geometry of a same-side user pair as it enters the correlation formulas.
    struct UserPairGeometry
    {
        double distance = 0.0;   // d_ij
        double radial_gap = 0.0; // ||x_i| - |x_j||
        double cos_gamma = 0.0;  // radial_gap / d_ij
        int sign = -1;           // sgn(|x_i| - |x_j|), -1 for <= 0
    };

    UserPairGeometry pair_geometry(const UserPosition &ui, const UserPosition &uj);

    /// The two-term aperture bracket of the received-power approximation;
    /// lies in (0, 2) and tends to 2 as the aperture grows.
    /// `element_count` may be fractional (real-valued aperture M*lambda).
    double power_bracket(const UserPosition &user, double element_count, double wavelength);

    /// Closed-form received power for a ULA of `element_count` lambda/2 elements.
    double approx_power(const UserPosition &user, double element_count, double wavelength,
                        double beta0, double transmit_power);

    /// M -> infinity limit P * 4 beta0 / (lambda x).
    double power_limit(const UserPosition &user, double wavelength, double beta0, double transmit_power);

    struct CorrelationApprox
    {
        cdouble value;
        bool degenerate = false; // radial gap below the SPM conditioning threshold
    };

    /// Stationary-phase correlation for a finite aperture. Pairs whose radial
    /// gap is below `degenerate_gap` (default: one wavelength) are tagged.
    CorrelationApprox approx_correlation(const UserPosition &ui, const UserPosition &uj, double element_count,
                                         double wavelength, double degenerate_gap = -1.0);

    /// M -> infinity correlation sqrt(lambda)|cos g| / (2 sqrt(d)) * exp(j sgn (2pi d/lambda - pi/4)).
    cdouble correlation_limit(const UserPosition &ui, const UserPosition &uj, double wavelength);

    struct AnalyticGramOptions
    {
        double degenerate_gap = -1.0;          // <= 0 selects one wavelength
        bool exact_degenerate_fallback = false; // inner product for tagged pairs only
    };

    /// Gram matrix assembled from the closed forms: diagonal approx_power/P,
    /// off-diagonal correlation * sqrt(P_i P_j) / P. Cost does not depend on M
    /// unless the exact fallback is enabled.
    GramMatrix analytic_gram(std::span<const UserPosition> users, std::size_t element_count,
                             const CarrierSpec &carrier, double beta0 = 1.0, const AnalyticGramOptions &options = {});
}
