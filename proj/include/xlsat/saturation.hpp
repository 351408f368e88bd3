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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace xlsat
{
    /// Power-ratio threshold t in (0, 1); slope = t / sqrt(1 - t^2).
    class Threshold
    {
    public:
        explicit Threshold(double t);

        double value() const noexcept { return t_; }
        double slope() const noexcept { return slope_; }

    private:
        double t_;
        double slope_;
    };

    /// Real-valued element count 4 x t / (lambda sqrt(1 - t^2)) for a user at y = 0.
    double single_user_min_antennas(const UserPosition &user, Threshold t, double wavelength);

    struct SaturationBounds
    {
        double y_up = 0.0;
        double y_down = 0.0;
    };

    /// y_up/down = y +- x * slope.
    SaturationBounds per_user_bounds(const UserPosition &user, Threshold t);

    /// max of y_up^i, min of y_down^i.
    SaturationBounds multiuser_bounds(std::span<const UserPosition> users, Threshold t);

    /// ceil((y_up - y_down) / (lambda/2)), at least 1. Ratios within 1e-9 of an
    /// integer are snapped to it so exact extents do not round up by one ulp.
    std::uint64_t bounds_to_element_count(double y_up, double y_down, double wavelength);

    /// Law of z = slope * x + y for x, y uniform over a rectangle.
    class TrapezoidDist
    {
    public:
        TrapezoidDist(double L1, double R1, double L2, double R2);

        double L1() const noexcept { return L1_; }
        double R1() const noexcept { return R1_; }
        double L2() const noexcept { return L2_; }
        double R2() const noexcept { return R2_; }
        double D1() const noexcept { return L2_ - R1_ + R2_ - L1_; }
        double D2() const noexcept { return R1_ - L1_; }

        double pdf(double z) const noexcept;
        double cdf(double z) const noexcept;
        double mean() const noexcept { return 0.5 * (L1_ + R2_); }

    private:
        double L1_, R1_, L2_, R2_;
    };

    TrapezoidDist trapezoid_from_rect(const UserRect &rect, Threshold t);

    enum class ErgodicMethod
    {
        numeric,              // order-statistic quadrature over the trapezoid law
        monte_carlo,          // sampled K-fold maxima
        closed_form_crosscheck // term-by-term closed form (anomalous term reported, not applied)
    };

    const char *ergodic_method_name(ErgodicMethod m) noexcept;
    ErgodicMethod parse_ergodic_method(const std::string &name);

    struct ErgodicOptions
    {
        std::uint64_t trials = 100000; // monte_carlo
        std::uint64_t seed = 0;        // monte_carlo
        double abs_tol = 1e-6;         // numeric; meters
        unsigned jobs = 1;
    };

    /// Term-by-term evaluation of the closed-form expectation
    /// R2 - T2 - T3 - T4 - T5. T4 carries an undefined factor (2N+1); only its
    /// base value (without the factor) is reported and it is excluded from
    /// `value`. `implied_anomalous_factor` is the divisor that reconciles T4
    /// with the quadrature result.
    struct ClosedFormTerms
    {
        double R2 = 0.0;
        double T2 = 0.0;
        double T3 = 0.0;
        double T4_base = 0.0;
        double T5 = 0.0;
        double value = 0.0; // R2 - T2 - T3 - T5
        double quadrature = 0.0;
        std::optional<double> implied_anomalous_factor;
    };

    ClosedFormTerms closed_form_terms(const UserRect &rect, Threshold t, std::uint64_t K);

    struct ErgodicEstimate
    {
        double value = 0.0;          // E[y_up], meters
        double std_error = 0.0;      // monte_carlo only
        double error_estimate = 0.0; // numeric only
        ErgodicMethod method = ErgodicMethod::numeric;
        std::uint64_t K = 1;
        std::optional<ClosedFormTerms> terms;
    };

    ErgodicEstimate ergodic_y_up(const UserRect &rect, Threshold t, std::uint64_t K,
                                 ErgodicMethod method = ErgodicMethod::numeric, const ErgodicOptions &options = {});

    /// y_min + y_max - E[y_up].
    double ergodic_y_down(const UserRect &rect, const ErgodicEstimate &y_up);
    double ergodic_y_down(const UserRect &rect, Threshold t, std::uint64_t K);

    /// Non-regularized incomplete beta integral int_0^x s^(a-1) (1-s)^(b-1) ds.
    double incomplete_beta(double x, double a, double b);

    struct BetaDecay
    {
        std::vector<std::uint64_t> K;
        std::vector<double> term;     // sqrt(2) K sqrt(D2 (R2-R1)) B(D2/(2(R2-R1)); 3/2, K)
        std::vector<double> envelope; // sqrt(2) sqrt(D2 (R2-R1)) Gamma(3/2) K^-1/2
    };

    BetaDecay beta_term_decay(const UserRect &rect, Threshold t, std::span<const std::uint64_t> K_list);
    BetaDecay beta_term_decay(const TrapezoidDist &dist, std::span<const std::uint64_t> K_list);

    struct ErgodicSummary
    {
        ErgodicEstimate y_up;
        double y_down = 0.0;
        std::uint64_t expected_element_count = 0;
    };

    ErgodicSummary ergodic_summary(const UserRect &rect, Threshold t, std::uint64_t K, double wavelength,
                                   ErgodicMethod method = ErgodicMethod::numeric, const ErgodicOptions &options = {});

    struct SaturationReport
    {
        double threshold = 0.9;
        double wavelength = 0.0;
        std::vector<SaturationBounds> per_user;
        SaturationBounds aggregate;
        std::uint64_t element_count = 0;
        std::optional<ErgodicSummary> ergodic;
    };

    SaturationReport saturation_report(std::span<const UserPosition> users, Threshold t, double wavelength);
}
