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

#include "xlsat/closedform.hpp"
#include "xlsat/error.hpp"

#include <cmath>
#include <numbers>

namespace xlsat
{
    namespace
    {
        void check_same_side(const UserPosition &u)
        {
            u.validate(); // rejects x <= 0, i.e. users on the far side of the array
        }

        cdouble spm_phase(const UserPairGeometry &g, double wavelength)
        {
            // d/lambda is reduced before scaling by 2pi to keep the phase accurate
            const double cycles = g.distance / wavelength;
            const double frac = cycles - std::floor(cycles);
            const double phase = g.sign * (2.0 * std::numbers::pi * frac - 0.25 * std::numbers::pi);
            return std::polar(1.0, phase);
        }
    }

    UserPairGeometry pair_geometry(const UserPosition &ui, const UserPosition &uj)
    {
        UserPairGeometry g;
        const double dx = std::abs(ui.x) - std::abs(uj.x);
        g.radial_gap = std::abs(dx);
        g.distance = std::hypot(dx, ui.y - uj.y);
        g.cos_gamma = g.distance > 0.0 ? g.radial_gap / g.distance : 0.0;
        g.sign = dx > 0.0 ? 1 : -1;
        return g;
    }

    double power_bracket(const UserPosition &user, double element_count, double wavelength)
    {
        check_same_side(user);
        if (!(element_count > 0.0))
            fail(ErrorCode::invalid_argument, "element count must be positive");
        const double a = element_count * wavelength;
        const double x = user.x;
        const double y = user.y;
        const double lo = a - 4.0 * y;
        const double hi = a + 4.0 * y;
        return lo / std::hypot(4.0 * x, lo) + hi / std::hypot(4.0 * x, hi);
    }

    double approx_power(const UserPosition &user, double element_count, double wavelength,
                        double beta0, double transmit_power)
    {
        return transmit_power * 2.0 * beta0 / (wavelength * user.x) * power_bracket(user, element_count, wavelength);
    }

    double power_limit(const UserPosition &user, double wavelength, double beta0, double transmit_power)
    {
        check_same_side(user);
        return transmit_power * 4.0 * beta0 / (wavelength * user.x);
    }

    CorrelationApprox approx_correlation(const UserPosition &ui, const UserPosition &uj, double element_count,
                                         double wavelength, double degenerate_gap)
    {
        const double bi = power_bracket(ui, element_count, wavelength);
        const double bj = power_bracket(uj, element_count, wavelength);
        const auto g = pair_geometry(ui, uj);
        const double threshold = degenerate_gap > 0.0 ? degenerate_gap : wavelength;

        CorrelationApprox out;
        out.degenerate = g.radial_gap < threshold;
        if (g.radial_gap == 0.0)
        {
            out.value = 0.0;
            return out;
        }
        // radial_gap^2 + (y_i - y_j)^2 == d^2
        const double amplitude = std::sqrt(wavelength) * g.radial_gap / std::pow(g.distance, 1.5) /
                                 std::sqrt(bi) / std::sqrt(bj);
        out.value = amplitude * spm_phase(g, wavelength);
        return out;
    }

    cdouble correlation_limit(const UserPosition &ui, const UserPosition &uj, double wavelength)
    {
        check_same_side(ui);
        check_same_side(uj);
        const auto g = pair_geometry(ui, uj);
        if (g.distance == 0.0)
            fail(ErrorCode::domain, "correlation limit undefined for coincident users");
        const double amplitude = std::sqrt(wavelength) * g.cos_gamma / (2.0 * std::sqrt(g.distance));
        return amplitude * spm_phase(g, wavelength);
    }

    GramMatrix analytic_gram(std::span<const UserPosition> users, std::size_t element_count,
                             const CarrierSpec &carrier, double beta0, const AnalyticGramOptions &options)
    {
        if (users.empty())
            fail(ErrorCode::validation, "analytic Gram needs at least one user");
        if (element_count < 1)
            fail(ErrorCode::validation, "element count must be >= 1");
        const double lambda = carrier.wavelength();
        const double M = static_cast<double>(element_count);
        const auto K = static_cast<Eigen::Index>(users.size());

        GramMatrix g;
        g.provenance = GramProvenance::analytic;
        g.values.resize(K, K);

        // approx_power / P with P = 1
        Eigen::VectorXd diag(K);
        for (Eigen::Index i = 0; i < K; ++i)
        {
            diag[i] = approx_power(users[i], M, lambda, beta0, 1.0);
            g.values(i, i) = diag[i];
            ++g.operation_count;
        }

        const ArrayGeometry geometry{element_count};
        for (Eigen::Index i = 0; i < K; ++i)
        {
            for (Eigen::Index j = i + 1; j < K; ++j)
            {
                const auto ui = users[i], uj = users[j];
                if (pair_geometry(ui, uj).distance == 0.0)
                    fail(ErrorCode::domain, "users " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
                const auto rho = approx_correlation(ui, uj, M, lambda, options.degenerate_gap);
                ++g.operation_count;
                cdouble entry = rho.value * std::sqrt(diag[i] * diag[j]);
                if (rho.degenerate)
                {
                    g.degenerate_pairs.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j),
                                                  pair_geometry(ui, uj).radial_gap});
                    if (options.exact_degenerate_fallback)
                    {
                        const auto hi = channel_vector(ui, geometry, carrier, beta0);
                        const auto hj = channel_vector(uj, geometry, carrier, beta0);
                        entry = hi.dot(hj);
                        g.operation_count += element_count;
                    }
                }
                g.values(i, j) = entry;
                g.values(j, i) = std::conj(entry);
            }
        }
        return g;
    }
}
