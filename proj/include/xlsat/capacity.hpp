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
#include "xlsat/closedform.hpp"

#include <span>
#include <vector>

namespace xlsat
{
    /// Per-user SINRs and the resulting sum rate of one linear receiver.
    struct ReceiverRates
    {
        std::vector<double> sinr;
        double sum_rate = 0.0; // bits/channel use
        /// Users whose ZF noise enhancement [G^-1]_ii came out non-positive
        /// (only possible for an indefinite analytic Gram); their SINR is 0.
        std::size_t clipped_users = 0;
        std::vector<DegeneratePair> degenerate_pairs;
    };

    struct CapacityDiagnostics
    {
        std::size_t clamped_eigenvalues = 0; // negative Gram eigenvalues set to 0
    };

    /// sum_k log2(1 + rho mu_k) over the Gram eigenvalues (clamped at 0).
    double shannon_capacity(const GramMatrix &gram, double rho, CapacityDiagnostics *diag = nullptr);

    /// SINR_i = rho / [G^-1]_ii. Throws rank_deficient for a singular Gram.
    ReceiverRates zf_rates(const GramMatrix &gram, double rho);

    /// SINR_i = rho g_ii^2 / (g_ii + rho sum_{j != i} |g_ij|^2).
    ReceiverRates mrc_rates(const GramMatrix &gram, double rho);

    /// SINR_i = 1 / [(I + rho G)^-1]_ii - 1.
    ReceiverRates mmse_rates(const GramMatrix &gram, double rho);

    /// ZF on the analytic Gram. Never forms the M x K channel.
    ReceiverRates modified_zf_rates(std::span<const UserPosition> users, std::size_t element_count,
                                    const CarrierSpec &carrier, double beta0, double rho,
                                    const AnalyticGramOptions &options = {});

    struct RateReport
    {
        double capacity_bits = 0.0;
        ReceiverRates mrc;
        ReceiverRates zf;
        ReceiverRates mmse;
        ReceiverRates modified_zf;
        CapacityDiagnostics diagnostics;
    };

    /// Capacity and all receivers for a scenario (exact Gram, plus modified ZF).
    RateReport rate_report(const Scenario &scenario, const AnalyticGramOptions &options = {});

    // -- determinant bounds ----------------------------------------------------

    /// R = D^-1/2 G D^-1/2 with D = diag(G). Throws domain error on a zero diagonal.
    Eigen::MatrixXcd correlation_matrix(const GramMatrix &gram);

    /// log2 of U = prod_i (1 + a_i), a_i = rho g_ii.
    double log2_hadamard_upper_bound(const GramMatrix &gram, double rho);

    struct SchurLowerBound
    {
        double log2_lower = 0.0;      // log2 of det(R) prod_i (1 + a_i)
        double correlation_det = 1.0; // det(R)
    };

    SchurLowerBound schur_lower_bound(const GramMatrix &gram, double rho);

    /// Upper/lower determinant bounds kept in log2 form; U and L overflow a
    /// double at the SNRs of interest.
    struct BoundReport
    {
        double log2_upper = 0.0;
        double log2_lower = 0.0;
        std::vector<double> diagonal_loads; // a_i
        double correlation_det = 1.0;
        /// (log2 U - log2 L) / log2 U
        double normalized_gap = 0.0;

        double upper() const { return std::exp2(log2_upper); }
        double lower() const { return std::exp2(log2_lower); }
    };

    BoundReport capacity_bounds(const GramMatrix &gram, double rho);

    struct GapResult
    {
        double value = 0.0;         // -(1/K) sum log2 eig(R)
        double correlation_det = 1.0;
        std::size_t clamped_eigenvalues = 0;
        double min_eigenvalue = 1.0;
    };

    /// Correlation matrix built from the M -> infinity correlation for every pair.
    Eigen::MatrixXcd limit_correlation_matrix(std::span<const UserPosition> users, double wavelength);

    /// Normalized determinant gap at 0 dB, i.e. -E_K[log2 eig(R)] for the
    /// limit-correlation matrix. Eigenvalues are floored at `eigen_floor`.
    GapResult normalized_gap_bound(std::span<const UserPosition> users, double wavelength,
                                   double eigen_floor = 1e-12);

    /// Hexagonal-packing user density 2 / (sqrt(3) d^2), users per m^2.
    double max_user_density(double min_spacing);

    /// floor(area * density) for a rectangle.
    std::uint64_t max_user_count(const UserRect &rect, double min_spacing);
}
