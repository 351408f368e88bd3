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

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace xlsat
{
    using cdouble = std::complex<double>;

    /// M x K channel matrix, column i is user i's channel vector.
    class ChannelMatrix
    {
    public:
        ChannelMatrix(Eigen::MatrixXcd entries, double wavelength)
            : entries_(std::move(entries)), wavelength_(wavelength) {}

        const Eigen::MatrixXcd &entries() const noexcept { return entries_; }
        Eigen::Index element_count() const noexcept { return entries_.rows(); }
        Eigen::Index user_count() const noexcept { return entries_.cols(); }
        double wavelength() const noexcept { return wavelength_; }
        auto column(Eigen::Index i) const { return entries_.col(i); }

    private:
        Eigen::MatrixXcd entries_;
        double wavelength_;
    };

    enum class GramProvenance
    {
        exact,
        analytic
    };

    /// A user pair whose radial gap is too small for the SPM correlation.
    struct DegeneratePair
    {
        std::size_t i;
        std::size_t j;
        double radial_gap;
    };

    /// K x K Hermitian matrix H^H H.
    struct GramMatrix
    {
        Eigen::MatrixXcd values;
        GramProvenance provenance = GramProvenance::exact;
        std::vector<DegeneratePair> degenerate_pairs;
        /// Complex multiply-adds (exact) or closed-form evaluations (analytic).
        std::uint64_t operation_count = 0;

        Eigen::Index size() const noexcept { return values.rows(); }
    };

    struct ChannelOptions
    {
        std::uint64_t max_entries = 200'000'000; // M*K guard
    };

    /// PNUSW coefficient sqrt(beta0) exp(-j 2pi r/lambda) / r * sqrt(x/r) for element m (1-based).
    cdouble pnusw_coefficient(const UserPosition &user, std::size_t m, const ArrayGeometry &geometry,
                              const CarrierSpec &carrier, double beta0 = 1.0);

    /// One user's channel vector over all M elements.
    Eigen::VectorXcd channel_vector(const UserPosition &user, const ArrayGeometry &geometry,
                                    const CarrierSpec &carrier, double beta0 = 1.0);

    ChannelMatrix channel_matrix(const Scenario &scenario, const ChannelOptions &options = {});

    /// P * ||h||^2.
    double exact_power(const Eigen::Ref<const Eigen::VectorXcd> &h, double transmit_power);

    /// h_i^H h_j / (||h_i|| ||h_j||). Throws domain error on a zero column.
    cdouble exact_correlation(const Eigen::Ref<const Eigen::VectorXcd> &hi,
                              const Eigen::Ref<const Eigen::VectorXcd> &hj);

    GramMatrix exact_gram(const ChannelMatrix &channel);

    struct GramCheck
    {
        double hermitian_error = 0.0; // max |g_ij - conj(g_ji)| / max |g|
        double min_diagonal = 0.0;
        double max_imag_diagonal = 0.0;
        double min_eigenvalue = 0.0;
        double trace = 0.0;
    };

    GramCheck inspect_gram(const GramMatrix &gram);

    /// Text dump: a header line "# xlsat-matrix rows=R cols=C wavelength=L kind=..."
    /// then one row per line, row-major, "re,im" pairs separated by commas.
    void write_matrix_dump(std::ostream &out, const Eigen::MatrixXcd &values, double wavelength, const char *kind);
}
