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

#include "xlsat/channel.hpp"
#include "xlsat/error.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

namespace xlsat
{
    namespace
    {
        // r and the phase reduction are evaluated in long double: r/lambda is
        // around 1e4 cycles and only the fractional part matters.
        cdouble coefficient(double ux, double uy, double element_y, long double inv_lambda, double sqrt_beta0)
        {
            const long double dx = ux;
            const long double dy = static_cast<long double>(uy) - element_y;
            const long double r = std::sqrt(dx * dx + dy * dy);
            const long double cycles = r * inv_lambda;
            const long double frac = cycles - std::floor(cycles);
            const double phase = -2.0 * std::numbers::pi * static_cast<double>(frac);
            const double rd = static_cast<double>(r);
            const double amplitude = sqrt_beta0 / rd * std::sqrt(ux / rd);
            return std::polar(amplitude, phase);
        }

        void fill_column(Eigen::Ref<Eigen::VectorXcd> out, const UserPosition &user,
                         const ArrayGeometry &geometry, const CarrierSpec &carrier, double beta0)
        {
            const long double inv_lambda = 1.0L / static_cast<long double>(carrier.wavelength());
            const double sqrt_beta0 = std::sqrt(beta0);
            const std::size_t M = geometry.element_count;
            for (std::size_t m = 1; m <= M; ++m)
                out[static_cast<Eigen::Index>(m - 1)] =
                    coefficient(user.x, user.y, element_y_coordinate(m, geometry, carrier), inv_lambda, sqrt_beta0);
        }
    }

    cdouble pnusw_coefficient(const UserPosition &user, std::size_t m, const ArrayGeometry &geometry,
                              const CarrierSpec &carrier, double beta0)
    {
        user.validate();
        const double ym = element_y_coordinate(m, geometry, carrier);
        return coefficient(user.x, user.y, ym, 1.0L / static_cast<long double>(carrier.wavelength()), std::sqrt(beta0));
    }

    Eigen::VectorXcd channel_vector(const UserPosition &user, const ArrayGeometry &geometry,
                                    const CarrierSpec &carrier, double beta0)
    {
        user.validate();
        geometry.validate();
        Eigen::VectorXcd h(static_cast<Eigen::Index>(geometry.element_count));
        fill_column(h, user, geometry, carrier, beta0);
        return h;
    }

    ChannelMatrix channel_matrix(const Scenario &scenario, const ChannelOptions &options)
    {
        scenario.validate();
        const std::uint64_t M = scenario.geometry.element_count;
        const std::uint64_t K = scenario.users.size();
        if (M > options.max_entries / K)
            fail(ErrorCode::resource, "channel matrix of " + std::to_string(M) + " x " + std::to_string(K) +
                                          " exceeds the entry cap of " + std::to_string(options.max_entries) +
                                          "; reduce the element count or user count, or raise the cap");

        Eigen::MatrixXcd H;
        try
        {
            H.resize(static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(K));
        }
        catch (const std::bad_alloc &)
        {
            fail(ErrorCode::resource, "out of memory allocating a " + std::to_string(M) + " x " + std::to_string(K) +
                                          " channel matrix");
        }
        for (std::size_t i = 0; i < K; ++i)
            fill_column(H.col(static_cast<Eigen::Index>(i)), scenario.users[i], scenario.geometry, scenario.carrier,
                        scenario.budget.beta0);
        return ChannelMatrix(std::move(H), scenario.carrier.wavelength());
    }

    double exact_power(const Eigen::Ref<const Eigen::VectorXcd> &h, double transmit_power)
    {
        return transmit_power * h.squaredNorm();
    }

    cdouble exact_correlation(const Eigen::Ref<const Eigen::VectorXcd> &hi,
                              const Eigen::Ref<const Eigen::VectorXcd> &hj)
    {
        if (hi.size() != hj.size())
            fail(ErrorCode::invalid_argument, "channel vectors differ in length");
        const double ni = hi.norm();
        const double nj = hj.norm();
        if (ni == 0.0 || nj == 0.0)
            fail(ErrorCode::domain, "correlation undefined for a zero-norm channel vector");
        return hi.dot(hj) / (ni * nj); // Eigen's dot conjugates the left operand
    }

    GramMatrix exact_gram(const ChannelMatrix &channel)
    {
        const auto &H = channel.entries();
        const Eigen::Index K = H.cols();
        GramMatrix g;
        g.provenance = GramProvenance::exact;
        g.values = Eigen::MatrixXcd::Zero(K, K);
        g.values.selfadjointView<Eigen::Lower>().rankUpdate(H.adjoint());
        g.values.triangularView<Eigen::StrictlyUpper>() = g.values.adjoint();
        for (Eigen::Index i = 0; i < K; ++i)
            g.values(i, i) = cdouble(g.values(i, i).real(), 0.0);
        g.operation_count = static_cast<std::uint64_t>(H.rows()) * static_cast<std::uint64_t>(K * (K + 1) / 2);
        return g;
    }

    GramCheck inspect_gram(const GramMatrix &gram)
    {
        GramCheck c;
        const auto &G = gram.values;
        const double scale = G.cwiseAbs().maxCoeff();
        double herm = 0.0;
        for (Eigen::Index i = 0; i < G.rows(); ++i)
            for (Eigen::Index j = 0; j < G.cols(); ++j)
                herm = std::max(herm, std::abs(G(i, j) - std::conj(G(j, i))));
        c.hermitian_error = scale > 0.0 ? herm / scale : 0.0;
        c.min_diagonal = G.diagonal().real().minCoeff();
        c.max_imag_diagonal = G.diagonal().imag().cwiseAbs().maxCoeff();
        c.trace = G.diagonal().real().sum();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G, Eigen::EigenvaluesOnly);
        c.min_eigenvalue = es.eigenvalues().minCoeff();
        return c;
    }

    void write_matrix_dump(std::ostream &out, const Eigen::MatrixXcd &values, double wavelength, const char *kind)
    {
        auto put = [&out](double v)
        {
            char buf[32];
            const auto res = std::to_chars(buf, buf + sizeof buf, v);
            out.write(buf, res.ptr - buf);
        };
        out << "# xlsat-matrix rows=" << values.rows() << " cols=" << values.cols() << " wavelength=";
        put(wavelength);
        out << " kind=" << kind << '\n';
        for (Eigen::Index r = 0; r < values.rows(); ++r)
        {
            for (Eigen::Index c = 0; c < values.cols(); ++c)
            {
                if (c)
                    out << ',';
                put(values(r, c).real());
                out << ',';
                put(values(r, c).imag());
            }
            out << '\n';
        }
    }
}
