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

#include "xlsat/capacity.hpp"
#include "xlsat/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace xlsat
{
    namespace
    {
        using EigenSolver = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>;

        constexpr double hermitian_tolerance = 1e-9;
        constexpr double singular_ratio = 1e-12;

        double log2_1p(double v) { return std::log1p(v) / std::numbers::ln2; }

        void require_rho(double rho)
        {
            if (!(rho > 0.0) || !std::isfinite(rho))
                fail(ErrorCode::invalid_argument, "SNR rho must be positive and finite");
        }

        void require_hermitian(const GramMatrix &gram)
        {
            const auto &G = gram.values;
            if (G.rows() == 0 || G.rows() != G.cols())
                fail(ErrorCode::validation, "Gram matrix must be square and non-empty");
            const double scale = G.cwiseAbs().maxCoeff();
            if (scale == 0.0)
                return;
            const double err = (G - G.adjoint()).cwiseAbs().maxCoeff() / scale;
            if (err > hermitian_tolerance)
                fail(ErrorCode::validation, "Gram matrix is not Hermitian (relative asymmetry " + std::to_string(err) + ")");
        }

        void finish(ReceiverRates &r)
        {
            r.sum_rate = 0.0;
            for (double s : r.sinr)
                r.sum_rate += log2_1p(s);
        }

        std::string most_correlated_pair(const Eigen::MatrixXcd &G)
        {
            double best = -1.0;
            Eigen::Index bi = 0, bj = 0;
            for (Eigen::Index i = 0; i < G.rows(); ++i)
                for (Eigen::Index j = i + 1; j < G.cols(); ++j)
                {
                    const double d = std::sqrt(std::abs(G(i, i).real() * G(j, j).real()));
                    const double c = d > 0.0 ? std::abs(G(i, j)) / d : 1.0;
                    if (c > best)
                        best = c, bi = i, bj = j;
                }
            if (best < 0.0)
                return "single user with zero channel";
            return "users " + std::to_string(bi) + " and " + std::to_string(bj) + " (|correlation| = " +
                   std::to_string(best) + ")";
        }

        // ZF via the eigendecomposition G = V diag(mu) V^H so the same path
        // serves exact (PSD) and analytic (possibly indefinite) Gram matrices.
        ReceiverRates zf_core(const GramMatrix &gram, double rho)
        {
            require_hermitian(gram);
            require_rho(rho);
            EigenSolver es(gram.values);
            const auto &mu = es.eigenvalues();
            const double top = mu.cwiseAbs().maxCoeff();
            const double bottom = mu.cwiseAbs().minCoeff();
            if (!(top > 0.0) || bottom <= singular_ratio * top)
                fail(ErrorCode::rank_deficient,
                     "Gram matrix is rank deficient; most correlated pair: " + most_correlated_pair(gram.values));

            const auto &V = es.eigenvectors();
            const Eigen::Index K = gram.size();
            ReceiverRates r;
            r.sinr.resize(K);
            for (Eigen::Index i = 0; i < K; ++i)
            {
                double inv_ii = 0.0;
                for (Eigen::Index k = 0; k < K; ++k)
                    inv_ii += std::norm(V(i, k)) / mu[k];
                if (inv_ii > 0.0)
                    r.sinr[i] = rho / inv_ii;
                else
                {
                    r.sinr[i] = 0.0;
                    ++r.clipped_users;
                }
            }
            finish(r);
            return r;
        }
    }

    double shannon_capacity(const GramMatrix &gram, double rho, CapacityDiagnostics *diag)
    {
        require_hermitian(gram);
        require_rho(rho);
        EigenSolver es(gram.values, Eigen::EigenvaluesOnly);
        double bits = 0.0;
        for (double mu : es.eigenvalues())
        {
            if (mu < 0.0)
            {
                if (diag)
                    ++diag->clamped_eigenvalues;
                continue;
            }
            bits += log2_1p(rho * mu);
        }
        return bits;
    }

    ReceiverRates zf_rates(const GramMatrix &gram, double rho)
    {
        return zf_core(gram, rho);
    }

    ReceiverRates mrc_rates(const GramMatrix &gram, double rho)
    {
        require_hermitian(gram);
        require_rho(rho);
        const auto &G = gram.values;
        const Eigen::Index K = gram.size();
        ReceiverRates r;
        r.sinr.resize(K);
        for (Eigen::Index i = 0; i < K; ++i)
        {
            const double gii = G(i, i).real();
            if (!(gii > 0.0))
                fail(ErrorCode::domain, "MRC undefined: user " + std::to_string(i) + " has zero channel gain");
            double interference = 0.0;
            for (Eigen::Index j = 0; j < K; ++j)
                if (j != i)
                    interference += std::norm(G(i, j));
            r.sinr[i] = rho * gii * gii / (gii + rho * interference);
        }
        finish(r);
        return r;
    }

    ReceiverRates mmse_rates(const GramMatrix &gram, double rho)
    {
        require_hermitian(gram);
        require_rho(rho);
        EigenSolver es(gram.values);
        const auto &mu = es.eigenvalues();
        const auto &V = es.eigenvectors();
        const Eigen::Index K = gram.size();
        ReceiverRates r;
        r.sinr.resize(K);
        for (Eigen::Index i = 0; i < K; ++i)
        {
            double mse = 0.0; // [(I + rho G)^-1]_ii
            for (Eigen::Index k = 0; k < K; ++k)
                mse += std::norm(V(i, k)) / (1.0 + rho * std::max(mu[k], 0.0));
            r.sinr[i] = std::max(1.0 / mse - 1.0, 0.0);
        }
        finish(r);
        return r;
    }

    ReceiverRates modified_zf_rates(std::span<const UserPosition> users, std::size_t element_count,
                                    const CarrierSpec &carrier, double beta0, double rho,
                                    const AnalyticGramOptions &options)
    {
        const auto gram = analytic_gram(users, element_count, carrier, beta0, options);
        auto r = zf_core(gram, rho);
        r.degenerate_pairs = gram.degenerate_pairs;
        return r;
    }

    RateReport rate_report(const Scenario &scenario, const AnalyticGramOptions &options)
    {
        const auto gram = exact_gram(channel_matrix(scenario));
        const double rho = scenario.budget.snr();
        RateReport rep;
        rep.capacity_bits = shannon_capacity(gram, rho, &rep.diagnostics);
        rep.mrc = mrc_rates(gram, rho);
        rep.zf = zf_rates(gram, rho);
        rep.mmse = mmse_rates(gram, rho);
        rep.modified_zf = modified_zf_rates(scenario.users, scenario.geometry.element_count, scenario.carrier,
                                            scenario.budget.beta0, rho, options);
        return rep;
    }

    Eigen::MatrixXcd correlation_matrix(const GramMatrix &gram)
    {
        require_hermitian(gram);
        const auto &G = gram.values;
        Eigen::VectorXd inv_sqrt(G.rows());
        for (Eigen::Index i = 0; i < G.rows(); ++i)
        {
            const double gii = G(i, i).real();
            if (!(gii > 0.0))
                fail(ErrorCode::domain, "correlation matrix undefined: user " + std::to_string(i) + " has zero gain");
            inv_sqrt[i] = 1.0 / std::sqrt(gii);
        }
        Eigen::MatrixXcd R = inv_sqrt.asDiagonal() * G * inv_sqrt.asDiagonal();
        R.diagonal().setOnes();
        return R;
    }

    double log2_hadamard_upper_bound(const GramMatrix &gram, double rho)
    {
        require_hermitian(gram);
        require_rho(rho);
        double bits = 0.0;
        for (Eigen::Index i = 0; i < gram.size(); ++i)
            bits += log2_1p(rho * gram.values(i, i).real());
        return bits;
    }

    SchurLowerBound schur_lower_bound(const GramMatrix &gram, double rho)
    {
        const auto R = correlation_matrix(gram);
        EigenSolver es(R, Eigen::EigenvaluesOnly);
        double log2_det = 0.0;
        for (double mu : es.eigenvalues())
            log2_det += mu > 0.0 ? std::log2(mu) : -INFINITY;
        SchurLowerBound out;
        out.correlation_det = std::exp2(log2_det);
        out.log2_lower = log2_det + log2_hadamard_upper_bound(gram, rho);
        return out;
    }

    BoundReport capacity_bounds(const GramMatrix &gram, double rho)
    {
        BoundReport b;
        b.log2_upper = log2_hadamard_upper_bound(gram, rho);
        const auto lower = schur_lower_bound(gram, rho);
        b.log2_lower = lower.log2_lower;
        b.correlation_det = lower.correlation_det;
        for (Eigen::Index i = 0; i < gram.size(); ++i)
            b.diagonal_loads.push_back(rho * gram.values(i, i).real());
        b.normalized_gap = b.log2_upper > 0.0 ? (b.log2_upper - b.log2_lower) / b.log2_upper : 0.0;
        return b;
    }

    Eigen::MatrixXcd limit_correlation_matrix(std::span<const UserPosition> users, double wavelength)
    {
        const auto K = static_cast<Eigen::Index>(users.size());
        Eigen::MatrixXcd R = Eigen::MatrixXcd::Identity(K, K);
        for (Eigen::Index i = 0; i < K; ++i)
            for (Eigen::Index j = i + 1; j < K; ++j)
            {
                R(i, j) = correlation_limit(users[i], users[j], wavelength);
                R(j, i) = std::conj(R(i, j));
            }
        return R;
    }

    GapResult normalized_gap_bound(std::span<const UserPosition> users, double wavelength, double eigen_floor)
    {
        if (users.empty())
            fail(ErrorCode::validation, "normalized gap needs at least one user");
        if (!(eigen_floor > 0.0))
            fail(ErrorCode::invalid_argument, "eigenvalue floor must be positive");
        const auto R = limit_correlation_matrix(users, wavelength);
        EigenSolver es(R, Eigen::EigenvaluesOnly);
        GapResult g;
        double sum = 0.0;
        g.min_eigenvalue = es.eigenvalues().minCoeff();
        for (double mu : es.eigenvalues())
        {
            if (mu < eigen_floor)
            {
                ++g.clamped_eigenvalues;
                mu = eigen_floor;
            }
            sum += std::log2(mu);
        }
        const double K = static_cast<double>(users.size());
        g.value = -sum / K;
        g.correlation_det = std::exp2(sum);
        return g;
    }

    double max_user_density(double min_spacing)
    {
        if (!(min_spacing > 0.0))
            fail(ErrorCode::invalid_argument, "minimum user spacing must be positive");
        return 2.0 / (std::sqrt(3.0) * min_spacing * min_spacing);
    }

    std::uint64_t max_user_count(const UserRect &rect, double min_spacing)
    {
        rect.validate();
        return static_cast<std::uint64_t>(std::floor(rect.area() * max_user_density(min_spacing)));
    }
}
