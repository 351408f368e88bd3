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

#include "xlsat/saturation.hpp"
#include "xlsat/error.hpp"
#include "xlsat/rng.hpp"
#include "parallel.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace xlsat
{
    namespace
    {
        std::uint64_t ceil_count(double ratio)
        {
            const double nearest = std::round(ratio);
            if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, std::abs(ratio)))
                return static_cast<std::uint64_t>(std::max(nearest, 1.0));
            return static_cast<std::uint64_t>(std::max(std::ceil(ratio), 1.0));
        }

        void require_k(std::uint64_t K)
        {
            if (K < 1)
                fail(ErrorCode::validation, "user count K must be >= 1");
        }
    }

    Threshold::Threshold(double t)
    {
        if (!(t > 0.0 && t < 1.0))
            fail(ErrorCode::validation, "threshold t must lie in (0, 1), got " + std::to_string(t));
        t_ = t;
        slope_ = t / std::sqrt(1.0 - t * t);
    }

    double single_user_min_antennas(const UserPosition &user, Threshold t, double wavelength)
    {
        user.validate();
        return 4.0 * user.x * t.slope() / wavelength;
    }

    SaturationBounds per_user_bounds(const UserPosition &user, Threshold t)
    {
        user.validate();
        const double half = user.x * t.slope();
        return {user.y + half, user.y - half};
    }

    SaturationBounds multiuser_bounds(std::span<const UserPosition> users, Threshold t)
    {
        if (users.empty())
            fail(ErrorCode::validation, "saturation bounds need at least one user");
        SaturationBounds agg{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
        for (const auto &u : users)
        {
            const auto b = per_user_bounds(u, t);
            agg.y_up = std::max(agg.y_up, b.y_up);
            agg.y_down = std::min(agg.y_down, b.y_down);
        }
        return agg;
    }

    std::uint64_t bounds_to_element_count(double y_up, double y_down, double wavelength)
    {
        if (!(y_up > y_down))
            fail(ErrorCode::invalid_argument, "bounds need y_up > y_down");
        return ceil_count((y_up - y_down) / (0.5 * wavelength));
    }

    // -- trapezoid law -----------------------------------------------------------

    TrapezoidDist::TrapezoidDist(double L1, double R1, double L2, double R2)
        : L1_(L1), R1_(R1), L2_(L2), R2_(R2)
    {
        if (!(L1 <= R1 && R1 <= L2 && L2 <= R2) || !(R2 > L1))
            fail(ErrorCode::validation, "trapezoid breakpoints must satisfy L1 <= R1 <= L2 <= R2, L1 < R2");
        if (std::abs((R1 - L1) - (R2 - L2)) > 1e-9 * std::max(1.0, R2 - L1))
            fail(ErrorCode::validation, "trapezoid ramps must have equal width");
    }

    double TrapezoidDist::pdf(double z) const noexcept
    {
        if (z < L1_ || z > R2_)
            return 0.0;
        const double d1 = D1(), d2 = D2();
        if (z < R1_)
            return 2.0 / d1 * (z - L1_) / d2;
        if (z < L2_)
            return 2.0 / d1;
        return d2 > 0.0 ? 2.0 / d1 * (R2_ - z) / d2 : 0.0;
    }

    double TrapezoidDist::cdf(double z) const noexcept
    {
        if (z <= L1_)
            return 0.0;
        if (z >= R2_)
            return 1.0;
        const double d1 = D1(), d2 = D2();
        if (z < R1_)
            return (z - L1_) * (z - L1_) / (d1 * d2);
        if (z < L2_)
            return d2 / d1 + 2.0 / d1 * (z - R1_);
        return 1.0 - (z - R2_) * (z - R2_) / (d1 * d2);
    }

    TrapezoidDist trapezoid_from_rect(const UserRect &rect, Threshold t)
    {
        rect.validate();
        const double s = t.slope();
        const double a = s * rect.x_min + rect.y_max;
        const double b = s * rect.x_max + rect.y_min;
        return TrapezoidDist(s * rect.x_min + rect.y_min, std::min(a, b), std::max(a, b), s * rect.x_max + rect.y_max);
    }

    // -- ergodic expectation ----------------------------------------------------

    const char *ergodic_method_name(ErgodicMethod m) noexcept
    {
        switch (m)
        {
        case ErgodicMethod::numeric:
            return "numeric";
        case ErgodicMethod::monte_carlo:
            return "monte_carlo";
        case ErgodicMethod::closed_form_crosscheck:
            return "closed_form";
        }
        return "unknown";
    }

    ErgodicMethod parse_ergodic_method(const std::string &name)
    {
        if (name == "numeric")
            return ErgodicMethod::numeric;
        if (name == "monte_carlo")
            return ErgodicMethod::monte_carlo;
        if (name == "closed_form" || name == "closed_form_crosscheck")
            return ErgodicMethod::closed_form_crosscheck;
        fail(ErrorCode::invalid_argument, "unknown ergodic method '" + name + "' (numeric, monte_carlo, closed_form)");
    }

    namespace
    {
        // int y K F(y)^(K-1) f(y) dy, split at the kinks R1 and L2.
        ErgodicEstimate quadrature_y_up(const TrapezoidDist &dist, std::uint64_t K, double abs_tol)
        {
            using boost::math::quadrature::gauss_kronrod;
            const double k = static_cast<double>(K);
            // log F without the cancellation of 1 - u on the upper ramp, where
            // F^(K-1) is evaluated for large K
            auto log_cdf = [&](double y)
            {
                if (y >= dist.L2())
                    return std::log1p(-(dist.R2() - y) * (dist.R2() - y) / (dist.D1() * dist.D2()));
                return std::log(dist.cdf(y));
            };
            auto integrand = [&](double y)
            {
                const double f = dist.pdf(y);
                if (f == 0.0)
                    return 0.0;
                return y * k * std::exp((k - 1.0) * log_cdf(y)) * f;
            };

            // For large K the mass of the maximum sits within about
            // sqrt(D1 D2 / K) of R2; extra cuts at multiples of that width keep
            // each piece smooth at the scale the rule can resolve.
            std::vector<double> cuts{dist.L1(), dist.R1(), dist.L2()};
            const double width = std::sqrt(dist.D1() * dist.D2() / k);
            for (double c : {256.0, 64.0, 16.0, 8.0, 4.0, 2.0, 1.0, 0.5, 0.25})
                if (dist.R2() - c * width > cuts.back())
                    cuts.push_back(dist.R2() - c * width);
            cuts.push_back(dist.R2());

            ErgodicEstimate est;
            est.K = K;
            est.method = ErgodicMethod::numeric;
            for (std::size_t piece = 0; piece + 1 < cuts.size(); ++piece)
            {
                const double a = cuts[piece], b = cuts[piece + 1];
                if (!(b > a))
                    continue;
                double err = 0.0;
                est.value += gauss_kronrod<double, 31>::integrate(integrand, a, b, 15, 1e-12, &err);
                est.error_estimate += err;
            }
            if (!(est.error_estimate <= abs_tol))
                fail(ErrorCode::numeric, "ergodic quadrature did not converge: achieved error " +
                                             std::to_string(est.error_estimate) + " m, requested " +
                                             std::to_string(abs_tol) + " m");
            return est;
        }

        ErgodicEstimate monte_carlo_y_up(const UserRect &rect, Threshold t, std::uint64_t K,
                                         const ErgodicOptions &opt)
        {
            if (opt.trials < 2)
                fail(ErrorCode::invalid_argument, "Monte Carlo needs at least 2 trials");
            const double s = t.slope();
            std::vector<double> maxima(opt.trials);
            constexpr std::size_t chunk = 1024;
            const std::size_t chunks = (opt.trials + chunk - 1) / chunk;
            detail::parallel_for(chunks, opt.jobs, [&](std::size_t c)
                                 {
                const std::size_t end = std::min<std::size_t>(opt.trials, (c + 1) * chunk);
                for (std::size_t trial = c * chunk; trial < end; ++trial)
                {
                    Rng rng(opt.seed, trial);
                    double best = -std::numeric_limits<double>::infinity();
                    for (std::uint64_t i = 0; i < K; ++i)
                    {
                        const double x = rng.uniform(rect.x_min, rect.x_max);
                        const double y = rng.uniform(rect.y_min, rect.y_max);
                        best = std::max(best, s * x + y);
                    }
                    maxima[trial] = best;
                } });

            // summed in trial order: independent of the worker count
            double mean = 0.0;
            for (double v : maxima)
                mean += v;
            mean /= static_cast<double>(opt.trials);
            double var = 0.0;
            for (double v : maxima)
                var += (v - mean) * (v - mean);
            var /= static_cast<double>(opt.trials - 1);

            ErgodicEstimate est;
            est.K = K;
            est.method = ErgodicMethod::monte_carlo;
            est.value = mean;
            est.std_error = std::sqrt(var / static_cast<double>(opt.trials));
            return est;
        }
    }

    ClosedFormTerms closed_form_terms(const UserRect &rect, Threshold t, std::uint64_t K)
    {
        require_k(K);
        const auto dist = trapezoid_from_rect(rect, t);
        const double L1 = dist.L1(), R1 = dist.R1(), L2 = dist.L2(), R2 = dist.R2();
        const double k = static_cast<double>(K);

        ClosedFormTerms c;
        c.R2 = R2;
        const double span = R2 - R1;
        const double q = (L2 - 2.0 * R1 + R2) / (2.0 * span);
        const double qK = std::pow(q, k);
        c.T2 = qK * (L2 - 2.0 * R1 + R2) / (2.0 * (k + 1.0));
        c.T3 = qK * (R1 - L1);
        const double x = (R1 - L1) / (2.0 * span);
        c.T4_base = std::pow(x, k) * (R1 - L1) / (2.0 * (k + 1.0));
        c.T5 = std::sqrt(2.0) * k * std::sqrt((R1 - L1) * span) * incomplete_beta(x, 1.5, k);
        c.value = R2 - c.T2 - c.T3 - c.T5;
        c.quadrature = quadrature_y_up(dist, K, 1e-6).value;

        const double residual = c.value - c.quadrature; // equals T4_base / factor if consistent
        if (c.T4_base > 0.0 && residual > 0.0 && residual > 1e-12 * std::abs(c.quadrature))
            c.implied_anomalous_factor = c.T4_base / residual;
        return c;
    }

    ErgodicEstimate ergodic_y_up(const UserRect &rect, Threshold t, std::uint64_t K, ErgodicMethod method,
                                 const ErgodicOptions &options)
    {
        require_k(K);
        rect.validate();
        switch (method)
        {
        case ErgodicMethod::numeric:
            return quadrature_y_up(trapezoid_from_rect(rect, t), K, options.abs_tol);
        case ErgodicMethod::monte_carlo:
            return monte_carlo_y_up(rect, t, K, options);
        case ErgodicMethod::closed_form_crosscheck:
        {
            ErgodicEstimate est;
            est.K = K;
            est.method = method;
            est.terms = closed_form_terms(rect, t, K);
            est.value = est.terms->value;
            return est;
        }
        }
        fail(ErrorCode::invalid_argument, "unknown ergodic method");
    }

    double ergodic_y_down(const UserRect &rect, const ErgodicEstimate &y_up)
    {
        return rect.y_min + rect.y_max - y_up.value;
    }

    double ergodic_y_down(const UserRect &rect, Threshold t, std::uint64_t K)
    {
        return ergodic_y_down(rect, ergodic_y_up(rect, t, K));
    }

    // -- incomplete beta ----------------------------------------------------------

    namespace
    {
        // Modified Lentz evaluation of the continued fraction for I_x(a, b).
        double beta_continued_fraction(double x, double a, double b)
        {
            constexpr double tiny = 1e-300;
            constexpr double eps = 1e-15;
            const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
            double c = 1.0;
            double d = 1.0 - qab * x / qap;
            if (std::abs(d) < tiny)
                d = tiny;
            d = 1.0 / d;
            double h = d;
            for (int m = 1; m <= 1000000; ++m)
            {
                const double m2 = 2.0 * m;
                double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
                d = 1.0 + aa * d;
                if (std::abs(d) < tiny)
                    d = tiny;
                c = 1.0 + aa / c;
                if (std::abs(c) < tiny)
                    c = tiny;
                d = 1.0 / d;
                h *= d * c;
                aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
                d = 1.0 + aa * d;
                if (std::abs(d) < tiny)
                    d = tiny;
                c = 1.0 + aa / c;
                if (std::abs(c) < tiny)
                    c = tiny;
                d = 1.0 / d;
                const double del = d * c;
                h *= del;
                if (std::abs(del - 1.0) < eps)
                    return h;
            }
            fail(ErrorCode::numeric, "incomplete beta continued fraction did not converge");
        }

        // s^a (1-s)^b / a * CF, the non-regularized lower tail when the CF converges fast.
        double lower_tail(double x, double a, double b)
        {
            const double log_front = a * std::log(x) + b * std::log1p(-x);
            return std::exp(log_front) / a * beta_continued_fraction(x, a, b);
        }
    }

    double incomplete_beta(double x, double a, double b)
    {
        if (!(a > 0.0) || !(b > 0.0))
            fail(ErrorCode::domain, "incomplete beta needs a > 0 and b > 0");
        if (!(x >= 0.0 && x <= 1.0))
            fail(ErrorCode::domain, "incomplete beta needs x in [0, 1]");
        const double complete = std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
        if (x == 0.0)
            return 0.0;
        if (x == 1.0)
            return complete;
        if (x < (a + 1.0) / (a + b + 2.0))
            return lower_tail(x, a, b);
        return complete - lower_tail(1.0 - x, b, a);
    }

    BetaDecay beta_term_decay(const TrapezoidDist &dist, std::span<const std::uint64_t> K_list)
    {
        BetaDecay out;
        const double ramp = dist.R1() - dist.L1();
        const double span = dist.R2() - dist.R1();
        const bool zero = !(ramp > 0.0) || !(span > 0.0);
        const double scale = zero ? 0.0 : std::sqrt(2.0) * std::sqrt(ramp * span);
        const double gamma_3_2 = 0.5 * std::sqrt(std::numbers::pi);
        std::uint64_t prev = 0;
        for (auto K : K_list)
        {
            require_k(K);
            if (K <= prev)
                fail(ErrorCode::invalid_argument, "K list must be strictly ascending");
            prev = K;
            const double k = static_cast<double>(K);
            out.K.push_back(K);
            out.term.push_back(zero ? 0.0 : scale * k * incomplete_beta(ramp / (2.0 * span), 1.5, k));
            out.envelope.push_back(scale * gamma_3_2 / std::sqrt(k));
        }
        return out;
    }

    BetaDecay beta_term_decay(const UserRect &rect, Threshold t, std::span<const std::uint64_t> K_list)
    {
        return beta_term_decay(trapezoid_from_rect(rect, t), K_list);
    }

    ErgodicSummary ergodic_summary(const UserRect &rect, Threshold t, std::uint64_t K, double wavelength,
                                   ErgodicMethod method, const ErgodicOptions &options)
    {
        ErgodicSummary s;
        s.y_up = ergodic_y_up(rect, t, K, method, options);
        s.y_down = ergodic_y_down(rect, s.y_up);
        s.expected_element_count = bounds_to_element_count(s.y_up.value, s.y_down, wavelength);
        return s;
    }

    SaturationReport saturation_report(std::span<const UserPosition> users, Threshold t, double wavelength)
    {
        SaturationReport r;
        r.threshold = t.value();
        r.wavelength = wavelength;
        for (const auto &u : users)
            r.per_user.push_back(per_user_bounds(u, t));
        r.aggregate = multiuser_bounds(users, t);
        r.element_count = bounds_to_element_count(r.aggregate.y_up, r.aggregate.y_down, wavelength);
        return r;
    }
}
