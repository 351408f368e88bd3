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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "xlsat/capacity.hpp"
#include "xlsat/channel.hpp"
#include "xlsat/closedform.hpp"
#include "xlsat/experiments.hpp"
#include "xlsat/rng.hpp"
#include "xlsat/saturation.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>

using namespace xlsat;

namespace
{
    struct Outcome
    {
        bool pass = false;
        std::string detail;
    };

    std::string fmt(const char *f, auto... args)
    {
        char buf[512];
        std::snprintf(buf, sizeof buf, f, args...);
        return buf;
    }

    const CarrierSpec carrier(100e9);
    const double lambda = carrier.wavelength();

    // 1. power ratio at the real-valued single-user antenna count equals t
    Outcome threshold_identity()
    {
        double worst = 0.0;
        for (double t : {0.5, 0.8, 0.9, 0.99})
            for (double x : {1.0, 5.0, 10.0})
            {
                const UserPosition u{x, 0.0};
                const double M = single_user_min_antennas(u, Threshold(t), lambda);
                const double ratio = approx_power(u, M, lambda, 1.0, 1.0) / power_limit(u, lambda, 1.0, 1.0);
                worst = std::max(worst, std::abs(ratio - t));
            }
        return {worst <= 1e-9, fmt("max |ratio - t| = %.3g", worst)};
    }

    // 2. closed-form power against the brute-force channel norm
    Outcome power_oracle()
    {
        const auto users = sample_users(UserRect{}, 100, 2024);
        double worst = 0.0;
        for (std::size_t M : {1000u, 10000u, 40000u})
            for (const auto &u : users)
            {
                const double exact = exact_power(channel_vector(u, ArrayGeometry{M}, carrier), 1.0);
                const double approx = approx_power(u, static_cast<double>(M), lambda, 1.0, 1.0);
                worst = std::max(worst, std::abs(approx - exact) / exact);
            }
        return {worst <= 0.02, fmt("max relative error %.3g over 100 users x 3 sizes", worst)};
    }

    // 3. closed-form correlation against the brute-force inner product
    Outcome correlation_oracle()
    {
        const std::size_t M = 40000;
        const ArrayGeometry geometry{M};
        const double half_aperture = M * lambda / 4;
        std::size_t pairs = 0, failing = 0, inside = 0, inside_failing = 0, central = 0, central_failing = 0;
        double worst_mag = 0, worst_phase = 0, inside_mag = 0, inside_phase = 0, central_mag = 0, central_phase = 0;
        for (std::uint64_t stream = 0; pairs < 200; ++stream)
        {
            const auto u = sample_users(UserRect{}, 2, 77, stream);
            if (std::abs(u[0].x - u[1].x) < 10 * lambda)
                continue;
            ++pairs;
            const auto approx = approx_correlation(u[0], u[1], static_cast<double>(M), lambda);
            const auto exact = exact_correlation(channel_vector(u[0], geometry, carrier),
                                                 channel_vector(u[1], geometry, carrier));
            const double mag = std::abs(std::abs(approx.value) - std::abs(exact)) / std::abs(exact);
            const double phase = std::abs(std::arg(approx.value / exact));
            const bool bad = mag > 0.10 || phase > 0.3;
            failing += bad;
            worst_mag = std::max(worst_mag, mag);
            worst_phase = std::max(worst_phase, phase);
            // where the line through both users meets the array axis
            const double y0 = u[0].y - u[0].x * (u[1].y - u[0].y) / (u[1].x - u[0].x);
            if (std::abs(y0) <= half_aperture)
            {
                ++inside;
                inside_failing += bad;
                inside_mag = std::max(inside_mag, mag);
                inside_phase = std::max(inside_phase, phase);
            }
            if (std::abs(y0) <= 0.5 * half_aperture)
            {
                ++central;
                central_failing += bad;
                central_mag = std::max(central_mag, mag);
                central_phase = std::max(central_phase, phase);
            }
        }
        return {failing == 0,
                fmt("%zu/200 pairs out of tolerance, max magnitude error %.3g, max phase error %.3g rad; "
                    "stationary point on the aperture: %zu pairs, %zu out of tolerance, max errors %.3g / %.3g rad; "
                    "in its central half: %zu pairs, %zu out of tolerance, max errors %.3g / %.3g rad",
                    failing, worst_mag, worst_phase, inside, inside_failing, inside_mag, inside_phase, central,
                    central_failing, central_mag, central_phase)};
    }

    std::string sweep_csv_4, sweep_csv_5;

    double cell(const Table &t, std::size_t row, std::size_t col) { return std::get<double>(t.rows[row][col]); }

    std::int64_t int_cell(const Table &t, std::size_t row, std::size_t col)
    {
        return std::get<std::int64_t>(t.rows[row][col]);
    }

    // 4. capacity versus array size with the default field
    Outcome capacity_convergence()
    {
        const auto r = capacity_sweep(default_sweep_spec(ExperimentKind::capacity_sweep));
        if (r.error)
            return {false, "sweep failed: " + *r.error};
        sweep_csv_4 = to_csv(r.table);
        const auto m_sat = r.manifest.at("predicted_saturation_M").get<std::int64_t>();
        std::map<double, std::vector<std::pair<std::int64_t, double>>> by_snr; // snr -> (M, C)
        for (std::size_t i = 0; i < r.table.rows.size(); ++i)
            by_snr[cell(r.table, i, 1)].push_back({int_cell(r.table, i, 0), cell(r.table, i, 2)});
        bool ok = true;
        std::string detail = fmt("predicted saturation M = %lld;", static_cast<long long>(m_sat));
        for (const auto &[snr, curve] : by_snr)
        {
            bool monotone = true;
            for (std::size_t i = 1; i < curve.size(); ++i)
                monotone = monotone && curve[i].second >= curve[i - 1].second;
            double at_sat = NAN, at_double = NAN;
            for (const auto &[M, C] : curve)
            {
                if (M == m_sat)
                    at_sat = C;
                if (M == 2 * m_sat)
                    at_double = C;
            }
            const double gain = (at_double - at_sat) / at_double;
            const double limit = snr >= 200 ? 0.05 : 0.10;
            ok = ok && monotone && gain < limit;
            detail += fmt(" %g dB: monotone=%s, gain beyond saturation %.3g%%", snr, monotone ? "yes" : "no",
                          100 * gain);
        }
        return {ok, detail};
    }

    // 5. modified ZF against ZF with the close-range field
    Outcome modified_zf_convergence()
    {
        const auto r = beamformer_compare(default_sweep_spec(ExperimentKind::beamformer_compare));
        if (r.error)
            return {false, "comparison failed: " + *r.error};
        sweep_csv_5 = to_csv(r.table);
        const auto m_sat = r.manifest.at("predicted_saturation_M").get<std::int64_t>();
        double beyond = 0.0, small_min = INFINITY;
        std::size_t small_points = 0;
        for (std::size_t i = 0; i < r.table.rows.size(); ++i)
        {
            const auto M = int_cell(r.table, i, 0);
            const double zf = cell(r.table, i, 3), mzf = cell(r.table, i, 5);
            const double dev = std::abs(mzf - zf) / zf;
            if (M >= m_sat)
                beyond = std::max(beyond, dev);
            if (10 * M <= m_sat)
            {
                ++small_points;
                small_min = std::min(small_min, dev);
            }
        }
        const auto last = r.table.rows.size() - 1;
        const double zf = cell(r.table, last, 3), mrc = cell(r.table, last, 2);
        const bool ok = beyond <= 0.03 && small_points > 0 && small_min > beyond && zf > mrc;
        return {ok, fmt("saturation M = %lld; max deviation beyond saturation %.3g; min deviation at M <= 0.1x "
                        "saturation %.3g (%zu points); at largest M zf %.4f vs mrc %.4f",
                        static_cast<long long>(m_sat), beyond, small_min, small_points, zf, mrc)};
    }

    // 6. receiver ordering and determinant sandwich
    Outcome ordering_invariants()
    {
        Rng rng(6, 0);
        std::size_t violations = 0, rank_skips = 0;
        double worst = 0.0;
        for (int trial = 0; trial < 1000; ++trial)
        {
            Scenario s;
            const std::size_t K = 1 + rng.next_u64() % 8;
            s.geometry.element_count = static_cast<std::size_t>(std::llround(std::pow(10.0, rng.uniform(1.5, 3.0))));
            for (std::size_t k = 0; k < K; ++k)
                s.users.push_back({rng.uniform(1, 10), rng.uniform(-7.5, 7.5)});
            const double rho = std::pow(10.0, rng.uniform(-2.0, 6.0));
            const auto G = exact_gram(channel_matrix(s));
            const double C = shannon_capacity(G, rho);
            const double mmse = mmse_rates(G, rho).sum_rate;
            const double mrc = mrc_rates(G, rho).sum_rate;
            double zf = -INFINITY;
            try
            {
                zf = zf_rates(G, rho).sum_rate;
            }
            catch (const Error &e)
            {
                if (e.code() != ErrorCode::rank_deficient)
                    throw;
                ++rank_skips;
            }
            const auto b = capacity_bounds(G, rho);
            const double gaps[] = {mmse - C, std::max(zf, mrc) - mmse, b.log2_lower - C, C - b.log2_upper};
            for (double g : gaps)
            {
                worst = std::max(worst, g);
                violations += g > 1e-9;
            }
        }
        return {violations == 0, fmt("%zu violations over 1000 scenarios (largest excess %.3g); "
                                     "%zu singular Grams skipped for ZF", violations, worst, rank_skips)};
    }

    // E[min] of K draws from the law of y - s x, by its own tail integral.
    double expected_min(const UserRect &r, double s, std::uint64_t K)
    {
        const double a = r.y_min - s * r.x_max, b = r.y_max - s * r.x_min;
        const double c1 = std::min(r.y_min - s * r.x_min, r.y_max - s * r.x_max);
        const double c2 = std::max(r.y_min - s * r.x_min, r.y_max - s * r.x_max);
        const TrapezoidDist w(a, c1, c2, b);
        auto survival = [&](double z) { return std::pow(1.0 - w.cdf(z), static_cast<double>(K)); };
        using boost::math::quadrature::gauss_kronrod;
        double tail = 0.0;
        const double cuts[] = {a, c1, c2, b};
        for (int i = 0; i < 3; ++i)
            if (cuts[i + 1] > cuts[i])
                tail += gauss_kronrod<double, 61>::integrate(survival, cuts[i], cuts[i + 1], 30, 1e-14);
        return a + tail;
    }

    // 7. ergodic saturation: quadrature, Monte Carlo, trapezoid mean, mirror identity, corner limit
    Outcome ergodic_dual_oracle()
    {
        const UserRect r{};
        const Threshold t(0.9);
        bool ok = true;
        std::string detail;
        ErgodicOptions mc;
        mc.trials = 100000;
        mc.seed = 12345;
        for (std::uint64_t K : {1u, 10u, 100u})
        {
            const auto q = ergodic_y_up(r, t, K);
            const auto m = ergodic_y_up(r, t, K, ErgodicMethod::monte_carlo, mc);
            const double z = std::abs(q.value - m.value) / m.std_error;
            const double mirror = std::abs(q.value + expected_min(r, t.slope(), K) - (r.y_min + r.y_max));
            ok = ok && z <= 3 && mirror <= 1e-8;
            detail += fmt("K=%llu: |quad - MC| = %.2f SE, identity residual %.2g m; ",
                          static_cast<unsigned long long>(K), z, mirror);
        }
        const double mean_err = std::abs(ergodic_y_up(r, t, 1).value - trapezoid_from_rect(r, t).mean());
        const double R2 = trapezoid_from_rect(r, t).R2();
        const double corner = std::abs(ergodic_y_up(r, t, 10000).value - R2) / R2;
        ok = ok && mean_err <= 1e-6 && corner <= 0.01;
        detail += fmt("K=1 vs trapezoid mean %.2g m; K=1e4 within %.3g%% of R2", mean_err, 100 * corner);
        return {ok, detail};
    }

    // 8. decay of the beta term
    Outcome beta_decay()
    {
        const std::vector<std::uint64_t> Ks{2, 3, 5, 7, 10, 20, 50, 100, 200, 500, 1000, 2000, 5000, 10000};
        const auto d = beta_term_decay(UserRect{}, Threshold(0.9), Ks);
        bool dominated = true, decreasing = true;
        double worst_ratio = 0;
        for (std::size_t i = 0; i < Ks.size(); ++i)
        {
            dominated = dominated && d.term[i] <= d.envelope[i];
            worst_ratio = std::max(worst_ratio, d.term[i] / d.envelope[i]);
            if (i > 0 && Ks[i - 1] >= 10)
                decreasing = decreasing && d.term[i] < d.term[i - 1];
        }
        return {dominated && decreasing, fmt("max term/envelope %.4f over K in [2, 1e4]; decreasing from K=10: %s",
                                             worst_ratio, decreasing ? "yes" : "no")};
    }

    // 9. normalized determinant gap versus user count
    Outcome gap_growth()
    {
        auto spec = default_sweep_spec(ExperimentKind::gap_study);
        if (spec.trials < 20)
            spec.trials = 20;
        const auto r = gap_study(spec);
        if (r.error)
            return {false, "gap study failed: " + *r.error};
        bool monotone = true;
        for (std::size_t i = 1; i < r.table.rows.size(); ++i)
            monotone = monotone && cell(r.table, i, 1) >= cell(r.table, i - 1, 1);
        const bool det_ok = r.manifest.at("checks").at("det_R_le_1").get<bool>();
        const double at_1000 = cell(r.table, r.table.rows.size() - 1, 1);
        const bool ok = monotone && det_ok && int_cell(r.table, r.table.rows.size() - 1, 0) == 1000 &&
                        std::abs(at_1000 - 0.064) <= 0.02;
        return {ok, fmt("%llu draws per K; nondecreasing: %s; max det(R) %.4f; K=1000 value %.4f (target 0.064)",
                        static_cast<unsigned long long>(spec.trials), monotone ? "yes" : "no",
                        r.manifest.at("checks").at("det_R_max").get<double>(), at_1000)};
    }

    // 10. reruns give identical rows
    Outcome determinism()
    {
        if (sweep_csv_4.empty() || sweep_csv_5.empty())
            return {false, "reference runs missing"};
        const auto a = to_csv(capacity_sweep(default_sweep_spec(ExperimentKind::capacity_sweep)).table);
        const auto b = to_csv(beamformer_compare(default_sweep_spec(ExperimentKind::beamformer_compare)).table);
        auto g = default_sweep_spec(ExperimentKind::gap_study);
        g.k_grid = {10, 50};
        g.trials = 5;
        const auto g1 = to_csv(gap_study(g).table);
        g.jobs = 4;
        const auto g2 = to_csv(gap_study(g).table);
        const bool ok = a == sweep_csv_4 && b == sweep_csv_5 && g1 == g2;
        return {ok, fmt("capacity sweep %s, beamformer comparison %s, gap study across worker counts %s",
                        a == sweep_csv_4 ? "identical" : "DIFFERS", b == sweep_csv_5 ? "identical" : "DIFFERS",
                        g1 == g2 ? "identical" : "DIFFERS")};
    }
}

int main()
{
    const std::pair<const char *, std::function<Outcome()>> criteria[] = {
        {"threshold identity", threshold_identity},
        {"closed-form power oracle", power_oracle},
        {"closed-form correlation oracle", correlation_oracle},
        {"capacity convergence with array size", capacity_convergence},
        {"modified ZF converges to ZF", modified_zf_convergence},
        {"receiver ordering and determinant bounds", ordering_invariants},
        {"ergodic saturation dual oracle", ergodic_dual_oracle},
        {"beta term decay", beta_decay},
        {"determinant gap growth", gap_growth},
        {"determinism", determinism},
    };
    int failed = 0;
    int n = 0;
    for (const auto &[name, run] : criteria)
    {
        ++n;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try
        {
            o = run();
        }
        catch (const std::exception &e)
        {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %2d %s: %s (%.1fs) %s\n", n, o.pass ? "PASS" : "FAIL", name, secs, o.detail.c_str());
        std::fflush(stdout);
        failed += !o.pass;
    }
    std::printf("%d/%d criteria passed\n", n - failed, n);
    return failed ? 1 : 0;
}
