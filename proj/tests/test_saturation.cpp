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

#include "xlsat/error.hpp"
#include "xlsat/saturation.hpp"

#include <doctest.h>

#include <boost/math/special_functions/beta.hpp>

#include <cmath>
#include <vector>

using namespace xlsat;

namespace
{
    template <class F>
    double simpson(F &&f, double a, double b, int n = 20000)
    {
        const double h = (b - a) / n;
        double acc = f(a) + f(b);
        for (int i = 1; i < n; ++i)
            acc += (i % 2 ? 4 : 2) * f(a + i * h);
        return acc * h / 3;
    }

    // P(s x + y <= z) for (x, y) uniform on the rectangle, straight from the
    // definition: integrate the conditional probability in y over x.
    double rect_cdf(const UserRect &r, double s, double z)
    {
        auto cond = [&](double x)
        {
            const double ymax = std::clamp(z - s * x, r.y_min, r.y_max);
            return (ymax - r.y_min) / (r.y_max - r.y_min);
        };
        return simpson(cond, r.x_min, r.x_max, 4000) / (r.x_max - r.x_min);
    }

    // E[max of K draws] = R2 - int_{L1}^{R2} F^K, with F the rectangle CDF.
    double expected_max_by_cdf(const UserRect &r, double t, std::uint64_t K)
    {
        const double s = t / std::sqrt(1 - t * t);
        const double lo = s * r.x_min + r.y_min, hi = s * r.x_max + r.y_max;
        const double k = static_cast<double>(K);
        return hi - simpson([&](double z) { return std::pow(rect_cdf(r, s, z), k); }, lo, hi, 4000);
    }

    ErrorCode code_of(auto &&fn)
    {
        try
        {
            fn();
        }
        catch (const Error &e)
        {
            return e.code();
        }
        FAIL("expected an xlsat::Error");
        return ErrorCode::numeric;
    }
}

TEST_CASE("threshold slope")
{
    CHECK(Threshold(0.6).slope() == doctest::Approx(0.75));
    CHECK(code_of([] { Threshold(0.0); }) == ErrorCode::validation);
    CHECK(code_of([] { Threshold(1.0); }) == ErrorCode::validation);
    CHECK(code_of([] { Threshold(std::nan("")); }) == ErrorCode::validation);
}

TEST_CASE("single-user saturation at one meter")
{
    const Threshold t(0.9);
    const UserPosition u{1, 0};
    const auto b = per_user_bounds(u, t);
    const double half = 0.9 / std::sqrt(1 - 0.81);
    CHECK(b.y_up == doctest::Approx(half));
    CHECK(b.y_up == doctest::Approx(2.0647).epsilon(1e-4));
    CHECK(b.y_down == doctest::Approx(-half));
    // 2 * half / (lambda / 2) with the exact speed of light
    const double lambda = CarrierSpec(100e9).wavelength();
    CHECK(bounds_to_element_count(b.y_up, b.y_down, lambda) == static_cast<std::uint64_t>(std::ceil(4 * half / lambda)));
    CHECK(bounds_to_element_count(b.y_up, b.y_down, lambda) == 2755);
    // a 3 mm wavelength gives the rounder figure
    CHECK(bounds_to_element_count(b.y_up, b.y_down, 0.003) == 2753);
    CHECK(single_user_min_antennas(u, t, lambda) == doctest::Approx(4 * half / lambda));
}

TEST_CASE("multiuser bounds take the outermost users")
{
    const std::vector<UserPosition> users{{1, 0}, {2, 3}, {1.5, -4}};
    const Threshold t(0.8);
    const auto agg = multiuser_bounds(users, t);
    CHECK(agg.y_up == doctest::Approx(3 + 2 * t.slope()));
    CHECK(agg.y_down == doctest::Approx(-4 - 1.5 * t.slope()));
    const auto report = saturation_report(users, t, 0.003);
    CHECK(report.per_user.size() == 3);
    CHECK(report.element_count == bounds_to_element_count(agg.y_up, agg.y_down, 0.003));
    CHECK(code_of([&] { multiuser_bounds(std::span<const UserPosition>{}, t); }) == ErrorCode::validation);
}

TEST_CASE("element count rounding")
{
    CHECK(bounds_to_element_count(1.5, 0.0, 1.0) == 3);
    CHECK(bounds_to_element_count(1.5000001, 0.0, 1.0) == 4);
    CHECK(bounds_to_element_count(0.3 * 7, 0.0, 0.6) == 7); // 0.3 * 7 / 0.3 is not exactly 7
    CHECK(bounds_to_element_count(1e-6, 0.0, 1.0) == 1);
    CHECK(code_of([] { bounds_to_element_count(0.0, 1.0, 1.0); }) == ErrorCode::invalid_argument);
}

TEST_CASE("trapezoid law matches the rectangle")
{
    for (const UserRect r : {UserRect{}, UserRect{1, 2, -7.5, 7.5}, UserRect{0.5, 9, -1, 1}})
        for (double t : {0.5, 0.9, 0.99})
        {
            const auto d = trapezoid_from_rect(r, Threshold(t));
            const double s = Threshold(t).slope();
            CHECK(d.L1() == doctest::Approx(s * r.x_min + r.y_min));
            CHECK(d.R2() == doctest::Approx(s * r.x_max + r.y_max));
            const double total = simpson([&](double z) { return d.pdf(z); }, d.L1(), d.R1()) +
                                 simpson([&](double z) { return d.pdf(z); }, d.R1(), d.L2()) +
                                 simpson([&](double z) { return d.pdf(z); }, d.L2(), d.R2());
            CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
            for (double f : {0.05, 0.3, 0.5, 0.7, 0.95})
            {
                const double z = d.L1() + f * (d.R2() - d.L1());
                CHECK(d.cdf(z) == doctest::Approx(rect_cdf(r, s, z)).epsilon(1e-6));
                const double h = 1e-6;
                CHECK((d.cdf(z + h) - d.cdf(z - h)) / (2 * h) == doctest::Approx(d.pdf(z)).epsilon(1e-5));
            }
            CHECK(d.cdf(d.L1() - 1) == 0.0);
            CHECK(d.cdf(d.R2() + 1) == 1.0);
        }
    CHECK(code_of([] { TrapezoidDist(0, 2, 1, 3); }) == ErrorCode::validation);
    CHECK(code_of([] { TrapezoidDist(0, 1, 2, 4); }) == ErrorCode::validation);
}

TEST_CASE("one user: expectation is the trapezoid mean")
{
    const UserRect r{};
    const Threshold t(0.9);
    const auto e = ergodic_y_up(r, t, 1);
    CHECK(std::abs(e.value - trapezoid_from_rect(r, t).mean()) < 1e-9);
    CHECK(std::abs(e.value - (t.slope() * 5.5)) < 1e-9);
}

TEST_CASE("quadrature agrees with the tail-integral identity")
{
    for (const UserRect r : {UserRect{}, UserRect{1, 2, -7.5, 7.5}})
        for (std::uint64_t K : {2u, 10u, 100u, 1000u, 10000u})
        {
            const auto e = ergodic_y_up(r, Threshold(0.9), K);
            CHECK(e.value == doctest::Approx(expected_max_by_cdf(r, 0.9, K)).epsilon(1e-7));
            CHECK(e.error_estimate < 1e-6);
        }
}

TEST_CASE("Monte Carlo is consistent and worker-count independent")
{
    const UserRect r{};
    const Threshold t(0.9);
    ErgodicOptions o;
    o.trials = 20000;
    o.seed = 3;
    const auto a = ergodic_y_up(r, t, 10, ErgodicMethod::monte_carlo, o);
    o.jobs = 3;
    const auto b = ergodic_y_up(r, t, 10, ErgodicMethod::monte_carlo, o);
    CHECK(a.value == b.value);
    CHECK(a.std_error == b.std_error);
    CHECK(std::abs(a.value - ergodic_y_up(r, t, 10).value) < 4 * a.std_error);
    o.trials = 1;
    CHECK(code_of([&] { ergodic_y_up(r, t, 10, ErgodicMethod::monte_carlo, o); }) == ErrorCode::invalid_argument);
}

TEST_CASE("lower expectation mirrors the upper one")
{
    const UserRect r{1, 3, -2, 5};
    const Threshold t(0.7);
    const auto up = ergodic_y_up(r, t, 20);
    CHECK(ergodic_y_down(r, up) == doctest::Approx(3.0 - up.value));
    CHECK(ergodic_y_down(r, t, 20) == doctest::Approx(3.0 - up.value));
    const auto s = ergodic_summary(r, t, 20, 0.003);
    CHECK(s.expected_element_count == bounds_to_element_count(s.y_up.value, s.y_down, 0.003));
}

TEST_CASE("incomplete beta matches Boost")
{
    for (double a : {0.5, 1.5, 3.0})
        for (double b : {1.0, 2.0, 10.0, 1000.0})
            for (double x : {0.0, 1e-4, 0.1, 0.5, 0.9, 0.999, 1.0})
                CHECK(incomplete_beta(x, a, b) == doctest::Approx(boost::math::beta(a, b, x)).epsilon(1e-12));
    CHECK(code_of([] { incomplete_beta(1.5, 1, 1); }) == ErrorCode::domain);
    CHECK(code_of([] { incomplete_beta(0.5, 0, 1); }) == ErrorCode::domain);
}

TEST_CASE("closed-form terms reconcile with quadrature through the anomalous divisor")
{
    const UserRect r{};
    const Threshold t(0.9);
    for (std::uint64_t K : {1u, 2u, 3u, 5u})
    {
        const auto c = closed_form_terms(r, t, K);
        CHECK(c.quadrature == doctest::Approx(ergodic_y_up(r, t, K).value));
        CHECK(c.value == doctest::Approx(c.R2 - c.T2 - c.T3 - c.T5));
        REQUIRE(c.implied_anomalous_factor);
        CHECK(*c.implied_anomalous_factor == doctest::Approx(2.0 * K + 1).epsilon(1e-6));
        CHECK(c.value - c.T4_base / (2.0 * K + 1) == doctest::Approx(c.quadrature).epsilon(1e-10));
    }
    const auto cf = ergodic_y_up(r, t, 2, ErgodicMethod::closed_form_crosscheck);
    REQUIRE(cf.terms);
    CHECK(cf.value == cf.terms->value);
}

TEST_CASE("beta term decay")
{
    const std::vector<std::uint64_t> Ks{2, 5, 10, 100, 1000};
    const auto d = beta_term_decay(UserRect{}, Threshold(0.9), Ks);
    REQUIRE(d.term.size() == Ks.size());
    for (std::size_t i = 0; i < Ks.size(); ++i)
        CHECK(d.term[i] <= d.envelope[i]);
    const std::vector<std::uint64_t> bad{5, 5};
    CHECK(code_of([&] { beta_term_decay(UserRect{}, Threshold(0.9), bad); }) == ErrorCode::invalid_argument);
    const auto flat = beta_term_decay(TrapezoidDist(0, 0, 1, 1), Ks);
    CHECK(flat.term[0] == 0.0);
}

TEST_CASE("method names")
{
    CHECK(parse_ergodic_method("monte_carlo") == ErgodicMethod::monte_carlo);
    CHECK(std::string(ergodic_method_name(parse_ergodic_method("closed_form"))) == "closed_form");
    CHECK(code_of([] { parse_ergodic_method("exact"); }) == ErrorCode::invalid_argument);
}
