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

#include "xlsat/experiments.hpp"
#include "xlsat/capacity.hpp"
#include "xlsat/channel.hpp"
#include "xlsat/closedform.hpp"
#include "xlsat/report_json.hpp"
#include "xlsat/saturation.hpp"
#include "xlsat/scenario_config.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>

#ifndef XLSAT_VERSION
#define XLSAT_VERSION "unknown"
#endif

namespace xlsat
{
    using nlohmann::json;

    const char *experiment_name(ExperimentKind kind) noexcept
    {
        switch (kind)
        {
        case ExperimentKind::capacity_sweep:
            return "capacity_sweep";
        case ExperimentKind::beamformer_compare:
            return "beamformer_compare";
        case ExperimentKind::gap_study:
            return "gap_study";
        case ExperimentKind::oracle_validation:
            return "oracle_validation";
        }
        return "unknown";
    }

    ExperimentKind parse_experiment_kind(const std::string &name)
    {
        for (auto k : {ExperimentKind::capacity_sweep, ExperimentKind::beamformer_compare, ExperimentKind::gap_study,
                       ExperimentKind::oracle_validation})
            if (name == experiment_name(k))
                return k;
        fail(ErrorCode::invalid_argument, "unknown experiment '" + name + "'");
    }

    // -- spec -------------------------------------------------------------------

    SweepSpec default_sweep_spec(ExperimentKind kind)
    {
        SweepSpec s;
        s.kind = kind;
        switch (kind)
        {
        case ExperimentKind::capacity_sweep:
            s.users = 100;
            s.snr_db = {0.0, 200.0};
            break;
        case ExperimentKind::beamformer_compare:
            s.rect = UserRect{1.0, 2.0, -7.5, 7.5};
            s.users = 10;
            break;
        case ExperimentKind::gap_study:
            s.k_grid = {10, 50, 100, 200, 500, 1000};
            s.trials = 50;
            break;
        case ExperimentKind::oracle_validation:
            s.m_grid = {10, 100, 1000, 10000, 40000};
            s.trials = 20;
            break;
        }
        for (const char *key : {"frequency_hz", "rect", "users", "threshold", "m_grid", "k_grid", "snr_db", "trials",
                                "seed", "noise_power_w", "beta0", "transmit_power_w", "target_snr_db", "ref_position",
                                "jobs", "exact_degenerate_fallback", "eigen_floor", "pairs"})
            s.parameter_sources[key] = "default";
        return s;
    }

    namespace
    {
        template <class T>
        void require_increasing(const std::vector<T> &grid, const char *name)
        {
            for (std::size_t i = 1; i < grid.size(); ++i)
                if (!(grid[i] > grid[i - 1]))
                    fail(ErrorCode::validation, std::string(name) + " must be strictly increasing");
        }

        UserPosition position_from_json(const json &j, const std::string &where)
        {
            try
            {
                UserPosition p{j.at("x").get<double>(), j.at("y").get<double>()};
                p.validate();
                return p;
            }
            catch (const json::exception &e)
            {
                fail(ErrorCode::validation, where + ": expected {x, y}: " + e.what());
            }
        }

        template <class T>
        T get_as(const json &j, const std::string &key)
        {
            try
            {
                return j.get<T>();
            }
            catch (const json::exception &e)
            {
                fail(ErrorCode::validation, "bad value for '" + key + "': " + e.what());
            }
        }
    }

    void SweepSpec::validate() const
    {
        CarrierSpec{frequency_hz};
        rect.validate();
        Threshold{threshold};
        if (users < 1)
            fail(ErrorCode::validation, "users must be >= 1");
        if (trials < 1)
            fail(ErrorCode::validation, "trials must be >= 1");
        if (jobs < 1)
            fail(ErrorCode::validation, "jobs must be >= 1");
        if (!(noise_power_w > 0.0) || !(beta0 > 0.0))
            fail(ErrorCode::validation, "noise_power_w and beta0 must be > 0");
        if (transmit_power_w && !(*transmit_power_w > 0.0))
            fail(ErrorCode::validation, "transmit_power_w must be > 0");
        if (!(eigen_floor > 0.0))
            fail(ErrorCode::validation, "eigen_floor must be > 0");
        if (!std::isfinite(target_snr_db))
            fail(ErrorCode::validation, "target_snr_db must be finite");
        ref_position.validate();
        require_increasing(m_grid, "m_grid");
        require_increasing(k_grid, "k_grid");
        if (!m_grid.empty() && m_grid.front() < 1)
            fail(ErrorCode::validation, "m_grid values must be >= 1");
        if (!k_grid.empty() && k_grid.front() < 1)
            fail(ErrorCode::validation, "k_grid values must be >= 1");
        for (double s : snr_db)
            if (!std::isfinite(s))
                fail(ErrorCode::validation, "snr_db values must be finite");
        for (const auto &p : pairs)
        {
            p[0].validate();
            p[1].validate();
        }
    }

    SweepSpec parse_sweep_spec(ExperimentKind kind, const json &request)
    {
        if (!request.is_object())
            fail(ErrorCode::validation, "experiment request must be a JSON object");
        SweepSpec s = default_sweep_spec(kind);

        if (request.contains("scenario") && !request.at("scenario").is_null())
        {
            const auto cfg = parse_scenario_config(request.at("scenario"));
            if (!cfg.user_rect)
                fail(ErrorCode::validation, "experiments need a scenario with 'user_rect', not explicit users");
            s.frequency_hz = cfg.frequency_hz;
            s.rect = cfg.user_rect->rect;
            s.users = cfg.user_rect->count;
            s.seed = cfg.user_rect->seed;
            s.noise_power_w = cfg.noise_power_w;
            s.beta0 = cfg.beta0;
            for (const char *key : {"frequency_hz", "rect", "users", "seed", "noise_power_w", "beta0"})
                s.parameter_sources[key] = "config";
            if (cfg.transmit_power_w)
            {
                s.transmit_power_w = cfg.transmit_power_w;
                s.parameter_sources["transmit_power_w"] = "config";
            }
            else
            {
                s.target_snr_db = *cfg.target_snr_db;
                s.ref_position = *cfg.ref_position;
                s.parameter_sources["target_snr_db"] = "config";
                s.parameter_sources["ref_position"] = "config";
            }
        }

        for (const auto &[key, value] : request.items())
        {
            if (key == "scenario")
                continue;
            if (key == "experiment")
            {
                if (get_as<std::string>(value, key) != experiment_name(kind))
                    fail(ErrorCode::validation, "request is for experiment '" + value.get<std::string>() + "'");
                continue;
            }
            if (key == "frequency_hz")
                s.frequency_hz = get_as<double>(value, key);
            else if (key == "rect")
                s.rect = rect_from_json(value);
            else if (key == "users")
                s.users = get_as<std::size_t>(value, key);
            else if (key == "threshold")
                s.threshold = get_as<double>(value, key);
            else if (key == "m_grid")
                s.m_grid = get_as<std::vector<std::uint64_t>>(value, key);
            else if (key == "k_grid")
                s.k_grid = get_as<std::vector<std::uint64_t>>(value, key);
            else if (key == "snr_db")
                s.snr_db = get_as<std::vector<double>>(value, key);
            else if (key == "trials")
                s.trials = get_as<std::uint64_t>(value, key);
            else if (key == "seed")
                s.seed = get_as<std::uint64_t>(value, key);
            else if (key == "noise_power_w")
                s.noise_power_w = get_as<double>(value, key);
            else if (key == "beta0")
                s.beta0 = get_as<double>(value, key);
            else if (key == "transmit_power_w")
                s.transmit_power_w = get_as<double>(value, key);
            else if (key == "target_snr_db")
            {
                s.target_snr_db = get_as<double>(value, key);
                s.transmit_power_w.reset();
            }
            else if (key == "ref_position")
                s.ref_position = position_from_json(value, key);
            else if (key == "jobs")
                s.jobs = get_as<unsigned>(value, key);
            else if (key == "exact_degenerate_fallback")
                s.exact_degenerate_fallback = get_as<bool>(value, key);
            else if (key == "eigen_floor")
                s.eigen_floor = get_as<double>(value, key);
            else if (key == "pairs")
            {
                s.pairs.clear();
                for (const auto &p : value)
                {
                    const auto v = get_as<std::vector<double>>(p, key);
                    if (v.size() != 4)
                        fail(ErrorCode::validation, "each pair is [x_i, y_i, x_j, y_j]");
                    s.pairs.push_back({UserPosition{v[0], v[1]}, UserPosition{v[2], v[3]}});
                }
            }
            else
                fail(ErrorCode::validation, "unknown experiment setting '" + key + "'");
            s.parameter_sources[key] = "flag";
        }
        s.validate();
        return s;
    }

    json to_json(const SweepSpec &s)
    {
        json j{{"experiment", experiment_name(s.kind)},
               {"frequency_hz", s.frequency_hz},
               {"rect", to_json(s.rect)},
               {"users", s.users},
               {"threshold", s.threshold},
               {"m_grid", s.m_grid},
               {"k_grid", s.k_grid},
               {"snr_db", s.snr_db},
               {"trials", s.trials},
               {"seed", s.seed},
               {"noise_power_w", s.noise_power_w},
               {"beta0", s.beta0},
               {"target_snr_db", s.target_snr_db},
               {"ref_position", {{"x", s.ref_position.x}, {"y", s.ref_position.y}}},
               {"jobs", s.jobs},
               {"exact_degenerate_fallback", s.exact_degenerate_fallback},
               {"eigen_floor", s.eigen_floor}};
        j["transmit_power_w"] = s.transmit_power_w ? json(*s.transmit_power_w) : json(nullptr);
        json pairs = json::array();
        for (const auto &p : s.pairs)
            pairs.push_back({p[0].x, p[0].y, p[1].x, p[1].y});
        j["pairs"] = pairs;
        return j;
    }

    // -- tables -----------------------------------------------------------------

    std::string to_csv(const Table &table)
    {
        std::string out;
        for (std::size_t c = 0; c < table.columns.size(); ++c)
        {
            if (c)
                out += ',';
            out += table.columns[c];
        }
        out += '\n';
        char buf[40];
        for (const auto &row : table.rows)
        {
            for (std::size_t c = 0; c < row.size(); ++c)
            {
                if (c)
                    out += ',';
                if (const auto *i = std::get_if<std::int64_t>(&row[c]))
                    out.append(buf, std::to_chars(buf, buf + sizeof buf, *i).ptr);
                else if (const auto *d = std::get_if<double>(&row[c]); d && std::isfinite(*d))
                    out.append(buf, std::to_chars(buf, buf + sizeof buf, *d).ptr);
                else
                    out += "nan";
            }
            out += '\n';
        }
        return out;
    }

    std::vector<std::uint64_t> log_grid(std::uint64_t lo, std::uint64_t hi, std::size_t points,
                                        std::initializer_list<std::uint64_t> extra)
    {
        std::set<std::uint64_t> values(extra.begin(), extra.end());
        lo = std::max<std::uint64_t>(lo, 1);
        hi = std::max(hi, lo);
        const double a = std::log(static_cast<double>(lo)), b = std::log(static_cast<double>(hi));
        for (std::size_t i = 0; i < points; ++i)
        {
            const double f = points > 1 ? static_cast<double>(i) / static_cast<double>(points - 1) : 0.0;
            values.insert(static_cast<std::uint64_t>(std::llround(std::exp(a + f * (b - a)))));
        }
        values.insert(lo);
        values.insert(hi);
        return {values.begin(), values.end()};
    }

    // -- runner plumbing --------------------------------------------------------

    namespace
    {
        using Clock = std::chrono::steady_clock;

        struct Flags
        {
            std::uint64_t clamped_eigenvalues = 0;
            std::uint64_t degenerate_pairs = 0;
            std::uint64_t clipped_zf_users = 0;
            std::uint64_t eigen_floor_clamps = 0;

            void merge(const Flags &o)
            {
                clamped_eigenvalues += o.clamped_eigenvalues;
                degenerate_pairs += o.degenerate_pairs;
                clipped_zf_users += o.clipped_zf_users;
                eigen_floor_clamps += o.eigen_floor_clamps;
            }

            json to_json() const
            {
                return {{"capacity_eigenvalue_clamps", clamped_eigenvalues},
                        {"degenerate_pairs", degenerate_pairs},
                        {"modified_zf_clipped_users", clipped_zf_users},
                        {"correlation_eigenvalue_floor_clamps", eigen_floor_clamps}};
            }
        };

        ExperimentResult begin(const SweepSpec &spec)
        {
            spec.validate();
            ExperimentResult r;
            r.name = experiment_name(spec.kind);
            r.manifest = {{"experiment", r.name},
                          {"code_version", XLSAT_VERSION},
                          {"seed", spec.seed},
                          {"input", to_json(spec)},
                          {"parameter_sources", spec.parameter_sources},
                          {"notes", json::array()}};
            return r;
        }

        void note(ExperimentResult &r, const std::string &text) { r.manifest["notes"].push_back(text); }

        // Runs all items; on failure keeps the longest completed prefix.
        template <class Out, class Fn>
        std::size_t run_items(ExperimentResult &res, std::size_t n, unsigned jobs,
                              std::vector<std::optional<Out>> &slots, Fn &&fn)
        {
            slots.assign(n, std::nullopt);
            try
            {
                detail::parallel_for(n, jobs, [&](std::size_t i)
                                     { slots[i] = fn(i); });
            }
            catch (const Error &e)
            {
                res.error = e.what();
                res.error_code = e.code();
            }
            catch (const std::bad_alloc &)
            {
                res.error = "out of memory";
                res.error_code = ErrorCode::resource;
            }
            catch (const std::exception &e)
            {
                res.error = e.what();
                res.error_code = ErrorCode::numeric;
            }
            std::size_t done = 0;
            while (done < n && slots[done])
                ++done;
            return done;
        }

        void finish(ExperimentResult &res, const Flags &flags, Clock::time_point start)
        {
            res.manifest["flags"] = flags.to_json();
            res.manifest["row_count"] = res.table.rows.size();
            res.manifest["wall_time_s"] = std::chrono::duration<double>(Clock::now() - start).count();
            if (res.error)
                res.manifest["error"] = {{"code", error_code_name(res.error_code)}, {"message", *res.error}};
            else
                res.manifest["error"] = nullptr;
        }

        Scenario make_scenario(const CarrierSpec &carrier, std::size_t M, std::vector<UserPosition> users,
                               double beta0)
        {
            Scenario s;
            s.carrier = carrier;
            s.geometry.element_count = M;
            s.users = std::move(users);
            s.budget.beta0 = beta0;
            return s;
        }

        std::uint64_t predicted_saturation(const SweepSpec &spec, const CarrierSpec &carrier, ExperimentResult &res)
        {
            const auto sat = ergodic_summary(spec.rect, Threshold(spec.threshold), spec.users, carrier.wavelength());
            res.manifest["ergodic_saturation"] = to_json(sat);
            res.manifest["predicted_saturation_M"] = sat.expected_element_count;
            return sat.expected_element_count;
        }
    }

    // -- capacity vs array size ----------------------------------------------------

    ExperimentResult capacity_sweep(const SweepSpec &spec)
    {
        const auto start = Clock::now();
        auto res = begin(spec);
        const CarrierSpec carrier(spec.frequency_hz);
        const std::uint64_t m_sat = predicted_saturation(spec, carrier, res);
        const auto grid = spec.m_grid.empty() ? log_grid(100, 2 * m_sat, 30, {m_sat}) : spec.m_grid;
        const auto snrs = spec.snr_db.empty() ? std::vector<double>{0.0, 200.0} : spec.snr_db;
        res.manifest["grid"] = grid;
        note(res, "normalized_capacity is relative to the largest grid M");
        note(res, "rho = 10^(snr_db/10) = P / noise power");
        if (spec.m_grid.empty())
            note(res, "default grid: 30 log-spaced M from 100 to 2x predicted saturation, plus the saturation count");

        std::vector<std::vector<UserPosition>> draws;
        for (std::uint64_t t = 0; t < spec.trials; ++t)
            draws.push_back(sample_users(spec.rect, spec.users, spec.seed, t));

        struct Item
        {
            std::vector<double> capacity; // per SNR, mean over draws
            Flags flags;
        };
        std::vector<std::optional<Item>> slots;
        const auto done = run_items(res, grid.size(), spec.jobs, slots, [&](std::size_t i)
                                    {
            Item item;
            item.capacity.assign(snrs.size(), 0.0);
            for (const auto &users : draws)
            {
                const auto gram = exact_gram(channel_matrix(make_scenario(carrier, grid[i], users, spec.beta0)));
                for (std::size_t s = 0; s < snrs.size(); ++s)
                {
                    CapacityDiagnostics d;
                    item.capacity[s] += shannon_capacity(gram, db_to_linear(snrs[s]), &d);
                    item.flags.clamped_eigenvalues += d.clamped_eigenvalues;
                }
            }
            for (auto &c : item.capacity)
                c /= static_cast<double>(draws.size());
            return item; });

        res.table.columns = {"M", "snr_db", "capacity_bits", "normalized_capacity", "predicted_saturation_M"};
        Flags flags;
        const bool anchored = done == grid.size();
        for (std::size_t i = 0; i < done; ++i)
        {
            flags.merge(slots[i]->flags);
            for (std::size_t s = 0; s < snrs.size(); ++s)
            {
                const double c = slots[i]->capacity[s];
                Cell norm = std::monostate{};
                if (anchored)
                    norm = c / slots.back()->capacity[s];
                res.table.rows.push_back({static_cast<std::int64_t>(grid[i]), snrs[s], c, norm,
                                          static_cast<std::int64_t>(m_sat)});
            }
        }
        finish(res, flags, start);
        return res;
    }

    // -- receivers vs array size ----------------------------------------------------

    ExperimentResult beamformer_compare(const SweepSpec &spec)
    {
        const auto start = Clock::now();
        auto res = begin(spec);
        const CarrierSpec carrier(spec.frequency_hz);
        const std::uint64_t m_sat = predicted_saturation(spec, carrier, res);
        const auto grid = spec.m_grid.empty() ? log_grid(100, 3 * m_sat, 24, {m_sat}) : spec.m_grid;
        res.manifest["grid"] = grid;

        double power = 0.0;
        if (spec.transmit_power_w)
        {
            power = *spec.transmit_power_w;
            res.manifest["power_calibration"] = "explicit transmit power";
        }
        else
        {
            power = calibrate_power(spec.target_snr_db, spec.ref_position, carrier, spec.noise_power_w, spec.beta0);
            res.manifest["power_calibration"] = "target SNR against the M -> infinity power limit at ref_position";
        }
        const double rho = power / spec.noise_power_w;
        res.manifest["transmit_power_w"] = power;
        res.manifest["rho"] = rho;
        note(res, "transmit power is fixed across the M grid");
        note(res, "rates are averaged over user draws");
        if (spec.m_grid.empty())
            note(res, "default grid: 24 log-spaced M from 100 to 3x predicted saturation, plus the saturation count");
        AnalyticGramOptions gopt;
        gopt.exact_degenerate_fallback = spec.exact_degenerate_fallback;
        res.manifest["exact_degenerate_fallback"] = spec.exact_degenerate_fallback;

        std::vector<std::vector<UserPosition>> draws;
        for (std::uint64_t t = 0; t < spec.trials; ++t)
            draws.push_back(sample_users(spec.rect, spec.users, spec.seed, t));

        struct Item
        {
            std::array<double, 5> v{}; // capacity, mrc, zf, mmse, modified zf
            Flags flags;
        };
        std::vector<std::optional<Item>> slots;
        const auto done = run_items(res, grid.size(), spec.jobs, slots, [&](std::size_t i)
                                    {
            Item item;
            for (const auto &users : draws)
            {
                const auto gram = exact_gram(channel_matrix(make_scenario(carrier, grid[i], users, spec.beta0)));
                CapacityDiagnostics d;
                item.v[0] += shannon_capacity(gram, rho, &d);
                item.v[1] += mrc_rates(gram, rho).sum_rate;
                item.v[2] += zf_rates(gram, rho).sum_rate;
                item.v[3] += mmse_rates(gram, rho).sum_rate;
                const auto mzf = modified_zf_rates(users, grid[i], carrier, spec.beta0, rho, gopt);
                item.v[4] += mzf.sum_rate;
                item.flags.clamped_eigenvalues += d.clamped_eigenvalues;
                item.flags.clipped_zf_users += mzf.clipped_users;
                item.flags.degenerate_pairs += mzf.degenerate_pairs.size();
            }
            for (auto &x : item.v)
                x /= static_cast<double>(draws.size());
            return item; });

        res.table.columns = {"M", "capacity_bits", "rate_mrc", "rate_zf", "rate_mmse", "rate_modified_zf"};
        Flags flags;
        for (std::size_t i = 0; i < done; ++i)
        {
            flags.merge(slots[i]->flags);
            const auto &v = slots[i]->v;
            res.table.rows.push_back({static_cast<std::int64_t>(grid[i]), v[0], v[1], v[2], v[3], v[4]});
        }
        finish(res, flags, start);
        return res;
    }

    // -- determinant gap vs user count ------------------------------------------

    ExperimentResult gap_study(const SweepSpec &spec)
    {
        const auto start = Clock::now();
        auto res = begin(spec);
        const CarrierSpec carrier(spec.frequency_hz);
        const auto grid = spec.k_grid.empty() ? std::vector<std::uint64_t>{10, 50, 100, 200, 500, 1000} : spec.k_grid;
        res.manifest["grid"] = grid;
        note(res, "R is built from the M -> infinity correlation limit for every pair");
        note(res, "value is -(1/K) sum log2 eig(R), the normalized bound gap at 0 dB; spread is the sample std over draws");

        const std::size_t draws = spec.trials;
        struct Item
        {
            GapResult gap;
        };
        std::vector<std::optional<Item>> slots;
        const auto done = run_items(res, grid.size() * draws, spec.jobs, slots, [&](std::size_t n)
                                    {
            const std::uint64_t K = grid[n / draws];
            const std::uint64_t draw = n % draws;
            const auto users = sample_users(spec.rect, K, spec.seed, (K << 24) + draw);
            return Item{normalized_gap_bound(users, carrier.wavelength(), spec.eigen_floor)}; });

        res.table.columns = {"K", "neg_expected_log2_eig_mean", "neg_expected_log2_eig_std", "det_R_mean"};
        Flags flags;
        double det_max = 0.0, gap_min = INFINITY;
        for (std::size_t k = 0; k < grid.size() && (k + 1) * draws <= done; ++k)
        {
            double mean = 0.0, det = 0.0;
            for (std::size_t d = 0; d < draws; ++d)
            {
                const auto &g = slots[k * draws + d]->gap;
                mean += g.value;
                det += g.correlation_det;
                det_max = std::max(det_max, g.correlation_det);
                gap_min = std::min(gap_min, g.value);
                flags.eigen_floor_clamps += g.clamped_eigenvalues;
            }
            mean /= static_cast<double>(draws);
            det /= static_cast<double>(draws);
            double var = 0.0;
            for (std::size_t d = 0; d < draws; ++d)
                var += std::pow(slots[k * draws + d]->gap.value - mean, 2);
            const double sd = draws > 1 ? std::sqrt(var / static_cast<double>(draws - 1)) : 0.0;
            res.table.rows.push_back({static_cast<std::int64_t>(grid[k]), mean, sd, det});
        }
        res.manifest["checks"] = {{"det_R_max", det_max},
                                  {"det_R_le_1", det_max <= 1.0 + 1e-9},
                                  {"gap_min", std::isfinite(gap_min) ? json(gap_min) : json(nullptr)},
                                  {"gap_nonnegative", !(gap_min < -1e-9)}};
        finish(res, flags, start);
        return res;
    }

    // -- closed forms vs brute force ----------------------------------------------

    ExperimentResult oracle_validation(const SweepSpec &spec)
    {
        const auto start = Clock::now();
        auto res = begin(spec);
        const CarrierSpec carrier(spec.frequency_hz);
        const double lambda = carrier.wavelength();
        const auto grid = spec.m_grid.empty() ? std::vector<std::uint64_t>{10, 100, 1000, 10000, 40000} : spec.m_grid;
        res.manifest["grid"] = grid;

        auto pairs = spec.pairs;
        if (pairs.empty())
            for (std::uint64_t p = 0; p < spec.trials; ++p)
            {
                const auto u = sample_users(spec.rect, 2, spec.seed, p);
                pairs.push_back({u[0], u[1]});
            }
        note(res, "pairs with radial gap below one wavelength are tagged degenerate and excluded");
        note(res, "power_rel_err is the larger of the two users' relative errors");

        struct Item
        {
            bool degenerate = false;
            double power_err = 0.0, mag_err = 0.0, phase_err = 0.0;
        };
        const std::size_t cells = pairs.size() * grid.size();
        std::vector<std::optional<Item>> slots;
        const auto done = run_items(res, cells, spec.jobs, slots, [&](std::size_t n)
                                    {
            const auto &pr = pairs[n / grid.size()];
            const std::uint64_t M = grid[n % grid.size()];
            Item item;
            const auto approx = approx_correlation(pr[0], pr[1], static_cast<double>(M), lambda);
            item.degenerate = approx.degenerate;
            if (item.degenerate)
                return item;
            const ArrayGeometry geometry{M};
            const auto hi = channel_vector(pr[0], geometry, carrier, spec.beta0);
            const auto hj = channel_vector(pr[1], geometry, carrier, spec.beta0);
            for (int u = 0; u < 2; ++u)
            {
                const double exact = exact_power(u == 0 ? hi : hj, 1.0);
                const double closed = approx_power(pr[u], static_cast<double>(M), lambda, spec.beta0, 1.0);
                item.power_err = std::max(item.power_err, std::abs(closed - exact) / exact);
            }
            const auto exact_rho = exact_correlation(hi, hj);
            item.mag_err = std::abs(std::abs(approx.value) - std::abs(exact_rho)) / std::abs(exact_rho);
            item.phase_err = std::abs(std::arg(approx.value / exact_rho));
            return item; });

        res.table.columns = {"pair_id", "M", "power_rel_err", "corr_mag_rel_err", "corr_phase_err_rad",
                             "degenerate_flag"};
        Flags flags;
        for (std::size_t n = 0; n < done; ++n)
        {
            const auto &it = *slots[n];
            std::vector<Cell> row{static_cast<std::int64_t>(n / grid.size()),
                                  static_cast<std::int64_t>(grid[n % grid.size()])};
            if (it.degenerate)
            {
                ++flags.degenerate_pairs;
                row.insert(row.end(), {std::monostate{}, std::monostate{}, std::monostate{}, std::int64_t{1}});
            }
            else
                row.insert(row.end(), {it.power_err, it.mag_err, it.phase_err, std::int64_t{0}});
            res.table.rows.push_back(std::move(row));
        }
        res.manifest["degenerate_cells"] = flags.degenerate_pairs;
        finish(res, flags, start);
        return res;
    }

    ExperimentResult run_experiment(const SweepSpec &spec)
    {
        switch (spec.kind)
        {
        case ExperimentKind::capacity_sweep:
            return capacity_sweep(spec);
        case ExperimentKind::beamformer_compare:
            return beamformer_compare(spec);
        case ExperimentKind::gap_study:
            return gap_study(spec);
        case ExperimentKind::oracle_validation:
            return oracle_validation(spec);
        }
        fail(ErrorCode::invalid_argument, "unknown experiment kind");
    }

    void write_result(const ExperimentResult &result, const std::filesystem::path &dir)
    {
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec)
            fail(ErrorCode::io, "cannot create output directory '" + dir.string() + "': " + ec.message());
        const auto csv_path = dir / (result.name + ".csv");
        const auto manifest_path = dir / (result.name + ".manifest.json");
        {
            std::ofstream out(csv_path, std::ios::binary);
            out << to_csv(result.table);
            if (!out)
                fail(ErrorCode::io, "cannot write '" + csv_path.string() + "'");
        }
        {
            std::ofstream out(manifest_path, std::ios::binary);
            out << result.manifest.dump(2) << '\n';
            if (!out)
                fail(ErrorCode::io, "cannot write '" + manifest_path.string() + "'");
        }
    }
}
