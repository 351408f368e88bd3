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

// xlsat command-line front end. Links only the C interface.

#include "xlsat/xlsat.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace
{
    using nlohmann::json;

    enum Exit
    {
        exit_ok = 0,
        exit_internal = 1,
        exit_usage = 2,
        exit_config = 3,
        exit_resource = 4,
        exit_numeric = 5,
        exit_io = 6,
        exit_domain = 7
    };

    int exit_code_for(xlsat_status s)
    {
        switch (s)
        {
        case XLSAT_OK:
            return exit_ok;
        case XLSAT_ERR_INVALID_ARGUMENT:
            return exit_usage;
        case XLSAT_ERR_VALIDATION:
            return exit_config;
        case XLSAT_ERR_RESOURCE:
            return exit_resource;
        case XLSAT_ERR_NUMERIC:
            return exit_numeric;
        case XLSAT_ERR_IO:
            return exit_io;
        case XLSAT_ERR_INDEX:
        case XLSAT_ERR_DOMAIN:
        case XLSAT_ERR_RANK_DEFICIENT:
            return exit_domain;
        case XLSAT_ERR_INTERNAL:
            break;
        }
        return exit_internal;
    }

    struct Failure
    {
        std::string code;
        int exit_code;
        std::string message;
    };

    int report(const Failure &f)
    {
        const json rec{{"error", {{"code", f.code}, {"exit_code", f.exit_code}, {"message", f.message}}}};
        std::cerr << rec.dump() << '\n';
        return f.exit_code;
    }

    void check(xlsat_status s)
    {
        if (s != XLSAT_OK)
            throw Failure{xlsat_status_name(s), exit_code_for(s), xlsat_last_error_message()};
    }

    // Owns a string returned by the library.
    struct LibString
    {
        char *p = nullptr;
        ~LibString() { xlsat_string_free(p); }
        std::string str() const { return p ? p : ""; }
    };

    struct Options
    {
        std::string config;
        std::string out;
        std::optional<std::uint64_t> seed;
        std::optional<double> threshold;
        std::vector<std::uint64_t> users;
        std::vector<std::uint64_t> antennas;
        std::vector<double> snr_db;
        std::optional<std::uint64_t> trials;
        std::optional<double> frequency_hz;
        unsigned jobs = 1;
        int verbosity = 0;
        // saturate / ergodic
        std::vector<std::string> user_points;
        std::vector<double> rect;
        std::string method = "numeric";
    };

    void log(const Options &o, const std::string &msg)
    {
        if (o.verbosity > 0)
            std::cerr << "xlsat: " << msg << '\n';
    }

    json read_config_file(const std::string &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw Failure{"io", exit_io, "cannot open config '" + path + "'"};
        std::stringstream ss;
        ss << in.rdbuf();
        try
        {
            return json::parse(ss.str());
        }
        catch (const json::parse_error &e)
        {
            throw Failure{"validation", exit_config, "config '" + path + "' is not valid JSON: " + e.what()};
        }
    }

    std::uint64_t single(const std::vector<std::uint64_t> &v, const char *flag)
    {
        if (v.size() != 1)
            throw Failure{"invalid_argument", exit_usage, std::string(flag) + " takes a single value here"};
        return v.front();
    }

    // Applies scalar flag overrides to a scenario config document.
    void override_config(json &doc, const Options &o)
    {
        if (o.frequency_hz)
            doc["frequency_hz"] = *o.frequency_hz;
        if (!o.antennas.empty())
            doc["element_count"] = single(o.antennas, "--antennas");
        if (doc.contains("user_rect") && doc["user_rect"].is_object())
        {
            if (o.seed)
                doc["user_rect"]["seed"] = *o.seed;
            if (!o.users.empty())
                doc["user_rect"]["count"] = single(o.users, "--users");
        }
    }

    struct Config
    {
        xlsat_config *h = nullptr;
        ~Config() { xlsat_config_free(h); }
    };

    struct ScenarioHandle
    {
        xlsat_scenario *h = nullptr;
        ~ScenarioHandle() { xlsat_scenario_free(h); }
    };

    json normalized(const json &doc, Config &cfg)
    {
        check(xlsat_config_parse(doc.dump().c_str(), &cfg.h));
        LibString s;
        check(xlsat_config_normalized_json(cfg.h, &s.p));
        return json::parse(s.str());
    }

    void emit(const Options &o, const std::string &text, const std::string &file_name)
    {
        std::cout << text << '\n';
        if (o.out.empty())
            return;
        std::error_code ec;
        std::filesystem::create_directories(o.out, ec);
        const auto path = std::filesystem::path(o.out) / file_name;
        std::ofstream out(path, std::ios::binary);
        out << text << '\n';
        if (ec || !out)
            throw Failure{"io", exit_io, "cannot write '" + path.string() + "'"};
    }

    int cmd_validate(const Options &o)
    {
        json doc = read_config_file(o.config);
        override_config(doc, o);
        Config cfg;
        const json norm = normalized(doc, cfg);
        ScenarioHandle scn;
        check(xlsat_scenario_from_config(cfg.h, &scn.h));
        emit(o, norm.dump(2), "config.normalized.json");
        return exit_ok;
    }

    int cmd_saturate(const Options &o)
    {
        std::vector<double> xy;
        double frequency = o.frequency_hz.value_or(100e9);
        if (!o.config.empty())
        {
            json doc = read_config_file(o.config);
            override_config(doc, o);
            Config cfg;
            const json norm = normalized(doc, cfg);
            frequency = norm.at("frequency_hz").get<double>();
            ScenarioHandle scn;
            check(xlsat_scenario_from_config(cfg.h, &scn.h));
            std::size_t K = 0;
            check(xlsat_scenario_info(scn.h, &K, nullptr, nullptr, nullptr));
            for (std::size_t i = 0; i < K; ++i)
            {
                double x = 0, y = 0;
                check(xlsat_scenario_user(scn.h, i, &x, &y));
                xy.insert(xy.end(), {x, y});
            }
        }
        for (const auto &p : o.user_points)
        {
            double x = 0, y = 0;
            char tail = 0;
            if (std::sscanf(p.c_str(), "%lf,%lf%c", &x, &y, &tail) != 2)
                throw Failure{"invalid_argument", exit_usage, "--user expects X,Y (got '" + p + "')"};
            xy.insert(xy.end(), {x, y});
        }
        if (xy.empty())
            throw Failure{"invalid_argument", exit_usage, "saturate needs --config or at least one --user X,Y"};
        LibString s;
        check(xlsat_saturation_report(xy.data(), xy.size() / 2, frequency, o.threshold.value_or(0.9), &s.p));
        emit(o, s.str(), "saturation.json");
        return exit_ok;
    }

    int cmd_ergodic(const Options &o)
    {
        double rect[4] = {1.0, 10.0, -7.5, 7.5};
        double frequency = 100e9;
        std::uint64_t K = 100;
        std::uint64_t seed = 0;
        if (!o.config.empty())
        {
            json doc = read_config_file(o.config);
            override_config(doc, o);
            Config cfg;
            const json norm = normalized(doc, cfg);
            frequency = norm.at("frequency_hz").get<double>();
            if (!norm.contains("user_rect"))
                throw Failure{"validation", exit_config, "ergodic needs a config with 'user_rect'"};
            const auto &r = norm.at("user_rect");
            rect[0] = r.at("x_min").get<double>();
            rect[1] = r.at("x_max").get<double>();
            rect[2] = r.at("y_min").get<double>();
            rect[3] = r.at("y_max").get<double>();
            K = r.at("count").get<std::uint64_t>();
            seed = r.at("seed").get<std::uint64_t>();
        }
        if (o.frequency_hz)
            frequency = *o.frequency_hz;
        if (!o.rect.empty())
            std::copy(o.rect.begin(), o.rect.end(), rect);
        if (!o.users.empty())
            K = single(o.users, "--users");
        if (o.seed)
            seed = *o.seed;
        log(o, "ergodic saturation for K=" + std::to_string(K) + " with method " + o.method);
        LibString s;
        check(xlsat_ergodic_report(rect, frequency, o.threshold.value_or(0.9), K, o.method.c_str(),
                                   o.trials.value_or(100000), seed, o.jobs, &s.p));
        emit(o, s.str(), "ergodic.json");
        return exit_ok;
    }

    int cmd_experiment(const Options &o, const char *experiment)
    {
        json request = json::object();
        if (!o.config.empty())
            request["scenario"] = read_config_file(o.config);
        const std::string name = experiment;
        if (o.seed)
            request["seed"] = *o.seed;
        if (o.threshold)
            request["threshold"] = *o.threshold;
        if (o.trials)
            request["trials"] = *o.trials;
        if (o.frequency_hz)
            request["frequency_hz"] = *o.frequency_hz;
        if (!o.snr_db.empty())
            request["snr_db"] = o.snr_db;
        if (!o.antennas.empty())
            request["m_grid"] = o.antennas;
        if (!o.users.empty())
        {
            if (name == "gap_study")
                request["k_grid"] = o.users;
            else
                request["users"] = single(o.users, "--users");
        }
        if (!o.rect.empty())
            request["rect"] = {{"x_min", o.rect[0]}, {"x_max", o.rect[1]}, {"y_min", o.rect[2]}, {"y_max", o.rect[3]}};
        request["jobs"] = o.jobs;
        const std::string out = o.out.empty() ? "results" : o.out;
        log(o, "running " + name + " into " + out);
        LibString manifest;
        const auto status = xlsat_experiment_run(experiment, request.dump().c_str(), out.c_str(), nullptr, &manifest.p);
        if (manifest.p)
        {
            const auto m = json::parse(manifest.str());
            const json summary{{"experiment", name},
                               {"csv", (std::filesystem::path(out) / (name + ".csv")).string()},
                               {"manifest", (std::filesystem::path(out) / (name + ".manifest.json")).string()},
                               {"row_count", m.at("row_count")}};
            std::cout << summary.dump(2) << '\n';
        }
        check(status);
        return exit_ok;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"xlsat: near-field XL-MIMO capacity saturation toolkit"};
    app.set_version_flag("--version", std::string(xlsat_version()));
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App *sub, bool experiment)
    {
        sub->add_option("--config", o.config, "Scenario config JSON")->check(CLI::ExistingFile);
        sub->add_option("--out", o.out, experiment ? "Output directory (default: results)" : "Also write the report here");
        sub->add_option("--seed", o.seed, "Seed override");
        sub->add_option("--threshold", o.threshold, "Power-ratio threshold t in (0, 1)");
        sub->add_option("--frequency-hz", o.frequency_hz, "Carrier frequency override");
        sub->add_option("--jobs", o.jobs, "Worker thread cap")->check(CLI::PositiveNumber);
        sub->add_flag("-v,--verbose", o.verbosity, "Log progress to stderr");
    };

    auto *validate = app.add_subcommand("validate", "Check a scenario config and print its normalized form");
    common(validate, false);
    validate->get_option("--config")->required();
    validate->add_option("--users", o.users, "User count override for rectangle sampling");
    validate->add_option("--antennas", o.antennas, "Element count override");

    auto *saturate = app.add_subcommand("saturate", "Saturation report for explicit users");
    common(saturate, false);
    saturate->add_option("--user", o.user_points, "User position X,Y in meters (repeatable)");
    saturate->add_option("--users", o.users, "User count override for rectangle sampling");

    auto *ergodic = app.add_subcommand("ergodic", "Ergodic saturation bounds for users uniform over a rectangle");
    common(ergodic, false);
    ergodic->add_option("--rect", o.rect, "x_min,x_max,y_min,y_max")->expected(4)->delimiter(',');
    ergodic->add_option("--users", o.users, "User count K");
    ergodic->add_option("--method", o.method, "numeric | monte_carlo | closed_form");
    ergodic->add_option("--trials", o.trials, "Monte Carlo trials");

    struct ExperimentCmd
    {
        const char *cli;
        const char *name;
        const char *help;
    };
    const ExperimentCmd experiments[] = {
        {"sweep-capacity", "capacity_sweep", "Capacity versus array size"},
        {"compare-beamformers", "beamformer_compare", "Receiver rates versus array size"},
        {"gap-study", "gap_study", "Determinant-bound gap versus user count"},
        {"validate-closed-forms", "oracle_validation", "Closed forms versus brute-force channels"},
    };
    std::vector<std::pair<CLI::App *, const char *>> experiment_subs;
    for (const auto &e : experiments)
    {
        auto *sub = app.add_subcommand(e.cli, e.help);
        common(sub, true);
        sub->add_option("--users", o.users, "User count (gap-study: K grid, repeatable)");
        sub->add_option("--antennas", o.antennas, "M grid values (repeatable)");
        sub->add_option("--snr-db", o.snr_db, "SNR values in dB (repeatable)");
        sub->add_option("--trials", o.trials, "Draws per grid point, or pair count");
        sub->add_option("--rect", o.rect, "x_min,x_max,y_min,y_max")->expected(4)->delimiter(',');
        experiment_subs.emplace_back(sub, e.name);
    }

    if (argc > 1 && argv[1][0] != '-')
    {
        bool known = false;
        for (const auto *sub : app.get_subcommands({}))
            known = known || sub->check_name(argv[1]);
        if (!known)
            return report({"usage", exit_usage, std::string("unknown subcommand '") + argv[1] + "'"});
    }

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForVersion &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        // A missing --config file is an io problem, not a usage one.
        const std::string what = e.what();
        const bool missing_file = what.find("File does not exist") != std::string::npos;
        return report({missing_file ? "io" : "usage", missing_file ? exit_io : exit_usage, what});
    }

    try
    {
        if (validate->parsed())
            return cmd_validate(o);
        if (saturate->parsed())
            return cmd_saturate(o);
        if (ergodic->parsed())
            return cmd_ergodic(o);
        for (const auto &[sub, name] : experiment_subs)
            if (sub->parsed())
                return cmd_experiment(o, name);
        return report({"usage", exit_usage, "no subcommand"});
    }
    catch (const Failure &f)
    {
        return report(f);
    }
    catch (const std::exception &e)
    {
        return report({"internal", exit_internal, e.what()});
    }
}
