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

#include "xlsat/xlsat.h"

#include "xlsat/capacity.hpp"
#include "xlsat/channel.hpp"
#include "xlsat/experiments.hpp"
#include "xlsat/report_json.hpp"
#include "xlsat/saturation.hpp"
#include "xlsat/scenario_config.hpp"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>

struct xlsat_config
{
    xlsat::ScenarioConfig value;
};

struct xlsat_scenario
{
    xlsat::Scenario value;
};

struct xlsat_gram
{
    xlsat::GramMatrix value;
};

namespace
{
    thread_local std::string last_error;

    xlsat_status to_status(xlsat::ErrorCode code)
    {
        using xlsat::ErrorCode;
        switch (code)
        {
        case ErrorCode::invalid_argument:
            return XLSAT_ERR_INVALID_ARGUMENT;
        case ErrorCode::index:
            return XLSAT_ERR_INDEX;
        case ErrorCode::validation:
            return XLSAT_ERR_VALIDATION;
        case ErrorCode::domain:
            return XLSAT_ERR_DOMAIN;
        case ErrorCode::rank_deficient:
            return XLSAT_ERR_RANK_DEFICIENT;
        case ErrorCode::resource:
            return XLSAT_ERR_RESOURCE;
        case ErrorCode::numeric:
            return XLSAT_ERR_NUMERIC;
        case ErrorCode::io:
            return XLSAT_ERR_IO;
        }
        return XLSAT_ERR_INTERNAL;
    }

    xlsat_status failed(xlsat_status status, const std::string &message)
    {
        last_error = message;
        return status;
    }

    // Runs fn and converts any exception into a status code.
    template <class Fn>
    xlsat_status guarded(Fn &&fn) noexcept
    {
        try
        {
            last_error.clear();
            fn();
            return XLSAT_OK;
        }
        catch (const xlsat::Error &e)
        {
            return failed(to_status(e.code()), e.what());
        }
        catch (const nlohmann::json::exception &e)
        {
            return failed(XLSAT_ERR_VALIDATION, e.what());
        }
        catch (const std::bad_alloc &)
        {
            return failed(XLSAT_ERR_RESOURCE, "out of memory");
        }
        catch (const std::exception &e)
        {
            return failed(XLSAT_ERR_INTERNAL, e.what());
        }
        catch (...)
        {
            return failed(XLSAT_ERR_INTERNAL, "unknown exception");
        }
    }

    void require(const void *p, const char *name)
    {
        if (!p)
            xlsat::fail(xlsat::ErrorCode::invalid_argument, std::string(name) + " is NULL");
    }

    char *copy_string(const std::string &s)
    {
        auto *out = static_cast<char *>(std::malloc(s.size() + 1));
        if (!out)
            throw std::bad_alloc();
        std::memcpy(out, s.c_str(), s.size() + 1);
        return out;
    }

    std::vector<xlsat::UserPosition> users_from(const double *xy, std::size_t count)
    {
        if (count && !xy)
            xlsat::fail(xlsat::ErrorCode::invalid_argument, "user_xy is NULL");
        std::vector<xlsat::UserPosition> users(count);
        for (std::size_t i = 0; i < count; ++i)
            users[i] = {xy[2 * i], xy[2 * i + 1]};
        return users;
    }
}

extern "C" {

const char *xlsat_version(void) { return XLSAT_VERSION; }

const char *xlsat_status_name(xlsat_status status)
{
    switch (status)
    {
    case XLSAT_OK:
        return "ok";
    case XLSAT_ERR_INVALID_ARGUMENT:
        return "invalid_argument";
    case XLSAT_ERR_INDEX:
        return "index";
    case XLSAT_ERR_VALIDATION:
        return "validation";
    case XLSAT_ERR_DOMAIN:
        return "domain";
    case XLSAT_ERR_RANK_DEFICIENT:
        return "rank_deficient";
    case XLSAT_ERR_RESOURCE:
        return "resource";
    case XLSAT_ERR_NUMERIC:
        return "numeric";
    case XLSAT_ERR_IO:
        return "io";
    case XLSAT_ERR_INTERNAL:
        return "internal";
    }
    return "unknown";
}

const char *xlsat_last_error_message(void) { return last_error.c_str(); }

void xlsat_string_free(char *s) { std::free(s); }

xlsat_status xlsat_config_parse(const char *json_text, xlsat_config **out)
{
    return guarded([&]
                   {
        require(json_text, "json_text");
        require(out, "out");
        nlohmann::json doc;
        try
        {
            doc = nlohmann::json::parse(json_text);
        }
        catch (const nlohmann::json::parse_error &e)
        {
            xlsat::fail(xlsat::ErrorCode::validation, std::string("config is not valid JSON: ") + e.what());
        }
        *out = new xlsat_config{xlsat::parse_scenario_config(doc)}; });
}

xlsat_status xlsat_config_load_file(const char *path, xlsat_config **out)
{
    return guarded([&]
                   {
        require(path, "path");
        require(out, "out");
        *out = new xlsat_config{xlsat::load_scenario_config(path)}; });
}

void xlsat_config_free(xlsat_config *config) { delete config; }

xlsat_status xlsat_config_normalized_json(const xlsat_config *config, char **out_json)
{
    return guarded([&]
                   {
        require(config, "config");
        require(out_json, "out_json");
        *out_json = copy_string(xlsat::to_json(config->value).dump(2)); });
}

xlsat_status xlsat_scenario_from_config(const xlsat_config *config, xlsat_scenario **out)
{
    return guarded([&]
                   {
        require(config, "config");
        require(out, "out");
        *out = new xlsat_scenario{xlsat::build_scenario(config->value)}; });
}

xlsat_status xlsat_scenario_create(double frequency_hz, size_t element_count, const double *user_xy,
                                   size_t user_count, double transmit_power_w, double noise_power_w, double beta0,
                                   xlsat_scenario **out)
{
    return guarded([&]
                   {
        require(out, "out");
        xlsat::Scenario s;
        s.carrier = xlsat::CarrierSpec(frequency_hz);
        s.geometry.element_count = element_count;
        s.users = users_from(user_xy, user_count);
        s.budget = {transmit_power_w, noise_power_w, beta0};
        s.validate();
        *out = new xlsat_scenario{std::move(s)}; });
}

void xlsat_scenario_free(xlsat_scenario *scenario) { delete scenario; }

xlsat_status xlsat_scenario_info(const xlsat_scenario *scenario, size_t *user_count, size_t *element_count,
                                 double *wavelength_m, double *snr)
{
    return guarded([&]
                   {
        require(scenario, "scenario");
        const auto &s = scenario->value;
        if (user_count)
            *user_count = s.user_count();
        if (element_count)
            *element_count = s.geometry.element_count;
        if (wavelength_m)
            *wavelength_m = s.carrier.wavelength();
        if (snr)
            *snr = s.budget.snr(); });
}

xlsat_status xlsat_scenario_user(const xlsat_scenario *scenario, size_t index, double *x, double *y)
{
    return guarded([&]
                   {
        require(scenario, "scenario");
        if (index >= scenario->value.users.size())
            xlsat::fail(xlsat::ErrorCode::index, "user index out of range");
        if (x)
            *x = scenario->value.users[index].x;
        if (y)
            *y = scenario->value.users[index].y; });
}

xlsat_status xlsat_dump_channel(const xlsat_scenario *scenario, const char *path)
{
    return guarded([&]
                   {
        require(scenario, "scenario");
        require(path, "path");
        const auto H = xlsat::channel_matrix(scenario->value);
        std::ofstream out(path, std::ios::binary);
        if (!out)
            xlsat::fail(xlsat::ErrorCode::io, std::string("cannot open '") + path + "'");
        xlsat::write_matrix_dump(out, H.entries(), H.wavelength(), "channel");
        if (!out)
            xlsat::fail(xlsat::ErrorCode::io, std::string("cannot write '") + path + "'"); });
}

xlsat_status xlsat_saturation_report(const double *user_xy, size_t user_count, double frequency_hz,
                                     double threshold, char **out_json)
{
    return guarded([&]
                   {
        require(out_json, "out_json");
        const auto users = users_from(user_xy, user_count);
        const xlsat::CarrierSpec carrier(frequency_hz);
        const auto report = xlsat::saturation_report(users, xlsat::Threshold(threshold), carrier.wavelength());
        auto j = xlsat::to_json(report);
        j["frequency_hz"] = frequency_hz;
        *out_json = copy_string(j.dump(2)); });
}

xlsat_status xlsat_ergodic_report(const double rect[4], double frequency_hz, double threshold, uint64_t user_count,
                                  const char *method, uint64_t trials, uint64_t seed, unsigned jobs, char **out_json)
{
    return guarded([&]
                   {
        require(rect, "rect");
        require(out_json, "out_json");
        const xlsat::UserRect r{rect[0], rect[1], rect[2], rect[3]};
        r.validate();
        if (user_count < 1)
            xlsat::fail(xlsat::ErrorCode::validation, "user count must be >= 1");
        const xlsat::CarrierSpec carrier(frequency_hz);
        const auto m = xlsat::parse_ergodic_method(method ? method : "numeric");
        xlsat::ErgodicOptions opt;
        opt.trials = trials ? trials : opt.trials;
        opt.seed = seed;
        opt.jobs = jobs ? jobs : 1;
        const auto summary = xlsat::ergodic_summary(r, xlsat::Threshold(threshold), user_count,
                                                    carrier.wavelength(), m, opt);
        auto j = xlsat::to_json(summary);
        j["rect"] = xlsat::to_json(r);
        j["threshold"] = threshold;
        j["frequency_hz"] = frequency_hz;
        j["wavelength_m"] = carrier.wavelength();
        *out_json = copy_string(j.dump(2)); });
}

xlsat_status xlsat_rate_report(const xlsat_scenario *scenario, int exact_degenerate_fallback, char **out_json)
{
    return guarded([&]
                   {
        require(scenario, "scenario");
        require(out_json, "out_json");
        xlsat::AnalyticGramOptions opt;
        opt.exact_degenerate_fallback = exact_degenerate_fallback != 0;
        *out_json = copy_string(xlsat::to_json(xlsat::rate_report(scenario->value, opt)).dump(2)); });
}

xlsat_status xlsat_gram_exact(const xlsat_scenario *scenario, xlsat_gram **out)
{
    return guarded([&]
                   {
        require(scenario, "scenario");
        require(out, "out");
        *out = new xlsat_gram{xlsat::exact_gram(xlsat::channel_matrix(scenario->value))}; });
}

xlsat_status xlsat_gram_analytic(const xlsat_scenario *scenario, int exact_degenerate_fallback, xlsat_gram **out)
{
    return guarded([&]
                   {
        require(scenario, "scenario");
        require(out, "out");
        const auto &s = scenario->value;
        xlsat::AnalyticGramOptions opt;
        opt.exact_degenerate_fallback = exact_degenerate_fallback != 0;
        *out = new xlsat_gram{xlsat::analytic_gram(s.users, static_cast<double>(s.geometry.element_count),
                                                   s.carrier, s.budget.beta0, opt)}; });
}

void xlsat_gram_free(xlsat_gram *gram) { delete gram; }

xlsat_status xlsat_gram_size(const xlsat_gram *gram, size_t *size)
{
    return guarded([&]
                   {
        require(gram, "gram");
        require(size, "size");
        *size = static_cast<size_t>(gram->value.size()); });
}

xlsat_status xlsat_gram_entry(const xlsat_gram *gram, size_t i, size_t j, double *re, double *im)
{
    return guarded([&]
                   {
        require(gram, "gram");
        const auto n = static_cast<size_t>(gram->value.size());
        if (i >= n || j >= n)
            xlsat::fail(xlsat::ErrorCode::index, "Gram index out of range");
        const auto v = gram->value.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (re)
            *re = v.real();
        if (im)
            *im = v.imag(); });
}

xlsat_status xlsat_gram_operation_count(const xlsat_gram *gram, uint64_t *count)
{
    return guarded([&]
                   {
        require(gram, "gram");
        require(count, "count");
        *count = gram->value.operation_count; });
}

xlsat_status xlsat_gram_capacity(const xlsat_gram *gram, double rho, double *bits)
{
    return guarded([&]
                   {
        require(gram, "gram");
        require(bits, "bits");
        *bits = xlsat::shannon_capacity(gram->value, rho); });
}

xlsat_status xlsat_gram_receiver_rates(const xlsat_gram *gram, const char *receiver, double rho, double *sinr,
                                       double *sum_rate)
{
    return guarded([&]
                   {
        require(gram, "gram");
        require(receiver, "receiver");
        const std::string name = receiver;
        xlsat::ReceiverRates r;
        if (name == "mrc")
            r = xlsat::mrc_rates(gram->value, rho);
        else if (name == "zf")
            r = xlsat::zf_rates(gram->value, rho);
        else if (name == "mmse")
            r = xlsat::mmse_rates(gram->value, rho);
        else
            xlsat::fail(xlsat::ErrorCode::invalid_argument, "unknown receiver '" + name + "'");
        if (sinr)
            std::copy(r.sinr.begin(), r.sinr.end(), sinr);
        if (sum_rate)
            *sum_rate = r.sum_rate; });
}

xlsat_status xlsat_experiment_run(const char *experiment, const char *request_json, const char *out_dir,
                                  char **csv, char **manifest_json)
{
    xlsat::ExperimentResult result;
    const auto status = guarded([&]
                                {
        require(experiment, "experiment");
        const auto kind = xlsat::parse_experiment_kind(experiment);
        nlohmann::json request = nlohmann::json::object();
        if (request_json)
        {
            try
            {
                request = nlohmann::json::parse(request_json);
            }
            catch (const nlohmann::json::parse_error &e)
            {
                xlsat::fail(xlsat::ErrorCode::validation, std::string("request is not valid JSON: ") + e.what());
            }
        }
        result = xlsat::run_experiment(xlsat::parse_sweep_spec(kind, request));
        if (out_dir)
            xlsat::write_result(result, out_dir);
        if (csv)
            *csv = copy_string(xlsat::to_csv(result.table));
        if (manifest_json)
            *manifest_json = copy_string(result.manifest.dump(2)); });
    if (status != XLSAT_OK)
        return status;
    if (result.error)
        return failed(to_status(result.error_code), *result.error);
    return XLSAT_OK;
}

}
