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

/* C interface to the xlsat core. All functions return an xlsat_status; on
 * failure a message is available from xlsat_last_error_message() on the same
 * thread. Strings returned through char** are owned by the caller and must
 * be released with xlsat_string_free(). Handles are released with their
 * matching *_free function; passing NULL to any *_free is a no-op. */

#ifndef XLSAT_XLSAT_H
#define XLSAT_XLSAT_H

#include <stddef.h>
#include <stdint.h>

#if defined(XLSAT_BUILDING_LIBRARY)
#define XLSAT_API __attribute__((visibility("default")))
#else
#define XLSAT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum xlsat_status
{
    XLSAT_OK = 0,
    XLSAT_ERR_INVALID_ARGUMENT = 1,
    XLSAT_ERR_INDEX = 2,
    XLSAT_ERR_VALIDATION = 3,
    XLSAT_ERR_DOMAIN = 4,
    XLSAT_ERR_RANK_DEFICIENT = 5,
    XLSAT_ERR_RESOURCE = 6,
    XLSAT_ERR_NUMERIC = 7,
    XLSAT_ERR_IO = 8,
    XLSAT_ERR_INTERNAL = 9
} xlsat_status;

typedef struct xlsat_config xlsat_config;
typedef struct xlsat_scenario xlsat_scenario;
typedef struct xlsat_gram xlsat_gram;

XLSAT_API const char *xlsat_version(void);
XLSAT_API const char *xlsat_status_name(xlsat_status status);
/* Message of the last failed call on this thread, "" if none. */
XLSAT_API const char *xlsat_last_error_message(void);
XLSAT_API void xlsat_string_free(char *s);

/* -- scenario configs ------------------------------------------------------ */

XLSAT_API xlsat_status xlsat_config_parse(const char *json_text, xlsat_config **out);
XLSAT_API xlsat_status xlsat_config_load_file(const char *path, xlsat_config **out);
XLSAT_API void xlsat_config_free(xlsat_config *config);
/* Normalized echo with every default filled in. */
XLSAT_API xlsat_status xlsat_config_normalized_json(const xlsat_config *config, char **out_json);

/* -- scenarios --------------------------------------------------------------- */

XLSAT_API xlsat_status xlsat_scenario_from_config(const xlsat_config *config, xlsat_scenario **out);
/* user_xy holds user_count (x, y) pairs. */
XLSAT_API xlsat_status xlsat_scenario_create(double frequency_hz, size_t element_count, const double *user_xy,
                                             size_t user_count, double transmit_power_w, double noise_power_w,
                                             double beta0, xlsat_scenario **out);
XLSAT_API void xlsat_scenario_free(xlsat_scenario *scenario);
XLSAT_API xlsat_status xlsat_scenario_info(const xlsat_scenario *scenario, size_t *user_count,
                                           size_t *element_count, double *wavelength_m, double *snr);
XLSAT_API xlsat_status xlsat_scenario_user(const xlsat_scenario *scenario, size_t index, double *x, double *y);
/* Writes the M x K channel matrix as a text dump. */
XLSAT_API xlsat_status xlsat_dump_channel(const xlsat_scenario *scenario, const char *path);

/* -- reports (JSON) -------------------------------------------------------- */

XLSAT_API xlsat_status xlsat_saturation_report(const double *user_xy, size_t user_count, double frequency_hz,
                                               double threshold, char **out_json);
/* rect = {x_min, x_max, y_min, y_max}; method is "numeric", "monte_carlo"
 * or "closed_form". trials/seed/jobs apply to monte_carlo. */
XLSAT_API xlsat_status xlsat_ergodic_report(const double rect[4], double frequency_hz, double threshold,
                                            uint64_t user_count, const char *method, uint64_t trials,
                                            uint64_t seed, unsigned jobs, char **out_json);
XLSAT_API xlsat_status xlsat_rate_report(const xlsat_scenario *scenario, int exact_degenerate_fallback,
                                         char **out_json);

/* -- Gram matrices ----------------------------------------------------------- */

XLSAT_API xlsat_status xlsat_gram_exact(const xlsat_scenario *scenario, xlsat_gram **out);
XLSAT_API xlsat_status xlsat_gram_analytic(const xlsat_scenario *scenario, int exact_degenerate_fallback,
                                           xlsat_gram **out);
XLSAT_API void xlsat_gram_free(xlsat_gram *gram);
XLSAT_API xlsat_status xlsat_gram_size(const xlsat_gram *gram, size_t *size);
XLSAT_API xlsat_status xlsat_gram_entry(const xlsat_gram *gram, size_t i, size_t j, double *re, double *im);
XLSAT_API xlsat_status xlsat_gram_operation_count(const xlsat_gram *gram, uint64_t *count);
XLSAT_API xlsat_status xlsat_gram_capacity(const xlsat_gram *gram, double rho, double *bits);
/* receiver is "mrc", "zf" or "mmse". sinr may be NULL, else it holds K values. */
XLSAT_API xlsat_status xlsat_gram_receiver_rates(const xlsat_gram *gram, const char *receiver, double rho,
                                                 double *sinr, double *sum_rate);

/* -- experiments ------------------------------------------------------------- */

/* Runs "capacity_sweep", "beamformer_compare", "gap_study" or
 * "oracle_validation". request_json may be NULL for all defaults. When
 * out_dir is non-NULL the CSV and manifest are written there. csv and
 * manifest may each be NULL. If the run stops early the completed rows are
 * still written and returned, and the error status is returned. */
XLSAT_API xlsat_status xlsat_experiment_run(const char *experiment, const char *request_json, const char *out_dir,
                                            char **csv, char **manifest_json);

#ifdef __cplusplus
}
#endif

#endif
