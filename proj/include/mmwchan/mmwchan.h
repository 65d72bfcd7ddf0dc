// SPDX-License-Identifier: Apache-2.0
//
// mmwchan: statistical channel model for 60 GHz industrial environments
// Copyright (C) 2026 The mmwchan Authors
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

#ifndef MMWCHAN_H
#define MMWCHAN_H

/* C interface to libmmwchan. Every call returns an mmwchan_status; on failure
 * mmwchan_last_error() describes the most recent error of the calling thread.
 * Handles are opaque and released with their *_free function (NULL is a no-op).
 * Functions that create a handle set *out to NULL on failure.
 * Strings returned through char ** are owned by the caller and released with
 * mmwchan_string_free. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(MMWCHAN_BUILDING_LIBRARY)
#define MMWCHAN_API __attribute__((visibility("default")))
#else
#define MMWCHAN_API
#endif

typedef enum mmwchan_status
{
    MMWCHAN_OK = 0,
    MMWCHAN_VALIDATION_FAILED = 1, /* a validation ran and did not pass */
    MMWCHAN_INPUT_ERROR = 2,       /* bad argument, unknown id, malformed file */
    MMWCHAN_IO_ERROR = 3,          /* file could not be read or written */
    MMWCHAN_INTERNAL_ERROR = 4
} mmwchan_status;

typedef enum mmwchan_corpus_format
{
    MMWCHAN_FORMAT_TAPS_JSONL = 0,
    MMWCHAN_FORMAT_REALIZATIONS_JSON = 1
} mmwchan_corpus_format;

typedef enum mmwchan_pooling
{
    MMWCHAN_POOLING_PER_BEAM = 0,
    MMWCHAN_POOLING_POOLED = 1
} mmwchan_pooling;

typedef struct mmwchan_profile mmwchan_profile;       /* calibrated scenario profile */
typedef struct mmwchan_corpus mmwchan_corpus;         /* generated channel realizations */
typedef struct mmwchan_traces mmwchan_traces;         /* parsed tap captures */
typedef struct mmwchan_fit_report mmwchan_fit_report; /* fitted families per parameter */
typedef struct mmwchan_validation mmwchan_validation; /* quartile checks of one or more profiles */

MMWCHAN_API const char *mmwchan_version(void);
MMWCHAN_API const char *mmwchan_last_error(void);
MMWCHAN_API const char *mmwchan_status_string(mmwchan_status status);
MMWCHAN_API void mmwchan_string_free(char *s);

/* Worker count used when a threads argument is 0 (MMWCHAN_THREADS or the
 * hardware concurrency). */
MMWCHAN_API unsigned mmwchan_default_threads(void);

/* Built-in profiles, in table order. The id pointer stays valid for the
 * lifetime of the process. */
MMWCHAN_API size_t mmwchan_builtin_profile_count(void);
MMWCHAN_API mmwchan_status mmwchan_builtin_profile_id(size_t index, const char **id);

MMWCHAN_API mmwchan_status mmwchan_profile_builtin(const char *id, mmwchan_profile **out);
MMWCHAN_API mmwchan_status mmwchan_profile_from_json(const char *json, mmwchan_profile **out);
MMWCHAN_API mmwchan_status mmwchan_profile_load(const char *path, mmwchan_profile **out);
MMWCHAN_API mmwchan_status mmwchan_profile_to_json(const mmwchan_profile *profile, char **json);
/* Borrowed pointer, valid while the handle lives. */
MMWCHAN_API const char *mmwchan_profile_id(const mmwchan_profile *profile);
MMWCHAN_API void mmwchan_profile_free(mmwchan_profile *profile);

/* Calibrates a profile for a built-in (scenario, beamwidth). targets_json may
 * be NULL; parameters it omits keep their published targets. */
MMWCHAN_API mmwchan_status mmwchan_calibrate(const char *scenario, int beamwidth_deg, const char *targets_json,
                                             mmwchan_profile **out);

MMWCHAN_API mmwchan_status mmwchan_generate(const mmwchan_profile *profile, uint64_t n, uint64_t seed,
                                            unsigned threads, mmwchan_corpus **out);
MMWCHAN_API uint64_t mmwchan_corpus_size(const mmwchan_corpus *corpus);
MMWCHAN_API mmwchan_status mmwchan_corpus_write(const mmwchan_corpus *corpus, const char *path,
                                                mmwchan_corpus_format format);
/* Exported taps of the corpus, as mmwchan_corpus_write would store them. */
MMWCHAN_API mmwchan_status mmwchan_corpus_traces(const mmwchan_corpus *corpus, mmwchan_traces **out);
MMWCHAN_API void mmwchan_corpus_free(mmwchan_corpus *corpus);

/* Reads trace JSON lines. Malformed lines fail with MMWCHAN_INPUT_ERROR and
 * the line number in the error message. */
MMWCHAN_API mmwchan_status mmwchan_traces_load(const char *path, mmwchan_traces **out);
MMWCHAN_API mmwchan_status mmwchan_traces_parse(const char *jsonl, mmwchan_traces **out);
MMWCHAN_API uint64_t mmwchan_traces_size(const mmwchan_traces *traces);
MMWCHAN_API mmwchan_status mmwchan_traces_write(const mmwchan_traces *traces, const char *path);
MMWCHAN_API void mmwchan_traces_free(mmwchan_traces *traces);

typedef struct mmwchan_fit_options
{
    double gap_threshold; /* seconds; <= 0 selects the default (2.4 ns) */
    double noise_floor;   /* linear amplitude; <= 0 selects 1 % of each capture's peak */
    mmwchan_pooling pooling;
} mmwchan_fit_options;

MMWCHAN_API mmwchan_fit_options mmwchan_fit_options_default(void);

/* Threshold, partition, extract and fit. Fails with MMWCHAN_INPUT_ERROR when
 * there are no captures. */
MMWCHAN_API mmwchan_status mmwchan_fit(const mmwchan_traces *traces, const mmwchan_fit_options *options,
                                       mmwchan_fit_report **out);
MMWCHAN_API mmwchan_status mmwchan_fit_report_to_json(const mmwchan_fit_report *report, char **json);
MMWCHAN_API mmwchan_status mmwchan_fit_report_write_csv(const mmwchan_fit_report *report, const char *path);
/* Chosen family of a parameter ("num_clusters", ...); NULL when nothing was fitted. */
MMWCHAN_API const char *mmwchan_fit_report_family(const mmwchan_fit_report *report, const char *parameter);
/* Empirical (q1, median, q3) of a parameter. */
MMWCHAN_API mmwchan_status mmwchan_fit_report_quartiles(const mmwchan_fit_report *report, const char *parameter,
                                                        double quartiles[3]);
MMWCHAN_API void mmwchan_fit_report_free(mmwchan_fit_report *report);

/* Simulates n realizations of each profile and compares quartiles with the
 * published targets of its (scenario, beamwidth). Returns MMWCHAN_OK whenever
 * the checks ran; read the verdict with mmwchan_validation_passed. */
MMWCHAN_API mmwchan_status mmwchan_validate(const mmwchan_profile *const *profiles, size_t count, uint64_t n,
                                            uint64_t seed, double tolerance, double count_tolerance,
                                            unsigned threads, mmwchan_validation **out);
MMWCHAN_API int mmwchan_validation_passed(const mmwchan_validation *validation);
MMWCHAN_API mmwchan_status mmwchan_validation_to_json(const mmwchan_validation *validation, char **json);
MMWCHAN_API mmwchan_status mmwchan_validation_table(const mmwchan_validation *validation, char **table);
MMWCHAN_API void mmwchan_validation_free(mmwchan_validation *validation);

typedef struct mmwchan_metrics_options
{
    double bandwidth;             /* Hz, > 0 */
    size_t points;                /* frequency samples, >= 2 */
    double correlation_threshold; /* coherence level in (0, 1) */
    double gap_threshold;         /* seconds; <= 0 selects the default */
} mmwchan_metrics_options;

MMWCHAN_API mmwchan_metrics_options mmwchan_metrics_options_default(void);

/* Per-capture delay spread, coherence bandwidth, flatness and
 * peak-to-average ratio as CSV. */
MMWCHAN_API mmwchan_status mmwchan_metrics_csv(const mmwchan_traces *traces, const mmwchan_metrics_options *options,
                                               unsigned threads, char **csv);

#ifdef __cplusplus
}
#endif

#endif
