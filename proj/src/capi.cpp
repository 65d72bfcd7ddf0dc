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

#include "mmwchan/mmwchan.h"

#include "mmwchan/channel_model.hpp"
#include "mmwchan/io.hpp"
#include "mmwchan/metrics.hpp"
#include "mmwchan/parallel.hpp"
#include "mmwchan/pipeline.hpp"
#include "mmwchan/profiles.hpp"
#include "mmwchan/validation.hpp"

#include <fmt/format.h>

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

struct mmwchan_profile
{
    mmwchan::ScenarioProfile profile;
};

struct mmwchan_corpus
{
    mmwchan::ScenarioProfile profile;
    std::vector<mmwchan::ChannelRealization> realizations;
};

struct mmwchan_traces
{
    std::vector<mmwchan::TapSeries> captures;
};

struct mmwchan_fit_report
{
    mmwchan::TraceFit fit;
    mmwchan::TraceFitOptions options;
    std::vector<std::string> families; // chosen family name per parameter, "" if none
};

struct mmwchan_validation
{
    std::vector<mmwchan::ProfileValidation> results;
};

namespace
{
    using namespace mmwchan;

    thread_local std::string last_error;

    mmwchan_status fail(mmwchan_status status, const std::string &message)
    {
        last_error = message;
        return status;
    }

    template <class T>
    void clear(T **out) noexcept
    {
        if (out)
            *out = nullptr;
    }

    // Runs `body`, mapping exceptions onto status codes.
    template <class F>
    mmwchan_status guarded(const char *fn, F &&body) noexcept
    {
        try
        {
            last_error.clear();
            return body();
        }
        catch (const io::IoError &e)
        {
            return fail(MMWCHAN_IO_ERROR, fmt::format("{}: {}", fn, e.what()));
        }
        catch (const std::invalid_argument &e)
        {
            return fail(MMWCHAN_INPUT_ERROR, fmt::format("{}: {}", fn, e.what()));
        }
        catch (const std::out_of_range &e)
        {
            return fail(MMWCHAN_INPUT_ERROR, fmt::format("{}: {}", fn, e.what()));
        }
        catch (const std::domain_error &e)
        {
            return fail(MMWCHAN_INPUT_ERROR, fmt::format("{}: {}", fn, e.what()));
        }
        catch (const EmptySeriesError &e)
        {
            return fail(MMWCHAN_INPUT_ERROR, fmt::format("{}: {}", fn, e.what()));
        }
        catch (const std::bad_alloc &)
        {
            return fail(MMWCHAN_INTERNAL_ERROR, fmt::format("{}: out of memory", fn));
        }
        catch (const std::exception &e)
        {
            return fail(MMWCHAN_INTERNAL_ERROR, fmt::format("{}: {}", fn, e.what()));
        }
        catch (...)
        {
            return fail(MMWCHAN_INTERNAL_ERROR, fmt::format("{}: unknown error", fn));
        }
    }

    mmwchan_status null_argument(const char *fn, const char *name)
    {
        return fail(MMWCHAN_INPUT_ERROR, fmt::format("{}: {} must not be NULL", fn, name));
    }

    char *duplicate(const std::string &s)
    {
        char *out = static_cast<char *>(std::malloc(s.size() + 1));
        if (!out)
            throw std::bad_alloc();
        std::memcpy(out, s.c_str(), s.size() + 1);
        return out;
    }

    // Streams into a file, reporting open/write failures as IoError.
    template <class Writer>
    void write_stream(const char *path, Writer &&writer)
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw io::IoError(fmt::format("cannot open '{}' for writing", path));
        writer(out);
        out.close();
        if (!out)
            throw io::IoError(fmt::format("error writing '{}'", path));
    }

    const ParameterFit *find_fit(const mmwchan_fit_report *report, const char *parameter)
    {
        const Parameter p = parameter_from_string(parameter);
        return &report->fit.report.at(p);
    }
}

extern "C"
{
    const char *mmwchan_version(void)
    {
        return MMWCHAN_VERSION;
    }

    const char *mmwchan_last_error(void)
    {
        return last_error.c_str();
    }

    const char *mmwchan_status_string(mmwchan_status status)
    {
        switch (status)
        {
        case MMWCHAN_OK:
            return "ok";
        case MMWCHAN_VALIDATION_FAILED:
            return "validation failed";
        case MMWCHAN_INPUT_ERROR:
            return "input error";
        case MMWCHAN_IO_ERROR:
            return "I/O error";
        case MMWCHAN_INTERNAL_ERROR:
            return "internal error";
        }
        return "unknown status";
    }

    void mmwchan_string_free(char *s)
    {
        std::free(s);
    }

    unsigned mmwchan_default_threads(void)
    {
        return default_parallelism();
    }

    size_t mmwchan_builtin_profile_count(void)
    {
        return builtin_profile_keys().size();
    }

    mmwchan_status mmwchan_builtin_profile_id(size_t index, const char **id)
    {
        return guarded("mmwchan_builtin_profile_id",
                       [&]
                       {
                           if (!id)
                               return null_argument("mmwchan_builtin_profile_id", "id");
                           static const std::vector<std::string> ids = []
                           {
                               std::vector<std::string> v;
                               for (const auto &k : builtin_profile_keys())
                                   v.push_back(profile_id(k));
                               return v;
                           }();
                           if (index >= ids.size())
                               return fail(MMWCHAN_INPUT_ERROR,
                                           fmt::format("mmwchan_builtin_profile_id: index {} out of range", index));
                           *id = ids[index].c_str();
                           return MMWCHAN_OK;
                       });
    }

    mmwchan_status mmwchan_profile_builtin(const char *id, mmwchan_profile **out)
    {
        clear(out);
        return guarded("mmwchan_profile_builtin",
                       [&]
                       {
                           if (!id || !out)
                               return null_argument("mmwchan_profile_builtin", "id/out");
                           std::string known;
                           for (const auto &k : builtin_profile_keys())
                               known += (known.empty() ? "" : ", ") + profile_id(k);
                           try
                           {
                               profile_key_from_id(id);
                           }
                           catch (const std::invalid_argument &)
                           {
                               return fail(MMWCHAN_INPUT_ERROR,
                                           fmt::format("unknown profile '{}' (known: {})", id, known));
                           }
                           *out = new mmwchan_profile{builtin_profile(id)};
                           return MMWCHAN_OK;
                       });
    }

    mmwchan_status mmwchan_profile_from_json(const char *json, mmwchan_profile **out)
    {
        clear(out);
        return guarded("mmwchan_profile_from_json",
                       [&]
                       {
                           if (!json || !out)
                               return null_argument("mmwchan_profile_from_json", "json/out");
                           *out = new mmwchan_profile{io::parse_profile(json)};
                           return MMWCHAN_OK;
                       });
    }

    mmwchan_status mmwchan_profile_load(const char *path, mmwchan_profile **out)
    {
        clear(out);
        return guarded("mmwchan_profile_load",
                       [&]
                       {
                           if (!path || !out)
                               return null_argument("mmwchan_profile_load", "path/out");
                           *out = new mmwchan_profile{io::parse_profile(io::read_file(path))};
                           return MMWCHAN_OK;
                       });
    }

    mmwchan_status mmwchan_profile_to_json(const mmwchan_profile *profile, char **json)
    {
        return guarded("mmwchan_profile_to_json",
                       [&]
                       {
                           if (!profile || !json)
                               return null_argument("mmwchan_profile_to_json", "profile/json");
                           *json = duplicate(io::profile_json(profile->profile));
                           return MMWCHAN_OK;
                       });
    }

    const char *mmwchan_profile_id(const mmwchan_profile *profile)
    {
        return profile ? profile->profile.id.c_str() : nullptr;
    }

    void mmwchan_profile_free(mmwchan_profile *profile)
    {
        delete profile;
    }

    mmwchan_status mmwchan_calibrate(const char *scenario, int beamwidth_deg, const char *targets_json,
                                     mmwchan_profile **out)
    {
        clear(out);
        return guarded("mmwchan_calibrate",
                       [&]
                       {
                           if (!scenario || !out)
                               return null_argument("mmwchan_calibrate", "scenario/out");
                           const ProfileKey key{scenario_from_string(scenario), beamwidth_deg};
                           auto targets = builtin_targets_for(key);
                           if (targets_json)
                               for (const auto &[p, t] : io::parse_targets(targets_json))
                                   targets[p] = t;
                           auto profile = calibrate_profile(key, targets);
                           if (targets_json)
                               profile.provenance += "; quartile targets supplied by the caller";
                           *out = new mmwchan_profile{std::move(profile)};
                           return MMWCHAN_OK;
                       });
    }

    mmwchan_status mmwchan_generate(const mmwchan_profile *profile, uint64_t n, uint64_t seed, unsigned threads,
                                    mmwchan_corpus **out)
    {
        clear(out);
        return guarded("mmwchan_generate",
                       [&]
                       {
                           if (!profile || !out)
                               return null_argument("mmwchan_generate", "profile/out");
                           auto c = std::make_unique<mmwchan_corpus>();
                           c->profile = profile->profile;
                           c->realizations = generate_corpus(profile->profile, n, seed, threads);
                           *out = c.release();
                           return MMWCHAN_OK;
                       });
    }

    uint64_t mmwchan_corpus_size(const mmwchan_corpus *corpus)
    {
        return corpus ? corpus->realizations.size() : 0;
    }

    mmwchan_status mmwchan_corpus_write(const mmwchan_corpus *corpus, const char *path, mmwchan_corpus_format format)
    {
        return guarded("mmwchan_corpus_write",
                       [&]
                       {
                           if (!corpus || !path)
                               return null_argument("mmwchan_corpus_write", "corpus/path");
                           if (format != MMWCHAN_FORMAT_TAPS_JSONL && format != MMWCHAN_FORMAT_REALIZATIONS_JSON)
                               return fail(MMWCHAN_INPUT_ERROR, "mmwchan_corpus_write: unknown format");
                           write_stream(path,
                                        [&](std::ostream &os)
                                        {
                                            if (format == MMWCHAN_FORMAT_TAPS_JSONL)
                                                for (std::size_t i = 0; i < corpus->realizations.size(); ++i)
                                                    os << io::trace_line(realization_to_taps(
                                                              corpus->realizations[i], corpus->profile.tap_grid,
                                                              synthetic_capture_meta(corpus->profile, i)))
                                                       << '\n';
                                            else
                                                io::write_realizations(os, corpus->profile, corpus->realizations);
                                        });
                           return MMWCHAN_OK;
                       });
    }

    mmwchan_status mmwchan_corpus_traces(const mmwchan_corpus *corpus, mmwchan_traces **out)
    {
        clear(out);
        return guarded("mmwchan_corpus_traces",
                       [&]
                       {
                           if (!corpus || !out)
                               return null_argument("mmwchan_corpus_traces", "corpus/out");
                           *out = new mmwchan_traces{io::corpus_taps(corpus->profile, corpus->realizations)};
                           return MMWCHAN_OK;
                       });
    }

    void mmwchan_corpus_free(mmwchan_corpus *corpus)
    {
        delete corpus;
    }

    mmwchan_status mmwchan_traces_load(const char *path, mmwchan_traces **out)
    {
        clear(out);
        return guarded("mmwchan_traces_load",
                       [&]
                       {
                           if (!path || !out)
                               return null_argument("mmwchan_traces_load", "path/out");
                           std::ifstream in(path, std::ios::binary);
                           if (!in)
                               throw io::IoError(fmt::format("cannot open '{}' for reading", path));
                           *out = new mmwchan_traces{io::read_traces(in)};
                           return MMWCHAN_OK;
                       });
    }

    mmwchan_status mmwchan_traces_parse(const char *jsonl, mmwchan_traces **out)
    {
        clear(out);
        return guarded("mmwchan_traces_parse",
                       [&]
                       {
                           if (!jsonl || !out)
                               return null_argument("mmwchan_traces_parse", "jsonl/out");
                           std::istringstream in{std::string(jsonl)};
                           *out = new mmwchan_traces{io::read_traces(in)};
                           return MMWCHAN_OK;
                       });
    }

    uint64_t mmwchan_traces_size(const mmwchan_traces *traces)
    {
        return traces ? traces->captures.size() : 0;
    }

    mmwchan_status mmwchan_traces_write(const mmwchan_traces *traces, const char *path)
    {
        return guarded("mmwchan_traces_write",
                       [&]
                       {
                           if (!traces || !path)
                               return null_argument("mmwchan_traces_write", "traces/path");
                           write_stream(path, [&](std::ostream &os) { io::write_traces(os, traces->captures); });
                           return MMWCHAN_OK;
                       });
    }

    void mmwchan_traces_free(mmwchan_traces *traces)
    {
        delete traces;
    }

    mmwchan_fit_options mmwchan_fit_options_default(void)
    {
        return mmwchan_fit_options{default_gap_threshold, 0.0, MMWCHAN_POOLING_PER_BEAM};
    }

    mmwchan_status mmwchan_fit(const mmwchan_traces *traces, const mmwchan_fit_options *options,
                               mmwchan_fit_report **out)
    {
        clear(out);
        return guarded("mmwchan_fit",
                       [&]
                       {
                           if (!traces || !out)
                               return null_argument("mmwchan_fit", "traces/out");
                           if (traces->captures.empty())
                               return fail(MMWCHAN_INPUT_ERROR, "mmwchan_fit: input contains no captures");
                           const mmwchan_fit_options o = options ? *options : mmwchan_fit_options_default();
                           if (o.pooling != MMWCHAN_POOLING_PER_BEAM && o.pooling != MMWCHAN_POOLING_POOLED)
                               return fail(MMWCHAN_INPUT_ERROR, "mmwchan_fit: unknown pooling mode");

                           auto r = std::make_unique<mmwchan_fit_report>();
                           r->options.gap_threshold = o.gap_threshold > 0.0 ? o.gap_threshold : default_gap_threshold;
                           if (o.noise_floor > 0.0)
                               r->options.noise_floor = o.noise_floor;
                           r->options.mode =
                               o.pooling == MMWCHAN_POOLING_POOLED ? PoolingMode::Pooled : PoolingMode::PerBeam;
                           r->fit = fit_traces(traces->captures, r->options);
                           for (const auto &f : r->fit.report.parameters)
                               r->families.emplace_back(f.selection ? to_string(f.selection->chosen.family()) : "");
                           *out = r.release();
                           return MMWCHAN_OK;
                       });
    }

    mmwchan_status mmwchan_fit_report_to_json(const mmwchan_fit_report *report, char **json)
    {
        return guarded("mmwchan_fit_report_to_json",
                       [&]
                       {
                           if (!report || !json)
                               return null_argument("mmwchan_fit_report_to_json", "report/json");
                           *json = duplicate(io::fit_report_json(report->fit, report->options));
                           return MMWCHAN_OK;
                       });
    }

    mmwchan_status mmwchan_fit_report_write_csv(const mmwchan_fit_report *report, const char *path)
    {
        return guarded("mmwchan_fit_report_write_csv",
                       [&]
                       {
                           if (!report || !path)
                               return null_argument("mmwchan_fit_report_write_csv", "report/path");
                           write_stream(path, [&](std::ostream &os) { io::write_ecdf_csv(os, report->fit.samples); });
                           return MMWCHAN_OK;
                       });
    }

    const char *mmwchan_fit_report_family(const mmwchan_fit_report *report, const char *parameter)
    {
        if (!report || !parameter)
            return nullptr;
        try
        {
            const auto &params = report->fit.report.parameters;
            const ParameterFit *f = find_fit(report, parameter);
            const auto &name = report->families[static_cast<std::size_t>(f - params.data())];
            return name.empty() ? nullptr : name.c_str();
        }
        catch (const std::exception &e)
        {
            last_error = fmt::format("mmwchan_fit_report_family: {}", e.what());
            return nullptr;
        }
    }

    mmwchan_status mmwchan_fit_report_quartiles(const mmwchan_fit_report *report, const char *parameter,
                                                double quartiles[3])
    {
        return guarded("mmwchan_fit_report_quartiles",
                       [&]
                       {
                           if (!report || !parameter || !quartiles)
                               return null_argument("mmwchan_fit_report_quartiles", "report/parameter/quartiles");
                           const ParameterFit *f = find_fit(report, parameter);
                           if (!f->quartiles)
                               return fail(MMWCHAN_INPUT_ERROR,
                                           fmt::format("mmwchan_fit_report_quartiles: no samples for {}", parameter));
                           for (int i = 0; i < 3; ++i)
                               quartiles[i] = (*f->quartiles)[static_cast<std::size_t>(i)];
                           return MMWCHAN_OK;
                       });
    }

    void mmwchan_fit_report_free(mmwchan_fit_report *report)
    {
        delete report;
    }

    mmwchan_status mmwchan_validate(const mmwchan_profile *const *profiles, size_t count, uint64_t n, uint64_t seed,
                                    double tolerance, double count_tolerance, unsigned threads,
                                    mmwchan_validation **out)
    {
        clear(out);
        return guarded("mmwchan_validate",
                       [&]
                       {
                           if ((!profiles && count) || !out)
                               return null_argument("mmwchan_validate", "profiles/out");
                           auto v = std::make_unique<mmwchan_validation>();
                           for (size_t i = 0; i < count; ++i)
                           {
                               if (!profiles[i])
                                   return null_argument("mmwchan_validate", "profiles[i]");
                               const ScenarioProfile &p = profiles[i]->profile;
                               const ProfileKey key{p.scenario, static_cast<int>(p.beamwidth_deg)};
                               if (static_cast<double>(key.beamwidth_deg) != p.beamwidth_deg)
                                   return fail(MMWCHAN_INPUT_ERROR,
                                               fmt::format("mmwchan_validate: no published targets for {}", p.id));
                               v->results.push_back(validate_profile(p, builtin_targets_for(key), n, seed, tolerance,
                                                                     count_tolerance, threads));
                           }
                           *out = v.release();
                           return MMWCHAN_OK;
                       });
    }

    int mmwchan_validation_passed(const mmwchan_validation *validation)
    {
        if (!validation)
            return 0;
        for (const auto &r : validation->results)
            if (!r.pass)
                return 0;
        return 1;
    }

    mmwchan_status mmwchan_validation_to_json(const mmwchan_validation *validation, char **json)
    {
        return guarded("mmwchan_validation_to_json",
                       [&]
                       {
                           if (!validation || !json)
                               return null_argument("mmwchan_validation_to_json", "validation/json");
                           *json = duplicate(io::validation_json(validation->results));
                           return MMWCHAN_OK;
                       });
    }

    mmwchan_status mmwchan_validation_table(const mmwchan_validation *validation, char **table)
    {
        return guarded("mmwchan_validation_table",
                       [&]
                       {
                           if (!validation || !table)
                               return null_argument("mmwchan_validation_table", "validation/table");
                           *table = duplicate(io::validation_table(validation->results));
                           return MMWCHAN_OK;
                       });
    }

    void mmwchan_validation_free(mmwchan_validation *validation)
    {
        delete validation;
    }

    mmwchan_metrics_options mmwchan_metrics_options_default(void)
    {
        return mmwchan_metrics_options{2.16e9, 1024, 0.9, default_gap_threshold};
    }

    mmwchan_status mmwchan_metrics_csv(const mmwchan_traces *traces, const mmwchan_metrics_options *options,
                                       unsigned threads, char **csv)
    {
        return guarded("mmwchan_metrics_csv",
                       [&]
                       {
                           if (!traces || !csv)
                               return null_argument("mmwchan_metrics_csv", "traces/csv");
                           const mmwchan_metrics_options o = options ? *options : mmwchan_metrics_options_default();
                           const double gap = o.gap_threshold > 0.0 ? o.gap_threshold : default_gap_threshold;
                           std::vector<CaptureMetrics> rows(traces->captures.size());
                           parallel_for(
                               rows.size(),
                               [&](std::size_t i)
                               {
                                   rows[i] = capture_metrics(traces->captures[i], o.bandwidth, o.points,
                                                             o.correlation_threshold, gap);
                               },
                               threads);
                           std::ostringstream os;
                           io::write_metrics_csv(os, rows);
                           *csv = duplicate(os.str());
                           return MMWCHAN_OK;
                       });
    }
}
