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

#ifndef MMWCHAN_IO_HPP
#define MMWCHAN_IO_HPP

#include "mmwchan/channel_model.hpp"
#include "mmwchan/metrics.hpp"
#include "mmwchan/pipeline.hpp"
#include "mmwchan/profiles.hpp"
#include "mmwchan/scenario_profile.hpp"
#include "mmwchan/taps.hpp"
#include "mmwchan/validation.hpp"

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

// File formats. Every document and trace line carries "schema_version".
// Corpus files (trace lines, realization documents) print doubles with 17
// significant digits; other JSON documents use the shortest round-trip form.
namespace mmwchan::io
{
    inline constexpr int schema_version = 1;

    // Malformed input. `line` is 1-based; 0 when the whole document is at fault.
    struct ParseError : std::invalid_argument
    {
        ParseError(const std::string &what, std::size_t at_line = 0) : std::invalid_argument(what), line(at_line) {}
        std::size_t line;
    };

    struct IoError : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    std::string format_double(double value); // %.17g

    // One trace line (no trailing newline):
    // {"schema_version":1,"location":..,"beam_id":..,"scenario":..,
    //  "beamwidth_deg":..,"capture_index":..,"taps":[[delay_s, amplitude], ...]}
    std::string trace_line(const TapSeries &series);
    void write_traces(std::ostream &out, const std::vector<TapSeries> &captures);

    // Blank lines are skipped. schema_version and capture_index are optional;
    // a missing capture_index becomes the capture's position in the file.
    TapSeries parse_trace_line(std::string_view line, std::size_t line_number = 0);
    std::vector<TapSeries> read_traces(std::istream &in);

    // Exported taps of a generated corpus (capture metadata from synthetic_capture_meta).
    std::vector<TapSeries> corpus_taps(const ScenarioProfile &profile,
                                       const std::vector<ChannelRealization> &corpus);

    // {"schema_version":1,"profile_id":..,"tap_grid":..,"realizations":[
    //   {"index":..,"seed":..,"clusters":[{"delay":..,"amplitude":..,
    //    "paths":[[offset_s, amplitude], ...]}]}]}
    void write_realizations(std::ostream &out, const ScenarioProfile &profile,
                            const std::vector<ChannelRealization> &corpus);

    // Profile document: id, scenario, beamwidth_deg, tap_grid, max_count,
    // provenance, and per parameter {"family", "params": {name: value},
    // "calibration": {"residual", "within_threshold", "within_range", "note"}}.
    std::string profile_json(const ScenarioProfile &profile);
    ScenarioProfile parse_profile(std::string_view json);

    // {"schema_version":1,"targets":{"<parameter>":{"q1":..,"median":..,"q3":..}}}.
    // Parameters not listed are absent from the result.
    std::map<Parameter, QuartileTarget> parse_targets(std::string_view json);

    std::string fit_report_json(const TraceFit &fit, const TraceFitOptions &options);

    // Rows "parameter,value,empirical_cdf", one per distinct value of each
    // fitted parameter, ascending.
    void write_ecdf_csv(std::ostream &out, const ParameterSamples &samples);

    // Rows "capture_index,location,beam_id,taps,delay_spread_s,
    // coherence_bandwidth_hz,flatness_deviation,peak_to_average".
    void write_metrics_csv(std::ostream &out, const std::vector<CaptureMetrics> &rows);

    std::string validation_json(const std::vector<ProfileValidation> &results);

    // Fixed-width pass/fail table, one row per (profile, parameter).
    std::string validation_table(const std::vector<ProfileValidation> &results);

    std::string read_file(const std::string &path);                      // throws IoError
    void write_file(const std::string &path, std::string_view contents); // throws IoError
}

#endif
