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

#ifndef MMWCHAN_PIPELINE_HPP
#define MMWCHAN_PIPELINE_HPP

#include "mmwchan/channel_model.hpp"
#include "mmwchan/distributions.hpp"
#include "mmwchan/scenario_profile.hpp"
#include "mmwchan/taps.hpp"

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mmwchan
{
    struct EmptySeriesError : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    // Drops taps below noise_floor (> 0). Throws EmptySeriesError if none survive.
    TapSeries threshold_taps(const TapSeries &raw, double noise_floor);

    // 1 % of the strongest tap (-40 dB in amplitude).
    double default_noise_floor(const TapSeries &series);

    // Starts a new cluster wherever consecutive taps are more than
    // gap_threshold apart. Cluster amplitude is the mean tap amplitude and
    // T + offset reproduces every input delay bit for bit.
    std::vector<Cluster> partition_clusters(const TapSeries &taps, double gap_threshold);

    inline constexpr double default_gap_threshold = 10.0 * default_tap_grid;

    struct ParameterSamples
    {
        std::vector<int> num_clusters;
        std::vector<double> intercluster_delays; // consecutive gaps, seconds
        std::vector<double> cluster_amplitudes;
        std::vector<int> paths_per_cluster;
        std::vector<double> path_amplitudes;
        std::vector<double> intra_path_delays; // offsets of non-first paths, descriptive only
    };

    // Samples of one fitted parameter as reals.
    std::vector<double> values(const ParameterSamples &samples, Parameter parameter);

    // Pools every capture's clusters.
    ParameterSamples extract_parameters(const std::vector<std::vector<Cluster>> &captures);

    enum class PoolingMode
    {
        Pooled,
        PerBeam // average per (location, beam id) before pooling
    };

    std::string_view to_string(PoolingMode mode);
    PoolingMode pooling_mode_from_string(std::string_view name);

    struct CaptureClusters
    {
        TapMeta meta;
        std::vector<Cluster> clusters;
    };

    // PerBeam: captures sharing (location, beam id) contribute one cluster
    // count, their mean rounded half away from zero; the per-cluster and
    // per-path lists are pooled as captured.
    ParameterSamples extract_parameters(const std::vector<CaptureClusters> &captures, PoolingMode mode);

    // Families compared for each parameter.
    using CandidateSets = std::map<Parameter, std::vector<Family>>;
    const CandidateSets &default_candidates();

    inline constexpr std::size_t min_fit_samples = 50;

    struct ParameterFit
    {
        Parameter parameter = Parameter::NumClusters;
        std::size_t sample_count = 0;
        std::optional<std::array<double, 3>> quartiles; // empty without samples
        bool insufficient_data = false;                 // fewer than min_fit_samples
        std::optional<Selection> selection;             // empty if insufficient or every fit failed
        std::string error;
    };

    struct DescriptiveStats
    {
        std::size_t count = 0;
        std::optional<std::array<double, 3>> quartiles;
        double mean = 0.0;
    };

    struct FitReport
    {
        std::string scenario;
        double beamwidth_deg = 0.0;
        std::vector<ParameterFit> parameters; // in all_parameters order
        DescriptiveStats intra_path_delays;

        const ParameterFit &at(Parameter p) const;
    };

    // Runs select_family per parameter. Counts fit with the GPD location
    // fixed at one.
    FitReport fit_report(const ParameterSamples &samples, const CandidateSets &candidates = default_candidates());

    struct TraceFitOptions
    {
        double gap_threshold = default_gap_threshold;
        std::optional<double> noise_floor; // empty: default_noise_floor per capture
        PoolingMode mode = PoolingMode::PerBeam;
    };

    struct TraceFit
    {
        FitReport report;
        ParameterSamples samples;
        std::size_t captures = 0;
        std::size_t dropped = 0; // captures with no tap at or above the noise floor
    };

    // threshold -> partition -> extract -> fit over a set of captures. The
    // report is labelled with the captures' scenario and beamwidth ("mixed"
    // and 0 when they differ). Throws EmptySeriesError when no capture
    // survives thresholding.
    TraceFit fit_traces(const std::vector<TapSeries> &captures, const TraceFitOptions &options = {},
                        unsigned threads = 0);
}

#endif
