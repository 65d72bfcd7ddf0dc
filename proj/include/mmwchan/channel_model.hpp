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

#ifndef MMWCHAN_CHANNEL_MODEL_HPP
#define MMWCHAN_CHANNEL_MODEL_HPP

#include "mmwchan/scenario_profile.hpp"
#include "mmwchan/taps.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mmwchan
{
    // Departure and arrival directions in degrees. Azimuths in [-180, 180),
    // elevations in [-90, 90].
    struct AngularInfo
    {
        double azimuth_tx = 0.0;
        double elevation_tx = 0.0;
        double azimuth_rx = 0.0;
        double elevation_rx = 0.0;

        friend bool operator==(const AngularInfo &, const AngularInfo &) = default;
    };

    // One resolvable ray inside a cluster.
    struct PathTap
    {
        double offset = 0.0;    // seconds after the cluster start; 0 for the first path
        double amplitude = 0.0; // linear, > 0
        std::optional<AngularInfo> angles;

        friend bool operator==(const PathTap &, const PathTap &) = default;
    };

    // A bundle of rays along one geometric path. `amplitude` is the mean of
    // the path amplitudes.
    struct Cluster
    {
        double delay = 0.0;     // arrival time of the first path, seconds
        double amplitude = 0.0; // linear, > 0
        std::vector<PathTap> paths;

        friend bool operator==(const Cluster &, const Cluster &) = default;
    };

    struct BeamPattern
    {
        AngularInfo boresight; // only the rx angles are used
        double width_deg = 20.0;
    };

    struct ChannelRealization
    {
        std::vector<Cluster> clusters;
        std::string profile_id;
        std::uint64_t seed = 0;

        friend bool operator==(const ChannelRealization &, const ChannelRealization &) = default;
    };

    struct InvalidChannel : std::invalid_argument
    {
        using std::invalid_argument::invalid_argument;
    };

    struct GenerationError : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    struct EmptyChannelError : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    void validate(const AngularInfo &angles);
    void validate(const Cluster &cluster);
    void validate(const ChannelRealization &realization);

    // Draws one channel from `profile`.
    //
    // Draw order on the counter stream of `seed`: cluster count, the
    // inter-cluster gaps, then per cluster its amplitude, its path count and
    // the raw path amplitudes. Counts are rounded half away from zero and
    // clamped to [1, max_count]; gaps are clamped to at least one tap-grid
    // period; amplitude draws <= 0 are redrawn (at most 64 attempts). Paths
    // occupy consecutive grid periods from the cluster start and are rescaled
    // so that their mean equals the cluster amplitude.
    ChannelRealization generate_realization(const ScenarioProfile &profile, std::uint64_t seed);

    // Seed of realization `index` in a corpus generated with `corpus_seed`.
    std::uint64_t realization_seed(std::uint64_t corpus_seed, std::uint64_t index) noexcept;

    // Realizations 0 .. n - 1 of a corpus, in index order whatever the thread count.
    std::vector<ChannelRealization> generate_corpus(const ScenarioProfile &profile, std::size_t n,
                                                    std::uint64_t corpus_seed, unsigned threads = 0);

    // Absolute path delays snapped to the nearest multiple of grid_period.
    // Paths sharing a grid point combine as root-sum-of-squares.
    TapSeries realization_to_taps(const ChannelRealization &realization, double grid_period, TapMeta meta = {});

    // Metadata of capture `index` in a synthetic corpus: 32 beams per
    // location, locations "syn-0", "syn-1", ...
    TapMeta synthetic_capture_meta(const ScenarioProfile &profile, std::size_t index);

    // Grid index used by realization_to_taps.
    long long snap_to_grid(double delay, double grid_period);

    // Keeps clusters whose first-path arrival direction lies inside the beam
    // cone (half-angle width_deg / 2) and re-anchors the earliest survivor at 0.
    ChannelRealization apply_beam_filter(const ChannelRealization &realization, const BeamPattern &beam);

    // Great-circle separation between two (azimuth, elevation) directions, degrees.
    double angular_separation_deg(double az1, double el1, double az2, double el2);
}

#endif
