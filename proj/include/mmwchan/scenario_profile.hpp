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

#ifndef MMWCHAN_SCENARIO_PROFILE_HPP
#define MMWCHAN_SCENARIO_PROFILE_HPP

#include "mmwchan/distributions.hpp"

#include <array>
#include <map>
#include <string>
#include <string_view>

namespace mmwchan
{
    enum class Scenario
    {
        Tunnel,
        ExperimentalHall,
        MechanicalRoom,
        SideTunnel
    };

    std::string_view to_string(Scenario scenario);
    Scenario scenario_from_string(std::string_view name); // throws std::invalid_argument

    // The five fitted channel parameters. Intra-cluster path offsets are
    // placed on the tap grid and have no distribution.
    enum class Parameter
    {
        NumClusters,
        InterclusterDelay,
        ClusterAmplitude,
        PathsPerCluster,
        PathAmplitude
    };

    inline constexpr std::array<Parameter, 5> all_parameters = {
        Parameter::NumClusters, Parameter::InterclusterDelay, Parameter::ClusterAmplitude,
        Parameter::PathsPerCluster, Parameter::PathAmplitude};

    std::string_view to_string(Parameter parameter);
    Parameter parameter_from_string(std::string_view name);

    // Counts are discretized by rounding; the other parameters are continuous.
    constexpr bool is_count(Parameter p) noexcept
    {
        return p == Parameter::NumClusters || p == Parameter::PathsPerCluster;
    }

    inline constexpr double default_tap_grid = 0.24e-9; // seconds
    inline constexpr int default_max_count = 256;

    // Residual bookkeeping attached to a calibrated parameter.
    struct CalibrationInfo
    {
        double residual = 0.0;
        bool within_threshold = true;
        bool within_range = true; // false when the published range had to be left
        std::string note;
    };

    struct ScenarioProfile
    {
        std::string id;
        Scenario scenario = Scenario::Tunnel;
        double beamwidth_deg = 20.0;

        DistributionSpec num_clusters = DistributionSpec::point_mass(1.0);
        DistributionSpec intercluster_delay = DistributionSpec::point_mass(default_tap_grid); // seconds
        DistributionSpec cluster_amplitude = DistributionSpec::point_mass(0.05);              // linear
        DistributionSpec paths_per_cluster = DistributionSpec::point_mass(1.0);
        DistributionSpec path_amplitude = DistributionSpec::point_mass(0.05); // linear

        double tap_grid = default_tap_grid; // seconds
        int max_count = default_max_count;  // upper clamp for discretized counts

        std::map<Parameter, CalibrationInfo> calibration;
        std::string provenance;

        const DistributionSpec &spec(Parameter p) const;
        DistributionSpec &spec(Parameter p);
    };

    struct InvalidProfile : std::invalid_argument
    {
        using std::invalid_argument::invalid_argument;
    };

    // tap_grid > 0, max_count >= 1, amplitude specs reach into (0, inf).
    void validate(const ScenarioProfile &profile);

    // Canonical id such as "tunnel-7" or "side-tunnel-20".
    std::string profile_id(Scenario scenario, double beamwidth_deg);
}

#endif
