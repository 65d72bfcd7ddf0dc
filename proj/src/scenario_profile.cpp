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

#include "mmwchan/scenario_profile.hpp"

#include <fmt/format.h>

#include <cmath>
#include <stdexcept>

namespace mmwchan
{
    std::string_view to_string(Scenario scenario)
    {
        switch (scenario)
        {
        case Scenario::Tunnel:
            return "Tunnel";
        case Scenario::ExperimentalHall:
            return "ExperimentalHall";
        case Scenario::MechanicalRoom:
            return "MechanicalRoom";
        case Scenario::SideTunnel:
            return "SideTunnel";
        }
        return "?";
    }

    Scenario scenario_from_string(std::string_view name)
    {
        for (Scenario s : {Scenario::Tunnel, Scenario::ExperimentalHall, Scenario::MechanicalRoom, Scenario::SideTunnel})
            if (to_string(s) == name)
                return s;
        // short forms used in profile ids
        if (name == "tunnel")
            return Scenario::Tunnel;
        if (name == "exp-hall" || name == "experimental-hall")
            return Scenario::ExperimentalHall;
        if (name == "mechanical-room" || name == "pipe-room")
            return Scenario::MechanicalRoom;
        if (name == "side-tunnel")
            return Scenario::SideTunnel;
        throw std::invalid_argument(fmt::format("unknown scenario '{}'", name));
    }

    std::string_view to_string(Parameter parameter)
    {
        switch (parameter)
        {
        case Parameter::NumClusters:
            return "num_clusters";
        case Parameter::InterclusterDelay:
            return "intercluster_delay";
        case Parameter::ClusterAmplitude:
            return "cluster_amplitude";
        case Parameter::PathsPerCluster:
            return "paths_per_cluster";
        case Parameter::PathAmplitude:
            return "path_amplitude";
        }
        return "?";
    }

    Parameter parameter_from_string(std::string_view name)
    {
        for (Parameter p : all_parameters)
            if (to_string(p) == name)
                return p;
        throw std::invalid_argument(fmt::format("unknown parameter '{}'", name));
    }

    const DistributionSpec &ScenarioProfile::spec(Parameter p) const
    {
        switch (p)
        {
        case Parameter::NumClusters:
            return num_clusters;
        case Parameter::InterclusterDelay:
            return intercluster_delay;
        case Parameter::ClusterAmplitude:
            return cluster_amplitude;
        case Parameter::PathsPerCluster:
            return paths_per_cluster;
        case Parameter::PathAmplitude:
            return path_amplitude;
        }
        throw std::invalid_argument("unknown parameter");
    }

    DistributionSpec &ScenarioProfile::spec(Parameter p)
    {
        return const_cast<DistributionSpec &>(std::as_const(*this).spec(p));
    }

    void validate(const ScenarioProfile &profile)
    {
        if (!(profile.tap_grid > 0.0) || !std::isfinite(profile.tap_grid))
            throw InvalidProfile(fmt::format("profile '{}': tap_grid must be > 0", profile.id));
        if (profile.max_count < 1)
            throw InvalidProfile(fmt::format("profile '{}': max_count must be >= 1", profile.id));
        if (!(profile.beamwidth_deg > 0.0))
            throw InvalidProfile(fmt::format("profile '{}': beamwidth must be > 0", profile.id));
        for (Parameter p : {Parameter::ClusterAmplitude, Parameter::PathAmplitude})
            if (!(profile.spec(p).support_upper() > 0.0))
                throw InvalidProfile(fmt::format("profile '{}': {} has no positive support", profile.id, to_string(p)));
    }

    std::string profile_id(Scenario scenario, double beamwidth_deg)
    {
        std::string_view stem;
        switch (scenario)
        {
        case Scenario::Tunnel:
            stem = "tunnel";
            break;
        case Scenario::ExperimentalHall:
            stem = "exp-hall";
            break;
        case Scenario::MechanicalRoom:
            stem = "mechanical-room";
            break;
        case Scenario::SideTunnel:
            stem = "side-tunnel";
            break;
        }
        return fmt::format("{}-{}", stem, beamwidth_deg);
    }
}
