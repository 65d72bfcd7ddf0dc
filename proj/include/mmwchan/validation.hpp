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

#ifndef MMWCHAN_VALIDATION_HPP
#define MMWCHAN_VALIDATION_HPP

#include "mmwchan/pipeline.hpp"
#include "mmwchan/profiles.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace mmwchan
{
    // Parameters read straight off generated realizations (no tap export).
    ParameterSamples simulate_samples(const ScenarioProfile &profile, std::size_t n, std::uint64_t seed,
                                      unsigned threads = 0);

    struct QuartileCheck
    {
        Parameter parameter = Parameter::NumClusters;
        QuartileTarget target;
        std::array<double, 3> simulated{};
        std::array<double, 3> error{}; // relative, or absolute for counts
        bool pass = false;
    };

    struct ProfileValidation
    {
        std::string profile_id;
        std::size_t n = 0;
        std::uint64_t seed = 0;
        double tolerance = 0.15;
        double count_tolerance = 1.0;
        std::vector<QuartileCheck> checks; // in all_parameters order
        bool pass = false;
    };

    // Compares simulated quartiles with `targets`: relative error within
    // `tolerance` for continuous parameters, absolute difference within
    // `count_tolerance` for counts.
    ProfileValidation validate_profile(const ScenarioProfile &profile, const std::map<Parameter, QuartileTarget> &targets,
                                       std::size_t n, std::uint64_t seed, double tolerance = 0.15,
                                       double count_tolerance = 1.0, unsigned threads = 0);

    // Published targets of a built-in profile.
    std::map<Parameter, QuartileTarget> builtin_targets_for(const ProfileKey &key);
}

#endif
