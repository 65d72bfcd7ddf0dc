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

#include <doctest.h>

#include "mmwchan/validation.hpp"

using namespace mmwchan;

TEST_CASE("validate_profile passes a calibrated profile and fails at zero tolerance")
{
    const ProfileKey key{Scenario::Tunnel, 7};
    const auto &p = builtin_profile(profile_id(key));
    const auto targets = builtin_targets_for(key);
    const auto v = validate_profile(p, targets, 20000, 11);
    CHECK(v.profile_id == "tunnel-7");
    CHECK(v.n == 20000);
    REQUIRE(v.checks.size() == 5);
    CHECK(v.pass);
    for (const auto &c : v.checks)
        CHECK(c.pass);

    const auto strict = validate_profile(p, targets, 20000, 11, 0.0, 0.0);
    CHECK_FALSE(strict.pass);
    // count errors are absolute
    for (const auto &c : strict.checks)
        if (is_count(c.parameter))
            for (std::size_t i = 0; i < 3; ++i)
                CHECK(c.error[i] == std::abs(c.simulated[i] - std::array{c.target.q1, c.target.q2, c.target.q3}[i]));
}

TEST_CASE("validate_profile is reproducible and thread independent")
{
    const auto &p = builtin_profile("exp-hall-20");
    const auto targets = builtin_targets_for({Scenario::ExperimentalHall, 20});
    const auto a = validate_profile(p, targets, 5000, 3, 0.15, 1.0, 1);
    const auto b = validate_profile(p, targets, 5000, 3, 0.15, 1.0, 3);
    for (std::size_t i = 0; i < 5; ++i)
        CHECK(a.checks[i].simulated == b.checks[i].simulated);
}

TEST_CASE("validate_profile arguments")
{
    const auto &p = builtin_profile("tunnel-7");
    auto targets = builtin_targets_for({Scenario::Tunnel, 7});
    CHECK_THROWS_AS(validate_profile(p, targets, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(validate_profile(p, targets, 10, 1, -0.1), std::invalid_argument);
    targets.erase(Parameter::PathAmplitude);
    CHECK_THROWS_AS(validate_profile(p, targets, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(builtin_targets_for({Scenario::Tunnel, 21}), std::out_of_range);
}

TEST_CASE("side tunnel cells without inter-cluster samples fail rather than pass")
{
    ScenarioProfile p = builtin_profile("side-tunnel-20");
    p.num_clusters = DistributionSpec::point_mass(1.0);
    const auto v = validate_profile(p, builtin_targets_for({Scenario::SideTunnel, 20}), 1000, 1);
    CHECK_FALSE(v.checks[1].pass);
    CHECK_FALSE(v.pass);
}
