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

#include "mmwchan/channel_model.hpp"
#include "oracles.hpp"

#include <cmath>
#include <numeric>

using namespace mmwchan;

namespace
{
    ScenarioProfile toy_profile()
    {
        ScenarioProfile p;
        p.id = "toy";
        p.num_clusters = DistributionSpec::gev(0.2, 1.0, 3.0);
        p.intercluster_delay = DistributionSpec::gpd(0.3, 5e-9, 0.0);
        p.cluster_amplitude = DistributionSpec::gev(0.3, 0.02, 0.05);
        p.paths_per_cluster = DistributionSpec::gpd(-0.3, 2.5, 1.0);
        p.path_amplitude = DistributionSpec::gev(0.3, 0.02, 0.05);
        return p;
    }

    Cluster cluster_at(double delay, std::vector<double> amps, double grid = default_tap_grid)
    {
        Cluster c;
        c.delay = delay;
        for (std::size_t k = 0; k < amps.size(); ++k)
            c.paths.push_back(PathTap{static_cast<double>(k) * grid, amps[k], std::nullopt});
        c.amplitude = std::accumulate(amps.begin(), amps.end(), 0.0) / static_cast<double>(amps.size());
        return c;
    }
}

TEST_CASE("generated realizations satisfy the channel invariants")
{
    const auto p = toy_profile();
    for (std::uint64_t seed = 0; seed < 500; ++seed)
    {
        const auto r = generate_realization(p, seed);
        REQUIRE_NOTHROW(validate(r));
        CHECK(r.seed == seed);
        CHECK(r.profile_id == "toy");
        CHECK(r.clusters.size() >= 1);
        CHECK(r.clusters.size() <= static_cast<std::size_t>(p.max_count));
        for (std::size_t i = 0; i < r.clusters.size(); ++i)
        {
            const auto &c = r.clusters[i];
            if (i > 0)
                CHECK(c.delay - r.clusters[i - 1].delay >= p.tap_grid * (1.0 - 1e-12));
            for (std::size_t k = 0; k < c.paths.size(); ++k)
                CHECK(c.paths[k].offset == static_cast<double>(k) * p.tap_grid);
            double sum = 0.0;
            for (const auto &path : c.paths)
                sum += path.amplitude;
            CHECK(sum / static_cast<double>(c.paths.size()) == doctest::Approx(c.amplitude).epsilon(1e-12));
        }
    }
}

TEST_CASE("generation is deterministic per seed and differs across seeds")
{
    const auto p = toy_profile();
    CHECK(generate_realization(p, 42) == generate_realization(p, 42));
    CHECK_FALSE(generate_realization(p, 42) == generate_realization(p, 43));
}

TEST_CASE("corpus generation does not depend on the worker count")
{
    const auto p = toy_profile();
    const auto one = generate_corpus(p, 300, 9, 1);
    const auto four = generate_corpus(p, 300, 9, 4);
    CHECK(one == four);
    REQUIRE(one.size() == 300);
    for (std::size_t i = 0; i < one.size(); ++i)
        CHECK(one[i] == generate_realization(p, realization_seed(9, i)));
    CHECK(generate_corpus(p, 0, 9).empty());
}

TEST_CASE("point-mass profile reproduces its counts exactly")
{
    ScenarioProfile p = toy_profile();
    p.num_clusters = DistributionSpec::point_mass(2.5); // rounds half away to 3
    p.paths_per_cluster = DistributionSpec::point_mass(1.49);
    p.intercluster_delay = DistributionSpec::point_mass(1e-12); // below one grid period
    p.cluster_amplitude = DistributionSpec::point_mass(0.04);
    const auto r = generate_realization(p, 1);
    REQUIRE(r.clusters.size() == 3);
    CHECK(r.clusters[1].delay == p.tap_grid);
    CHECK(r.clusters[2].delay == 2.0 * p.tap_grid);
    for (const auto &c : r.clusters)
    {
        CHECK(c.paths.size() == 1);
        CHECK(c.amplitude == 0.04);
        CHECK(c.paths[0].amplitude == doctest::Approx(0.04).epsilon(1e-15));
    }
}

TEST_CASE("counts clamp to max_count")
{
    ScenarioProfile p = toy_profile();
    p.num_clusters = DistributionSpec::point_mass(1000.0);
    p.max_count = 7;
    CHECK(generate_realization(p, 3).clusters.size() == 7);
    p.num_clusters = DistributionSpec::point_mass(-4.0);
    CHECK(generate_realization(p, 3).clusters.size() == 1);
}

TEST_CASE("amplitude spec without positive support cannot generate")
{
    ScenarioProfile p = toy_profile();
    p.cluster_amplitude = DistributionSpec::point_mass(-1.0);
    CHECK_THROWS_AS(generate_realization(p, 1), InvalidProfile);
}

TEST_CASE("validate rejects malformed channels")
{
    ChannelRealization r;
    CHECK_THROWS_AS(validate(r), InvalidChannel);
    r.clusters = {cluster_at(0.0, {0.1, 0.2})};
    CHECK_NOTHROW(validate(r));

    auto bad = r;
    bad.clusters[0].delay = 1e-9;
    CHECK_THROWS_AS(validate(bad), InvalidChannel);

    bad = r;
    bad.clusters[0].amplitude = 0.5;
    CHECK_THROWS_AS(validate(bad), InvalidChannel);

    bad = r;
    bad.clusters[0].paths[1].offset = 0.0;
    CHECK_THROWS_AS(validate(bad), InvalidChannel);

    bad = r;
    bad.clusters.push_back(cluster_at(0.0, {0.1}));
    CHECK_THROWS_AS(validate(bad), InvalidChannel);

    CHECK_THROWS_AS(validate(AngularInfo{180.0, 0.0, 0.0, 0.0}), InvalidChannel);
    CHECK_THROWS_AS(validate(AngularInfo{0.0, 91.0, 0.0, 0.0}), InvalidChannel);
    CHECK_NOTHROW(validate(AngularInfo{-180.0, -90.0, 179.9, 90.0}));
}

TEST_CASE("tap export snaps to the grid and merges colliding paths")
{
    const double g = default_tap_grid;
    ChannelRealization r;
    r.clusters = {cluster_at(0.0, {0.3, 0.4}), cluster_at(1.1 * g, {0.5})};
    // second cluster snaps onto index 1, colliding with the first cluster's second path
    const auto taps = realization_to_taps(r, g);
    REQUIRE(taps.taps.size() == 2);
    CHECK(taps.taps[0].delay == 0.0);
    CHECK(taps.taps[0].amplitude == 0.3);
    CHECK(taps.taps[1].delay == g);
    CHECK(taps.taps[1].amplitude == doctest::Approx(std::sqrt(0.4 * 0.4 + 0.5 * 0.5)).epsilon(1e-15));

    CHECK(snap_to_grid(2.5 * g, g) == 3);
    CHECK(snap_to_grid(0.49 * g, g) == 0);
    CHECK_THROWS(realization_to_taps(r, 0.0));
}

TEST_CASE("synthetic capture metadata cycles through 32 beams")
{
    const auto p = toy_profile();
    const auto m = synthetic_capture_meta(p, 70);
    CHECK(m.beam_id == 6);
    CHECK(m.location_id == "syn-2");
    CHECK(m.capture_index == 70);
    CHECK(m.scenario == "Tunnel");
}

TEST_CASE("angular separation")
{
    CHECK(angular_separation_deg(0, 0, 0, 0) == doctest::Approx(0.0));
    CHECK(angular_separation_deg(0, 0, 90, 0) == doctest::Approx(90.0));
    CHECK(angular_separation_deg(-170, 0, 170, 0) == doctest::Approx(20.0));
    CHECK(angular_separation_deg(0, 90, 123, 90) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(angular_separation_deg(10, 20, 30, -40) == doctest::Approx(oracle::great_circle_deg(10, 20, 30, -40)));
}

TEST_CASE("beam filter keeps clusters inside the cone and re-anchors time")
{
    ChannelRealization r;
    r.clusters = {cluster_at(0.0, {0.1}), cluster_at(5e-9, {0.2}), cluster_at(9e-9, {0.3})};
    r.clusters[0].paths[0].angles = AngularInfo{0, 0, 40, 0};
    r.clusters[1].paths[0].angles = AngularInfo{0, 0, 8, 0};
    r.clusters[2].paths[0].angles = AngularInfo{0, 0, -9.9, 0};

    const auto kept = apply_beam_filter(r, BeamPattern{AngularInfo{0, 0, 0, 0}, 20.0});
    REQUIRE(kept.clusters.size() == 2);
    CHECK(kept.clusters[0].delay == 0.0);
    CHECK(kept.clusters[1].delay == doctest::Approx(4e-9));

    CHECK_THROWS_AS(apply_beam_filter(r, BeamPattern{AngularInfo{0, 0, 180 - 1, 0}, 7.0}), EmptyChannelError);
    r.clusters[1].paths[0].angles.reset();
    CHECK_THROWS_AS(apply_beam_filter(r, BeamPattern{}), InvalidChannel);
}
