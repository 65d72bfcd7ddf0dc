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

#include "mmwchan/profiles.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace mmwchan;

namespace
{
    double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

    // Discretized quartile: smallest n >= 1 whose rounded-count CDF reaches p.
    double count_quartile(const std::function<double(double)> &cdf, double p)
    {
        for (int n = 1; n < 10000; ++n)
            if (cdf(n + 0.5) >= p)
                return n;
        return 10000;
    }

    double gpd_cdf(double k, double s, double t, double x)
    {
        if (x <= t)
            return 0.0;
        const double z = 1.0 + k * (x - t) / s;
        return z <= 0.0 ? 1.0 : 1.0 - std::pow(z, -1.0 / k);
    }
}

TEST_CASE("published targets")
{
    const auto &t = builtin_targets();
    CHECK(t.size() == 40);
    const auto at = [&](Scenario s, int bw, Parameter p) { return t.at({s, bw, p}); };

    CHECK(at(Scenario::Tunnel, 7, Parameter::InterclusterDelay) == QuartileTarget{2.4e-10, 1.3e-9, 5.8e-9, false});
    CHECK(at(Scenario::SideTunnel, 20, Parameter::PathsPerCluster) == QuartileTarget{7, 9, 10, true});
    CHECK(at(Scenario::SideTunnel, 20, Parameter::NumClusters) == QuartileTarget{1, 1, 1, true});
    CHECK(at(Scenario::ExperimentalHall, 20, Parameter::ClusterAmplitude) ==
          QuartileTarget{0.016, 0.024, 0.063, false});
    CHECK(at(Scenario::MechanicalRoom, 20, Parameter::PathAmplitude) == QuartileTarget{0.027, 0.037, 0.079, false});
    CHECK(at(Scenario::ExperimentalHall, 80, Parameter::NumClusters) == QuartileTarget{2, 5, 8, true});

    for (const auto &[key, target] : t)
    {
        CHECK_NOTHROW(validate(target));
        CHECK(target.discretized == is_count(key.parameter));
    }
}

TEST_CASE("target validation")
{
    CHECK_THROWS_AS(validate(QuartileTarget{3, 2, 1}), InvalidTarget);
    CHECK_THROWS_AS(validate(QuartileTarget{0, 1, 2}), InvalidTarget);
    CHECK_THROWS_AS(validate(QuartileTarget{1, NAN, 2}), InvalidTarget);
    CHECK_NOTHROW(validate(QuartileTarget{1, 1, 1}));
}

TEST_CASE("profile ids")
{
    const auto keys = builtin_profile_keys();
    CHECK(keys.size() == 8);
    for (const auto &k : keys)
        CHECK(profile_key_from_id(profile_id(k)) == k);
    CHECK(profile_id(ProfileKey{Scenario::ExperimentalHall, 80}) == "exp-hall-80");
    CHECK(profile_id(ProfileKey{Scenario::SideTunnel, 20}) == "side-tunnel-20");
    CHECK(profile_key_from_id("tunnel-21") == ProfileKey{Scenario::Tunnel, 21});
    CHECK_THROWS_AS(profile_key_from_id("attic-20"), std::invalid_argument);
}

TEST_CASE("assigned families")
{
    const ProfileKey t20{Scenario::Tunnel, 20}, st{Scenario::SideTunnel, 20}, t80{Scenario::Tunnel, 80};
    CHECK(assigned_family(t20, Parameter::NumClusters) == Family::GEV);
    CHECK(assigned_family(t20, Parameter::InterclusterDelay) == Family::GPD);
    CHECK(assigned_family(t20, Parameter::ClusterAmplitude) == Family::GEV);
    CHECK(assigned_family(t20, Parameter::PathsPerCluster) == Family::GPD);
    CHECK(assigned_family(t20, Parameter::PathAmplitude) == Family::GEV);
    CHECK(assigned_family(st, Parameter::InterclusterDelay) == Family::GEV);
    CHECK(assigned_family(st, Parameter::ClusterAmplitude) == Family::GPD);
    CHECK(assigned_family(st, Parameter::PathsPerCluster) == Family::Gamma);
    CHECK(assigned_family(st, Parameter::PathAmplitude) == Family::InverseGaussian);
    CHECK_FALSE(assigned_family(t80, Parameter::NumClusters).has_value());

    CHECK_FALSE(published_range(t80, Parameter::NumClusters).has_value());
    CHECK_FALSE(published_range(st, Parameter::PathAmplitude).has_value());
    const auto paths = published_range(t20, Parameter::PathsPerCluster);
    REQUIRE(paths.has_value());
    CHECK(paths->lower[2] == 1.0);
    CHECK(paths->upper[2] == 1.0);
}

TEST_CASE("quartile residual")
{
    const QuartileTarget t{1.0, 2.0, 4.0};
    CHECK(quartile_residual({1.0, 2.0, 4.0}, t) == 0.0);
    CHECK(quartile_residual({1.1, 2.0, 4.0}, t) == doctest::Approx(0.01));
    CHECK(quartile_residual({1.1, 1.8, 4.4}, t) == doctest::Approx(0.01 + 0.01 + 0.01));
    CHECK(quartile_residual({1.1, 1.8, 4.4}, t, {1.0, 0.5, 0.0}) == doctest::Approx(0.015));
}

TEST_CASE("variate quartiles of a discretized GPD")
{
    const double k = -0.36, s = 2.32, th = 1.0;
    CalibrationOptions opts;
    opts.variate = Variate::Count;
    const auto q = variate_quartiles(DistributionSpec::gpd(k, s, th), opts);
    const auto cdf = [&](double x) { return gpd_cdf(k, s, th, x); };
    CHECK(q[0] == count_quartile(cdf, 0.25));
    CHECK(q[1] == count_quartile(cdf, 0.50));
    CHECK(q[2] == count_quartile(cdf, 0.75));

    CalibrationOptions cont;
    const auto c = variate_quartiles(DistributionSpec::gpd(k, s, th), cont);
    CHECK(c[1] == doctest::Approx(oracle::gpd_quantile(k, s, th, 0.5)).epsilon(1e-10));
    CHECK(c[1] == doctest::Approx(2.42).epsilon(0.005));

    CalibrationOptions floor;
    floor.variate = Variate::FloorClamped;
    floor.floor = 2.0;
    const auto fq = variate_quartiles(DistributionSpec::gpd(k, s, th), floor);
    CHECK(fq[0] == 2.0);
    CHECK(fq[2] == c[2]);
}

TEST_CASE("calibration recovers known in-range parameters")
{
    SUBCASE("GPD, continuous")
    {
        const double k = -0.36, s = 2.32, th = 1.0;
        const QuartileTarget t{oracle::gpd_quantile(k, s, th, 0.25), oracle::gpd_quantile(k, s, th, 0.5),
                               oracle::gpd_quantile(k, s, th, 0.75)};
        CalibrationOptions opts;
        opts.bounds = published_range({Scenario::Tunnel, 20}, Parameter::PathsPerCluster);
        const auto c = calibrate(Family::GPD, t, opts);
        CHECK(rel(c.spec.parameter(0), k) < 0.03);
        CHECK(rel(c.spec.parameter(1), s) < 0.03);
        CHECK(c.spec.parameter(2) == 1.0);
        CHECK(c.residual < 1e-8);
    }
    SUBCASE("GPD, inter-cluster delay box")
    {
        const double k = 0.4, s = 4e-9, th = -1e-9;
        const QuartileTarget t{oracle::gpd_quantile(k, s, th, 0.25), oracle::gpd_quantile(k, s, th, 0.5),
                               oracle::gpd_quantile(k, s, th, 0.75)};
        CalibrationOptions opts;
        opts.bounds = published_range({Scenario::Tunnel, 20}, Parameter::InterclusterDelay);
        const auto c = calibrate(Family::GPD, t, opts);
        CHECK(rel(c.spec.parameter(0), k) < 0.03);
        CHECK(rel(c.spec.parameter(1), s) < 0.03);
        CHECK(rel(c.spec.parameter(2), th) < 0.03);
    }
    SUBCASE("GEV, cluster amplitude box")
    {
        const double k = 0.5, s = 0.02, mu = 0.03;
        const QuartileTarget t{oracle::gev_quantile(k, s, mu, 0.25), oracle::gev_quantile(k, s, mu, 0.5),
                               oracle::gev_quantile(k, s, mu, 0.75)};
        CalibrationOptions opts;
        opts.bounds = published_range({Scenario::Tunnel, 20}, Parameter::ClusterAmplitude);
        const auto c = calibrate(Family::GEV, t, opts);
        CHECK(rel(c.spec.parameter(0), k) < 0.03);
        CHECK(rel(c.spec.parameter(1), s) < 0.03);
        CHECK(rel(c.spec.parameter(2), mu) < 0.03);
    }
    SUBCASE("Gamma, unbounded")
    {
        const auto truth = DistributionSpec::gamma(9.0, 1.1);
        const QuartileTarget t{quantile(truth, 0.25), quantile(truth, 0.5), quantile(truth, 0.75)};
        const auto c = calibrate(Family::Gamma, t);
        CHECK(rel(c.spec.parameter(0), 9.0) < 0.03);
        CHECK(rel(c.spec.parameter(1), 1.1) < 0.03);
    }
}

TEST_CASE("discretized calibration meets integer targets")
{
    CalibrationOptions opts;
    opts.bounds = published_range({Scenario::Tunnel, 20}, Parameter::PathsPerCluster);
    const auto c = calibrate(Family::GPD, QuartileTarget{2, 3, 4, true}, opts);
    CHECK(c.quartiles == std::array<double, 3>{2, 3, 4});
    CHECK(c.residual == 0.0);
    // the fitted spec's continuous quartiles sit inside the rounding cells
    const auto f = [&](double x) { return mmwchan::cdf(c.spec, x); };
    CHECK(count_quartile(f, 0.5) == 3);
}

TEST_CASE("unreachable targets raise with the best iterate")
{
    CalibrationOptions opts;
    opts.bounds = published_range({Scenario::Tunnel, 20}, Parameter::PathsPerCluster);
    opts.threshold = 1e-6;
    try
    {
        calibrate(Family::GPD, QuartileTarget{2.0, 20.0, 21.0}, opts);
        FAIL("expected CalibrationError");
    }
    catch (const CalibrationError &e)
    {
        REQUIRE(e.best.has_value());
        CHECK(e.best->residual > 1e-6);
    }
    CHECK_THROWS_AS(calibrate(Family::PointMass, QuartileTarget{1, 2, 3}), std::invalid_argument);
    CHECK_THROWS_AS(calibrate(Family::GEV, QuartileTarget{3, 2, 1}), InvalidTarget);
}

TEST_CASE("built-in profiles")
{
    const auto &all = builtin_profiles();
    REQUIRE(all.size() == 8);
    for (const auto &[key, p] : all)
    {
        CAPTURE(p.id);
        CHECK(p.id == profile_id(key));
        CHECK_NOTHROW(validate(p));
        CHECK(p.tap_grid == default_tap_grid);
        for (Parameter par : all_parameters)
        {
            CAPTURE(to_string(par));
            REQUIRE(p.calibration.count(par) == 1);
            const auto &info = p.calibration.at(par);
            CHECK(info.residual <= 0.15);
            CHECK(info.within_threshold);
            if (auto f = assigned_family(key, par))
                CHECK(p.spec(par).family() == *f);
            if (!info.within_range)
                CHECK_FALSE(info.note.empty());
        }
    }
    const auto &mr = builtin_profile("mechanical-room-20");
    CHECK(mr.paths_per_cluster.family() == Family::GPD);
    CHECK(mr.paths_per_cluster.parameter(2) == 1.0);
    CHECK(builtin_profile("side-tunnel-20").paths_per_cluster.family() == Family::Gamma);
    CHECK_THROWS(builtin_profile("tunnel-21"));
}

TEST_CASE("calibrate_profile needs every target")
{
    std::map<Parameter, QuartileTarget> targets;
    for (Parameter p : {Parameter::NumClusters, Parameter::InterclusterDelay, Parameter::ClusterAmplitude,
                        Parameter::PathsPerCluster})
        targets[p] = builtin_targets().at({Scenario::Tunnel, 7, p});
    CHECK_THROWS_AS(calibrate_profile({Scenario::Tunnel, 7}, targets), std::invalid_argument);
}
