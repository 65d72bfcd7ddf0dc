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

#ifndef MMWCHAN_PROFILES_HPP
#define MMWCHAN_PROFILES_HPP

#include "mmwchan/distributions.hpp"
#include "mmwchan/scenario_profile.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mmwchan
{
    // First quartile, median and third quartile of a channel parameter.
    struct QuartileTarget
    {
        double q1 = 0.0;
        double q2 = 0.0;
        double q3 = 0.0;
        bool discretized = false; // measured on rounded counts

        friend bool operator==(const QuartileTarget &, const QuartileTarget &) = default;
    };

    struct InvalidTarget : std::invalid_argument
    {
        using std::invalid_argument::invalid_argument;
    };

    // Finite, ordered quartiles. Relative errors need q1 > 0, so zero or
    // negative quartiles are rejected as well.
    void validate(const QuartileTarget &target);

    struct ProfileKey
    {
        Scenario scenario = Scenario::Tunnel;
        int beamwidth_deg = 20;

        auto operator<=>(const ProfileKey &) const = default;
    };

    struct TargetKey
    {
        Scenario scenario = Scenario::Tunnel;
        int beamwidth_deg = 20;
        Parameter parameter = Parameter::NumClusters;

        auto operator<=>(const TargetKey &) const = default;
    };

    // The eight measured (scenario, beamwidth) combinations, in table order.
    std::vector<ProfileKey> builtin_profile_keys();

    // Published quartiles for all 8 x 5 (profile, parameter) cells.
    const std::map<TargetKey, QuartileTarget> &builtin_targets();

    std::string profile_id(const ProfileKey &key);
    ProfileKey profile_key_from_id(std::string_view id); // throws std::invalid_argument

    // Family the measurement campaign assigned to a parameter. The Tunnel
    // 80-degree cluster count has no published family; it is chosen during
    // calibration.
    std::optional<Family> assigned_family(const ProfileKey &key, Parameter parameter);

    // Published parameter range for a cell, in the family's storage order.
    // Empty where nothing was published.
    struct ParameterBox
    {
        std::vector<double> lower;
        std::vector<double> upper;
    };
    std::optional<ParameterBox> published_range(const ProfileKey &key, Parameter parameter);

    // How generated values are post-processed before quartiles are taken.
    enum class Variate
    {
        Continuous,
        Count,             // round half away from zero, clamp to [1, max_count]
        FloorClamped,      // max(x, floor)
        PositiveTruncated  // redraw until > 0
    };

    struct CalibrationOptions
    {
        std::optional<ParameterBox> bounds;
        // Without hard bounds: leaving this box costs soft_weight times the
        // squared excursion in units of the box width. Degenerate coordinates
        // (lower == upper) stay fixed.
        std::optional<ParameterBox> soft_bounds;
        double soft_weight = 1e-3;
        Variate variate = Variate::Continuous;
        double floor = default_tap_grid; // FloorClamped only
        int max_count = default_max_count;
        std::array<double, 3> weights = {1.0, 1.0, 1.0};
        double threshold = 0.15;
        // Per-quartile acceptance used when assembling profiles: relative
        // error for continuous variates, absolute error for counts.
        double quartile_tolerance = 0.15;
        double count_tolerance = 1.0;
    };

    struct Calibration
    {
        DistributionSpec spec;
        double residual = 0.0;
        std::array<double, 3> quartiles{}; // of the variate, as used for the residual
    };

    struct CalibrationError : std::runtime_error
    {
        CalibrationError(const std::string &what, std::optional<Calibration> best_iterate)
            : std::runtime_error(what), best(std::move(best_iterate)) {}
        std::optional<Calibration> best;
    };

    // Quartiles of the post-processed variate, evaluated analytically.
    // Throws DomainError when the spec has no mass where the variate needs it.
    std::array<double, 3> variate_quartiles(const DistributionSpec &spec, const CalibrationOptions &options);

    // Weighted sum of squared relative quartile errors.
    double quartile_residual(const std::array<double, 3> &quartiles, const QuartileTarget &target,
                             const std::array<double, 3> &weights = {1.0, 1.0, 1.0});

    // Fits `family` so that its quartiles reproduce `target` (multi-start
    // simplex inside the bounds). Throws CalibrationError carrying the best
    // iterate when its residual exceeds options.threshold.
    Calibration calibrate(Family family, const QuartileTarget &target, const CalibrationOptions &options = {});

    // Calibrates the raw path-amplitude distribution so that the amplitudes
    // produced by the generator (raw draws rescaled to the cluster amplitude)
    // reproduce `target`. Only `profile`'s cluster amplitude, paths per
    // cluster and max_count are read. Quartiles are estimated by simulation
    // with common random numbers.
    Calibration calibrate_path_amplitude(Family family, const QuartileTarget &target, const ScenarioProfile &profile,
                                         const CalibrationOptions &options = {}, std::size_t clusters = 6000);

    // Simulated quartiles of generated path amplitudes (see above).
    std::array<double, 3> simulated_path_amplitude_quartiles(const ScenarioProfile &profile, std::size_t clusters,
                                                             std::uint64_t seed);

    struct ProfileCalibrationError : std::runtime_error
    {
        ProfileCalibrationError(const std::string &what, TargetKey cell) : std::runtime_error(what), key(cell) {}
        TargetKey key;
    };

    // All eight calibrated profiles, keyed by (scenario, beamwidth). Computed
    // once per process. A cell is first fitted inside its published range;
    // if that fit misses the residual threshold or a quartile tolerance, it
    // is refitted with the range as a soft penalty and marked
    // (CalibrationInfo::within_range). Cells that still miss are kept and
    // marked (CalibrationInfo::within_threshold).
    const std::map<ProfileKey, ScenarioProfile> &builtin_profiles();

    // Calibrates a single profile against `targets` (one per parameter).
    ScenarioProfile calibrate_profile(const ProfileKey &key, const std::map<Parameter, QuartileTarget> &targets);

    const ScenarioProfile &builtin_profile(const std::string &id); // throws std::out_of_range
}

#endif
