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

#ifndef MMWCHAN_DISTRIBUTIONS_HPP
#define MMWCHAN_DISTRIBUTIONS_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mmwchan
{
    // Declaration order is the tie-break order used by family selection.
    enum class Family
    {
        GEV,
        GPD,
        Gamma,
        InverseGaussian,
        PointMass
    };

    inline constexpr std::array<Family, 5> all_families = {Family::GEV, Family::GPD, Family::Gamma,
                                                           Family::InverseGaussian, Family::PointMass};

    std::string_view to_string(Family family);
    Family family_from_string(std::string_view name); // throws std::invalid_argument

    // Number of parameters carried by the family (GPD counts its location).
    std::size_t parameter_count(Family family);

    // Parameter names in storage order, e.g. {"k", "sigma", "mu"} for GEV.
    std::span<const std::string_view> parameter_names(Family family);

    struct InvalidDistribution : std::invalid_argument
    {
        using std::invalid_argument::invalid_argument;
    };

    struct DomainError : std::domain_error
    {
        using std::domain_error::domain_error;
    };

    /// A distribution family plus its parameters.
    ///
    /// Parameter storage order per family:
    ///   GEV              shape k, scale sigma, location mu
    ///   GPD              shape k, scale sigma, location theta
    ///   Gamma            shape a, scale b
    ///   InverseGaussian  mean m, shape lambda
    ///   PointMass        value c
    ///
    /// Construction validates scale-type parameters (> 0) and finiteness.
    class DistributionSpec
    {
    public:
        static DistributionSpec gev(double shape, double scale, double location);
        static DistributionSpec gpd(double shape, double scale, double location);
        static DistributionSpec gamma(double shape, double scale);
        static DistributionSpec inverse_gaussian(double mean, double shape);
        static DistributionSpec point_mass(double value);
        static DistributionSpec from_parameters(Family family, std::span<const double> params);

        Family family() const noexcept { return family_; }
        std::span<const double> parameters() const noexcept { return {params_.data(), parameter_count(family_)}; }
        double parameter(std::size_t index) const;

        // Closed support interval; infinite ends where unbounded.
        double support_lower() const noexcept;
        double support_upper() const noexcept;

        std::string describe() const;

        friend bool operator==(const DistributionSpec &, const DistributionSpec &) = default;

    private:
        DistributionSpec(Family family, std::array<double, 3> params);

        Family family_ = Family::PointMass;
        std::array<double, 3> params_{};
    };

    double cdf(const DistributionSpec &dist, double x);
    double pdf(const DistributionSpec &dist, double x);
    double log_pdf(const DistributionSpec &dist, double x);

    // Inverse CDF; p must lie strictly inside (0, 1).
    double quantile(const DistributionSpec &dist, double p);

    // Inverse-transform samples from the counter-based stream (seed, stream_index).
    std::vector<double> sample(const DistributionSpec &dist, std::size_t n, std::uint64_t seed,
                               std::uint64_t stream_index = 0);

    double log_likelihood(const DistributionSpec &dist, std::span<const double> samples);

    struct FitOptions
    {
        // Count variates fix the GPD location at 1 instead of min(samples) - eps.
        bool count_variate = false;
        std::optional<double> gpd_location;
        int max_evaluations = 8000;
    };

    struct FitError : std::runtime_error
    {
        FitError(const std::string &what, std::optional<DistributionSpec> best_iterate = std::nullopt)
            : std::runtime_error(what), best(best_iterate) {}
        std::optional<DistributionSpec> best;
    };

    // GPD location used by fit_mle: 1 for counts, otherwise min(samples)
    // minus 1e-6 of the interquartile range (of the full range when the
    // quartiles coincide or the range is smaller).
    double gpd_fit_location(std::span<const double> samples, const FitOptions &options = {});

    // Maximum-likelihood fit (moment/PWM initialisation, simplex refinement).
    // Requires >= 20 finite samples that are not all equal.
    DistributionSpec fit_mle(Family family, std::span<const double> samples, const FitOptions &options = {});

    // Type-7 (linear interpolation) quantile of already sorted data.
    double sorted_quantile(std::span<const double> sorted, double p);

    // First quartile, median and third quartile (type 7).
    std::array<double, 3> sample_quartiles(std::span<const double> samples);

    // Two-sided Kolmogorov-Smirnov distance between the empirical step CDF and `dist`.
    double ks_statistic(std::span<const double> samples, const DistributionSpec &dist);

    struct CandidateScore
    {
        Family family;
        std::optional<DistributionSpec> spec; // empty when the fit failed
        double ks = 0.0;                      // +inf when the fit failed
        std::string error;
    };

    struct Selection
    {
        DistributionSpec chosen;
        std::vector<CandidateScore> scores; // in candidate order as given
    };

    struct SelectionError : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    // Fits every candidate and keeps the smallest KS distance. Ties go to the
    // family with fewer parameters, then to the earlier enum value.
    Selection select_family(std::span<const double> samples, std::span<const Family> candidates,
                            const FitOptions &options = {});
}

#endif
