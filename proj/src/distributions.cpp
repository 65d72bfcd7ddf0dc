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

#include "mmwchan/distributions.hpp"
#include "mmwchan/optimize.hpp"
#include "mmwchan/rng.hpp"

#include <boost/math/distributions/inverse_gaussian.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace mmwchan
{
    namespace
    {
        constexpr double inf = std::numeric_limits<double>::infinity();

        // Below this magnitude the GEV/GPD shape is treated as the k = 0 limit.
        constexpr double shape_zero = 1e-12;

        using ig_policy = boost::math::policies::policy<boost::math::policies::overflow_error<boost::math::policies::ignore_error>,
                                                        boost::math::policies::underflow_error<boost::math::policies::ignore_error>>;
        using ig_dist = boost::math::inverse_gaussian_distribution<double, ig_policy>;

        constexpr std::array<std::string_view, 3> gev_names = {"k", "sigma", "mu"};
        constexpr std::array<std::string_view, 3> gpd_names = {"k", "sigma", "theta"};
        constexpr std::array<std::string_view, 2> gamma_names = {"a", "b"};
        constexpr std::array<std::string_view, 2> ig_names = {"mean", "lambda"};
        constexpr std::array<std::string_view, 1> point_names = {"value"};

        void require_finite(std::span<const double> values, const char *what)
        {
            for (double v : values)
                if (!std::isfinite(v))
                    throw InvalidDistribution(fmt::format("{}: parameters must be finite", what));
        }

        void require_positive(double v, const char *what)
        {
            if (!(v > 0.0))
                throw InvalidDistribution(fmt::format("{} must be strictly positive (got {})", what, v));
        }
    }

    namespace
    {
        // exp(t^2) erfc(t) for t >= 0
        double erfcx(double t)
        {
            if (t < 25.0)
                return std::exp(t * t) * std::erfc(t);
            const double r = 1.0 / (t * t);
            return (1.0 - r * (0.5 - r * (0.75 - r * (1.875 - 6.5625 * r)))) / (t * std::sqrt(M_PI));
        }

        // Phi(z1) + exp(2 lambda / m) Phi(-z2), with the second term written as
        // exp(-z1^2 / 2) erfcx(z2 / sqrt 2) / 2 so it cannot overflow.
        double ig_cdf(double m, double lambda, double x)
        {
            const double r = std::sqrt(lambda / x);
            const double z1 = r * (x / m - 1.0), z2 = r * (x / m + 1.0);
            const double first = 0.5 * std::erfc(-z1 / M_SQRT2);
            const double second = 0.5 * std::exp(-0.5 * z1 * z1) * erfcx(z2 / M_SQRT2);
            return std::min(1.0, first + second);
        }
    }

    // ---------------------------------------------------------------------
    // Family metadata

    std::string_view to_string(Family family)
    {
        switch (family)
        {
        case Family::GEV:
            return "GEV";
        case Family::GPD:
            return "GPD";
        case Family::Gamma:
            return "Gamma";
        case Family::InverseGaussian:
            return "InverseGaussian";
        case Family::PointMass:
            return "PointMass";
        }
        return "?";
    }

    Family family_from_string(std::string_view name)
    {
        for (Family f : all_families)
            if (to_string(f) == name)
                return f;
        throw std::invalid_argument(fmt::format("unknown distribution family '{}'", name));
    }

    std::size_t parameter_count(Family family)
    {
        return parameter_names(family).size();
    }

    std::span<const std::string_view> parameter_names(Family family)
    {
        switch (family)
        {
        case Family::GEV:
            return gev_names;
        case Family::GPD:
            return gpd_names;
        case Family::Gamma:
            return gamma_names;
        case Family::InverseGaussian:
            return ig_names;
        case Family::PointMass:
            return point_names;
        }
        return {};
    }

    // ---------------------------------------------------------------------
    // DistributionSpec

    DistributionSpec::DistributionSpec(Family family, std::array<double, 3> params)
        : family_(family), params_(params)
    {
        require_finite(parameters(), "distribution");
    }

    DistributionSpec DistributionSpec::gev(double shape, double scale, double location)
    {
        require_positive(scale, "GEV scale");
        return DistributionSpec(Family::GEV, {shape, scale, location});
    }

    DistributionSpec DistributionSpec::gpd(double shape, double scale, double location)
    {
        require_positive(scale, "GPD scale");
        return DistributionSpec(Family::GPD, {shape, scale, location});
    }

    DistributionSpec DistributionSpec::gamma(double shape, double scale)
    {
        require_positive(shape, "Gamma shape");
        require_positive(scale, "Gamma scale");
        return DistributionSpec(Family::Gamma, {shape, scale, 0.0});
    }

    DistributionSpec DistributionSpec::inverse_gaussian(double mean, double shape)
    {
        require_positive(mean, "InverseGaussian mean");
        require_positive(shape, "InverseGaussian shape");
        return DistributionSpec(Family::InverseGaussian, {mean, shape, 0.0});
    }

    DistributionSpec DistributionSpec::point_mass(double value)
    {
        return DistributionSpec(Family::PointMass, {value, 0.0, 0.0});
    }

    DistributionSpec DistributionSpec::from_parameters(Family family, std::span<const double> p)
    {
        if (p.size() != parameter_count(family))
            throw InvalidDistribution(fmt::format("{} takes {} parameters, got {}", to_string(family),
                                                  parameter_count(family), p.size()));
        switch (family)
        {
        case Family::GEV:
            return gev(p[0], p[1], p[2]);
        case Family::GPD:
            return gpd(p[0], p[1], p[2]);
        case Family::Gamma:
            return gamma(p[0], p[1]);
        case Family::InverseGaussian:
            return inverse_gaussian(p[0], p[1]);
        case Family::PointMass:
            return point_mass(p[0]);
        }
        throw InvalidDistribution("unknown family");
    }

    double DistributionSpec::parameter(std::size_t index) const
    {
        if (index >= parameter_count(family_))
            throw std::out_of_range("parameter index");
        return params_[index];
    }

    double DistributionSpec::support_lower() const noexcept
    {
        const auto &[a, b, c] = params_;
        switch (family_)
        {
        case Family::GEV:
            return a > shape_zero ? c - b / a : -inf;
        case Family::GPD:
            return c;
        case Family::Gamma:
        case Family::InverseGaussian:
            return 0.0;
        case Family::PointMass:
            return a;
        }
        return -inf;
    }

    double DistributionSpec::support_upper() const noexcept
    {
        const auto &[a, b, c] = params_;
        switch (family_)
        {
        case Family::GEV:
            return a < -shape_zero ? c - b / a : inf;
        case Family::GPD:
            return a < -shape_zero ? c - b / a : inf;
        case Family::Gamma:
        case Family::InverseGaussian:
            return inf;
        case Family::PointMass:
            return a;
        }
        return inf;
    }

    std::string DistributionSpec::describe() const
    {
        std::string out(to_string(family_));
        out += '(';
        const auto names = parameter_names(family_);
        for (std::size_t i = 0; i < names.size(); ++i)
            out += fmt::format("{}{}={:.6g}", i ? ", " : "", names[i], params_[i]);
        out += ')';
        return out;
    }

    // ---------------------------------------------------------------------
    // Analytic functions

    double cdf(const DistributionSpec &dist, double x)
    {
        const auto p = dist.parameters();
        switch (dist.family())
        {
        case Family::GEV:
        {
            const double k = p[0], z = (x - p[2]) / p[1];
            if (std::abs(k) < shape_zero)
                return std::exp(-std::exp(-z));
            const double t = 1.0 + k * z;
            if (t <= 0.0)
                return k > 0.0 ? 0.0 : 1.0;
            return std::exp(-std::exp(-std::log(t) / k));
        }
        case Family::GPD:
        {
            const double k = p[0], z = (x - p[2]) / p[1];
            if (z <= 0.0)
                return 0.0;
            if (std::abs(k) < shape_zero)
                return -std::expm1(-z);
            const double t = 1.0 + k * z;
            if (t <= 0.0)
                return 1.0;
            return -std::expm1(-std::log1p(k * z) / k);
        }
        case Family::Gamma:
            if (x <= 0.0)
                return 0.0;
            if (std::isinf(x))
                return 1.0;
            return boost::math::gamma_p(p[0], x / p[1]);
        case Family::InverseGaussian:
            if (x <= 0.0)
                return 0.0;
            if (std::isinf(x))
                return 1.0;
            return ig_cdf(p[0], p[1], x);
        case Family::PointMass:
            return x >= p[0] ? 1.0 : 0.0;
        }
        return 0.0;
    }

    double log_pdf(const DistributionSpec &dist, double x)
    {
        const auto p = dist.parameters();
        switch (dist.family())
        {
        case Family::GEV:
        {
            const double k = p[0], z = (x - p[2]) / p[1];
            if (std::abs(k) < shape_zero)
                return -std::log(p[1]) - z - std::exp(-z);
            const double t = 1.0 + k * z;
            if (t <= 0.0)
                return -inf;
            const double lt = std::log(t);
            return -std::log(p[1]) - (1.0 / k + 1.0) * lt - std::exp(-lt / k);
        }
        case Family::GPD:
        {
            const double k = p[0], z = (x - p[2]) / p[1];
            if (z < 0.0)
                return -inf;
            if (std::abs(k) < shape_zero)
                return -std::log(p[1]) - z;
            const double t = 1.0 + k * z;
            if (t <= 0.0)
                return -inf;
            return -std::log(p[1]) - (1.0 / k + 1.0) * std::log(t);
        }
        case Family::Gamma:
        {
            if (x <= 0.0)
                return -inf;
            const double a = p[0], b = p[1];
            return (a - 1.0) * std::log(x) - x / b - std::lgamma(a) - a * std::log(b);
        }
        case Family::InverseGaussian:
        {
            if (x <= 0.0)
                return -inf;
            const double m = p[0], lambda = p[1];
            return 0.5 * std::log(lambda / (2.0 * M_PI * x * x * x)) - lambda * (x - m) * (x - m) / (2.0 * m * m * x);
        }
        case Family::PointMass:
            return x == p[0] ? inf : -inf;
        }
        return -inf;
    }

    double pdf(const DistributionSpec &dist, double x)
    {
        return std::exp(log_pdf(dist, x));
    }

    double quantile(const DistributionSpec &dist, double prob)
    {
        if (!(prob > 0.0 && prob < 1.0))
            throw DomainError(fmt::format("quantile: probability {} outside (0, 1)", prob));
        const auto p = dist.parameters();
        switch (dist.family())
        {
        case Family::GEV:
        {
            const double k = p[0], ly = std::log(-std::log(prob));
            if (std::abs(k) < shape_zero)
                return p[2] - p[1] * ly;
            return p[2] + p[1] * std::expm1(-k * ly) / k;
        }
        case Family::GPD:
        {
            const double k = p[0], l = std::log1p(-prob);
            if (std::abs(k) < shape_zero)
                return p[2] - p[1] * l;
            return p[2] + p[1] * std::expm1(-k * l) / k;
        }
        case Family::Gamma:
            return p[1] * boost::math::gamma_p_inv(p[0], prob);
        case Family::InverseGaussian:
            return boost::math::quantile(ig_dist(p[0], p[1]), prob);
        case Family::PointMass:
            return p[0];
        }
        return 0.0;
    }

    std::vector<double> sample(const DistributionSpec &dist, std::size_t n, std::uint64_t seed,
                               std::uint64_t stream_index)
    {
        std::vector<double> out;
        out.reserve(n);
        UniformStream stream(seed, stream_index);
        for (std::size_t i = 0; i < n; ++i)
            out.push_back(quantile(dist, stream.next()));
        return out;
    }

    double log_likelihood(const DistributionSpec &dist, std::span<const double> samples)
    {
        double sum = 0.0;
        for (double x : samples)
        {
            const double l = log_pdf(dist, x);
            if (!std::isfinite(l))
                return -inf;
            sum += l;
        }
        return sum;
    }

    // ---------------------------------------------------------------------
    // Maximum likelihood

    namespace
    {
        struct Moments
        {
            double mean = 0.0;
            double variance = 0.0;
        };

        Moments moments(std::span<const double> y)
        {
            Moments m;
            const double n = static_cast<double>(y.size());
            m.mean = std::accumulate(y.begin(), y.end(), 0.0) / n;
            double ss = 0.0;
            for (double v : y)
                ss += (v - m.mean) * (v - m.mean);
            m.variance = ss / (n - 1.0);
            return m;
        }

        // Negative GEV log-likelihood of standardized data, params (k, log sigma, mu).
        double gev_nll(std::span<const double> y, std::span<const double> u)
        {
            const double k = u[0], sigma = std::exp(u[1]), mu = u[2];
            if (!std::isfinite(sigma) || sigma <= 0.0)
                return inf;
            double sum = 0.0;
            if (std::abs(k) < shape_zero)
            {
                for (double v : y)
                {
                    const double z = (v - mu) / sigma;
                    sum += -z - std::exp(-z);
                }
            }
            else
            {
                const double c = 1.0 / k + 1.0;
                for (double v : y)
                {
                    const double t = 1.0 + k * (v - mu) / sigma;
                    if (t <= 0.0)
                        return inf;
                    const double lt = std::log(t);
                    sum += -c * lt - std::exp(-lt / k);
                }
            }
            return -(sum - static_cast<double>(y.size()) * u[1]);
        }

        // Negative GPD log-likelihood of excesses y >= 0, params (k, log sigma).
        double gpd_nll(std::span<const double> y, std::span<const double> u)
        {
            const double k = u[0], sigma = std::exp(u[1]);
            if (k <= -1.0 || !std::isfinite(sigma) || sigma <= 0.0)
                return inf;
            double sum = 0.0;
            if (std::abs(k) < shape_zero)
            {
                for (double v : y)
                    sum -= v / sigma;
            }
            else
            {
                const double c = 1.0 / k + 1.0;
                for (double v : y)
                {
                    const double t = 1.0 + k * v / sigma;
                    if (t <= 0.0)
                        return inf;
                    sum -= c * std::log(t);
                }
            }
            return -(sum - static_cast<double>(y.size()) * u[1]);
        }

        // Hosking's probability-weighted-moment GEV estimate on sorted data.
        std::optional<std::array<double, 3>> gev_pwm(std::span<const double> sorted)
        {
            const double n = static_cast<double>(sorted.size());
            double b0 = 0.0, b1 = 0.0, b2 = 0.0;
            for (std::size_t i = 0; i < sorted.size(); ++i)
            {
                const double j = static_cast<double>(i);
                b0 += sorted[i];
                b1 += sorted[i] * j / (n - 1.0);
                b2 += sorted[i] * j * (j - 1.0) / ((n - 1.0) * (n - 2.0));
            }
            b0 /= n;
            b1 /= n;
            b2 /= n;
            const double denom = 3.0 * b2 - b0;
            if (denom == 0.0)
                return std::nullopt;
            const double c = (2.0 * b1 - b0) / denom - std::log(2.0) / std::log(3.0);
            const double kh = 7.8590 * c + 2.9554 * c * c; // Hosking's k = -shape
            if (!std::isfinite(kh) || std::abs(kh) < 1e-6 || kh <= -1.0)
                return std::nullopt;
            const double g = std::tgamma(1.0 + kh);
            const double sigma = (2.0 * b1 - b0) * kh / (g * (1.0 - std::pow(2.0, -kh)));
            if (!(sigma > 0.0) || !std::isfinite(sigma))
                return std::nullopt;
            const double mu = b0 + sigma * (g - 1.0) / kh;
            return std::array<double, 3>{-kh, sigma, mu};
        }

        NelderMeadOptions fit_simplex_options(const FitOptions &options)
        {
            NelderMeadOptions nm;
            nm.max_evaluations = options.max_evaluations;
            nm.f_tolerance = 1e-12;
            nm.x_tolerance = 1e-10;
            nm.restarts = 2;
            return nm;
        }

        struct Candidate
        {
            NelderMeadResult result;
            bool valid = false;
        };

        // Runs the simplex from every start and keeps the best converged result.
        Candidate best_of(const Objective &f, const std::vector<std::vector<double>> &starts,
                          const std::vector<double> &step, const NelderMeadOptions &nm)
        {
            Candidate best;
            for (const auto &s : starts)
            {
                if (!std::isfinite(f(s)))
                    continue;
                auto r = nelder_mead(f, s, step, nm);
                if (!best.valid || r.value < best.result.value ||
                    (r.value == best.result.value && r.converged && !best.result.converged))
                {
                    best.result = std::move(r);
                    best.valid = true;
                }
            }
            return best;
        }

        DistributionSpec fit_gev(std::span<const double> x, const FitOptions &options)
        {
            const auto m = moments(x);
            const double s = std::sqrt(m.variance);
            std::vector<double> y(x.size());
            for (std::size_t i = 0; i < x.size(); ++i)
                y[i] = (x[i] - m.mean) / s;
            std::vector<double> sorted = y;
            std::sort(sorted.begin(), sorted.end());

            std::vector<std::vector<double>> starts;
            const double gumbel_sigma = std::sqrt(6.0) / M_PI;
            starts.push_back({0.0, std::log(gumbel_sigma), -0.5772156649015329 * gumbel_sigma});
            if (auto pwm = gev_pwm(sorted))
                starts.push_back({(*pwm)[0], std::log((*pwm)[1]), (*pwm)[2]});

            auto f = [&](std::span<const double> u) { return gev_nll(y, u); };
            const auto best = best_of(f, starts, {0.1, 0.2, 0.2}, fit_simplex_options(options));
            if (!best.valid)
                throw FitError("GEV fit: no feasible starting point");
            const auto &u = best.result.x;
            auto spec = DistributionSpec::gev(u[0], s * std::exp(u[1]), m.mean + s * u[2]);
            if (!best.result.converged)
                throw FitError("GEV fit: simplex did not converge", spec);
            return spec;
        }

        DistributionSpec fit_gpd(std::span<const double> x, const FitOptions &options)
        {
            const double theta = gpd_fit_location(x, options);
            std::vector<double> y(x.size());
            for (std::size_t i = 0; i < x.size(); ++i)
            {
                y[i] = x[i] - theta;
                if (y[i] < 0.0)
                    throw FitError(fmt::format("GPD fit: sample {} lies below location {}", x[i], theta));
            }
            const double scale = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
            if (!(scale > 0.0))
                throw FitError("GPD fit: samples have no excess over the location");
            for (auto &v : y)
                v /= scale;

            const auto m = moments(y);
            std::vector<std::vector<double>> starts;
            starts.push_back({1e-3, std::log(m.mean)});
            const double xi = std::clamp(0.5 * (1.0 - m.mean * m.mean / m.variance), -0.9, 0.45);
            starts.push_back({xi, std::log(m.mean * (1.0 - xi))});
            const double ymax = *std::max_element(y.begin(), y.end());
            starts.push_back({-0.5, std::log(0.5 * ymax * 1.05 + 1e-9)});

            auto f = [&](std::span<const double> u) { return gpd_nll(y, u); };
            const auto best = best_of(f, starts, {0.1, 0.2}, fit_simplex_options(options));
            if (!best.valid)
                throw FitError("GPD fit: no feasible starting point");
            const auto &u = best.result.x;
            auto spec = DistributionSpec::gpd(u[0], scale * std::exp(u[1]), theta);
            if (!best.result.converged)
                throw FitError("GPD fit: simplex did not converge", spec);
            return spec;
        }

        DistributionSpec fit_gamma(std::span<const double> x, const FitOptions &options)
        {
            const auto m0 = moments(x);
            double sum_y = 0.0, sum_log = 0.0;
            for (double v : x)
            {
                if (!(v > 0.0))
                    throw FitError("Gamma fit: samples must be strictly positive");
                sum_y += v / m0.mean;
                sum_log += std::log(v / m0.mean);
            }
            const double n = static_cast<double>(x.size());
            auto f = [&](std::span<const double> u)
            {
                const double a = std::exp(u[0]), b = std::exp(u[1]);
                return -((a - 1.0) * sum_log - sum_y / b - n * std::lgamma(a) - n * a * u[1]);
            };
            const double cv2 = m0.variance / (m0.mean * m0.mean);
            std::vector<std::vector<double>> starts = {{std::log(1.0 / cv2), std::log(cv2)}};
            const auto best = best_of(f, starts, {0.2, 0.2}, fit_simplex_options(options));
            if (!best.valid)
                throw FitError("Gamma fit: no feasible starting point");
            const auto &u = best.result.x;
            auto spec = DistributionSpec::gamma(std::exp(u[0]), m0.mean * std::exp(u[1]));
            if (!best.result.converged)
                throw FitError("Gamma fit: simplex did not converge", spec);
            return spec;
        }

        DistributionSpec fit_inverse_gaussian(std::span<const double> x, const FitOptions &options)
        {
            const auto m0 = moments(x);
            double sum_y = 0.0, sum_inv = 0.0;
            for (double v : x)
            {
                if (!(v > 0.0))
                    throw FitError("InverseGaussian fit: samples must be strictly positive");
                sum_y += v / m0.mean;
                sum_inv += m0.mean / v;
            }
            const double n = static_cast<double>(x.size());
            // sum (y - mu)^2 / y = sum y - 2 n mu + mu^2 sum 1/y
            auto f = [&](std::span<const double> u)
            {
                const double mu = std::exp(u[0]), lambda = std::exp(u[1]);
                const double q = sum_y - 2.0 * n * mu + mu * mu * sum_inv;
                return -(0.5 * n * u[1] - lambda * q / (2.0 * mu * mu));
            };
            const double lambda0 = 1.0 / (m0.variance / (m0.mean * m0.mean));
            std::vector<std::vector<double>> starts = {{0.0, std::log(lambda0)}};
            const auto best = best_of(f, starts, {0.2, 0.2}, fit_simplex_options(options));
            if (!best.valid)
                throw FitError("InverseGaussian fit: no feasible starting point");
            const auto &u = best.result.x;
            auto spec = DistributionSpec::inverse_gaussian(m0.mean * std::exp(u[0]), m0.mean * std::exp(u[1]));
            if (!best.result.converged)
                throw FitError("InverseGaussian fit: simplex did not converge", spec);
            return spec;
        }
    }

    double gpd_fit_location(std::span<const double> samples, const FitOptions &options)
    {
        if (options.gpd_location)
            return *options.gpd_location;
        if (options.count_variate)
            return 1.0;
        if (samples.empty())
            throw FitError("GPD fit: no samples");
        const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
        // the range of a heavy tail can dwarf the data near its minimum
        const auto q = sample_quartiles(samples);
        const double spread = q[2] > q[0] ? std::min(q[2] - q[0], *hi - *lo) : *hi - *lo;
        return *lo - 1e-6 * spread;
    }

    DistributionSpec fit_mle(Family family, std::span<const double> samples, const FitOptions &options)
    {
        if (samples.size() < 20)
            throw FitError(fmt::format("fit_mle: need at least 20 samples, got {}", samples.size()));
        for (double v : samples)
            if (!std::isfinite(v))
                throw FitError("fit_mle: samples must be finite");
        const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
        if (*lo == *hi)
            throw FitError(fmt::format("fit_mle: degenerate samples (all equal to {})", *lo));

        switch (family)
        {
        case Family::GEV:
            return fit_gev(samples, options);
        case Family::GPD:
            return fit_gpd(samples, options);
        case Family::Gamma:
            return fit_gamma(samples, options);
        case Family::InverseGaussian:
            return fit_inverse_gaussian(samples, options);
        case Family::PointMass:
            break;
        }
        throw FitError("fit_mle: PointMass is not a fittable family");
    }

    // ---------------------------------------------------------------------
    // Goodness of fit

    double sorted_quantile(std::span<const double> sorted, double p)
    {
        if (sorted.empty())
            throw std::invalid_argument("sorted_quantile: no samples");
        const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
        const auto lo = static_cast<std::size_t>(std::floor(h));
        const auto hi = std::min(lo + 1, sorted.size() - 1);
        return sorted[lo] + (h - std::floor(h)) * (sorted[hi] - sorted[lo]);
    }

    std::array<double, 3> sample_quartiles(std::span<const double> samples)
    {
        std::vector<double> sorted(samples.begin(), samples.end());
        std::sort(sorted.begin(), sorted.end());
        return {sorted_quantile(sorted, 0.25), sorted_quantile(sorted, 0.5), sorted_quantile(sorted, 0.75)};
    }

    double ks_statistic(std::span<const double> samples, const DistributionSpec &dist)
    {
        if (samples.empty())
            throw std::invalid_argument("ks_statistic: no samples");
        std::vector<double> sorted(samples.begin(), samples.end());
        std::sort(sorted.begin(), sorted.end());
        const double n = static_cast<double>(sorted.size());
        double d = 0.0;
        for (std::size_t i = 0; i < sorted.size(); ++i)
        {
            const double f = cdf(dist, sorted[i]);
            const double above = static_cast<double>(i + 1) / n - f;
            const double below = f - static_cast<double>(i) / n;
            d = std::max({d, above, below});
        }
        return std::clamp(d, 0.0, 1.0);
    }

    Selection select_family(std::span<const double> samples, std::span<const Family> candidates,
                            const FitOptions &options)
    {
        if (samples.size() < 50)
            throw std::invalid_argument(fmt::format("select_family: need at least 50 samples, got {}", samples.size()));
        if (candidates.size() < 2)
            throw std::invalid_argument("select_family: need at least two candidate families");

        std::vector<CandidateScore> scores;
        for (Family family : candidates)
        {
            CandidateScore score{family, std::nullopt, inf, {}};
            try
            {
                score.spec = fit_mle(family, samples, options);
                score.ks = ks_statistic(samples, *score.spec);
            }
            catch (const std::exception &e)
            {
                score.spec.reset();
                score.ks = inf;
                score.error = e.what();
            }
            scores.push_back(std::move(score));
        }

        const CandidateScore *best = nullptr;
        for (const auto &s : scores)
        {
            if (!s.spec)
                continue;
            if (!best || s.ks < best->ks ||
                (s.ks == best->ks && (parameter_count(s.family) < parameter_count(best->family) ||
                                      (parameter_count(s.family) == parameter_count(best->family) && s.family < best->family))))
                best = &s;
        }
        if (!best)
        {
            std::string msg = "select_family: every candidate fit failed";
            for (const auto &s : scores)
                msg += fmt::format("; {}: {}", to_string(s.family), s.error);
            throw SelectionError(msg);
        }
        return Selection{*best->spec, std::move(scores)};
    }
}
