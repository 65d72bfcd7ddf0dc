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

#include "mmwchan/pipeline.hpp"
#include "mmwchan/parallel.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

namespace mmwchan
{
    TapSeries threshold_taps(const TapSeries &raw, double noise_floor)
    {
        if (!(noise_floor > 0.0))
            throw std::invalid_argument(fmt::format("noise floor must be > 0 (got {})", noise_floor));
        TapSeries out;
        out.meta = raw.meta;
        std::copy_if(raw.taps.begin(), raw.taps.end(), std::back_inserter(out.taps),
                     [noise_floor](const Tap &t) { return t.amplitude >= noise_floor; });
        if (out.taps.empty())
            throw EmptySeriesError(fmt::format("no tap reaches the noise floor {}", noise_floor));
        return out;
    }

    double default_noise_floor(const TapSeries &series)
    {
        double peak = 0.0;
        for (const auto &t : series.taps)
            peak = std::max(peak, t.amplitude);
        if (!(peak > 0.0))
            throw EmptySeriesError("series has no positive tap");
        return 0.01 * peak;
    }

    namespace
    {
        // An offset whose sum with `start` gives back `delay` exactly.
        double exact_offset(double delay, double start)
        {
            double tau = delay - start;
            for (int i = 0; i < 4 && start + tau != delay; ++i)
                tau = std::nextafter(tau, start + tau < delay ? HUGE_VAL : -HUGE_VAL);
            return tau;
        }
    }

    std::vector<Cluster> partition_clusters(const TapSeries &taps, double gap_threshold)
    {
        if (taps.taps.empty())
            throw EmptySeriesError("cannot partition an empty tap series");
        if (!(gap_threshold > 0.0))
            throw std::invalid_argument(fmt::format("gap threshold must be > 0 (got {})", gap_threshold));
        validate(taps);

        std::vector<Cluster> out;
        for (std::size_t i = 0; i < taps.taps.size(); ++i)
        {
            const Tap &t = taps.taps[i];
            if (i == 0 || t.delay - taps.taps[i - 1].delay > gap_threshold)
                out.push_back(Cluster{t.delay, 0.0, {}});
            Cluster &c = out.back();
            c.paths.push_back(PathTap{c.paths.empty() ? 0.0 : exact_offset(t.delay, c.delay), t.amplitude, std::nullopt});
        }
        for (auto &c : out)
        {
            double sum = 0.0;
            for (const auto &p : c.paths)
                sum += p.amplitude;
            c.amplitude = sum / static_cast<double>(c.paths.size());
        }
        return out;
    }

    std::vector<double> values(const ParameterSamples &s, Parameter parameter)
    {
        switch (parameter)
        {
        case Parameter::NumClusters:
            return {s.num_clusters.begin(), s.num_clusters.end()};
        case Parameter::InterclusterDelay:
            return s.intercluster_delays;
        case Parameter::ClusterAmplitude:
            return s.cluster_amplitudes;
        case Parameter::PathsPerCluster:
            return {s.paths_per_cluster.begin(), s.paths_per_cluster.end()};
        case Parameter::PathAmplitude:
            return s.path_amplitudes;
        }
        return {};
    }

    namespace
    {
        void append_lists(ParameterSamples &s, const std::vector<Cluster> &clusters)
        {
            for (std::size_t i = 0; i < clusters.size(); ++i)
            {
                const Cluster &c = clusters[i];
                if (i > 0)
                    s.intercluster_delays.push_back(c.delay - clusters[i - 1].delay);
                s.cluster_amplitudes.push_back(c.amplitude);
                s.paths_per_cluster.push_back(static_cast<int>(c.paths.size()));
                for (std::size_t k = 0; k < c.paths.size(); ++k)
                {
                    s.path_amplitudes.push_back(c.paths[k].amplitude);
                    if (k > 0)
                        s.intra_path_delays.push_back(c.paths[k].offset);
                }
            }
        }
    }

    ParameterSamples extract_parameters(const std::vector<std::vector<Cluster>> &captures)
    {
        ParameterSamples s;
        for (const auto &clusters : captures)
        {
            if (clusters.empty())
                continue;
            s.num_clusters.push_back(static_cast<int>(clusters.size()));
            append_lists(s, clusters);
        }
        return s;
    }

    std::string_view to_string(PoolingMode mode)
    {
        return mode == PoolingMode::Pooled ? "pooled" : "per-beam";
    }

    PoolingMode pooling_mode_from_string(std::string_view name)
    {
        if (name == "pooled")
            return PoolingMode::Pooled;
        if (name == "per-beam")
            return PoolingMode::PerBeam;
        throw std::invalid_argument(fmt::format("unknown pooling mode '{}' (expected pooled or per-beam)", name));
    }

    ParameterSamples extract_parameters(const std::vector<CaptureClusters> &captures, PoolingMode mode)
    {
        if (mode == PoolingMode::Pooled)
        {
            std::vector<std::vector<Cluster>> plain;
            plain.reserve(captures.size());
            for (const auto &c : captures)
                plain.push_back(c.clusters);
            return extract_parameters(plain);
        }

        ParameterSamples s;
        // groups in order of first appearance
        std::map<std::pair<std::string, int>, std::size_t> index;
        std::vector<std::pair<long long, long long>> counts; // (sum, captures)
        for (const auto &c : captures)
        {
            if (c.clusters.empty())
                continue;
            const auto [it, fresh] = index.try_emplace({c.meta.location_id, c.meta.beam_id}, counts.size());
            if (fresh)
                counts.emplace_back(0, 0);
            counts[it->second].first += static_cast<long long>(c.clusters.size());
            counts[it->second].second += 1;
            append_lists(s, c.clusters);
        }
        for (const auto &[sum, n] : counts)
            s.num_clusters.push_back(static_cast<int>(std::round(static_cast<double>(sum) / static_cast<double>(n))));
        return s;
    }

    const CandidateSets &default_candidates()
    {
        static const CandidateSets sets = {
            {Parameter::NumClusters, {Family::GEV, Family::GPD, Family::Gamma}},
            {Parameter::InterclusterDelay, {Family::GPD, Family::GEV}},
            {Parameter::ClusterAmplitude, {Family::GEV, Family::GPD}},
            {Parameter::PathsPerCluster, {Family::GPD, Family::Gamma}},
            {Parameter::PathAmplitude, {Family::GEV, Family::InverseGaussian}},
        };
        return sets;
    }

    const ParameterFit &FitReport::at(Parameter p) const
    {
        for (const auto &f : parameters)
            if (f.parameter == p)
                return f;
        throw std::out_of_range(fmt::format("report has no entry for {}", to_string(p)));
    }

    FitReport fit_report(const ParameterSamples &samples, const CandidateSets &candidates)
    {
        FitReport report;
        report.parameters.resize(all_parameters.size());
        parallel_for(all_parameters.size(),
                     [&](std::size_t i)
                     {
                         const Parameter p = all_parameters[i];
                         ParameterFit &fit = report.parameters[i];
                         fit.parameter = p;
                         const auto x = values(samples, p);
                         fit.sample_count = x.size();
                         if (!x.empty())
                             fit.quartiles = sample_quartiles(x);
                         if (x.size() < min_fit_samples)
                         {
                             fit.insufficient_data = true;
                             fit.error = fmt::format("insufficient data: {} samples, need {}", x.size(), min_fit_samples);
                             return;
                         }
                         const auto it = candidates.find(p);
                         if (it == candidates.end() || it->second.size() < 2)
                         {
                             fit.error = "fewer than two candidate families";
                             return;
                         }
                         FitOptions options;
                         options.count_variate = is_count(p);
                         try
                         {
                             fit.selection = select_family(x, it->second, options);
                         }
                         catch (const std::exception &e)
                         {
                             fit.error = e.what();
                         }
                     });

        report.intra_path_delays.count = samples.intra_path_delays.size();
        if (!samples.intra_path_delays.empty())
        {
            report.intra_path_delays.quartiles = sample_quartiles(samples.intra_path_delays);
            report.intra_path_delays.mean =
                std::accumulate(samples.intra_path_delays.begin(), samples.intra_path_delays.end(), 0.0) /
                static_cast<double>(samples.intra_path_delays.size());
        }
        return report;
    }

    TraceFit fit_traces(const std::vector<TapSeries> &captures, const TraceFitOptions &options, unsigned threads)
    {
        if (options.noise_floor && !(*options.noise_floor > 0.0))
            throw std::invalid_argument(fmt::format("noise floor must be > 0 (got {})", *options.noise_floor));
        if (!(options.gap_threshold > 0.0))
            throw std::invalid_argument(fmt::format("gap threshold must be > 0 (got {})", options.gap_threshold));

        std::vector<std::optional<CaptureClusters>> parts(captures.size());
        parallel_for(
            captures.size(),
            [&](std::size_t i)
            {
                const TapSeries &raw = captures[i];
                try
                {
                    const double floor = options.noise_floor ? *options.noise_floor : default_noise_floor(raw);
                    const TapSeries kept = threshold_taps(raw, floor);
                    parts[i] = CaptureClusters{raw.meta, partition_clusters(kept, options.gap_threshold)};
                }
                catch (const EmptySeriesError &)
                {
                }
            },
            threads);

        TraceFit out;
        out.captures = captures.size();
        std::vector<CaptureClusters> kept;
        kept.reserve(parts.size());
        for (auto &p : parts)
            if (p)
                kept.push_back(std::move(*p));
            else
                ++out.dropped;
        if (kept.empty())
            throw EmptySeriesError("no capture has a tap at or above the noise floor");

        out.samples = extract_parameters(kept, options.mode);
        out.report = fit_report(out.samples);
        out.report.scenario = kept.front().meta.scenario;
        out.report.beamwidth_deg = kept.front().meta.beamwidth_deg;
        for (const auto &c : kept)
            if (c.meta.scenario != out.report.scenario || c.meta.beamwidth_deg != out.report.beamwidth_deg)
            {
                out.report.scenario = "mixed";
                out.report.beamwidth_deg = 0.0;
                break;
            }
        return out;
    }
}
