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

#include "mmwchan/channel_model.hpp"
#include "mmwchan/parallel.hpp"
#include "mmwchan/rng.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace mmwchan
{
    namespace
    {
        constexpr int max_redraws = 64;
        constexpr double deg = M_PI / 180.0;

        int draw_count(const DistributionSpec &spec, UniformStream &stream, int max_count)
        {
            const double x = quantile(spec, stream.next());
            if (std::isnan(x))
                throw GenerationError("count draw produced NaN");
            const double r = std::round(x);
            return static_cast<int>(std::clamp(r, 1.0, static_cast<double>(max_count)));
        }

        double draw_positive(const DistributionSpec &spec, UniformStream &stream, const char *what)
        {
            for (int attempt = 0; attempt < max_redraws; ++attempt)
            {
                const double x = quantile(spec, stream.next());
                if (x > 0.0 && std::isfinite(x))
                    return x;
            }
            throw GenerationError(fmt::format("{}: no positive draw from {} in {} attempts", what, spec.describe(), max_redraws));
        }
    }

    void validate(const AngularInfo &a)
    {
        for (double az : {a.azimuth_tx, a.azimuth_rx})
            if (!(az >= -180.0 && az < 180.0))
                throw InvalidChannel(fmt::format("azimuth {} outside [-180, 180)", az));
        for (double el : {a.elevation_tx, a.elevation_rx})
            if (!(el >= -90.0 && el <= 90.0))
                throw InvalidChannel(fmt::format("elevation {} outside [-90, 90]", el));
    }

    void validate(const Cluster &c)
    {
        if (c.paths.empty())
            throw InvalidChannel("cluster has no paths");
        if (!(c.delay >= 0.0) || !std::isfinite(c.delay))
            throw InvalidChannel(fmt::format("cluster delay {} must be >= 0", c.delay));
        if (!(c.amplitude > 0.0) || !std::isfinite(c.amplitude))
            throw InvalidChannel(fmt::format("cluster amplitude {} must be > 0", c.amplitude));
        if (c.paths.front().offset != 0.0)
            throw InvalidChannel("first path offset must be exactly 0");
        double sum = 0.0;
        for (std::size_t k = 0; k < c.paths.size(); ++k)
        {
            const auto &p = c.paths[k];
            if (!(p.amplitude > 0.0) || !std::isfinite(p.amplitude))
                throw InvalidChannel(fmt::format("path {} amplitude {} must be > 0", k, p.amplitude));
            if (k > 0 && !(p.offset > c.paths[k - 1].offset))
                throw InvalidChannel("path offsets must be strictly increasing");
            if (p.angles)
                validate(*p.angles);
            sum += p.amplitude;
        }
        const double mean = sum / static_cast<double>(c.paths.size());
        if (std::abs(mean - c.amplitude) > 1e-9 * c.amplitude)
            throw InvalidChannel(fmt::format("cluster amplitude {} differs from mean path amplitude {}", c.amplitude, mean));
    }

    void validate(const ChannelRealization &r)
    {
        if (r.clusters.empty())
            throw InvalidChannel("realization has no clusters");
        if (r.clusters.front().delay != 0.0)
            throw InvalidChannel("first cluster must start at 0");
        for (std::size_t i = 0; i < r.clusters.size(); ++i)
        {
            validate(r.clusters[i]);
            if (i > 0 && !(r.clusters[i].delay > r.clusters[i - 1].delay))
                throw InvalidChannel("cluster delays must be strictly increasing");
        }
    }

    std::uint64_t realization_seed(std::uint64_t corpus_seed, std::uint64_t index) noexcept
    {
        return derive_stream_key(corpus_seed, index);
    }

    ChannelRealization generate_realization(const ScenarioProfile &profile, std::uint64_t seed)
    {
        validate(profile);
        UniformStream stream(seed);
        const double grid = profile.tap_grid;

        ChannelRealization r;
        r.profile_id = profile.id;
        r.seed = seed;

        const int n_clusters = draw_count(profile.num_clusters, stream, profile.max_count);
        std::vector<double> starts(static_cast<std::size_t>(n_clusters), 0.0);
        for (int i = 1; i < n_clusters; ++i)
        {
            double gap = quantile(profile.intercluster_delay, stream.next());
            if (std::isnan(gap))
                throw GenerationError("inter-cluster gap draw produced NaN");
            gap = std::max(gap, grid);
            starts[static_cast<std::size_t>(i)] = starts[static_cast<std::size_t>(i) - 1] + gap;
        }

        r.clusters.reserve(starts.size());
        for (double start : starts)
        {
            Cluster c;
            c.delay = start;
            c.amplitude = draw_positive(profile.cluster_amplitude, stream, "cluster amplitude");
            const int n_paths = draw_count(profile.paths_per_cluster, stream, profile.max_count);
            std::vector<double> raw(static_cast<std::size_t>(n_paths));
            for (auto &a : raw)
                a = draw_positive(profile.path_amplitude, stream, "path amplitude");
            const double mean = std::accumulate(raw.begin(), raw.end(), 0.0) / static_cast<double>(n_paths);
            c.paths.reserve(raw.size());
            for (std::size_t k = 0; k < raw.size(); ++k)
                c.paths.push_back(PathTap{static_cast<double>(k) * grid, raw[k] * (c.amplitude / mean), std::nullopt});
            r.clusters.push_back(std::move(c));
        }
        return r;
    }

    std::vector<ChannelRealization> generate_corpus(const ScenarioProfile &profile, std::size_t n,
                                                    std::uint64_t corpus_seed, unsigned threads)
    {
        validate(profile);
        std::vector<ChannelRealization> out(n);
        parallel_for(
            n, [&](std::size_t i) { out[i] = generate_realization(profile, realization_seed(corpus_seed, i)); }, threads);
        return out;
    }

    long long snap_to_grid(double delay, double grid_period)
    {
        return std::llround(delay / grid_period);
    }

    TapSeries realization_to_taps(const ChannelRealization &realization, double grid_period, TapMeta meta)
    {
        if (!(grid_period > 0.0))
            throw std::invalid_argument("realization_to_taps: grid period must be > 0");
        std::map<long long, double> power;
        for (const auto &c : realization.clusters)
            for (const auto &p : c.paths)
                power[snap_to_grid(c.delay + p.offset, grid_period)] += p.amplitude * p.amplitude;

        TapSeries out;
        out.meta = std::move(meta);
        out.taps.reserve(power.size());
        for (const auto &[index, pw] : power)
            out.taps.push_back(Tap{static_cast<double>(index) * grid_period, std::sqrt(pw)});
        return out;
    }

    TapMeta synthetic_capture_meta(const ScenarioProfile &profile, std::size_t index)
    {
        TapMeta meta;
        meta.location_id = fmt::format("syn-{}", index / 32);
        meta.beam_id = static_cast<int>(index % 32);
        meta.scenario = std::string(to_string(profile.scenario));
        meta.beamwidth_deg = profile.beamwidth_deg;
        meta.capture_index = index;
        return meta;
    }

    double angular_separation_deg(double az1, double el1, double az2, double el2)
    {
        // Vincenty form, stable for small and near-antipodal separations
        const double dl = (az2 - az1) * deg, p1 = el1 * deg, p2 = el2 * deg;
        const double a = std::cos(p2) * std::sin(dl);
        const double b = std::cos(p1) * std::sin(p2) - std::sin(p1) * std::cos(p2) * std::cos(dl);
        const double c = std::sin(p1) * std::sin(p2) + std::cos(p1) * std::cos(p2) * std::cos(dl);
        return std::atan2(std::hypot(a, b), c) / deg;
    }

    ChannelRealization apply_beam_filter(const ChannelRealization &realization, const BeamPattern &beam)
    {
        if (!(beam.width_deg > 0.0))
            throw std::invalid_argument("beam width must be > 0");
        const double half = 0.5 * beam.width_deg;

        ChannelRealization out;
        out.profile_id = realization.profile_id;
        out.seed = realization.seed;
        for (const auto &c : realization.clusters)
        {
            if (c.paths.empty() || !c.paths.front().angles)
                throw InvalidChannel("beam filter needs angles on the first path of every cluster");
            const auto &a = *c.paths.front().angles;
            const double sep = angular_separation_deg(beam.boresight.azimuth_rx, beam.boresight.elevation_rx,
                                                      a.azimuth_rx, a.elevation_rx);
            if (sep <= half)
                out.clusters.push_back(c);
        }
        if (out.clusters.empty())
            throw EmptyChannelError("no cluster lies inside the beam");
        const double origin = out.clusters.front().delay;
        for (auto &c : out.clusters)
            c.delay -= origin;
        return out;
    }
}
