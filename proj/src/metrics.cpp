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

#include "mmwchan/metrics.hpp"
#include "mmwchan/pipeline.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace mmwchan
{
    double rms_delay_spread(const TapSeries &taps)
    {
        if (taps.taps.empty())
            throw std::invalid_argument("rms_delay_spread: empty tap series");
        // delays relative to the first tap; a lone tap then has spread exactly 0
        const double origin = taps.taps.front().delay;
        double p = 0.0, m1 = 0.0;
        for (const auto &t : taps.taps)
        {
            const double w = t.amplitude * t.amplitude;
            p += w;
            m1 += w * (t.delay - origin);
        }
        const double mean = m1 / p;
        double m2 = 0.0;
        for (const auto &t : taps.taps)
        {
            const double d = t.delay - origin - mean;
            m2 += t.amplitude * t.amplitude * d * d;
        }
        return std::sqrt(m2 / p);
    }

    FrequencyResponse frequency_response(const TapSeries &taps, double bandwidth, std::size_t n_points)
    {
        if (!(bandwidth > 0.0) || !std::isfinite(bandwidth))
            throw std::invalid_argument(fmt::format("frequency_response: bandwidth must be > 0 (got {})", bandwidth));
        if (n_points < 2)
            throw std::invalid_argument("frequency_response: need at least 2 points");

        FrequencyResponse fr;
        fr.reference_band = bandwidth;
        fr.frequencies.resize(n_points);
        fr.magnitudes.resize(n_points);
        const double df = bandwidth / static_cast<double>(n_points - 1);
        for (std::size_t i = 0; i < n_points; ++i)
        {
            const double f = static_cast<double>(i) * df;
            std::complex<double> h = 0.0;
            for (const auto &t : taps.taps)
                h += t.amplitude * std::polar(1.0, -2.0 * M_PI * f * t.delay);
            fr.frequencies[i] = f;
            fr.magnitudes[i] = std::abs(h);
        }
        return fr;
    }

    double coherence_bandwidth(const FrequencyResponse &fr, double threshold)
    {
        if (!(threshold > 0.0 && threshold < 1.0))
            throw std::invalid_argument(fmt::format("coherence_bandwidth: threshold {} outside (0, 1)", threshold));
        const auto &h = fr.magnitudes;
        const std::size_t n = h.size();
        if (n < 2 || fr.frequencies.size() != n)
            throw std::invalid_argument("coherence_bandwidth: malformed frequency response");

        const double df = fr.frequencies[1] - fr.frequencies[0];
        for (std::size_t lag = 1; lag < n; ++lag)
        {
            double cross = 0.0, head = 0.0, tail = 0.0;
            for (std::size_t j = 0; j + lag < n; ++j)
            {
                cross += h[j] * h[j + lag];
                head += h[j] * h[j];
                tail += h[j + lag] * h[j + lag];
            }
            if (!(head > 0.0 && tail > 0.0))
                continue;
            if (cross / std::sqrt(head * tail) < threshold)
                return static_cast<double>(lag) * df;
        }
        return fr.reference_band;
    }

    double spectral_flatness_deviation(const FrequencyResponse &fr)
    {
        const auto &h = fr.magnitudes;
        if (h.empty())
            throw std::invalid_argument("spectral_flatness_deviation: empty response");
        double mean = 0.0;
        for (double v : h)
            mean += v;
        mean /= static_cast<double>(h.size());
        if (!(mean > 0.0))
            return 0.0;
        double var = 0.0;
        for (double v : h)
            var += (v - mean) * (v - mean);
        return std::sqrt(var / static_cast<double>(h.size())) / mean;
    }

    std::vector<double> peak_to_average(const ChannelRealization &r)
    {
        validate(r);
        std::vector<double> out;
        out.reserve(r.clusters.size());
        for (const auto &c : r.clusters)
        {
            double peak = 0.0, sum = 0.0;
            for (const auto &p : c.paths)
            {
                peak = std::max(peak, p.amplitude);
                sum += p.amplitude;
            }
            // rounding in the mean can dip just below one
            out.push_back(std::max(1.0, peak / (sum / static_cast<double>(c.paths.size()))));
        }
        return out;
    }

    CaptureMetrics capture_metrics(const TapSeries &taps, double bandwidth, std::size_t n_points,
                                   double correlation_threshold, double gap_threshold)
    {
        CaptureMetrics m;
        m.capture_index = taps.meta.capture_index;
        m.location_id = taps.meta.location_id;
        m.beam_id = taps.meta.beam_id;
        m.taps = taps.taps.size();
        m.delay_spread = rms_delay_spread(taps);
        const auto fr = frequency_response(taps, bandwidth, n_points);
        m.coherence_bandwidth = coherence_bandwidth(fr, correlation_threshold);
        m.flatness_deviation = spectral_flatness_deviation(fr);

        ChannelRealization r;
        r.clusters = partition_clusters(taps, gap_threshold);
        const auto ratios = peak_to_average(r);
        double sum = 0.0;
        for (double v : ratios)
            sum += v;
        m.peak_to_average = sum / static_cast<double>(ratios.size());
        return m;
    }
}
