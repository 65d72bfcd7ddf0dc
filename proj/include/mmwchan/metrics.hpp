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

#ifndef MMWCHAN_METRICS_HPP
#define MMWCHAN_METRICS_HPP

#include "mmwchan/channel_model.hpp"
#include "mmwchan/taps.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace mmwchan
{
    // Amplitude-only approximation: taps are summed with zero phase.
    struct FrequencyResponse
    {
        std::vector<double> frequencies; // Hz, uniform from 0
        std::vector<double> magnitudes;
        double reference_band = 0.0; // Hz, the evaluated bandwidth
    };

    // Power-weighted standard deviation of the tap delays.
    double rms_delay_spread(const TapSeries &taps);

    // |sum_j a_j exp(-i 2 pi f tau_j)| on n_points uniform frequencies in [0, bandwidth].
    FrequencyResponse frequency_response(const TapSeries &taps, double bandwidth, std::size_t n_points);

    // Smallest frequency lag l where the normalized magnitude correlation
    // sum_j |H_j| |H_j+l| / sqrt(sum_j |H_j|^2 sum_j |H_j+l|^2), taken over
    // the overlap, falls below threshold; reference_band if it never does.
    double coherence_bandwidth(const FrequencyResponse &fr, double correlation_threshold = 0.9);

    // Standard deviation of |H| divided by its mean.
    double spectral_flatness_deviation(const FrequencyResponse &fr);

    // Max path amplitude over mean path amplitude, per cluster.
    std::vector<double> peak_to_average(const ChannelRealization &realization);

    struct CaptureMetrics
    {
        std::size_t capture_index = 0;
        std::string location_id;
        int beam_id = 0;
        std::size_t taps = 0;
        double delay_spread = 0.0;        // seconds
        double coherence_bandwidth = 0.0; // Hz
        double flatness_deviation = 0.0;
        double peak_to_average = 1.0; // mean over the capture's clusters
    };

    // Metrics of one capture; clusters for the peak-to-average ratio come
    // from partition_clusters(taps, gap_threshold).
    CaptureMetrics capture_metrics(const TapSeries &taps, double bandwidth, std::size_t n_points,
                                   double correlation_threshold, double gap_threshold);
}

#endif
