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

#ifndef MMWCHAN_TAPS_HPP
#define MMWCHAN_TAPS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mmwchan
{
    struct Tap
    {
        double delay = 0.0;     // seconds
        double amplitude = 0.0; // linear

        friend bool operator==(const Tap &, const Tap &) = default;
    };

    // Capture metadata of one beacon CIR. beam_id indexes the access point's
    // 32 beam patterns.
    struct TapMeta
    {
        std::string location_id;
        int beam_id = 0;
        std::string scenario;
        double beamwidth_deg = 0.0;
        std::size_t capture_index = 0;

        friend bool operator==(const TapMeta &, const TapMeta &) = default;
    };

    struct TapSeries
    {
        std::vector<Tap> taps;
        TapMeta meta;

        friend bool operator==(const TapSeries &, const TapSeries &) = default;
    };

    struct InvalidTapSeries : std::invalid_argument
    {
        using std::invalid_argument::invalid_argument;
    };

    // Delays >= 0 and strictly increasing, amplitudes > 0, beam_id in [0, 31].
    void validate(const TapSeries &series);
}

#endif
