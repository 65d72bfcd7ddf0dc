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

#include "mmwchan/taps.hpp"

#include <fmt/format.h>

#include <cmath>

namespace mmwchan
{
    void validate(const TapSeries &series)
    {
        if (series.meta.beam_id < 0 || series.meta.beam_id > 31)
            throw InvalidTapSeries(fmt::format("beam_id {} outside [0, 31]", series.meta.beam_id));
        for (std::size_t i = 0; i < series.taps.size(); ++i)
        {
            const auto &t = series.taps[i];
            if (!std::isfinite(t.delay) || t.delay < 0.0)
                throw InvalidTapSeries(fmt::format("tap {}: delay {} must be finite and >= 0", i, t.delay));
            if (!std::isfinite(t.amplitude) || !(t.amplitude > 0.0))
                throw InvalidTapSeries(fmt::format("tap {}: amplitude {} must be finite and > 0", i, t.amplitude));
            if (i > 0 && !(t.delay > series.taps[i - 1].delay))
                throw InvalidTapSeries(fmt::format("tap {}: delays must be strictly increasing", i));
        }
    }
}
