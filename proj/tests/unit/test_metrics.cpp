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

#include "mmwchan/metrics.hpp"
#include "mmwchan/profiles.hpp"
#include "oracles.hpp"

#include <cmath>
#include <random>

using namespace mmwchan;

namespace
{
    TapSeries taps_of(const std::vector<double> &d, const std::vector<double> &a)
    {
        TapSeries s;
        for (std::size_t i = 0; i < d.size(); ++i)
            s.taps.push_back(Tap{d[i], a[i]});
        return s;
    }
}

TEST_CASE("delay spread identities")
{
    CHECK(rms_delay_spread(taps_of({3e-9}, {0.2})) == 0.0);
    for (double d : {1.7e-9, 3.3e-7, 0.1234567})
        for (double a : {1e-3, 0.037, 0.77})
            CHECK(rms_delay_spread(taps_of({d}, {a})) == 0.0);
    CHECK(rms_delay_spread(taps_of({0.0, 10e-9}, {0.1, 0.1})) == doctest::Approx(5e-9).epsilon(1e-12));
    CHECK(rms_delay_spread(taps_of({1e-9, 4e-9}, {0.3, 0.3})) == doctest::Approx(1.5e-9).epsilon(1e-12));
    CHECK_THROWS(rms_delay_spread(TapSeries{}));

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial)
    {
        std::vector<double> d, a;
        double t = 0.0;
        for (int i = 0; i < 12; ++i)
        {
            t += 0.24e-9 * (1 + static_cast<int>(u(rng) * 20));
            d.push_back(t);
            a.push_back(0.001 + u(rng));
        }
        CHECK(rms_delay_spread(taps_of(d, a)) == doctest::Approx(oracle::rms_delay_spread(d, a)).epsilon(1e-9));
    }
}

TEST_CASE("frequency response")
{
    const std::vector<double> d = {0.0, 1.2e-9, 7.7e-9}, a = {0.05, 0.02, 0.03};
    const auto fr = frequency_response(taps_of(d, a), 2e9, 101);
    REQUIRE(fr.magnitudes.size() == 101);
    CHECK(fr.frequencies.front() == 0.0);
    CHECK(fr.frequencies.back() == doctest::Approx(2e9));
    CHECK(fr.magnitudes[0] == doctest::Approx(0.10).epsilon(1e-14));
    for (std::size_t i = 0; i < fr.magnitudes.size(); i += 7)
        CHECK(fr.magnitudes[i] == doctest::Approx(oracle::response_magnitude(d, a, fr.frequencies[i])).epsilon(1e-12));
    CHECK_THROWS(frequency_response(taps_of(d, a), 0.0, 10));
    CHECK_THROWS(frequency_response(taps_of(d, a), 1e9, 1));
}

TEST_CASE("coherence bandwidth")
{
    const auto flat = frequency_response(taps_of({2e-9}, {0.1}), 1e9, 64);
    CHECK(coherence_bandwidth(flat) == 1e9);
    CHECK(spectral_flatness_deviation(flat) == doctest::Approx(0.0).epsilon(1e-12));

    // two equal taps 10 ns apart: notches every 100 MHz
    const auto notched = frequency_response(taps_of({0.0, 10e-9}, {0.1, 0.1}), 1e9, 1001);
    const double bc = coherence_bandwidth(notched, 0.9);
    CHECK(bc > 0.0);
    CHECK(bc < 100e6);
    CHECK(coherence_bandwidth(notched, 0.5) >= bc);

    const auto wider = frequency_response(taps_of({0.0, 2e-9}, {0.1, 0.1}), 1e9, 1001);
    CHECK(coherence_bandwidth(wider, 0.9) > bc);
    CHECK_THROWS(coherence_bandwidth(notched, 1.0));
}

TEST_CASE("peak to average")
{
    ChannelRealization r;
    Cluster c;
    c.delay = 0.0;
    c.paths = {PathTap{0.0, 0.09, std::nullopt}, PathTap{0.24e-9, 0.01, std::nullopt}};
    c.amplitude = 0.05;
    r.clusters = {c};
    const auto ratio = peak_to_average(r);
    REQUIRE(ratio.size() == 1);
    CHECK(ratio[0] == doctest::Approx(1.8));

    const auto &p = builtin_profile("mechanical-room-20");
    for (std::uint64_t seed = 0; seed < 500; ++seed)
        for (double v : peak_to_average(generate_realization(p, seed)))
            CHECK(v >= 1.0);
}

TEST_CASE("capture metrics")
{
    auto s = taps_of({0.0, 0.24e-9, 20e-9}, {0.09, 0.01, 0.05});
    s.meta.capture_index = 4;
    s.meta.location_id = "here";
    const auto m = capture_metrics(s, 2.16e9, 256, 0.9, 2.4e-9);
    CHECK(m.capture_index == 4);
    CHECK(m.location_id == "here");
    CHECK(m.taps == 3);
    CHECK(m.delay_spread == doctest::Approx(oracle::rms_delay_spread({0.0, 0.24e-9, 20e-9}, {0.09, 0.01, 0.05})));
    CHECK(m.peak_to_average == doctest::Approx((1.8 + 1.0) / 2.0));
}
