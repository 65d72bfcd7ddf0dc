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

#include "mmwchan/optimize.hpp"

#include <cmath>
#include <limits>

using namespace mmwchan;

TEST_CASE("nelder-mead finds the Rosenbrock minimum")
{
    auto rosen = [](std::span<const double> x)
    { return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2); };
    const auto r = nelder_mead(rosen, {-1.2, 1.0}, {0.5, 0.5});
    CHECK(r.converged);
    CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("nelder-mead treats non-finite values as infeasible")
{
    // minimum of (x-2)^2 restricted to x <= 1 sits on the wall
    auto f = [](std::span<const double> x)
    { return x[0] > 1.0 ? std::numeric_limits<double>::quiet_NaN() : (x[0] - 2.0) * (x[0] - 2.0); };
    const auto r = nelder_mead(f, {0.0}, {0.3});
    CHECK(r.x[0] <= 1.0);
    CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("nelder-mead reports non-convergence when the budget is exhausted")
{
    auto rosen = [](std::span<const double> x)
    { return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2); };
    NelderMeadOptions opts;
    opts.max_evaluations = 10;
    const auto r = nelder_mead(rosen, {-1.2, 1.0}, {0.5, 0.5}, opts);
    CHECK_FALSE(r.converged);
    CHECK(r.evaluations <= 12);
}
