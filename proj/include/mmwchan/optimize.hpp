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

#ifndef MMWCHAN_OPTIMIZE_HPP
#define MMWCHAN_OPTIMIZE_HPP

#include <functional>
#include <span>
#include <vector>

namespace mmwchan
{
    struct NelderMeadOptions
    {
        int max_evaluations = 6000;
        double f_tolerance = 1e-11; // relative spread of simplex values
        double x_tolerance = 1e-9;  // relative simplex diameter
        int restarts = 2;           // fresh simplex around the best vertex after convergence
    };

    struct NelderMeadResult
    {
        std::vector<double> x;
        double value = 0.0;
        int evaluations = 0;
        bool converged = false;
    };

    using Objective = std::function<double(std::span<const double>)>;

    // Minimizes `f` starting from `x0`; `step` gives the initial simplex edge per
    // coordinate. Non-finite objective values are treated as +infinity, so
    // infeasible regions can be signalled by returning NaN or inf.
    NelderMeadResult nelder_mead(const Objective &f, std::vector<double> x0, std::vector<double> step,
                                 const NelderMeadOptions &options = {});
}

#endif
