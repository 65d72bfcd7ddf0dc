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

#include "mmwchan/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace mmwchan
{
    namespace
    {
        constexpr double inf = std::numeric_limits<double>::infinity();

        struct Simplex
        {
            std::vector<std::vector<double>> vertices;
            std::vector<double> values;
        };
    }

    NelderMeadResult nelder_mead(const Objective &f, std::vector<double> x0, std::vector<double> step,
                                 const NelderMeadOptions &options)
    {
        const std::size_t n = x0.size();
        if (n == 0)
            throw std::invalid_argument("nelder_mead: empty parameter vector");
        if (step.size() != n)
            throw std::invalid_argument("nelder_mead: step size mismatch");

        int evaluations = 0;
        auto eval = [&](const std::vector<double> &x)
        {
            ++evaluations;
            const double v = f(std::span<const double>(x));
            return std::isfinite(v) ? v : inf;
        };

        NelderMeadResult result;
        result.x = x0;
        result.value = eval(x0);

        for (int round = 0; round <= options.restarts; ++round)
        {
            Simplex s;
            s.vertices.assign(n + 1, result.x);
            s.values.assign(n + 1, result.value);
            for (std::size_t i = 0; i < n; ++i)
            {
                s.vertices[i + 1][i] += step[i];
                s.values[i + 1] = eval(s.vertices[i + 1]);
                if (!std::isfinite(s.values[i + 1]))
                {
                    // try the other direction before giving up on this edge
                    s.vertices[i + 1][i] = result.x[i] - step[i];
                    s.values[i + 1] = eval(s.vertices[i + 1]);
                }
            }

            std::vector<std::size_t> order(n + 1);
            std::vector<double> centroid(n), trial(n), trial2(n);
            bool converged = false;

            while (evaluations < options.max_evaluations)
            {
                std::iota(order.begin(), order.end(), 0);
                std::sort(order.begin(), order.end(),
                          [&](std::size_t a, std::size_t b) { return s.values[a] < s.values[b]; });
                const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];

                const double fspread = s.values[worst] - s.values[best];
                double xspread = 0.0;
                for (std::size_t v = 0; v <= n; ++v)
                    for (std::size_t i = 0; i < n; ++i)
                    {
                        const double d = std::abs(s.vertices[v][i] - s.vertices[best][i]);
                        xspread = std::max(xspread, d / (1.0 + std::abs(s.vertices[best][i])));
                    }
                const bool flat = std::isfinite(fspread) &&
                                  fspread <= options.f_tolerance * (std::abs(s.values[best]) + 1e-12);
                if (std::isfinite(s.values[best]) && (flat || xspread <= options.x_tolerance))
                {
                    converged = true;
                    break;
                }

                std::fill(centroid.begin(), centroid.end(), 0.0);
                for (std::size_t v = 0; v <= n; ++v)
                    if (v != worst)
                        for (std::size_t i = 0; i < n; ++i)
                            centroid[i] += s.vertices[v][i] / static_cast<double>(n);

                for (std::size_t i = 0; i < n; ++i)
                    trial[i] = centroid[i] + (centroid[i] - s.vertices[worst][i]);
                const double fr = eval(trial);

                if (fr < s.values[best])
                {
                    for (std::size_t i = 0; i < n; ++i)
                        trial2[i] = centroid[i] + 2.0 * (centroid[i] - s.vertices[worst][i]);
                    const double fe = eval(trial2);
                    if (fe < fr)
                    {
                        s.vertices[worst] = trial2;
                        s.values[worst] = fe;
                    }
                    else
                    {
                        s.vertices[worst] = trial;
                        s.values[worst] = fr;
                    }
                    continue;
                }
                if (fr < s.values[second])
                {
                    s.vertices[worst] = trial;
                    s.values[worst] = fr;
                    continue;
                }

                // contraction, outside if the reflection improved on the worst vertex
                const bool outside = fr < s.values[worst];
                for (std::size_t i = 0; i < n; ++i)
                    trial2[i] = outside ? centroid[i] + 0.5 * (trial[i] - centroid[i])
                                        : centroid[i] + 0.5 * (s.vertices[worst][i] - centroid[i]);
                const double fc = eval(trial2);
                if (fc < std::min(fr, s.values[worst]))
                {
                    s.vertices[worst] = trial2;
                    s.values[worst] = fc;
                    continue;
                }

                for (std::size_t v = 0; v <= n; ++v)
                {
                    if (v == best)
                        continue;
                    for (std::size_t i = 0; i < n; ++i)
                        s.vertices[v][i] = s.vertices[best][i] + 0.5 * (s.vertices[v][i] - s.vertices[best][i]);
                    s.values[v] = eval(s.vertices[v]);
                }
            }

            const auto best_it = std::min_element(s.values.begin(), s.values.end());
            const auto best_index = static_cast<std::size_t>(best_it - s.values.begin());
            if (*best_it <= result.value)
            {
                result.x = s.vertices[best_index];
                result.value = *best_it;
            }
            result.converged = converged;
            if (!converged)
                break;
            // shrink the restart simplex so later rounds polish rather than wander
            for (auto &d : step)
                d *= 0.5;
        }

        result.evaluations = evaluations;
        return result;
    }
}
