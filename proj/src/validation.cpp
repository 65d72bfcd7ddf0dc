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

#include "mmwchan/validation.hpp"

#include <fmt/format.h>

#include <cmath>

namespace mmwchan
{
    ParameterSamples simulate_samples(const ScenarioProfile &profile, std::size_t n, std::uint64_t seed, unsigned threads)
    {
        auto corpus = generate_corpus(profile, n, seed, threads);
        std::vector<std::vector<Cluster>> captures;
        captures.reserve(corpus.size());
        for (auto &r : corpus)
            captures.push_back(std::move(r.clusters));
        return extract_parameters(captures);
    }

    ProfileValidation validate_profile(const ScenarioProfile &profile, const std::map<Parameter, QuartileTarget> &targets,
                                       std::size_t n, std::uint64_t seed, double tolerance, double count_tolerance,
                                       unsigned threads)
    {
        if (n == 0)
            throw std::invalid_argument("validate_profile: need at least one realization");
        if (!(tolerance >= 0.0) || !(count_tolerance >= 0.0))
            throw std::invalid_argument("validate_profile: tolerances must be >= 0");

        const ParameterSamples samples = simulate_samples(profile, n, seed, threads);
        ProfileValidation out;
        out.profile_id = profile.id;
        out.n = n;
        out.seed = seed;
        out.tolerance = tolerance;
        out.count_tolerance = count_tolerance;
        out.pass = true;
        for (Parameter p : all_parameters)
        {
            const auto it = targets.find(p);
            if (it == targets.end())
                throw std::invalid_argument(fmt::format("validate_profile: no target for {}", to_string(p)));
            QuartileCheck check;
            check.parameter = p;
            check.target = it->second;
            const auto x = values(samples, p);
            const std::array<double, 3> t = {it->second.q1, it->second.q2, it->second.q3};
            if (x.empty())
            {
                check.simulated = {NAN, NAN, NAN};
                check.error = {INFINITY, INFINITY, INFINITY};
                check.pass = false;
            }
            else
            {
                check.simulated = sample_quartiles(x);
                check.pass = true;
                for (std::size_t i = 0; i < 3; ++i)
                {
                    check.error[i] = is_count(p) ? std::abs(check.simulated[i] - t[i])
                                                 : std::abs(check.simulated[i] - t[i]) / std::abs(t[i]);
                    check.pass = check.pass && check.error[i] <= (is_count(p) ? count_tolerance : tolerance);
                }
            }
            out.pass = out.pass && check.pass;
            out.checks.push_back(check);
        }
        return out;
    }

    std::map<Parameter, QuartileTarget> builtin_targets_for(const ProfileKey &key)
    {
        std::map<Parameter, QuartileTarget> out;
        for (Parameter p : all_parameters)
        {
            const auto it = builtin_targets().find({key.scenario, key.beamwidth_deg, p});
            if (it == builtin_targets().end())
                throw std::out_of_range(fmt::format("no published targets for {}", profile_id(key)));
            out[p] = it->second;
        }
        return out;
    }
}
