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

#ifndef MMWCHAN_PARALLEL_HPP
#define MMWCHAN_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace mmwchan
{
    // Worker count: MMWCHAN_THREADS if set and positive, else the hardware
    // concurrency (at least 1).
    unsigned default_parallelism();

    // Runs fn(0) .. fn(n - 1) on up to `threads` workers (0 = default).
    // Work items must be independent. If any item throws, the exception of
    // the lowest failing index is rethrown after all workers finish.
    void parallel_for(std::size_t n, const std::function<void(std::size_t)> &fn, unsigned threads = 0);
}

#endif
