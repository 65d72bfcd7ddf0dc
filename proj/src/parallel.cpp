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

#include "mmwchan/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace mmwchan
{
    unsigned default_parallelism()
    {
        if (const char *env = std::getenv("MMWCHAN_THREADS"))
        {
            try
            {
                const long v = std::stol(env);
                if (v > 0)
                    return static_cast<unsigned>(v);
            }
            catch (const std::exception &)
            {
            }
        }
        return std::max(1u, std::thread::hardware_concurrency());
    }

    void parallel_for(std::size_t n, const std::function<void(std::size_t)> &fn, unsigned threads)
    {
        if (threads == 0)
            threads = default_parallelism();
        threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
        if (threads <= 1)
        {
            for (std::size_t i = 0; i < n; ++i)
                fn(i);
            return;
        }

        std::atomic<std::size_t> next{0};
        std::mutex error_mutex;
        std::exception_ptr error;
        std::size_t error_index = n;

        auto worker = [&]
        {
            for (std::size_t i = next++; i < n; i = next++)
            {
                try
                {
                    fn(i);
                }
                catch (...)
                {
                    std::lock_guard lock(error_mutex);
                    if (i < error_index)
                    {
                        error_index = i;
                        error = std::current_exception();
                    }
                }
            }
        };

        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back(worker);
        for (auto &t : pool)
            t.join();
        if (error)
            std::rethrow_exception(error);
    }
}
