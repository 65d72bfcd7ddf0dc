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

#ifndef MMWCHAN_RNG_HPP
#define MMWCHAN_RNG_HPP

#include <cstdint>

namespace mmwchan
{
    // SplitMix64 output finalizer.
    constexpr std::uint64_t mix64(std::uint64_t x) noexcept
    {
        x ^= x >> 30;
        x *= 0xbf58476d1ce4e5b9ULL;
        x ^= x >> 27;
        x *= 0x94d049bb133111ebULL;
        x ^= x >> 31;
        return x;
    }

    // Key of sub-stream `index` under `seed`. Sub-streams are what parallel
    // callers hand out per work item, so serial and parallel runs agree.
    constexpr std::uint64_t derive_stream_key(std::uint64_t seed, std::uint64_t index) noexcept
    {
        return mix64(mix64(seed + 0x9e3779b97f4a7c15ULL) ^ (index * 0xd1b54a32d192ed03ULL + 0x632be59bd9b4e019ULL));
    }

    /// Counter-based uniform stream: the i-th draw depends only on (key, i).
    ///
    /// Draws are the SplitMix64 sequence started at `key`, mapped to the open
    /// interval (0, 1) on a 2^-53 lattice offset by half a step, so neither 0
    /// nor 1 is ever produced. Only integer arithmetic is involved, which
    /// makes streams bit-identical on every platform.
    class UniformStream
    {
    public:
        constexpr UniformStream(std::uint64_t seed, std::uint64_t stream_index = 0) noexcept
            : key_(derive_stream_key(seed, stream_index)) {}

        constexpr std::uint64_t next_bits() noexcept
        {
            return mix64(key_ + (++counter_) * 0x9e3779b97f4a7c15ULL);
        }

        constexpr double next() noexcept
        {
            return (static_cast<double>(next_bits() >> 11) + 0.5) * 0x1.0p-53;
        }

        constexpr std::uint64_t position() const noexcept { return counter_; }
        constexpr void seek(std::uint64_t position) noexcept { counter_ = position; }

    private:
        std::uint64_t key_;
        std::uint64_t counter_ = 0;
    };
}

#endif
