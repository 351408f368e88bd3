// xlsat: near-field XL-MIMO capacity saturation and beamforming toolkit
// Copyright (C) 2026 The xlsat authors
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

#pragma once

#include <cstdint>

namespace xlsat
{
    /// SplitMix64 (Steele, Lea & Flood 2014; constants as published by Vigna).
    ///
    /// Every random quantity in the library is drawn from a stream identified
    /// by (master_seed, stream_index). The stream state is the SplitMix64 mix
    /// of both words, so Monte Carlo trials can be evaluated in any order or on
    /// any worker and still produce identical values. Doubles are formed from
    /// the top 53 bits, which keeps output bit-identical across platforms
    /// (std::uniform_real_distribution is not).
    class Rng
    {
    public:
        Rng(std::uint64_t master_seed, std::uint64_t stream_index = 0) noexcept
            : state_(mix(master_seed ^ mix(stream_index + 0x632be59bd9b4e019ULL))) {}

        std::uint64_t next_u64() noexcept
        {
            state_ += 0x9e3779b97f4a7c15ULL;
            return mix(state_);
        }

        /// Uniform on [0, 1).
        double next_unit() noexcept
        {
            return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
        }

        /// Uniform on [lo, hi).
        double uniform(double lo, double hi) noexcept
        {
            return lo + (hi - lo) * next_unit();
        }

        static constexpr std::uint64_t mix(std::uint64_t z) noexcept
        {
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            return z ^ (z >> 31);
        }

    private:
        std::uint64_t state_;
    };
}
