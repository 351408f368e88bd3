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

#include <stdexcept>
#include <string>

namespace xlsat
{
    enum class ErrorCode
    {
        invalid_argument, // malformed input, violated precondition
        index,            // out-of-range element or user index
        validation,       // schema or invariant check failed
        domain,           // mathematically undefined (zero norm, coincident users, ...)
        rank_deficient,   // singular Gram matrix handed to a ZF receiver
        resource,         // allocation guard tripped
        numeric,          // quadrature or solver did not converge
        io                // file could not be read or written
    };

    const char *error_code_name(ErrorCode code) noexcept;

    class Error : public std::runtime_error
    {
    public:
        Error(ErrorCode code, const std::string &message)
            : std::runtime_error(message), code_(code) {}

        ErrorCode code() const noexcept { return code_; }

    private:
        ErrorCode code_;
    };

    [[noreturn]] inline void fail(ErrorCode code, const std::string &message)
    {
        throw Error(code, message);
    }
}
