// Copyright 2026 The sdb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace sdb {

/// Error categories raised by the engine. Every failure surfaces as an `sdb::Error` carrying one of these.
enum class Errc {
    unknown_type,
    parse,
    not_enumerable,
    arity,
    type_mismatch,
    composition,
    order_conflict,
    direction,
    schema_mismatch,
    unknown_attribute,
    unsupported_colimit,
    label_conflict,
    too_large,
    not_monic,
    non_finite_result,
    initial_not_materializable,
    not_relational,
    invalid_schema,
    invalid_morphism,
    invalid_sheaf,
    io,
    version,
    script,
};

const char *to_string(Errc code) noexcept;

class Error : public std::runtime_error
{
    Errc code_;
    std::optional<std::size_t> position_;

    public:
    Error(Errc code, const std::string &what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) { }
    Error(Errc code, std::size_t position, const std::string &what)
        : std::runtime_error(std::string(to_string(code)) + "(" + std::to_string(position) + "): " + what)
        , code_(code)
        , position_(position)
    { }

    Errc code() const noexcept { return code_; }
    /// Offending position, e.g. the column index of a `type_mismatch`.
    std::optional<std::size_t> position() const noexcept { return position_; }
};

}
