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

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sdb/error.hpp"

namespace sdb {

enum class DomainKind { integer, string, boolean, enumeration };

/** The domain of one named data type.  Integer and string domains are intensional (a membership predicate plus a
 * parser); boolean and enumeration domains are finite and can be listed. */
class DataTypeDomain
{
    DomainKind kind_;
    std::vector<std::string> literals_;

    DataTypeDomain(DomainKind kind, std::vector<std::string> literals) : kind_(kind), literals_(std::move(literals)) { }

    public:
    static DataTypeDomain integers() { return {DomainKind::integer, {}}; }
    static DataTypeDomain strings() { return {DomainKind::string, {}}; }
    static DataTypeDomain booleans() { return {DomainKind::boolean, {}}; }
    /// Throws `Errc::parse` if `literals` is empty or has duplicates.
    static DataTypeDomain enumeration(std::vector<std::string> literals);

    DomainKind kind() const { return kind_; }
    const std::vector<std::string> &literals() const { return literals_; }
    bool enumerable() const { return kind_ == DomainKind::boolean or kind_ == DomainKind::enumeration; }

    bool operator==(const DataTypeDomain&) const = default;
};

struct EnumLiteral
{
    std::string literal;
    auto operator<=>(const EnumLiteral&) const = default;
};

/// A raw payload, before it is attached to a type.
using Payload = std::variant<std::int64_t, std::string, bool, EnumLiteral>;

/// The type universe: a finite map from type name to domain.
class TypeSpec
{
    std::map<std::string, DataTypeDomain, std::less<>> types_;

    public:
    TypeSpec() = default;

    /// Registers `name`; throws `Errc::parse` on an empty or duplicate name.
    TypeSpec & add(std::string name, DataTypeDomain domain);

    bool contains(std::string_view name) const { return types_.find(name) != types_.end(); }
    /// Throws `Errc::unknown_type`.
    const DataTypeDomain & domain(std::string_view name) const;
    std::vector<std::string> names() const;
    std::size_t size() const { return types_.size(); }
    bool all_enumerable() const;

    bool operator==(const TypeSpec&) const = default;
};

using TypeSpecPtr = std::shared_ptr<const TypeSpec>;

/** A typed value.  Equality is structural on (type name, payload); values of different type names never compare
 * equal.  Enumeration payloads are always normalized to `EnumLiteral`. */
class Value
{
    std::string type_;
    Payload payload_;

    public:
    Value(std::string type, Payload payload) : type_(std::move(type)), payload_(std::move(payload)) { }

    const std::string & type() const { return type_; }
    const Payload & payload() const { return payload_; }

    bool operator==(const Value &other) const { return type_ == other.type_ and payload_ == other.payload_; }
    bool operator!=(const Value &other) const { return not (*this == other); }
    bool operator<(const Value &other) const;
};

using Record = std::vector<Value>;

/// True iff `payload` lies in the domain of `type_name`.  Throws `Errc::unknown_type`.
bool check_member(const TypeSpec &spec, std::string_view type_name, const Payload &payload);

/// Builds a `Value`, checking membership.  Text payloads for enumeration types are accepted and normalized.
Value make_value(const TypeSpec &spec, std::string_view type_name, Payload payload);

/// Canonical parse of `text` into the domain of `type_name`.  Throws `Errc::parse` or `Errc::unknown_type`.
Value parse_value(const TypeSpec &spec, std::string_view type_name, std::string_view text);

/// Canonical text form; `parse_value(render_value(v)) == v`.
std::string render_value(const Value &value);

/// All members of an enumerable domain in canonical order (false < true; enums in declaration order).
std::vector<Value> enumerate_domain(const TypeSpec &spec, std::string_view type_name);

/// Stable text form of a record, used for hashing and canonical ordering.
std::string render_record(const Record &record);

}
