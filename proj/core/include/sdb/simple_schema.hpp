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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sdb/typespec.hpp"

namespace sdb {

struct Attribute
{
    std::string name;
    std::string type;

    bool operator==(const Attribute&) const = default;
};

/** An ordered, typed column list.  Attribute names are unique; order is significant and preserved by every
 * operation.  Records on a simple schema are positional: names are metadata. */
class SimpleSchema
{
    TypeSpecPtr spec_;
    std::vector<Attribute> attributes_;

    public:
    /// Throws `Errc::unknown_type` for undeclared types and `Errc::schema_mismatch` for duplicate names.
    SimpleSchema(TypeSpecPtr spec, std::vector<Attribute> attributes);

    const TypeSpecPtr & spec() const { return spec_; }
    const std::vector<Attribute> & attributes() const { return attributes_; }
    const Attribute & operator[](std::size_t i) const { return attributes_[i]; }
    std::size_t size() const { return attributes_.size(); }
    bool empty() const { return attributes_.empty(); }

    std::optional<std::size_t> index_of(std::string_view name) const;
    /// Sub-list of the attributes at `indices`, in the given order.
    SimpleSchema select(std::span<const std::size_t> indices) const;

    /// Equality of column lists; the type universe is compared by content.
    bool operator==(const SimpleSchema &other) const;
};

/// Validates raw payloads against `schema`.  Throws `Errc::arity` or `Errc::type_mismatch` (with the column index).
Record check_record(const SimpleSchema &schema, std::span<const Payload> values);

/// True iff `record` is a section of the domain bundle of `schema`.
bool is_valid_record(const SimpleSchema &schema, const Record &record);

/** An order- and type-preserving map of column sets.  Non-injective maps are allowed.  `map()[a]` is the target
 * column of source column `a`. */
class SimpleSchemaMorphism
{
    SimpleSchema source_;
    SimpleSchema target_;
    std::vector<std::size_t> map_;

    public:
    /// Throws `Errc::composition` unless the map is total, order-preserving, and type-preserving.
    SimpleSchemaMorphism(SimpleSchema source, SimpleSchema target, std::vector<std::size_t> map);

    static SimpleSchemaMorphism identity(const SimpleSchema &schema);
    /// Inclusion of the sub-list `subset` (must be increasing) into `schema`.
    static SimpleSchemaMorphism inclusion(const SimpleSchema &schema, std::vector<std::size_t> subset);
    /// Builds the morphism from a column-name map; throws `Errc::unknown_attribute` for unmapped names.
    static SimpleSchemaMorphism by_name(SimpleSchema source, SimpleSchema target,
                                        const std::vector<std::pair<std::string, std::string>> &pairs);

    const SimpleSchema & source() const { return source_; }
    const SimpleSchema & target() const { return target_; }
    const std::vector<std::size_t> & map() const { return map_; }
    std::size_t operator()(std::size_t a) const { return map_[a]; }

    bool operator==(const SimpleSchemaMorphism&) const = default;
};

SimpleSchemaMorphism identity_ssm(const SimpleSchema &schema);

/// `g ∘ f`.  Throws `Errc::composition` when `f.target() != g.source()`.
SimpleSchemaMorphism compose_ssm(const SimpleSchemaMorphism &g, const SimpleSchemaMorphism &f);

/// The induced map on records `f*`: the result at column `a` of `f.source()` is `record[f(a)]`.
Record restrict_record(const SimpleSchemaMorphism &f, const Record &record);

struct SimplePushout
{
    SimpleSchema schema;
    SimpleSchemaMorphism first_leg;
    SimpleSchemaMorphism second_leg;
};

/** Pushout of `first ← shared → second` on column sets.  Columns are identified through the shared schema; the
 * result order is the topological merge of both input orders, ties broken by first appearance (first schema before
 * second).  Identified columns with different names are renamed "a=b".  Throws `Errc::order_conflict` when the two
 * orders cannot be merged, and `Errc::composition` if the morphisms do not share a source. */
SimplePushout pushout_simple_schema(const SimpleSchemaMorphism &first, const SimpleSchemaMorphism &second);

/// Every morphism `source → target` (order- and type-preserving maps), in lexicographic order of the maps.
std::vector<SimpleSchemaMorphism> enumerate_ssm(const SimpleSchema &source, const SimpleSchema &target);

}
