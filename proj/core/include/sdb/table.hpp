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

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "sdb/simple_schema.hpp"

namespace sdb {

/// A keyed family of records on one simple schema.  Distinct keys may carry equal records.
class Table
{
    SimpleSchema schema_;
    std::map<std::string, Record> rows_;

    public:
    /// Throws `Errc::arity` or `Errc::type_mismatch` for rows that are not valid on `schema`.
    Table(SimpleSchema schema, std::map<std::string, Record> rows = {});

    const SimpleSchema & schema() const { return schema_; }
    const std::map<std::string, Record> & rows() const { return rows_; }
    std::size_t size() const { return rows_.size(); }
    bool contains(const std::string &key) const { return rows_.contains(key); }
    /// Throws `Errc::unknown_attribute` for a missing key.
    const Record & row(const std::string &key) const;
    std::vector<std::string> keys() const;

    bool operator==(const Table&) const = default;
};

using TablePtr = std::shared_ptr<const Table>;

/** `(g, f)`: `key_map` is `g` on keys, and `schema_map` runs from the target's schema to the source's (the
 * contravariant direction). */
struct TableMorphism
{
    TablePtr source;
    TablePtr target;
    std::map<std::string, std::string> key_map;
    SimpleSchemaMorphism schema_map;
};

/** True iff every source key is mapped into the target and the integrity square commutes.  Throws
 * `Errc::direction` if `schema_map` does not run from `target->schema()` to `source->schema()`. */
bool validate_table_morphism(const TableMorphism &m);

TableMorphism identity_table_morphism(const TablePtr &t);

/// Every morphism `source → target`, by brute force over key maps and schema maps.  For small tables only.
std::vector<TableMorphism> enumerate_table_morphisms(const TablePtr &source, const TablePtr &target);

struct TableFiberProduct
{
    TablePtr table;
    TableMorphism first;
    TableMorphism second;
};

/** Limit of `t1 → t ← t2`.  Keys are the pairs "(k1,k2)" over the same target key; the schema is the pushout of
 * the column maps.  Throws `Errc::composition` if the two morphisms have different targets. */
TableFiberProduct table_fiber_product(const TableMorphism &m1, const TableMorphism &m2);

/// Coproduct in the category of tables on one schema.  Keys are tagged "1:k" and "2:k".
Table union_all(const Table &t1, const Table &t2);

/** Pushout of `t1 ← overlap → t2` over a fixed schema.  Each class of the quotient is named by its sorted tagged
 * keys joined with "~".  Throws `Errc::schema_mismatch` unless all three schemas agree, and
 * `Errc::unsupported_colimit` if either schema map is not the identity. */
Table union_over(const TableMorphism &g1, const TableMorphism &g2);

/// Restriction along the inclusion of `attrs` (taken in schema order).  Throws `Errc::unknown_attribute`.
Table project_table(const Table &t, const std::vector<std::string> &attrs);

/** Rows of `t` whose restriction to `attrs` appears in `selection`: the fiber product over the final table on
 * `attrs`.  A relational selection keeps the keys of `t`; otherwise result keys are "(k,k')".  Throws
 * `Errc::schema_mismatch` if `selection` is not on the restricted schema. */
Table select_table(const Table &t, const std::vector<std::string> &attrs, const Table &selection);

/// One row per distinct record, keyed by the first key carrying it.
Table image_table(const Table &t);

bool is_relational(const Table &t);

/// One key "*" over the empty schema.
Table terminal_table(TypeSpecPtr spec);

/// No keys, one column per declared type.
Table initial_table(TypeSpecPtr spec);

}
