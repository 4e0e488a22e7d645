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
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sdb/keysheaf.hpp"
#include "sdb/table.hpp"

namespace sdb {

/// A schema, a key sheaf on it and the data map into the universal sheaf.
class Database
{
    KeySheaf keys_;
    DataMap data_;

    public:
    /// Throws `Errc::invalid_sheaf` naming the first violation.
    Database(KeySheaf keys, DataMap data);
    explicit Database(SheafData sd) : Database(std::move(sd.keys), std::move(sd.data)) { }

    /// The database with no keys anywhere.
    static Database empty(const SchemaPtr &schema);

    const SchemaPtr & schema() const { return keys_.schema(); }
    const TypeSpecPtr & spec() const { return keys_.schema()->spec(); }
    const KeySheaf & keys() const { return keys_; }
    const DataMap & data() const { return data_; }
    const Section & operator[](std::size_t s) const { return keys_[s]; }
    const Record & record(std::size_t s, std::size_t k) const { return data_[s][k]; }
    /// Total number of keys over all simplices.
    std::size_t key_count() const;

    bool operator==(const Database &other) const;
};

using DatabasePtr = std::shared_ptr<const Database>;

/// The final database on a schema: every section is the full record space.  Never materialized.
struct FinalDb
{
    SchemaPtr schema;
};

/** A morphism `(X,K,τ) → (Y,K',τ')`: a schema map `f: Y → X` and, per simplex `y` of `Y`, a key map
 * `f_sharp[y]` from `K(f(y))` to `K'(y)`.  With `integrity`, records must agree along the collapse of `f`. */
struct DbMorphism
{
    DatabasePtr source;
    DatabasePtr target;
    SchemaMorphism f;
    std::vector<std::vector<std::size_t>> f_sharp;
    bool integrity = true;
};

/// Every failure of shape, naturality and (with integrity) record agreement.
std::vector<Violation> validate_db_morphism(const DbMorphism &m);

DbMorphism identity_db_morphism(const DatabasePtr &db);

/// An arrow of a database diagram.  `f` runs from the schema of `to` to the schema of `from`.  Arrows into a final
/// node need no key maps.
struct DbArrow
{
    std::size_t from;
    std::size_t to;
    SchemaMorphism f;
    std::vector<std::vector<std::size_t>> f_sharp;
};

using DbNode = std::variant<DatabasePtr, FinalDb>;

/// The limit with its legs; `legs[i]` is empty for final nodes.
struct DbLimit
{
    DatabasePtr result;
    std::vector<std::optional<DbMorphism>> legs;
};

/** Limit of a finite diagram.  The schema is the colimit of the schema diagram; keys are the limit of the
 * pushforward cylinders along its legs.  Throws `Errc::non_finite_result` when a free coordinate of infinite type
 * survives, `Errc::invalid_morphism` for arrows out of a final node. */
DbLimit db_limit(const std::vector<DbNode> &nodes, const std::vector<DbArrow> &arrows);

DbLimit db_product(const DatabasePtr &a, const DatabasePtr &b);

/// Equi-join of two databases along vertex pairs `on` (vertex ids of `a`, vertex ids of `b`).
DbLimit db_join(const DatabasePtr &a, const DatabasePtr &b, const std::vector<std::pair<std::string, std::string>> &on);

/// An arrow of a diagram in `DB_X`: key maps per simplex, schema map the identity.
struct DbColimitArrow
{
    std::size_t from;
    std::size_t to;
    std::vector<std::vector<std::size_t>> keys;
};

/** Colimit of a diagram of databases on one schema.  Keys are tagged "i:k"; identified keys are joined with "~".
 * Throws `Errc::unsupported_colimit` when the schemas differ. */
Database db_colimit_fixed_schema(const std::vector<DatabasePtr> &nodes, const std::vector<DbColimitArrow> &arrows);

/// UNION ALL.
Database db_coproduct(const DatabasePtr &a, const DatabasePtr &b);
/// UNION: keys of `a` and `b` with equal records and equal restrictions are identified.
Database db_union(const DatabasePtr &a, const DatabasePtr &b);
/// Inserts the rows of `rows` (a database on the same schema) as new keys.
Database db_insert(const DatabasePtr &db, const DatabasePtr &rows);

/// Restriction to a subschema, on the restricted schema (ids kept).
Database db_project(const Database &db, const Subschema &s);

/// Keys of `db` on simplices of `s` whose record occurs in `selection` there.
struct Selection
{
    DbLimit limit;
    std::vector<std::vector<bool>> selected; // per simplex of db, per key
};

/** Fiber product of `db → 1_S ← selection`.  `selection` lives on the restriction of the schema of `db` to `s` and
 * must be relational (`Errc::not_relational`). */
Selection db_select(const DatabasePtr &db, const Subschema &s, const DatabasePtr &selection);

/// Removes the closure of the selected keys: a key goes when some face in `s` restricts it to a selected key.
Database db_delete(const DatabasePtr &db, const Subschema &s, const DatabasePtr &selection);

bool is_relational(const Database &db);
Database to_relational(const Database &db);

/// The table as a database on its simplex schema, with the constant key sheaf.
Database from_table(const Table &t);
/** Matching families over the whole schema, as a table over every vertex.  Column names follow the vertex
 * classifier; keys are family keys. */
Table global_table(const Database &db);

Database db_pullback(const SchemaMorphism &f, const Database &db);
/// `f_+` materialized.  Throws `Errc::non_finite_result`.
Database db_pushforward(const SchemaMorphism &f, const Database &db);
/// `f_!` for monic `f`.  Throws `Errc::not_monic`.
Database db_extend(const SchemaMorphism &f, const Database &db);

Database view_extract(const Database &db, const Subschema &s);
/** Commits a view after insertion.  `updated` is the view with new keys; keys it shares with the view by name must
 * carry the same records and restrictions. */
Database view_commit_insert(const DatabasePtr &db, const Subschema &s, const DatabasePtr &updated);
/// Commits the deletion of the selected keys of the view and their closure.
Database view_commit_delete(const DatabasePtr &db, const Subschema &s, const DatabasePtr &selection);

/// Replaces every key name; `names[s][k]` must be distinct per simplex.
Database rename_keys(const Database &db, const std::vector<std::vector<std::string>> &names);

/// Keys renamed k0, k1, ... per simplex in key order.  `provenance[s]` maps new names to old ones.
struct CanonicalDb
{
    Database db;
    std::vector<std::map<std::string, std::string>> provenance;
};
CanonicalDb canonical_keys(const Database &db);

/** An isomorphism as a simplex bijection and key bijections per simplex, if one exists.  Ids and attribute names
 * are ignored.  Throws `Errc::too_large` past `cap` search steps. */
struct DbIsomorphism
{
    std::vector<std::size_t> simplices;
    std::vector<std::vector<std::size_t>> keys;
};
std::optional<DbIsomorphism> find_db_isomorphism(const Database &a, const Database &b, std::size_t cap = 1000000);

/** The initial database, truncated to simplices with distinct types: one simplex per ordered tuple of distinct type
 * names, carrying the universal sheaf.  Throws `Errc::initial_not_materializable` unless every type is enumerable and
 * `Errc::too_large` past 4 types or 100000 keys. */
Database initial_database(const TypeSpecPtr &spec);

}
