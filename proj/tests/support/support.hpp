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

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sdb/database.hpp"
#include "sdb/oracle.hpp"

namespace sdb::testing {

/// SDB_SEED when set, else a fixed default.
std::uint64_t test_seed();
/// A generator for one test, derived from the seed and a per-test salt.
std::mt19937_64 make_rng(std::uint64_t salt);

/// Str (strings) and Z (integers).
TypeSpecPtr str_int_spec();
/// Bool only.
TypeSpecPtr bool_spec();
/// Bool, Color (red, green, blue) and Str.
TypeSpecPtr random_spec();

Value str(const TypeSpecPtr &spec, const std::string &s);
Value integer(const TypeSpecPtr &spec, std::int64_t n);
Value boolean(const TypeSpecPtr &spec, bool b);

/// Vertex rows: vertex id → [(key, value)].
using VertexRows = std::map<std::string, std::vector<std::pair<std::string, Value>>>;
/// Higher rows: simplex id → [(key, [face keys])], face `i` first.
using SimplexRows = std::map<std::string, std::vector<std::pair<std::string, std::vector<std::string>>>>;

/// Builds and validates a database from named keys; higher records are derived.
Database build_db(const SchemaPtr &x, const VertexRows &vertices, const SimplexRows &simplices);

/// Two vertices and an edge `id` between them.
SchemaPtr edge_schema(const TypeSpecPtr &spec, const std::string &id, std::pair<std::string, std::string> v0,
                      std::pair<std::string, std::string> v1);

/// A random schema of at most `max_simplices` simplices; vertex ids and names are `prefix` + index.
SchemaPtr random_schema(std::mt19937_64 &rng, const TypeSpecPtr &spec, std::size_t max_simplices,
                        const std::string &prefix, std::size_t max_vertices = 4);

/// Values a random database draws from for `type`.
std::vector<Value> value_pool(const TypeSpecPtr &spec, const std::string &type);

/// A random database with at most `max_keys` keys per section.  Vertices get at least `min_vertex_keys`.
Database random_db(std::mt19937_64 &rng, const SchemaPtr &x, std::size_t max_keys, std::size_t min_vertex_keys = 1);

/** Every database on `x` with at most `max_keys` keys per section, values from `value_pool`, one per
 * isomorphism class (reordering keys within sections). */
std::vector<Database> all_small_dbs(const SchemaPtr &x, std::size_t max_keys);

/// Drops the keys with `keep[s][k] == false` and, transitively, every key restricting to a dropped one.
Database keep_keys(const Database &db, const std::vector<std::vector<bool>> &keep);

/// The database as the oracle sees it, through the JSON document.
oracle::ExplicitDatabase to_explicit(const Database &db);
/// Drops simplices whose id is not in `ids`.
oracle::ExplicitDatabase restrict_explicit(const oracle::ExplicitDatabase &db, const std::set<std::string> &ids);

oracle::FlatTable to_flat(const Table &t);
/// Sorted rendered records, in the format of `oracle::tuple_multiset`.
std::vector<std::string> record_multiset(const Table &t);

/// Ids of the simplices of `s`.
std::set<std::string> subschema_ids(const Schema &x, const Subschema &s);

/// A random nonempty subschema.
Subschema random_subschema(std::mt19937_64 &rng, const Schema &x);

}
