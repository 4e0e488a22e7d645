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

// Brute-force reference engine.  Depends on the type layer only; it reads its inputs from the JSON files the
// engine writes and never calls schema, sheaf or database code.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sdb/typespec.hpp"

namespace sdb::oracle {

struct Column
{
    std::string name;
    std::string type;

    bool operator==(const Column&) const = default;
};

struct FlatRow
{
    std::string key;
    Record values;
};

/// A keyed multiset of typed tuples.
struct FlatTable
{
    std::vector<Column> columns;
    std::vector<FlatRow> rows;
};

/// Reads a table document (`"kind": "table"`).  Throws `Errc::parse`.
FlatTable parse_table(const std::string &json);

struct ExplicitSimplex
{
    std::string id;
    std::vector<std::string> faces; // empty for vertices
    std::string name;               // vertices only
    std::string type;               // vertices only
    std::vector<std::string> keys;
    std::map<std::string, Record> rows;                          // vertex rows
    std::vector<std::map<std::string, std::string>> restrictions; // per face
};

/// A database as plain sections, in file order.
struct ExplicitDatabase
{
    TypeSpecPtr spec;
    std::vector<ExplicitSimplex> simplices;
};

/// Reads a database document (`"kind": "database"`).  Throws `Errc::parse`.
ExplicitDatabase parse_database(const std::string &json);

/// Nested-loop equi-join on column pairs (column of `a`, column of `b`).  Output columns are those of `a`, then
/// those of `b` not joined; keys are "(ka,kb)".  Throws `Errc::type_mismatch` or `Errc::unknown_attribute`.
FlatTable equijoin(const FlatTable &a, const FlatTable &b, const std::vector<std::pair<std::string, std::string>> &on);

/// Rows whose projection onto `columns` is one of `accepted`.
FlatTable select(const FlatTable &t, const std::vector<std::string> &columns, const std::vector<Record> &accepted);

/// Keeps `columns` in the given order.
FlatTable project(const FlatTable &t, const std::vector<std::string> &columns);

/// Keeps the first key, in key order, of every distinct tuple.
FlatTable dedupe(const FlatTable &t);

/** Every choice of one key per maximal simplex agreeing on all shared faces, by exhaustive enumeration.  Columns
 * are the vertices in file order. */
FlatTable matching_families(const ExplicitDatabase &db);

/// Sorted rendered tuples, for multiset comparison.
std::vector<std::string> tuple_multiset(const FlatTable &t);

}
