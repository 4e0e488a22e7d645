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

#include <filesystem>
#include <string>

#include "sdb/database.hpp"

namespace sdb::io {

inline constexpr int format_version = 1;

/// The "kind" field of a document.  Throws `Errc::parse` or `Errc::version`.
std::string document_kind(const std::string &text);

// Every writer emits sorted keys, two-space indentation and a trailing newline.  Readers check the kind and the
// version; `spec` supplies the type specification when the document carries none.

std::string save_typespec(const TypeSpec &spec);
TypeSpecPtr load_typespec(const std::string &text);

std::string save_schema(const Schema &x);
SchemaPtr load_schema(const std::string &text, const TypeSpecPtr &spec = nullptr);

std::string save_table(const Table &t);
Table load_table(const std::string &text, const TypeSpecPtr &spec = nullptr);

/** Records of higher simplices are written in full.  On load they may be omitted; when present they must equal the
 * records derived from the vertices (`Errc::invalid_sheaf`). */
std::string save_database(const Database &db);
Database load_database(const std::string &text, const TypeSpecPtr &spec = nullptr);

/** A schema morphism document embeds its source and target schemas and a "vertex_map" from source vertex ids to
 * target vertex ids; an optional "simplex_map" gives {"target", "collapse"} per source simplex id. */
std::string save_schema_morphism(const SchemaMorphism &f);
SchemaMorphism load_schema_morphism(const std::string &text, const TypeSpecPtr &spec = nullptr);

/** A CSV table.  The header lists "name:type" columns.  Keys come from the column named `key_column` (its header
 * may omit the type), or are "r0", "r1", ... in line order when it is empty. */
Table load_csv(const std::string &text, const TypeSpecPtr &spec, const std::string &key_column = "");

/// The face poset as a DOT digraph: one node per simplex, one arc per face.
std::string render_schema_dot(const Schema &x);

std::string read_file(const std::filesystem::path &path);
void write_file(const std::filesystem::path &path, const std::string &text);

/// A database from a database document or, via `from_table`, a table document.
Database load_database_or_table(const std::string &text, const TypeSpecPtr &spec = nullptr);

}
