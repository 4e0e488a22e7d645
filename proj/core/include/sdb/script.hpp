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

namespace sdb {

/// 1 for malformed input (parse, version, schema, sheaf and type errors), 2 for every other engine error.
int exit_code_for(Errc code);

/// Tables get keys k0, k1, ... in key order.
Table canonical_table_keys(const Table &t);

struct ScriptOptions
{
    std::filesystem::path base_dir = ".";
    TypeSpecPtr spec;
    bool canonical_keys = false;
};

struct ScriptResult
{
    int exit_code = 0;
    std::string output;
    std::string diagnostics;
};

/** Runs a query script.  One statement per line, `#` starts a comment:
 *
 *     name = load PATH [KEY_COLUMN]
 *     name = join A B X=Y ...
 *     name = union A B | union-all A B | insert A B
 *     name = select A SEL ID ... | delete A SEL ID ... | project A ID ...
 *     name = global-table A | to-relational A
 *     name = pullback A MAP | pushforward A MAP | extend A MAP
 *     save NAME PATH
 *     show NAME
 *
 * A PATH ending in ".csv" loads a table through `load_csv` with the optional key column; it needs `spec`.  IDs name
 * simplices whose closure is the subschema.  The whole script is checked for arity and unbound names
 * before anything runs. */
ScriptResult run_script(const std::string &text, const ScriptOptions &options);

}
