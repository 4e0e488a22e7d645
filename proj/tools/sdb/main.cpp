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

// sdb: command-line front end.  Exit codes: 0 ok, 1 validation failure, 2 engine error.

#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "sdb/io.hpp"
#include "sdb/oracle.hpp"
#include "sdb/script.hpp"

namespace {

using namespace sdb;

struct Common
{
    std::string typespec;
    std::string out;
    std::string key_column;
    bool canonical = false;
};

TypeSpecPtr spec_of(const Common &c)
{
    if (c.typespec.empty())
        return nullptr;
    return io::load_typespec(io::read_file(c.typespec));
}

bool is_csv(const std::string &path) { return path.ends_with(".csv"); }

Table load_csv(const std::string &path, const Common &c)
{
    auto spec = spec_of(c);
    if (not spec)
        throw Error(Errc::parse, "reading CSV needs --typespec");
    return io::load_csv(io::read_file(path), spec, c.key_column);
}

DatabasePtr load_db(const std::string &path, const Common &c)
{
    if (is_csv(path))
        return std::make_shared<const Database>(from_table(load_csv(path, c)));
    return std::make_shared<const Database>(io::load_database_or_table(io::read_file(path), spec_of(c)));
}

void emit(const std::string &text, const Common &c)
{
    if (c.out.empty())
        std::cout << text;
    else
        io::write_file(c.out, text);
}

void emit_db(const Database &db, const Common &c)
{
    emit(io::save_database(c.canonical ? canonical_keys(db).db : db), c);
}

void emit_table(const Table &t, const Common &c)
{
    emit(io::save_table(c.canonical ? canonical_table_keys(t) : t), c);
}

std::vector<std::pair<std::string, std::string>> parse_on(const std::vector<std::string> &on)
{
    std::vector<std::pair<std::string, std::string>> out;
    for (auto &o : on) {
        auto eq = o.find('=');
        if (eq == std::string::npos)
            throw Error(Errc::parse, "--on expects X=Y, got '" + o + "'");
        out.emplace_back(o.substr(0, eq), o.substr(eq + 1));
    }
    return out;
}

std::vector<std::string> split_ids(const std::string &ids)
{
    std::vector<std::string> out;
    std::stringstream ss(ids);
    std::string id;
    while (std::getline(ss, id, ';'))
        out.push_back(id);
    return out;
}

int validate(const std::string &path, const Common &c)
{
    if (is_csv(path)) {
        auto t = load_csv(path, c);
        std::cout << "ok: table with " << t.size() << " rows" << (is_relational(t) ? "" : " (not relational)") << "\n";
        return 0;
    }
    auto text = io::read_file(path);
    auto kind = io::document_kind(text);
    if (kind == "typespec") {
        auto spec = io::load_typespec(text);
        std::cout << "ok: typespec with " << spec->size() << " types\n";
    } else if (kind == "schema") {
        auto x = io::load_schema(text, spec_of(c));
        std::cout << "ok: schema with " << x->size() << " simplices\n";
    } else if (kind == "table") {
        auto t = io::load_table(text, spec_of(c));
        std::cout << "ok: table with " << t.size() << " rows" << (is_relational(t) ? "" : " (not relational)") << "\n";
    } else if (kind == "database") {
        auto db = io::load_database(text, spec_of(c));
        std::cout << "ok: database with " << db.schema()->size() << " simplices and " << db.key_count() << " keys"
                  << (is_relational(db) ? "" : " (not relational)") << "\n";
    } else if (kind == "schema-morphism") {
        auto f = io::load_schema_morphism(text, spec_of(c));
        std::cout << "ok: schema morphism " << f.source()->size() << " -> " << f.target()->size() << " simplices\n";
    } else {
        throw Error(Errc::parse, "unknown document kind '" + kind + "'");
    }
    return 0;
}

int show(const std::string &path, bool dot, const Common &c)
{
    auto text = io::read_file(path);
    auto kind = is_csv(path) ? std::string("table") : io::document_kind(text);
    SchemaPtr x;
    DatabasePtr db;
    if (kind == "schema") {
        x = io::load_schema(text, spec_of(c));
    } else if (kind == "database" or kind == "table") {
        db = load_db(path, c);
        x = db->schema();
    }
    else
        throw Error(Errc::parse, "show expects a schema, table or database");
    if (dot) {
        emit(io::render_schema_dot(*x), c);
        return 0;
    }
    std::ostringstream out;
    for (std::size_t s = 0; s < x->size(); ++s) {
        const auto &simplex = (*x)[s];
        out << simplex.id << " dim=" << simplex.dim;
        if (simplex.dim == 0)
            out << " " << simplex.name << ":" << simplex.type;
        if (db)
            out << " keys=" << (*db)[s].size();
        out << "\n";
    }
    emit(out.str(), c);
    return 0;
}

int oracle_join(const std::string &a, const std::string &b, const std::vector<std::string> &on)
{
    auto flat = [](const std::string &path) {
        auto text = io::read_file(path);
        if (io::document_kind(text) == "table")
            return oracle::parse_table(text);
        return oracle::matching_families(oracle::parse_database(text));
    };
    auto joined = oracle::equijoin(flat(a), flat(b), parse_on(on));
    for (auto &col : joined.columns)
        std::cout << col.name << ":" << col.type << "\t";
    std::cout << "\n";
    for (auto &row : joined.rows) {
        std::cout << row.key;
        for (auto &v : row.values)
            std::cout << "\t" << render_value(v);
        std::cout << "\n";
    }
    return 0;
}

}

int main(int argc, char **argv)
{
    CLI::App app{"sdb: simplicial databases"};
    app.require_subcommand(1);
    Common common;
    app.add_option("--typespec", common.typespec, "Type specification for documents that carry none");
    app.add_option("--out", common.out, "Write the result here instead of stdout");
    app.add_flag("--canonical-keys", common.canonical, "Rename keys to k0, k1, ... per simplex");
    app.add_option("--key-column", common.key_column, "CSV column holding row keys (default: r0, r1, ...)");
    app.fallthrough();

    std::string file, file2, map_file;
    std::vector<std::string> on;
    std::string ids;
    bool dot = false;

    auto *validate_cmd = app.add_subcommand("validate", "Check a document");
    validate_cmd->add_option("file", file)->required();

    auto *join_cmd = app.add_subcommand("join", "Equi-join two databases or tables");
    join_cmd->add_option("a", file)->required();
    join_cmd->add_option("b", file2)->required();
    join_cmd->add_option("--on", on, "Vertex pair X=Y (vertex ids of a and b)")->required();

    auto *union_cmd = app.add_subcommand("union", "UNION of two databases on one schema");
    union_cmd->add_option("a", file)->required();
    union_cmd->add_option("b", file2)->required();
    auto *union_all_cmd = app.add_subcommand("union-all", "UNION ALL of two databases on one schema");
    union_all_cmd->add_option("a", file)->required();
    union_all_cmd->add_option("b", file2)->required();
    auto *insert_cmd = app.add_subcommand("insert", "Insert the rows of a second database");
    insert_cmd->add_option("db", file)->required();
    insert_cmd->add_option("rows", file2)->required();

    auto *select_cmd = app.add_subcommand("select", "Fiber product with a selection on a subschema");
    select_cmd->add_option("db", file)->required();
    select_cmd->add_option("selection", file2)->required();
    select_cmd->add_option("--subschema", ids, "Simplex ids separated by ';'")->required();
    auto *delete_cmd = app.add_subcommand("delete", "Delete the closure of a selection");
    delete_cmd->add_option("db", file)->required();
    delete_cmd->add_option("selection", file2)->required();
    delete_cmd->add_option("--subschema", ids, "Simplex ids separated by ';'")->required();
    auto *project_cmd = app.add_subcommand("project", "Restrict to a subschema");
    project_cmd->add_option("db", file)->required();
    project_cmd->add_option("--subschema", ids, "Simplex ids separated by ';'")->required();

    auto *global_cmd = app.add_subcommand("global-table", "Global sections as one table");
    global_cmd->add_option("db", file)->required();
    auto *relational_cmd = app.add_subcommand("to-relational", "Image of the data map");
    relational_cmd->add_option("db", file)->required();

    auto *pullback_cmd = app.add_subcommand("pullback", "Pull back along a schema morphism into the db schema");
    pullback_cmd->add_option("db", file)->required();
    pullback_cmd->add_option("map", map_file)->required();
    auto *pushforward_cmd = app.add_subcommand("pushforward", "Push forward along a schema morphism");
    pushforward_cmd->add_option("db", file)->required();
    pushforward_cmd->add_option("map", map_file)->required();
    auto *extend_cmd = app.add_subcommand("extend", "Extend by the empty set along a monic schema morphism");
    extend_cmd->add_option("db", file)->required();
    extend_cmd->add_option("map", map_file)->required();

    auto *show_cmd = app.add_subcommand("show", "Describe a schema, table or database");
    show_cmd->add_option("file", file)->required();
    show_cmd->add_flag("--dot", dot, "Render the face poset as DOT");

    auto *run_cmd = app.add_subcommand("run", "Run a query script");
    run_cmd->add_option("script", file)->required();

    auto *oracle_cmd = app.add_subcommand("oracle-join", "");
    oracle_cmd->group("");
    oracle_cmd->add_option("a", file)->required();
    oracle_cmd->add_option("b", file2)->required();
    oracle_cmd->add_option("--on", on)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*validate_cmd)
            return validate(file, common);
        if (*join_cmd) {
            emit_db(*db_join(load_db(file, common), load_db(file2, common), parse_on(on)).result, common);
        } else if (*union_cmd) {
            emit_db(db_union(load_db(file, common), load_db(file2, common)), common);
        } else if (*union_all_cmd) {
            emit_db(db_coproduct(load_db(file, common), load_db(file2, common)), common);
        } else if (*insert_cmd) {
            emit_db(db_insert(load_db(file, common), load_db(file2, common)), common);
        } else if (*select_cmd or *delete_cmd) {
            auto db = load_db(file, common);
            auto sub = closure_by_id(*db->schema(), split_ids(ids));
            auto selection = load_db(file2, common);
            if (*select_cmd)
                emit_db(*db_select(db, sub, selection).limit.result, common);
            else
                emit_db(db_delete(db, sub, selection), common);
        } else if (*project_cmd) {
            auto db = load_db(file, common);
            emit_db(db_project(*db, closure_by_id(*db->schema(), split_ids(ids))), common);
        } else if (*global_cmd) {
            emit_table(global_table(*load_db(file, common)), common);
        } else if (*relational_cmd) {
            emit_db(to_relational(*load_db(file, common)), common);
        } else if (*pullback_cmd or *pushforward_cmd or *extend_cmd) {
            auto db = load_db(file, common);
            auto f = io::load_schema_morphism(io::read_file(map_file), db->spec());
            if (*pullback_cmd)
                emit_db(db_pullback(f, *db), common);
            else if (*pushforward_cmd)
                emit_db(db_pushforward(f, *db), common);
            else
                emit_db(db_extend(f, *db), common);
        } else if (*show_cmd) {
            return show(file, dot, common);
        } else if (*run_cmd) {
            ScriptOptions options;
            options.base_dir = std::filesystem::path(file).parent_path();
            if (options.base_dir.empty())
                options.base_dir = ".";
            options.spec = spec_of(common);
            options.canonical_keys = common.canonical;
            auto result = run_script(io::read_file(file), options);
            emit(result.output, common);
            std::cerr << result.diagnostics;
            return result.exit_code;
        } else if (*oracle_cmd) {
            return oracle_join(file, file2, on);
        }
        return 0;
    } catch (const Error &e) {
        std::cerr << "sdb: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception &e) {
        std::cerr << "sdb: " << e.what() << "\n";
        return 2;
    }
}
