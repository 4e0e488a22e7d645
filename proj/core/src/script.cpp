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

#include "sdb/script.hpp"

#include <map>
#include <set>
#include <sstream>
#include <variant>

#include "sdb/io.hpp"

namespace sdb {

namespace {

using Value_ = std::variant<DatabasePtr, Table>;

struct Statement
{
    std::size_t line;
    std::string binding; // empty for save/show
    std::string command;
    std::vector<std::string> args;
};

struct Arity
{
    std::size_t min;
    std::size_t max;
    std::size_t bound; // leading arguments that name bindings
};

const std::map<std::string, Arity> &commands()
{
    static const std::map<std::string, Arity> table{
        {"load", {1, 2, 0}},         {"join", {3, 64, 2}},         {"union", {2, 2, 2}},
        {"union-all", {2, 2, 2}},    {"insert", {2, 2, 2}},        {"select", {3, 64, 2}},
        {"delete", {3, 64, 2}},      {"project", {1, 64, 1}},      {"global-table", {1, 1, 1}},
        {"to-relational", {1, 1, 1}}, {"pullback", {2, 2, 1}},     {"pushforward", {2, 2, 1}},
        {"extend", {2, 2, 1}},       {"save", {2, 2, 1}},          {"show", {1, 1, 1}},
    };
    return table;
}

std::vector<std::string> tokenize(const std::string &line)
{
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false, any = false;
    for (char c : line) {
        if (quoted) {
            if (c == '"')
                quoted = false;
            else
                cur += c;
        } else if (c == '"') {
            quoted = any = true;
        } else if (c == '#') {
            break;
        } else if (c == ' ' or c == '\t' or c == '\r') {
            if (any)
                out.push_back(std::move(cur));
            cur.clear();
            any = false;
        } else {
            cur += c;
            any = true;
        }
    }
    if (quoted)
        throw Error(Errc::script, "unterminated quote");
    if (any)
        out.push_back(std::move(cur));
    return out;
}

Statement parse_statement(std::size_t line, std::vector<std::string> tokens)
{
    Statement st{line, "", "", {}};
    std::size_t at = 0;
    if (tokens.size() >= 2 and tokens[1] == "=") {
        st.binding = tokens[0];
        at = 2;
        if (tokens.size() == 2)
            throw Error(Errc::script, "missing command after '='");
    }
    st.command = tokens[at];
    st.args.assign(tokens.begin() + static_cast<std::ptrdiff_t>(at + 1), tokens.end());
    auto it = commands().find(st.command);
    if (it == commands().end())
        throw Error(Errc::script, "unknown command '" + st.command + "'");
    const bool is_statement = st.command == "save" or st.command == "show";
    if (is_statement and not st.binding.empty())
        throw Error(Errc::script, "'" + st.command + "' does not produce a value");
    if (not is_statement and st.binding.empty())
        throw Error(Errc::script, "'" + st.command + "' needs a binding: name = " + st.command + " ...");
    if (st.args.size() < it->second.min or st.args.size() > it->second.max)
        throw Error(Errc::script, "wrong number of arguments to '" + st.command + "'");
    return st;
}

Subschema subschema_of(const Schema &x, const std::vector<std::string> &ids)
{
    return closure_by_id(x, ids);
}

std::pair<std::string, std::string> split_pair(const std::string &arg)
{
    auto eq = arg.find('=');
    if (eq == std::string::npos)
        throw Error(Errc::script, "join condition '" + arg + "' must be X=Y");
    return {arg.substr(0, eq), arg.substr(eq + 1)};
}

}

int exit_code_for(Errc code)
{
    switch (code) {
        case Errc::parse:
        case Errc::version:
        case Errc::io:
        case Errc::unknown_type:
        case Errc::type_mismatch:
        case Errc::arity:
        case Errc::invalid_schema:
        case Errc::invalid_sheaf:
        case Errc::script: return 1;
        default: return 2;
    }
}

Table canonical_table_keys(const Table &t)
{
    std::map<std::string, Record> rows;
    std::size_t i = 0;
    for (auto &[_, r] : t.rows())
        rows.emplace("k" + std::to_string(i++), r);
    return Table(t.schema(), std::move(rows));
}

ScriptResult run_script(const std::string &text, const ScriptOptions &options)
{
    ScriptResult result;
    std::vector<Statement> statements;
    {
        std::istringstream in(text);
        std::string line;
        std::set<std::string> bound;
        for (std::size_t n = 1; std::getline(in, line); ++n) {
            try {
                auto tokens = tokenize(line);
                if (tokens.empty())
                    continue;
                auto st = parse_statement(n, std::move(tokens));
                const auto &arity = commands().at(st.command);
                std::size_t names = st.command == "select" or st.command == "delete" ? 2 : arity.bound;
                for (std::size_t i = 0; i < names and i < st.args.size(); ++i) {
                    if (not bound.contains(st.args[i]))
                        throw Error(Errc::script, "unbound name '" + st.args[i] + "'");
                }
                if (not st.binding.empty())
                    bound.insert(st.binding);
                statements.push_back(std::move(st));
            } catch (const Error &e) {
                result.exit_code = 1;
                result.diagnostics += "line " + std::to_string(n) + ": " + e.what() + "\n";
                return result;
            }
        }
    }

    std::map<std::string, Value_> env;
    auto db = [&](const std::string &name) -> DatabasePtr {
        auto &v = env.at(name);
        if (auto *d = std::get_if<DatabasePtr>(&v))
            return *d;
        return std::make_shared<const Database>(from_table(std::get<Table>(v)));
    };
    auto path = [&](const std::string &p) { return options.base_dir / p; };
    auto render = [&](const Value_ &v) {
        if (auto *d = std::get_if<DatabasePtr>(&v))
            return io::save_database(options.canonical_keys ? canonical_keys(**d).db : **d);
        const auto &t = std::get<Table>(v);
        return io::save_table(options.canonical_keys ? canonical_table_keys(t) : t);
    };

    for (std::size_t index = 0; index < statements.size(); ++index) {
        const auto &st = statements[index];
        const auto &a = st.args;
        try {
            if (st.command == "save") {
                io::write_file(path(a[1]), render(env.at(a[0])));
                continue;
            }
            if (st.command == "show") {
                result.output += render(env.at(a[0]));
                continue;
            }
            Value_ value;
            if (st.command == "load") {
                auto text_in = io::read_file(path(a[0]));
                if (a[0].ends_with(".csv")) {
                    if (not options.spec)
                        throw Error(Errc::parse, "loading CSV needs a type specification");
                    value = io::load_csv(text_in, options.spec, a.size() > 1 ? a[1] : "");
                } else if (a.size() > 1) {
                    throw Error(Errc::arity, "a key column applies to CSV files only");
                } else if (io::document_kind(text_in) == "table")
                    value = io::load_table(text_in, options.spec);
                else
                    value = std::make_shared<const Database>(io::load_database(text_in, options.spec));
            } else if (st.command == "join") {
                std::vector<std::pair<std::string, std::string>> on;
                for (std::size_t i = 2; i < a.size(); ++i)
                    on.push_back(split_pair(a[i]));
                value = db_join(db(a[0]), db(a[1]), on).result;
            } else if (st.command == "union") {
                value = std::make_shared<const Database>(db_union(db(a[0]), db(a[1])));
            } else if (st.command == "union-all") {
                value = std::make_shared<const Database>(db_coproduct(db(a[0]), db(a[1])));
            } else if (st.command == "insert") {
                value = std::make_shared<const Database>(db_insert(db(a[0]), db(a[1])));
            } else if (st.command == "select" or st.command == "delete") {
                auto base = db(a[0]);
                auto sub = subschema_of(*base->schema(), {a.begin() + 2, a.end()});
                if (st.command == "select")
                    value = db_select(base, sub, db(a[1])).limit.result;
                else
                    value = std::make_shared<const Database>(db_delete(base, sub, db(a[1])));
            } else if (st.command == "project") {
                auto base = db(a[0]);
                value = std::make_shared<const Database>(
                    db_project(*base, subschema_of(*base->schema(), {a.begin() + 1, a.end()})));
            } else if (st.command == "global-table") {
                value = global_table(*db(a[0]));
            } else if (st.command == "to-relational") {
                value = std::make_shared<const Database>(to_relational(*db(a[0])));
            } else {
                auto base = db(a[0]);
                auto f = io::load_schema_morphism(io::read_file(path(a[1])), base->spec());
                if (st.command == "pullback")
                    value = std::make_shared<const Database>(db_pullback(f, *base));
                else if (st.command == "pushforward")
                    value = std::make_shared<const Database>(db_pushforward(f, *base));
                else
                    value = std::make_shared<const Database>(db_extend(f, *base));
            }
            env.insert_or_assign(st.binding, std::move(value));
        } catch (const Error &e) {
            result.exit_code = exit_code_for(e.code());
            result.diagnostics += "line " + std::to_string(st.line) + " (command " + std::to_string(index + 1) +
                                  (st.binding.empty() ? "" : ", binding '" + st.binding + "'") + "): " + e.what() +
                                  "\n";
            return result;
        }
    }
    return result;
}

}
