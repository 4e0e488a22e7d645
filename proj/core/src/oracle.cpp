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

#include "sdb/oracle.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include <nlohmann/json.hpp>

namespace sdb::oracle {

using nlohmann::json;

namespace {

json parse_json(const std::string &text)
{
    try {
        return json::parse(text);
    } catch (const json::exception &e) {
        throw Error(Errc::parse, e.what());
    }
}

TypeSpecPtr read_spec(const json &j)
{
    auto spec = std::make_shared<TypeSpec>();
    for (auto &[name, t] : j.at("types").items()) {
        const auto kind = t.at("kind").get<std::string>();
        if (kind == "int")
            spec->add(name, DataTypeDomain::integers());
        else if (kind == "string")
            spec->add(name, DataTypeDomain::strings());
        else if (kind == "bool")
            spec->add(name, DataTypeDomain::booleans());
        else if (kind == "enum")
            spec->add(name, DataTypeDomain::enumeration(t.at("values").get<std::vector<std::string>>()));
        else
            throw Error(Errc::parse, "unknown type kind '" + kind + "'");
    }
    return spec;
}

Value read_value(const TypeSpec &spec, const std::string &type, const json &j)
{
    if (j.is_boolean())
        return make_value(spec, type, j.get<bool>());
    if (j.is_number_integer())
        return make_value(spec, type, j.get<std::int64_t>());
    if (j.is_string()) {
        if (spec.domain(type).kind() == DomainKind::enumeration)
            return make_value(spec, type, EnumLiteral{j.get<std::string>()});
        return make_value(spec, type, j.get<std::string>());
    }
    throw Error(Errc::parse, "unsupported JSON value for type '" + type + "'");
}

std::size_t column_index(const FlatTable &t, const std::string &name)
{
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (t.columns[i].name == name)
            return i;
    }
    throw Error(Errc::unknown_attribute, "'" + name + "'");
}

}

FlatTable parse_table(const std::string &text)
{
    auto j = parse_json(text);
    try {
        auto spec = read_spec(j.at("typespec"));
        FlatTable out;
        for (auto &c : j.at("schema"))
            out.columns.push_back({c.at("name").get<std::string>(), c.at("type").get<std::string>()});
        for (auto &[key, values] : j.at("rows").items()) {
            Record r;
            for (std::size_t i = 0; i < out.columns.size(); ++i)
                r.push_back(read_value(*spec, out.columns[i].type, values.at(i)));
            out.rows.push_back({key, std::move(r)});
        }
        std::sort(out.rows.begin(), out.rows.end(), [](auto &a, auto &b) { return a.key < b.key; });
        return out;
    } catch (const json::exception &e) {
        throw Error(Errc::parse, e.what());
    }
}

ExplicitDatabase parse_database(const std::string &text)
{
    auto j = parse_json(text);
    try {
        ExplicitDatabase out;
        out.spec = read_spec(j.at("typespec"));
        const auto &schema = j.at("schema");
        for (auto &v : schema.at("vertices")) {
            ExplicitSimplex s;
            s.id = v.at("id").get<std::string>();
            s.name = v.at("name").get<std::string>();
            s.type = v.at("type").get<std::string>();
            out.simplices.push_back(std::move(s));
        }
        if (schema.contains("simplices")) {
            for (auto &h : schema.at("simplices")) {
                ExplicitSimplex s;
                s.id = h.at("id").get<std::string>();
                s.faces = h.at("faces").get<std::vector<std::string>>();
                out.simplices.push_back(std::move(s));
            }
        }
        const auto &data = j.at("data");
        for (auto &s : out.simplices) {
            if (not data.contains(s.id))
                continue;
            const auto &d = data.at(s.id);
            s.keys = d.at("keys").get<std::vector<std::string>>();
            if (s.faces.empty() and d.contains("rows")) {
                for (auto &[key, values] : d.at("rows").items())
                    s.rows.emplace(key, Record{read_value(*out.spec, s.type, values.at(0))});
            }
            s.restrictions.resize(s.faces.size());
            if (d.contains("restrictions")) {
                for (auto &[face, map] : d.at("restrictions").items())
                    s.restrictions.at(std::stoul(face)) = map.get<std::map<std::string, std::string>>();
            }
        }
        return out;
    } catch (const json::exception &e) {
        throw Error(Errc::parse, e.what());
    }
}

FlatTable equijoin(const FlatTable &a, const FlatTable &b, const std::vector<std::pair<std::string, std::string>> &on)
{
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::set<std::size_t> joined;
    for (auto &[ca, cb] : on) {
        auto ia = column_index(a, ca);
        auto ib = column_index(b, cb);
        if (a.columns[ia].type != b.columns[ib].type)
            throw Error(Errc::type_mismatch, "'" + ca + "' and '" + cb + "' have different types");
        pairs.emplace_back(ia, ib);
        joined.insert(ib);
    }
    FlatTable out;
    out.columns = a.columns;
    for (std::size_t i = 0; i < b.columns.size(); ++i) {
        if (not joined.contains(i))
            out.columns.push_back(b.columns[i]);
    }
    for (auto &ra : a.rows) {
        for (auto &rb : b.rows) {
            bool match = true;
            for (auto [ia, ib] : pairs)
                match = match and ra.values[ia] == rb.values[ib];
            if (not match)
                continue;
            Record r = ra.values;
            for (std::size_t i = 0; i < rb.values.size(); ++i) {
                if (not joined.contains(i))
                    r.push_back(rb.values[i]);
            }
            out.rows.push_back({"(" + ra.key + "," + rb.key + ")", std::move(r)});
        }
    }
    return out;
}

FlatTable select(const FlatTable &t, const std::vector<std::string> &columns, const std::vector<Record> &accepted)
{
    std::vector<std::size_t> idx;
    for (auto &c : columns)
        idx.push_back(column_index(t, c));
    FlatTable out{t.columns, {}};
    for (auto &row : t.rows) {
        Record projected;
        for (auto i : idx)
            projected.push_back(row.values[i]);
        if (std::find(accepted.begin(), accepted.end(), projected) != accepted.end())
            out.rows.push_back(row);
    }
    return out;
}

FlatTable project(const FlatTable &t, const std::vector<std::string> &columns)
{
    std::vector<std::size_t> idx;
    FlatTable out;
    for (auto &c : columns) {
        idx.push_back(column_index(t, c));
        out.columns.push_back(t.columns[idx.back()]);
    }
    for (auto &row : t.rows) {
        Record r;
        for (auto i : idx)
            r.push_back(row.values[i]);
        out.rows.push_back({row.key, std::move(r)});
    }
    return out;
}

FlatTable dedupe(const FlatTable &t)
{
    auto rows = t.rows;
    std::sort(rows.begin(), rows.end(), [](auto &a, auto &b) { return a.key < b.key; });
    FlatTable out{t.columns, {}};
    for (auto &row : rows) {
        bool seen = std::any_of(out.rows.begin(), out.rows.end(), [&](auto &r) { return r.values == row.values; });
        if (not seen)
            out.rows.push_back(row);
    }
    return out;
}

FlatTable matching_families(const ExplicitDatabase &db)
{
    const auto &simplices = db.simplices;
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < simplices.size(); ++i)
        index.emplace(simplices[i].id, i);

    std::set<std::size_t> is_face;
    for (auto &s : simplices) {
        for (auto &f : s.faces)
            is_face.insert(index.at(f));
    }
    std::vector<std::size_t> maximal;
    for (std::size_t i = 0; i < simplices.size(); ++i) {
        if (not is_face.contains(i))
            maximal.push_back(i);
    }

    // every iterated face of key `k` at `s`, as simplex → key
    std::function<void(std::size_t, const std::string &, std::map<std::size_t, std::string> &, bool &)> spread =
        [&](std::size_t s, const std::string &k, std::map<std::size_t, std::string> &out, bool &ok) {
            auto [it, inserted] = out.emplace(s, k);
            if (not inserted) {
                ok = ok and it->second == k;
                return;
            }
            for (std::size_t i = 0; i < simplices[s].faces.size(); ++i)
                spread(index.at(simplices[s].faces[i]), simplices[s].restrictions[i].at(k), out, ok);
        };

    FlatTable out;
    std::vector<std::size_t> vertices;
    for (std::size_t i = 0; i < simplices.size(); ++i) {
        if (simplices[i].faces.empty()) {
            vertices.push_back(i);
            out.columns.push_back({simplices[i].name, simplices[i].type});
        }
    }
    std::vector<std::size_t> choice(maximal.size(), 0);
    for (auto m : maximal) {
        if (simplices[m].keys.empty())
            return out;
    }
    while (true) {
        std::map<std::size_t, std::string> assignment;
        bool ok = true;
        std::string key;
        for (std::size_t q = 0; q < maximal.size(); ++q) {
            const auto &k = simplices[maximal[q]].keys[choice[q]];
            spread(maximal[q], k, assignment, ok);
            key += (key.empty() ? "" : ",") + simplices[maximal[q]].id + ":" + k;
        }
        if (ok) {
            Record r;
            for (auto v : vertices)
                r.push_back(simplices[v].rows.at(assignment.at(v)).at(0));
            out.rows.push_back({"(" + key + ")", std::move(r)});
        }
        std::size_t i = 0;
        while (i < choice.size() and ++choice[i] == simplices[maximal[i]].keys.size())
            choice[i++] = 0;
        if (i == choice.size())
            break;
    }
    return out;
}

std::vector<std::string> tuple_multiset(const FlatTable &t)
{
    std::vector<std::string> out;
    for (auto &row : t.rows)
        out.push_back(render_record(row.values));
    std::sort(out.begin(), out.end());
    return out;
}

}
