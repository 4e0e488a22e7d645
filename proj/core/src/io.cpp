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

#include "sdb/io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace sdb::io {

using nlohmann::json;

namespace {

json parse(const std::string &text)
{
    try {
        return json::parse(text);
    } catch (const json::exception &e) {
        throw Error(Errc::parse, e.what());
    }
}

std::string dump(const json &j)
{
    return j.dump(2) + "\n";
}

json envelope(const std::string &kind)
{
    return json{{"kind", kind}, {"version", format_version}};
}

void check_envelope(const json &j, const std::string &kind)
{
    if (not j.is_object() or not j.contains("kind"))
        throw Error(Errc::parse, "missing \"kind\"");
    if (not j.contains("version") or not j.at("version").is_number_integer())
        throw Error(Errc::version, "missing \"version\"");
    if (j.at("version").get<int>() != format_version)
        throw Error(Errc::version, "unsupported version " + j.at("version").dump());
    if (j.at("kind") != kind)
        throw Error(Errc::parse, "expected a " + kind + " document, got " + j.at("kind").dump());
}

/// Runs `body`, turning JSON access errors into parse errors.
template <class F>
auto guarded(F &&body)
{
    try {
        return body();
    } catch (const json::exception &e) {
        throw Error(Errc::parse, e.what());
    }
}

json types_json(const TypeSpec &spec)
{
    json types = json::object();
    for (auto &name : spec.names()) {
        const auto &d = spec.domain(name);
        switch (d.kind()) {
            case DomainKind::integer: types[name] = {{"kind", "int"}}; break;
            case DomainKind::string: types[name] = {{"kind", "string"}}; break;
            case DomainKind::boolean: types[name] = {{"kind", "bool"}}; break;
            case DomainKind::enumeration: types[name] = {{"kind", "enum"}, {"values", d.literals()}}; break;
        }
    }
    return json{{"types", types}};
}

TypeSpecPtr spec_from_json(const json &j)
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

TypeSpecPtr embedded_spec(const json &j, const TypeSpecPtr &fallback)
{
    if (j.contains("typespec"))
        return spec_from_json(j.at("typespec"));
    if (not fallback)
        throw Error(Errc::parse, "no type specification in the document and none given");
    return fallback;
}

json value_json(const Value &v)
{
    return std::visit(
        [](const auto &p) -> json {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, EnumLiteral>)
                return p.literal;
            else
                return p;
        },
        v.payload());
}

Value value_from_json(const TypeSpec &spec, const std::string &type, const json &j)
{
    const auto kind = spec.domain(type).kind();
    if (kind == DomainKind::integer and j.is_number_integer())
        return make_value(spec, type, j.get<std::int64_t>());
    if (kind == DomainKind::boolean and j.is_boolean())
        return make_value(spec, type, j.get<bool>());
    if (kind == DomainKind::string and j.is_string())
        return make_value(spec, type, j.get<std::string>());
    if (kind == DomainKind::enumeration and j.is_string())
        return make_value(spec, type, EnumLiteral{j.get<std::string>()});
    throw Error(Errc::type_mismatch, j.dump() + " is not a value of type '" + type + "'");
}

json record_json(const Record &r)
{
    json out = json::array();
    for (auto &v : r)
        out.push_back(value_json(v));
    return out;
}

json schema_json(const Schema &x)
{
    json vertices = json::array();
    json simplices = json::array();
    for (std::size_t s = 0; s < x.size(); ++s) {
        if (x[s].dim == 0) {
            vertices.push_back({{"id", x[s].id}, {"name", x[s].name}, {"type", x[s].type}});
            continue;
        }
        json faces = json::array();
        for (auto f : x[s].faces)
            faces.push_back(x[f].id);
        simplices.push_back({{"id", x[s].id}, {"faces", faces}});
    }
    return json{{"vertices", vertices}, {"simplices", simplices}};
}

SchemaPtr schema_from_json(const json &j, const TypeSpecPtr &spec)
{
    Schema::Builder builder(spec);
    for (auto &v : j.at("vertices"))
        builder.add_vertex(v.at("id").get<std::string>(), v.at("name").get<std::string>(),
                           v.at("type").get<std::string>());
    if (j.contains("simplices")) {
        for (auto &h : j.at("simplices"))
            builder.add_simplex(h.at("id").get<std::string>(), h.at("faces").get<std::vector<std::string>>());
    }
    return builder.build();
}

json morphism_json(const SchemaMorphism &f)
{
    const auto &y = *f.source();
    const auto &x = *f.target();
    json vertex_map = json::object();
    json simplex_map = json::object();
    for (std::size_t s = 0; s < y.size(); ++s) {
        if (y[s].dim == 0)
            vertex_map[y[s].id] = x[f[s].target].id;
        else
            simplex_map[y[s].id] = {{"target", x[f[s].target].id}, {"collapse", f[s].collapse}};
    }
    return json{{"source", schema_json(y)}, {"target", schema_json(x)}, {"vertex_map", vertex_map},
                {"simplex_map", simplex_map}};
}

}

std::string document_kind(const std::string &text)
{
    auto j = parse(text);
    if (not j.is_object() or not j.contains("kind") or not j.at("kind").is_string())
        throw Error(Errc::parse, "missing \"kind\"");
    if (not j.contains("version") or not j.at("version").is_number_integer() or
        j.at("version").get<int>() != format_version)
        throw Error(Errc::version, "unsupported or missing version");
    return j.at("kind").get<std::string>();
}

std::string save_typespec(const TypeSpec &spec)
{
    auto j = envelope("typespec");
    j["types"] = types_json(spec)["types"];
    return dump(j);
}

TypeSpecPtr load_typespec(const std::string &text)
{
    auto j = parse(text);
    check_envelope(j, "typespec");
    return guarded([&] { return spec_from_json(j); });
}

std::string save_schema(const Schema &x)
{
    auto j = envelope("schema");
    j["typespec"] = types_json(*x.spec());
    j["schema"] = schema_json(x);
    return dump(j);
}

SchemaPtr load_schema(const std::string &text, const TypeSpecPtr &spec)
{
    auto j = parse(text);
    check_envelope(j, "schema");
    return guarded([&] { return schema_from_json(j.at("schema"), embedded_spec(j, spec)); });
}

std::string save_table(const Table &t)
{
    auto j = envelope("table");
    j["typespec"] = types_json(*t.schema().spec());
    json columns = json::array();
    for (auto &a : t.schema().attributes())
        columns.push_back({{"name", a.name}, {"type", a.type}});
    j["schema"] = columns;
    j["keys"] = t.keys();
    json rows = json::object();
    for (auto &[k, r] : t.rows())
        rows[k] = record_json(r);
    j["rows"] = rows;
    return dump(j);
}

Table load_table(const std::string &text, const TypeSpecPtr &spec)
{
    auto j = parse(text);
    check_envelope(j, "table");
    return guarded([&] {
        auto s = embedded_spec(j, spec);
        std::vector<Attribute> attrs;
        for (auto &c : j.at("schema"))
            attrs.push_back({c.at("name").get<std::string>(), c.at("type").get<std::string>()});
        SimpleSchema schema(s, std::move(attrs));
        std::map<std::string, Record> rows;
        for (auto &[k, values] : j.at("rows").items()) {
            if (values.size() != schema.size())
                throw Error(Errc::arity, "row '" + k + "' has " + std::to_string(values.size()) + " values");
            Record r;
            for (std::size_t i = 0; i < schema.size(); ++i)
                r.push_back(value_from_json(*s, schema[i].type, values.at(i)));
            rows.emplace(k, std::move(r));
        }
        if (j.contains("keys")) {
            // optional; when given it must list exactly the row keys
            auto keys = j.at("keys").get<std::vector<std::string>>();
            std::sort(keys.begin(), keys.end());
            std::vector<std::string> row_keys;
            for (auto &[k, _] : rows)
                row_keys.push_back(k);
            if (keys != row_keys)
                throw Error(Errc::parse, "table \"keys\" do not match its rows");
        }
        return Table(std::move(schema), std::move(rows));
    });
}

std::string save_database(const Database &db)
{
    const auto &x = *db.schema();
    auto j = envelope("database");
    j["typespec"] = types_json(*x.spec());
    j["schema"] = schema_json(x);
    json data = json::object();
    for (std::size_t s = 0; s < x.size(); ++s) {
        const auto &sec = db[s];
        json rows = json::object();
        for (std::size_t k = 0; k < sec.size(); ++k)
            rows[sec.keys[k]] = record_json(db.record(s, k));
        json restrictions = json::object();
        for (std::size_t i = 0; i < sec.faces.size(); ++i) {
            json map = json::object();
            const auto &face = db[x[s].faces[i]];
            for (std::size_t k = 0; k < sec.size(); ++k)
                map[sec.keys[k]] = face.keys[sec.faces[i][k]];
            restrictions[std::to_string(i)] = map;
        }
        json entry{{"keys", sec.keys}, {"rows", rows}};
        if (x[s].dim > 0)
            entry["restrictions"] = restrictions;
        data[x[s].id] = entry;
    }
    j["data"] = data;
    return dump(j);
}

Database load_database(const std::string &text, const TypeSpecPtr &spec)
{
    auto j = parse(text);
    check_envelope(j, "database");
    return guarded([&] {
        auto s = embedded_spec(j, spec);
        auto schema = schema_from_json(j.at("schema"), s);
        const auto &x = *schema;
        const auto &data = j.at("data");
        for (auto &[id, _] : data.items()) {
            if (not x.find(id))
                throw Error(Errc::invalid_sheaf, "data for unknown simplex '" + id + "'");
        }
        std::vector<Section> sections(x.size());
        for (std::size_t t = 0; t < x.size(); ++t) {
            if (not data.contains(x[t].id))
                continue;
            const auto &d = data.at(x[t].id);
            std::vector<std::string> keys;
            if (d.contains("keys"))
                keys = d.at("keys").get<std::vector<std::string>>();
            else if (d.contains("rows")) {
                for (auto &[k, _] : d.at("rows").items())
                    keys.push_back(k);
            }
            std::sort(keys.begin(), keys.end());
            if (std::adjacent_find(keys.begin(), keys.end()) != keys.end())
                throw Error(Errc::invalid_sheaf, "duplicate key on '" + x[t].id + "'");
            sections[t].keys = std::move(keys);
        }
        DataMap vertex_data(x.size());
        std::vector<bool> has_rows(x.size(), false);
        for (std::size_t t = 0; t < x.size(); ++t) {
            auto &sec = sections[t];
            const json *d = data.contains(x[t].id) ? &data.at(x[t].id) : nullptr;
            for (std::size_t i = 0; i < x[t].faces.size(); ++i) {
                const auto &face = sections[x[t].faces[i]];
                std::vector<std::size_t> map;
                for (auto &k : sec.keys) {
                    const auto key = std::to_string(i);
                    if (not d or not d->contains("restrictions") or not d->at("restrictions").contains(key) or
                        not d->at("restrictions").at(key).contains(k))
                        throw Error(Errc::invalid_sheaf,
                                    "key '" + k + "' on '" + x[t].id + "' has no restriction along face " + key);
                    auto target = d->at("restrictions").at(key).at(k).get<std::string>();
                    auto idx = face.index_of(target);
                    if (idx == npos)
                        throw Error(Errc::invalid_sheaf, "key '" + k + "' on '" + x[t].id + "' restricts to unknown key '" +
                                                             target + "'");
                    map.push_back(idx);
                }
                sec.faces.push_back(std::move(map));
            }
            has_rows[t] = d and d->contains("rows");
            if (x[t].dim == 0) {
                for (auto &k : sec.keys) {
                    if (not has_rows[t] or not d->at("rows").contains(k))
                        throw Error(Errc::invalid_sheaf, "vertex key '" + k + "' on '" + x[t].id + "' has no value");
                    const auto &values = d->at("rows").at(k);
                    if (values.size() != 1)
                        throw Error(Errc::arity, "vertex key '" + k + "' on '" + x[t].id + "' needs one value");
                    vertex_data[t].push_back({value_from_json(*s, x[t].type, values.at(0))});
                }
            }
        }
        KeySheaf keys(schema, std::move(sections));
        auto violations = validate_sheaf_and_data(keys, nullptr);
        if (not violations.empty())
            throw Error(Errc::invalid_sheaf, violations.front().kind + " at '" + violations.front().simplex + "': " +
                                                 violations.front().detail);
        auto derived = derive_data(keys, vertex_data);
        for (std::size_t t = 0; t < x.size(); ++t) {
            if (x[t].dim == 0 or not has_rows[t])
                continue;
            const auto &rows = data.at(x[t].id).at("rows");
            for (std::size_t k = 0; k < keys[t].size(); ++k) {
                const auto &name = keys[t].keys[k];
                if (not rows.contains(name))
                    continue;
                const auto &values = rows.at(name);
                if (values.size() != x[t].dim + 1)
                    throw Error(Errc::arity, "key '" + name + "' on '" + x[t].id + "' has the wrong number of values");
                Record given;
                for (std::size_t p = 0; p <= x[t].dim; ++p)
                    given.push_back(value_from_json(*s, x[x[t].vertices[p]].type, values.at(p)));
                if (given != derived[t][k])
                    throw Error(Errc::invalid_sheaf, "key '" + name + "' on '" + x[t].id +
                                                         "' disagrees with the records of its vertices");
            }
        }
        return Database(std::move(keys), std::move(derived));
    });
}

std::string save_schema_morphism(const SchemaMorphism &f)
{
    auto j = envelope("schema-morphism");
    j["typespec"] = types_json(*f.source()->spec());
    j.update(morphism_json(f));
    return dump(j);
}

SchemaMorphism load_schema_morphism(const std::string &text, const TypeSpecPtr &spec)
{
    auto j = parse(text);
    check_envelope(j, "schema-morphism");
    return guarded([&] {
        auto s = embedded_spec(j, spec);
        auto source = schema_from_json(j.at("source"), s);
        auto target = schema_from_json(j.at("target"), s);
        const auto &vm = j.at("vertex_map");
        std::vector<std::size_t> vertex_map;
        for (std::size_t v = 0; v < source->vertex_count(); ++v) {
            const auto &id = (*source)[v].id;
            if (not vm.contains(id))
                throw Error(Errc::invalid_morphism, "vertex '" + id + "' has no image");
            vertex_map.push_back(target->index_of(vm.at(id).get<std::string>()));
        }
        if (not j.contains("simplex_map") or j.at("simplex_map").empty())
            return SchemaMorphism::from_vertex_map(source, target, vertex_map);
        const auto &sm = j.at("simplex_map");
        std::vector<SimplexImage> images;
        for (std::size_t t = 0; t < source->size(); ++t) {
            const auto &simplex = (*source)[t];
            if (simplex.dim == 0) {
                images.push_back({vertex_map[t], {0}});
                continue;
            }
            if (not sm.contains(simplex.id))
                throw Error(Errc::invalid_morphism, "simplex '" + simplex.id + "' has no image");
            const auto &img = sm.at(simplex.id);
            images.push_back({target->index_of(img.at("target").get<std::string>()),
                              img.at("collapse").get<std::vector<std::size_t>>()});
        }
        return SchemaMorphism(source, target, std::move(images));
    });
}

Table load_csv(const std::string &text, const TypeSpecPtr &spec, const std::string &key_column)
{
    std::vector<std::vector<std::string>> lines;
    {
        // RFC 4180 fields: quotes around fields, doubled quotes inside
        std::vector<std::string> row;
        std::string field;
        bool quoted = false, any = false;
        for (std::size_t i = 0; i < text.size(); ++i) {
            char c = text[i];
            if (quoted) {
                if (c == '"' and i + 1 < text.size() and text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else if (c == '"') {
                    quoted = false;
                } else {
                    field += c;
                }
                continue;
            }
            if (c == '"') {
                quoted = true;
                any = true;
            } else if (c == ',') {
                row.push_back(std::move(field));
                field.clear();
                any = true;
            } else if (c == '\n' or c == '\r') {
                if (c == '\r' and i + 1 < text.size() and text[i + 1] == '\n')
                    ++i;
                if (any or not field.empty()) {
                    row.push_back(std::move(field));
                    lines.push_back(std::move(row));
                }
                row.clear();
                field.clear();
                any = false;
            } else {
                field += c;
                any = true;
            }
        }
        if (quoted)
            throw Error(Errc::parse, "unterminated quote in CSV");
        if (any or not field.empty()) {
            row.push_back(std::move(field));
            lines.push_back(std::move(row));
        }
    }
    if (lines.empty())
        throw Error(Errc::parse, "CSV needs a header line");
    const auto &header = lines.front();
    auto name_of = [](const std::string &h) { return h.substr(0, h.rfind(':')); };
    std::size_t key_at = npos;
    if (not key_column.empty()) {
        for (std::size_t i = 0; i < header.size() and key_at == npos; ++i) {
            if (name_of(header[i]) == key_column)
                key_at = i;
        }
        if (key_at == npos)
            throw Error(Errc::unknown_attribute, "CSV has no key column '" + key_column + "'");
    }
    std::vector<Attribute> attrs;
    std::vector<std::size_t> fields_of;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i == key_at)
            continue;
        auto colon = header[i].rfind(':');
        if (colon == std::string::npos)
            throw Error(Errc::parse, "CSV header '" + header[i] + "' must be name:type");
        attrs.push_back({header[i].substr(0, colon), header[i].substr(colon + 1)});
        fields_of.push_back(i);
    }
    SimpleSchema schema(spec, std::move(attrs));
    std::map<std::string, Record> rows;
    for (std::size_t line = 1; line < lines.size(); ++line) {
        const auto &fields = lines[line];
        if (fields.size() != header.size())
            throw Error(Errc::arity, "CSV line " + std::to_string(line + 1) + " has " + std::to_string(fields.size()) +
                                         " fields");
        std::string key = key_at != npos ? fields[key_at] : "r" + std::to_string(line - 1);
        Record r;
        for (std::size_t i = 0; i < schema.size(); ++i)
            r.push_back(parse_value(*spec, schema[i].type, fields[fields_of[i]]));
        if (not rows.emplace(key, std::move(r)).second)
            throw Error(Errc::parse, "duplicate CSV key '" + key + "'");
    }
    return Table(std::move(schema), std::move(rows));
}

std::string render_schema_dot(const Schema &x)
{
    auto quote = [](const std::string &s) {
        std::string out = "\"";
        for (char c : s) {
            if (c == '"' or c == '\\')
                out += '\\';
            out += c;
        }
        return out + "\"";
    };
    std::ostringstream out;
    out << "digraph schema {\n";
    for (std::size_t s = 0; s < x.size(); ++s) {
        const auto &simplex = x[s];
        std::string label = simplex.dim == 0 ? simplex.name + " : " + simplex.type : simplex.id;
        out << "  n" << s << " [label=" << quote(label) << (simplex.dim == 0 ? ", shape=box" : "") << "];\n";
    }
    for (std::size_t s = 0; s < x.size(); ++s) {
        for (std::size_t i = 0; i < x[s].faces.size(); ++i)
            out << "  n" << x[s].faces[i] << " -> n" << s << " [label=\"d" << i << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

std::string read_file(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (not in)
        throw Error(Errc::io, "cannot read '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path &path, const std::string &text)
{
    std::ofstream out(path, std::ios::binary);
    if (not out)
        throw Error(Errc::io, "cannot write '" + path.string() + "'");
    out << text;
    if (not out)
        throw Error(Errc::io, "failed writing '" + path.string() + "'");
}

Database load_database_or_table(const std::string &text, const TypeSpecPtr &spec)
{
    auto kind = document_kind(text);
    if (kind == "table")
        return from_table(load_table(text, spec));
    return load_database(text, spec);
}

}
