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

#include "sdb/table.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "sdb/detail/union_find.hpp"
#include "sdb/keys.hpp"

namespace sdb {

Table::Table(SimpleSchema schema, std::map<std::string, Record> rows)
    : schema_(std::move(schema)), rows_(std::move(rows))
{
    for (auto &[key, record] : rows_) {
        if (record.size() != schema_.size())
            throw Error(Errc::arity, "row '" + key + "' has " + std::to_string(record.size()) + " values, expected " +
                                         std::to_string(schema_.size()));
        for (std::size_t i = 0; i < record.size(); ++i) {
            if (record[i].type() != schema_[i].type or
                not check_member(*schema_.spec(), schema_[i].type, record[i].payload()))
                throw Error(Errc::type_mismatch, i, "row '" + key + "'");
        }
    }
}

const Record & Table::row(const std::string &key) const
{
    auto it = rows_.find(key);
    if (it == rows_.end())
        throw Error(Errc::unknown_attribute, "no row with key '" + key + "'");
    return it->second;
}

std::vector<std::string> Table::keys() const
{
    std::vector<std::string> out;
    out.reserve(rows_.size());
    for (auto &[k, _] : rows_)
        out.push_back(k);
    return out;
}

bool validate_table_morphism(const TableMorphism &m)
{
    if (not (m.schema_map.source() == m.target->schema()) or not (m.schema_map.target() == m.source->schema()))
        throw Error(Errc::direction, "the schema map must run from the target schema to the source schema");
    if (m.key_map.size() != m.source->size())
        return false;
    for (auto &[key, record] : m.source->rows()) {
        auto it = m.key_map.find(key);
        if (it == m.key_map.end() or not m.target->contains(it->second))
            return false;
        if (restrict_record(m.schema_map, record) != m.target->row(it->second))
            return false;
    }
    return true;
}

TableMorphism identity_table_morphism(const TablePtr &t)
{
    std::map<std::string, std::string> keys;
    for (auto &[k, _] : t->rows())
        keys.emplace(k, k);
    return {t, t, std::move(keys), SimpleSchemaMorphism::identity(t->schema())};
}

std::vector<TableMorphism> enumerate_table_morphisms(const TablePtr &source, const TablePtr &target)
{
    std::vector<TableMorphism> out;
    auto source_keys = source->keys();
    auto target_keys = target->keys();
    for (auto &f : enumerate_ssm(target->schema(), source->schema())) {
        // candidate images per source key
        std::vector<std::vector<std::string>> options;
        bool possible = true;
        for (auto &k : source_keys) {
            auto projected = restrict_record(f, source->row(k));
            std::vector<std::string> fits;
            for (auto &t : target_keys) {
                if (target->row(t) == projected)
                    fits.push_back(t);
            }
            if (fits.empty()) {
                possible = false;
                break;
            }
            options.push_back(std::move(fits));
        }
        if (not possible)
            continue;
        std::vector<std::size_t> choice(options.size(), 0);
        while (true) {
            std::map<std::string, std::string> key_map;
            for (std::size_t i = 0; i < choice.size(); ++i)
                key_map.emplace(source_keys[i], options[i][choice[i]]);
            out.push_back({source, target, std::move(key_map), f});
            std::size_t i = 0;
            while (i < choice.size() and ++choice[i] == options[i].size())
                choice[i++] = 0;
            if (i == choice.size())
                break;
        }
    }
    return out;
}

TableFiberProduct table_fiber_product(const TableMorphism &m1, const TableMorphism &m2)
{
    if (not (*m1.target == *m2.target))
        throw Error(Errc::composition, "fiber product legs must share a target");
    auto pushout = pushout_simple_schema(m1.schema_map, m2.schema_map);
    const auto &leg1 = pushout.first_leg;
    const auto &leg2 = pushout.second_leg;

    // column of the pushout → (which side, column on that side)
    std::vector<std::pair<int, std::size_t>> source_of(pushout.schema.size(), {0, 0});
    for (std::size_t c = leg2.map().size(); c-- > 0;)
        source_of[leg2(c)] = {2, c};
    for (std::size_t c = leg1.map().size(); c-- > 0;)
        source_of[leg1(c)] = {1, c};

    std::unordered_map<std::string, std::vector<std::string>> by_target;
    for (auto &[k2, _] : m2.source->rows())
        by_target[m2.key_map.at(k2)].push_back(k2);

    std::map<std::string, Record> rows;
    std::map<std::string, std::string> proj1, proj2;
    for (auto &[k1, r1] : m1.source->rows()) {
        auto it = by_target.find(m1.key_map.at(k1));
        if (it == by_target.end())
            continue;
        for (auto &k2 : it->second) {
            const auto &r2 = m2.source->row(k2);
            Record r;
            r.reserve(source_of.size());
            for (auto [side, c] : source_of)
                r.push_back(side == 1 ? r1[c] : r2[c]);
            std::string key = tuple_key(std::vector<std::string>{k1, k2});
            rows.emplace(key, std::move(r));
            proj1.emplace(key, k1);
            proj2.emplace(key, k2);
        }
    }
    auto table = std::make_shared<const Table>(pushout.schema, std::move(rows));
    return {table, {table, m1.source, std::move(proj1), leg1}, {table, m2.source, std::move(proj2), leg2}};
}

Table union_all(const Table &t1, const Table &t2)
{
    if (not (t1.schema() == t2.schema()))
        throw Error(Errc::schema_mismatch, "UNION ALL needs identical schemas");
    std::map<std::string, Record> rows;
    for (auto &[k, r] : t1.rows())
        rows.emplace("1:" + k, r);
    for (auto &[k, r] : t2.rows())
        rows.emplace("2:" + k, r);
    return Table(t1.schema(), std::move(rows));
}

Table union_over(const TableMorphism &g1, const TableMorphism &g2)
{
    if (not (*g1.source == *g2.source))
        throw Error(Errc::schema_mismatch, "both legs must start at the same overlap table");
    const auto &schema = g1.source->schema();
    if (not (g1.target->schema() == schema) or not (g2.target->schema() == schema))
        throw Error(Errc::schema_mismatch, "UNION needs identical schemas");
    if (g1.schema_map.map() != SimpleSchemaMorphism::identity(schema).map() or
        g2.schema_map.map() != SimpleSchemaMorphism::identity(schema).map())
        throw Error(Errc::unsupported_colimit, "UNION is only defined over a fixed schema");
    if (not validate_table_morphism(g1) or not validate_table_morphism(g2))
        throw Error(Errc::invalid_morphism, "UNION legs must be valid table morphisms");

    auto keys1 = g1.target->keys();
    auto keys2 = g2.target->keys();
    std::map<std::string, std::size_t> index1, index2;
    for (std::size_t i = 0; i < keys1.size(); ++i)
        index1.emplace(keys1[i], i);
    for (std::size_t i = 0; i < keys2.size(); ++i)
        index2.emplace(keys2[i], keys1.size() + i);

    detail::UnionFind uf(keys1.size() + keys2.size());
    for (auto &[k, _] : g1.source->rows())
        uf.unite(index1.at(g1.key_map.at(k)), index2.at(g2.key_map.at(k)));

    std::map<std::size_t, std::vector<std::string>> classes;
    for (std::size_t i = 0; i < keys1.size(); ++i)
        classes[uf.find(i)].push_back("1:" + keys1[i]);
    for (std::size_t i = 0; i < keys2.size(); ++i)
        classes[uf.find(keys1.size() + i)].push_back("2:" + keys2[i]);

    std::map<std::string, Record> rows;
    for (auto &[root, members] : classes) {
        std::sort(members.begin(), members.end());
        std::string name;
        for (auto &m : members)
            name += (name.empty() ? "" : "~") + m;
        const auto &record = root < keys1.size() ? g1.target->row(keys1[root])
                                                 : g2.target->row(keys2[root - keys1.size()]);
        rows.emplace(std::move(name), record);
    }
    return Table(schema, std::move(rows));
}

Table project_table(const Table &t, const std::vector<std::string> &attrs)
{
    std::vector<std::size_t> indices;
    for (auto &a : attrs) {
        auto i = t.schema().index_of(a);
        if (not i)
            throw Error(Errc::unknown_attribute, "'" + a + "'");
        indices.push_back(*i);
    }
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    auto inclusion = SimpleSchemaMorphism::inclusion(t.schema(), indices);
    std::map<std::string, Record> rows;
    for (auto &[k, r] : t.rows())
        rows.emplace(k, restrict_record(inclusion, r));
    return Table(inclusion.source(), std::move(rows));
}

Table select_table(const Table &t, const std::vector<std::string> &attrs, const Table &selection)
{
    auto projected = project_table(t, attrs);
    if (not (projected.schema() == selection.schema()))
        throw Error(Errc::schema_mismatch, "the selection table must be on the selected columns");
    const bool relational = is_relational(selection);
    std::map<std::string, std::vector<std::string>> selected;
    for (auto &[k, r] : selection.rows())
        selected[render_record(r)].push_back(k);
    std::map<std::string, Record> rows;
    for (auto &[k, r] : projected.rows()) {
        auto it = selected.find(render_record(r));
        if (it == selected.end())
            continue;
        for (auto &k2 : it->second)
            rows.emplace(relational ? k : tuple_key(std::vector<std::string>{k, k2}), t.row(k));
    }
    return Table(t.schema(), std::move(rows));
}

Table image_table(const Table &t)
{
    std::set<std::string> seen;
    std::map<std::string, Record> rows;
    for (auto &[k, r] : t.rows()) {
        if (seen.insert(render_record(r)).second)
            rows.emplace(k, r);
    }
    return Table(t.schema(), std::move(rows));
}

bool is_relational(const Table &t)
{
    std::set<std::string> seen;
    for (auto &[_, r] : t.rows()) {
        if (not seen.insert(render_record(r)).second)
            return false;
    }
    return true;
}

Table terminal_table(TypeSpecPtr spec)
{
    return Table(SimpleSchema(std::move(spec), {}), {{"*", Record{}}});
}

Table initial_table(TypeSpecPtr spec)
{
    std::vector<Attribute> attrs;
    for (auto &name : spec->names())
        attrs.push_back({name, name});
    return Table(SimpleSchema(std::move(spec), std::move(attrs)));
}

}
