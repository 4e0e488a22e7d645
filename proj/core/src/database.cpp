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

#include "sdb/database.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_map>

#include "sdb/keys.hpp"

namespace sdb {

namespace {

SheafData as_sheaf_data(const Database &db)
{
    return {db.keys(), db.data()};
}

/// Keeps the marked keys; faces of kept keys must be kept.
Database keep_keys(const Database &db, const std::vector<std::vector<bool>> &keep)
{
    const auto &x = *db.schema();
    std::vector<std::vector<std::size_t>> renumber(x.size());
    std::vector<Section> sections(x.size());
    DataMap data(x.size());
    for (std::size_t s = 0; s < x.size(); ++s) {
        renumber[s].assign(db[s].size(), npos);
        for (std::size_t k = 0; k < db[s].size(); ++k) {
            if (not keep[s][k])
                continue;
            renumber[s][k] = sections[s].keys.size();
            sections[s].keys.push_back(db[s].keys[k]);
            data[s].push_back(db.record(s, k));
        }
    }
    for (std::size_t s = 0; s < x.size(); ++s) {
        for (std::size_t i = 0; i < x[s].faces.size(); ++i) {
            const auto face = x[s].faces[i];
            std::vector<std::size_t> map;
            for (std::size_t k = 0; k < db[s].size(); ++k) {
                if (not keep[s][k])
                    continue;
                auto target = renumber[face][db[s].faces[i][k]];
                if (target == npos)
                    throw Error(Errc::invalid_sheaf, "a kept key on '" + x[s].id + "' restricts to a removed key");
                map.push_back(target);
            }
            sections[s].faces.push_back(std::move(map));
        }
    }
    return Database(KeySheaf(db.schema(), std::move(sections)), std::move(data));
}

/// The same sections on a structurally equal schema.
Database rebase(const Database &db, const SchemaPtr &schema)
{
    if (db.schema() == schema)
        return db;
    if (not (*db.schema() == *schema))
        throw Error(Errc::schema_mismatch, "cannot move a database to a different schema");
    return Database(KeySheaf(schema, db.keys().sections()), db.data());
}

std::vector<std::size_t> identity_map(std::size_t n)
{
    std::vector<std::size_t> out(n);
    std::iota(out.begin(), out.end(), 0);
    return out;
}

const Schema & node_schema(const DbNode &node)
{
    if (auto *db = std::get_if<DatabasePtr>(&node))
        return *(*db)->schema();
    return *std::get<FinalDb>(node).schema;
}

SchemaPtr node_schema_ptr(const DbNode &node)
{
    if (auto *db = std::get_if<DatabasePtr>(&node))
        return (*db)->schema();
    return std::get<FinalDb>(node).schema;
}

void check_relational(const Database &selection)
{
    if (not is_relational(selection))
        throw Error(Errc::not_relational, "the selection database must be relational");
}

}

Database::Database(KeySheaf keys, DataMap data) : keys_(std::move(keys)), data_(std::move(data))
{
    auto violations = validate_sheaf_and_data(keys_, &data_);
    if (not violations.empty()) {
        const auto &v = violations.front();
        throw Error(Errc::invalid_sheaf, v.kind + " at '" + v.simplex + "': " + v.detail);
    }
}

Database Database::empty(const SchemaPtr &schema)
{
    std::vector<Section> sections(schema->size());
    for (std::size_t s = 0; s < schema->size(); ++s)
        sections[s].faces.assign((*schema)[s].faces.size(), {});
    return Database(KeySheaf(schema, std::move(sections)), DataMap(schema->size()));
}

std::size_t Database::key_count() const
{
    std::size_t n = 0;
    for (auto &sec : keys_.sections())
        n += sec.size();
    return n;
}

bool Database::operator==(const Database &other) const
{
    return keys_ == other.keys_ and data_ == other.data_;
}

std::vector<Violation> validate_db_morphism(const DbMorphism &m)
{
    std::vector<Violation> out;
    const auto &source = *m.source;
    const auto &target = *m.target;
    const auto &x = *source.schema();
    const auto &y = *target.schema();
    if (not (*m.f.source() == y) or not (*m.f.target() == x)) {
        out.push_back({"shape", "", "the schema map must run from the target schema to the source schema"});
        return out;
    }
    if (m.f_sharp.size() != y.size()) {
        out.push_back({"shape", "", "one key map per target simplex is required"});
        return out;
    }
    for (std::size_t s = 0; s < y.size(); ++s) {
        const auto t = m.f[s].target;
        if (m.f_sharp[s].size() != source[t].size()) {
            out.push_back({"shape", y[s].id, "key map is not total"});
            return out;
        }
        for (auto k : m.f_sharp[s]) {
            if (k >= target[s].size()) {
                out.push_back({"shape", y[s].id, "key map points outside the section"});
                return out;
            }
        }
    }
    for (std::size_t s = 0; s < y.size(); ++s) {
        const auto &img = m.f[s];
        for (std::size_t i = 0; i < y[s].faces.size(); ++i) {
            const auto face = y[s].faces[i];
            const auto t2 = m.f[face].target;
            auto positions = t2 == img.target ? std::vector<std::size_t>{} : x.face_positions(img.target, t2);
            for (std::size_t k = 0; k < source[img.target].size(); ++k) {
                auto restricted = t2 == img.target ? k : source.keys().restrict_along(img.target, k, positions);
                if (target[s].faces[i][m.f_sharp[s][k]] != m.f_sharp[face][restricted])
                    out.push_back({"naturality", y[s].id,
                                   "key '" + source[img.target].keys[k] + "' along face " + std::to_string(i)});
            }
        }
        if (not m.integrity)
            continue;
        for (std::size_t k = 0; k < source[img.target].size(); ++k) {
            const auto &r = source.record(img.target, k);
            Record pulled;
            for (auto a : img.collapse)
                pulled.push_back(r[a]);
            if (pulled != target.record(s, m.f_sharp[s][k]))
                out.push_back({"integrity", y[s].id,
                               "key '" + source[img.target].keys[k] + "' maps to '" +
                                   target[s].keys[m.f_sharp[s][k]] + "' with a different record"});
        }
    }
    return out;
}

DbMorphism identity_db_morphism(const DatabasePtr &db)
{
    std::vector<std::vector<std::size_t>> f_sharp;
    for (auto &sec : db->keys().sections())
        f_sharp.push_back(identity_map(sec.size()));
    return {db, db, SchemaMorphism::identity(db->schema()), std::move(f_sharp), true};
}

DbLimit db_limit(const std::vector<DbNode> &nodes, const std::vector<DbArrow> &arrows)
{
    std::vector<SchemaPtr> schemas;
    for (auto &n : nodes)
        schemas.push_back(node_schema_ptr(n));
    std::vector<DiagramArrow> reversed;
    for (auto &a : arrows) {
        if (a.from >= nodes.size() or a.to >= nodes.size())
            throw Error(Errc::composition, "arrow endpoint outside the diagram");
        if (not (*a.f.source() == node_schema(nodes[a.to])) or not (*a.f.target() == node_schema(nodes[a.from])))
            throw Error(Errc::composition, "arrow schema map must run from the target node to the source node");
        if (std::holds_alternative<FinalDb>(nodes[a.from]) and std::holds_alternative<DatabasePtr>(nodes[a.to]))
            throw Error(Errc::invalid_morphism, "arrows out of a final database are not supported");
        reversed.push_back({a.to, a.from, a.f});
    }
    auto colimit = schema_colimit(schemas, reversed);
    const auto &l = *colimit.schema;

    std::vector<std::optional<CylinderSheaf>> cylinders(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (auto *db = std::get_if<DatabasePtr>(&nodes[i]))
            cylinders[i] = pushforward_plus(colimit.legs[i], (*db)->keys(), (*db)->data());
    }

    std::vector<CylinderArrow> row_arrows;
    for (auto &a : arrows) {
        if (not cylinders[a.from] or not cylinders[a.to])
            continue;
        const auto &xb = node_schema(nodes[a.to]);
        if (a.f_sharp.size() != xb.size())
            throw Error(Errc::invalid_morphism, "arrow key maps must cover every simplex of the target node");
        CylinderArrow ca{a.from, a.to, std::vector<std::vector<std::size_t>>(l.size())};
        for (std::size_t s = 0; s < l.size(); ++s) {
            const auto &from_sec = cylinders[a.from]->sections[s];
            const auto &to_sec = cylinders[a.to]->sections[s];
            std::map<Family, std::size_t> to_row;
            for (std::size_t r = 0; r < to_sec.size(); ++r)
                to_row.emplace(to_sec.sources[r], r);
            auto pre = preimage_subschema(colimit.legs[a.to], closure(l, {s}));
            for (std::size_t r = 0; r < from_sec.size(); ++r) {
                const auto &fam = from_sec.sources[r];
                Family image(xb.size(), npos);
                for (std::size_t y = 0; y < xb.size(); ++y) {
                    if (pre.contains(y))
                        image[y] = a.f_sharp[y].at(fam[a.f[y].target]);
                }
                auto it = to_row.find(image);
                ca.rows[s].push_back(it == to_row.end() ? npos : it->second);
            }
        }
        row_arrows.push_back(std::move(ca));
    }

    std::vector<const CylinderSheaf *> pointers;
    for (auto &c : cylinders)
        pointers.push_back(c ? &*c : nullptr);
    auto limit = cylinder_limit(colimit.schema, pointers, row_arrows);
    auto materialized = materialize(limit.sheaf);
    auto result = std::make_shared<const Database>(std::move(materialized.result));

    std::vector<std::optional<DbMorphism>> legs(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (not cylinders[i])
            continue;
        const auto &leg = colimit.legs[i];
        const auto &xi = *leg.source();
        std::vector<std::vector<std::size_t>> f_sharp(xi.size());
        for (std::size_t x = 0; x < xi.size(); ++x) {
            const auto t = leg[x].target;
            for (std::size_t k = 0; k < (*result)[t].size(); ++k) {
                auto row = materialized.origin[t][k];
                auto component = limit.components[t][row][i];
                f_sharp[x].push_back(cylinders[i]->sections[t].sources[component][x]);
            }
        }
        legs[i] = DbMorphism{result, std::get<DatabasePtr>(nodes[i]), leg, std::move(f_sharp), true};
    }
    return {std::move(result), std::move(legs)};
}

DbLimit db_product(const DatabasePtr &a, const DatabasePtr &b)
{
    return db_limit({a, b}, {});
}

DbLimit db_join(const DatabasePtr &a, const DatabasePtr &b, const std::vector<std::pair<std::string, std::string>> &on)
{
    const auto &xa = *a->schema();
    const auto &xb = *b->schema();
    Schema::Builder builder(a->spec());
    std::vector<std::size_t> to_a, to_b;
    std::set<std::string> used;
    for (auto &[va, vb] : on) {
        auto ia = xa.index_of(va);
        auto ib = xb.index_of(vb);
        if (xa[ia].dim != 0 or xb[ib].dim != 0)
            throw Error(Errc::invalid_schema, "join columns must be vertices");
        if (xa[ia].type != xb[ib].type)
            throw Error(Errc::type_mismatch, "'" + va + "' is " + xa[ia].type + " but '" + vb + "' is " + xb[ib].type);
        if (not used.insert(va).second)
            throw Error(Errc::invalid_schema, "'" + va + "' is joined twice");
        builder.add_vertex(va, xa[ia].name, xa[ia].type);
        to_a.push_back(ia);
        to_b.push_back(ib);
    }
    auto shared = builder.build();
    auto fa = SchemaMorphism::from_vertex_map(shared, a->schema(), to_a);
    auto fb = SchemaMorphism::from_vertex_map(shared, b->schema(), to_b);
    return db_limit({a, b, FinalDb{shared}}, {{0, 2, fa, {}}, {1, 2, fb, {}}});
}

Database db_colimit_fixed_schema(const std::vector<DatabasePtr> &nodes, const std::vector<DbColimitArrow> &arrows)
{
    if (nodes.empty())
        throw Error(Errc::unsupported_colimit, "an empty diagram does not determine a schema");
    const auto &schema = nodes.front()->schema();
    for (auto &n : nodes) {
        if (not (*n->schema() == *schema))
            throw Error(Errc::unsupported_colimit, "colimits are only computed over a fixed schema");
    }
    std::vector<SheafData> copies;
    copies.reserve(nodes.size());
    for (auto &n : nodes)
        copies.push_back({KeySheaf(schema, n->keys().sections()), n->data()});
    std::vector<const SheafData *> pointers;
    for (auto &c : copies)
        pointers.push_back(&c);
    std::vector<SheafArrow> sheaf_arrows;
    for (auto &a : arrows)
        sheaf_arrows.push_back({a.from, a.to, a.keys});
    return Database(sheaf_colimit(schema, pointers, sheaf_arrows).result);
}

Database db_coproduct(const DatabasePtr &a, const DatabasePtr &b)
{
    return db_colimit_fixed_schema({a, b}, {});
}

Database db_union(const DatabasePtr &a, const DatabasePtr &b)
{
    if (not (*a->schema() == *b->schema()))
        throw Error(Errc::unsupported_colimit, "UNION is only defined over a fixed schema");
    const auto &x = *a->schema();
    // the overlap: pairs with equal records whose restrictions are overlap pairs
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> pairs(x.size());
    std::vector<std::map<std::pair<std::size_t, std::size_t>, std::size_t>> index(x.size());
    for (std::size_t s = 0; s < x.size(); ++s) {
        for (std::size_t ka = 0; ka < (*a)[s].size(); ++ka) {
            for (std::size_t kb = 0; kb < (*b)[s].size(); ++kb) {
                if (a->record(s, ka) != b->record(s, kb))
                    continue;
                bool ok = true;
                for (std::size_t i = 0; i < x[s].faces.size() and ok; ++i)
                    ok = index[x[s].faces[i]].contains({(*a)[s].faces[i][ka], (*b)[s].faces[i][kb]});
                if (ok)
                    pairs[s].emplace_back(ka, kb);
            }
        }
        std::vector<std::string> names;
        for (auto [ka, kb] : pairs[s])
            names.push_back(tuple_key(std::vector<std::string>{(*a)[s].keys[ka], (*b)[s].keys[kb]}));
        std::vector<std::size_t> order(names.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](auto i, auto j) { return names[i] < names[j]; });
        std::vector<std::pair<std::size_t, std::size_t>> sorted;
        for (auto i : order) {
            index[s].emplace(pairs[s][i], sorted.size());
            sorted.push_back(pairs[s][i]);
        }
        pairs[s] = std::move(sorted);
    }
    std::vector<Section> sections(x.size());
    DataMap data(x.size());
    std::vector<std::vector<std::size_t>> to_a(x.size()), to_b(x.size());
    for (std::size_t s = 0; s < x.size(); ++s) {
        for (auto [ka, kb] : pairs[s]) {
            sections[s].keys.push_back(tuple_key(std::vector<std::string>{(*a)[s].keys[ka], (*b)[s].keys[kb]}));
            data[s].push_back(a->record(s, ka));
            to_a[s].push_back(ka);
            to_b[s].push_back(kb);
        }
        for (std::size_t i = 0; i < x[s].faces.size(); ++i) {
            std::vector<std::size_t> map;
            for (auto [ka, kb] : pairs[s])
                map.push_back(index[x[s].faces[i]].at({(*a)[s].faces[i][ka], (*b)[s].faces[i][kb]}));
            sections[s].faces.push_back(std::move(map));
        }
    }
    auto overlap = std::make_shared<const Database>(KeySheaf(a->schema(), std::move(sections)), std::move(data));

    std::vector<SheafData> copies{as_sheaf_data(*a), {KeySheaf(a->schema(), b->keys().sections()), b->data()},
                                  as_sheaf_data(*overlap)};
    auto colimit = sheaf_colimit(a->schema(), {&copies[0], &copies[1], &copies[2]},
                                 {{2, 0, std::move(to_a)}, {2, 1, std::move(to_b)}});
    // name classes by their members in `a` and `b` only
    std::vector<std::vector<std::string>> names(x.size());
    for (std::size_t s = 0; s < x.size(); ++s) {
        for (auto &members : colimit.classes[s]) {
            std::vector<std::string> tagged;
            for (auto [node, k] : members) {
                if (node < 2)
                    tagged.push_back(std::to_string(node + 1) + ":" + copies[node].keys[s].keys[k]);
            }
            std::sort(tagged.begin(), tagged.end());
            std::string name;
            for (auto &t : tagged)
                name += (name.empty() ? "" : "~") + t;
            names[s].push_back(std::move(name));
        }
    }
    return rename_keys(Database(std::move(colimit.result)), names);
}

Database db_insert(const DatabasePtr &db, const DatabasePtr &rows)
{
    return db_coproduct(db, rows);
}

Database db_project(const Database &db, const Subschema &s)
{
    auto r = restrict_schema(db.schema(), s);
    return Database(pullback(r.inclusion, db.keys(), db.data()));
}

Selection db_select(const DatabasePtr &db, const Subschema &s, const DatabasePtr &selection)
{
    const auto &x = *db->schema();
    auto r = restrict_schema(db->schema(), s);
    if (not (*selection->schema() == *r.schema))
        throw Error(Errc::schema_mismatch, "the selection must live on the selected subschema");
    check_relational(*selection);
    const auto &sel_schema = selection->schema();
    SchemaMorphism inclusion(sel_schema, db->schema(), r.inclusion.images());
    auto limit = db_limit({db, selection, FinalDb{sel_schema}},
                          {{0, 2, inclusion, {}}, {1, 2, SchemaMorphism::identity(sel_schema), {}}});
    std::vector<std::vector<bool>> selected(x.size());
    for (std::size_t t = 0; t < x.size(); ++t)
        selected[t].assign((*db)[t].size(), false);
    const auto &leg = *limit.legs[0];
    for (std::size_t t = 0; t < x.size(); ++t) {
        if (not s.contains(t))
            continue;
        for (auto k : leg.f_sharp[t])
            selected[t][k] = true;
    }
    return {std::move(limit), std::move(selected)};
}

Database db_delete(const DatabasePtr &db, const Subschema &s, const DatabasePtr &selection)
{
    const auto &x = *db->schema();
    auto sel = db_select(db, s, selection);
    std::vector<std::vector<bool>> keep(x.size());
    for (std::size_t u = 0; u < x.size(); ++u) {
        keep[u].assign((*db)[u].size(), true);
        auto faces = x.closure_of(u);
        for (std::size_t k = 0; k < (*db)[u].size(); ++k) {
            for (auto t : faces) {
                if (s.contains(t) and sel.selected[t][db->keys().restrict_to(u, k, t)]) {
                    keep[u][k] = false;
                    break;
                }
            }
        }
    }
    return keep_keys(*db, keep);
}

bool is_relational(const Database &db)
{
    for (std::size_t s = 0; s < db.schema()->size(); ++s) {
        std::set<std::string> seen;
        for (auto &r : db.data()[s]) {
            if (not seen.insert(render_record(r)).second)
                return false;
        }
    }
    return true;
}

Database to_relational(const Database &db)
{
    return Database(image_data(db.keys(), db.data()).result);
}

Database from_table(const Table &t)
{
    auto schema = simplex_schema(t.schema());
    const auto &x = *schema;
    auto keys = t.keys();
    std::vector<Section> sections(x.size());
    DataMap data(x.size());
    for (std::size_t s = 0; s < x.size(); ++s) {
        sections[s].keys = keys;
        sections[s].faces.assign(x[s].faces.size(), identity_map(keys.size()));
        for (auto &k : keys) {
            const auto &row = t.row(k);
            Record r;
            for (auto v : x[s].vertices)
                r.push_back(row[v]);
            data[s].push_back(std::move(r));
        }
    }
    return Database(KeySheaf(schema, std::move(sections)), std::move(data));
}

Table global_table(const Database &db)
{
    const auto &x = *db.schema();
    auto classifier = vertex_classifier(db.schema());
    auto families = evaluate_on_subschema(db.keys(), Subschema::whole(x));
    std::map<std::string, Record> rows;
    for (auto &fam : families.families) {
        Record r(classifier.columns.size(), Value("", std::int64_t{0}));
        for (std::size_t v = 0; v < x.size() and x[v].dim == 0; ++v)
            r[classifier.column_of[v][0]] = db.record(v, fam[v])[0];
        rows.emplace(family_key(db.keys(), families.maximal, fam), std::move(r));
    }
    return Table(classifier.columns, std::move(rows));
}

Database db_pullback(const SchemaMorphism &f, const Database &db)
{
    if (not (*f.target() == *db.schema()))
        throw Error(Errc::composition, "the schema map must land in the schema of the database");
    return Database(pullback(f, db.keys(), db.data()));
}

Database db_pushforward(const SchemaMorphism &f, const Database &db)
{
    if (not (*f.source() == *db.schema()))
        throw Error(Errc::composition, "the schema map must start at the schema of the database");
    return Database(materialize(pushforward_plus(f, db.keys(), db.data())).result);
}

Database db_extend(const SchemaMorphism &f, const Database &db)
{
    if (not (*f.source() == *db.schema()))
        throw Error(Errc::composition, "the schema map must start at the schema of the database");
    return Database(extend_by_empty(f, db.keys(), db.data()));
}

Database view_extract(const Database &db, const Subschema &s)
{
    return db_project(db, s);
}

Database view_commit_insert(const DatabasePtr &db, const Subschema &s, const DatabasePtr &updated)
{
    auto r = restrict_schema(db->schema(), s);
    const auto &v = *r.schema;
    if (not (*updated->schema() == v))
        throw Error(Errc::schema_mismatch, "the updated view must live on the view schema");
    auto view = Database(pullback(r.inclusion, db->keys(), db->data()));

    // the updated view: union of both by key name
    std::vector<Section> sections(v.size());
    DataMap data(v.size());
    for (std::size_t t = 0; t < v.size(); ++t) {
        std::map<std::string, std::pair<const Database *, std::size_t>> by_name;
        for (std::size_t k = 0; k < view[t].size(); ++k)
            by_name.emplace(view[t].keys[k], std::make_pair(&view, k));
        for (std::size_t k = 0; k < (*updated)[t].size(); ++k) {
            const auto &name = (*updated)[t].keys[k];
            auto [it, inserted] = by_name.emplace(name, std::make_pair(updated.get(), k));
            if (inserted)
                continue;
            const auto k0 = it->second.second;
            bool same = view.record(t, k0) == updated->record(t, k);
            for (std::size_t i = 0; i < v[t].faces.size() and same; ++i) {
                const auto f = v[t].faces[i];
                same = view[f].keys[view[t].faces[i][k0]] == (*updated)[f].keys[(*updated)[t].faces[i][k]];
            }
            if (not same)
                throw Error(Errc::invalid_sheaf, "key '" + name + "' on '" + v[t].id + "' changes an existing row");
        }
        for (auto &[name, src] : by_name) {
            sections[t].keys.push_back(name);
            data[t].push_back(src.first->record(t, src.second));
        }
    }
    for (std::size_t t = 0; t < v.size(); ++t) {
        for (std::size_t i = 0; i < v[t].faces.size(); ++i) {
            const auto f = v[t].faces[i];
            std::vector<std::size_t> map;
            for (auto &name : sections[t].keys) {
                auto k = view[t].index_of(name);
                const Database &src = k != npos ? view : *updated;
                if (k == npos)
                    k = (*updated)[t].index_of(name);
                map.push_back(sections[f].index_of(src[f].keys[src[t].faces[i][k]]));
            }
            sections[t].faces.push_back(std::move(map));
        }
    }
    Database merged(KeySheaf(r.schema, std::move(sections)), std::move(data));

    auto extended_view = extend_by_empty(r.inclusion, view.keys(), view.data());
    auto extended_merged = extend_by_empty(r.inclusion, merged.keys(), merged.data());
    const auto &x = *db->schema();
    std::vector<std::vector<std::size_t>> to_db(x.size()), to_merged(x.size());
    for (std::size_t t = 0; t < x.size(); ++t) {
        for (auto &name : extended_view.keys[t].keys) {
            to_db[t].push_back((*db)[t].index_of(name));
            to_merged[t].push_back(extended_merged.keys[t].index_of(name));
        }
    }
    auto base = as_sheaf_data(*db);
    auto colimit = sheaf_colimit(db->schema(), {&base, &extended_view, &extended_merged},
                                 {{1, 0, std::move(to_db)}, {1, 2, std::move(to_merged)}});
    std::vector<std::vector<std::string>> names(x.size());
    for (std::size_t t = 0; t < x.size(); ++t) {
        for (auto &members : colimit.classes[t]) {
            std::string name;
            for (auto [node, k] : members) {
                if (node == 0)
                    name = (*db)[t].keys[k];
            }
            if (name.empty()) {
                for (auto [node, k] : members) {
                    if (node == 2)
                        name = extended_merged.keys[t].keys[k];
                }
            }
            names[t].push_back(std::move(name));
        }
    }
    return rename_keys(Database(std::move(colimit.result)), names);
}

Database view_commit_delete(const DatabasePtr &db, const Subschema &s, const DatabasePtr &selection)
{
    auto sel = db_select(db, s, selection);
    auto r = restrict_schema(db->schema(), s);
    const auto &v = *r.schema;
    auto view = std::make_shared<const Database>(pullback(r.inclusion, db->keys(), db->data()));

    std::vector<std::vector<bool>> keep(v.size());
    for (std::size_t t = 0; t < v.size(); ++t) {
        keep[t].assign((*view)[t].size(), true);
        auto faces = v.closure_of(t);
        for (std::size_t k = 0; k < (*view)[t].size(); ++k) {
            for (auto u : faces) {
                if (sel.selected[r.inclusion[u].target][view->keys().restrict_to(t, k, u)]) {
                    keep[t][k] = false;
                    break;
                }
            }
        }
    }
    auto remaining = std::make_shared<const Database>(keep_keys(*view, keep));

    std::vector<std::vector<std::size_t>> identity(v.size()), inclusion(v.size());
    for (std::size_t t = 0; t < v.size(); ++t) {
        identity[t] = identity_map((*view)[t].size());
        for (auto &name : (*remaining)[t].keys)
            inclusion[t].push_back((*view)[t].index_of(name));
    }
    auto limit = db_limit({db, view, remaining}, {{0, 1, r.inclusion, std::move(identity)},
                                                  {2, 1, SchemaMorphism::identity(r.schema), std::move(inclusion)}});
    const auto &leg = *limit.legs[0];
    const auto &l = *limit.result->schema();
    std::vector<std::vector<std::string>> names(l.size());
    for (std::size_t x = 0; x < db->schema()->size(); ++x) {
        const auto t = leg.f[x].target;
        names[t].clear();
        for (auto k : leg.f_sharp[x])
            names[t].push_back((*db)[x].keys[k]);
    }
    auto renamed = rename_keys(*limit.result, names);
    if (*renamed.schema() == *db->schema())
        return rebase(renamed, db->schema());
    return renamed;
}

Database rename_keys(const Database &db, const std::vector<std::vector<std::string>> &names)
{
    const auto &x = *db.schema();
    std::vector<std::vector<std::size_t>> position(x.size());
    std::vector<std::vector<std::size_t>> order(x.size());
    for (std::size_t s = 0; s < x.size(); ++s) {
        if (names[s].size() != db[s].size())
            throw Error(Errc::invalid_sheaf, "one new name per key is required on '" + x[s].id + "'");
        order[s] = identity_map(names[s].size());
        std::sort(order[s].begin(), order[s].end(), [&](auto a, auto b) { return names[s][a] < names[s][b]; });
        position[s].resize(names[s].size());
        for (std::size_t i = 0; i < order[s].size(); ++i)
            position[s][order[s][i]] = i;
        for (std::size_t i = 1; i < order[s].size(); ++i) {
            if (names[s][order[s][i - 1]] == names[s][order[s][i]])
                throw Error(Errc::invalid_sheaf, "duplicate key '" + names[s][order[s][i]] + "' on '" + x[s].id + "'");
        }
    }
    std::vector<Section> sections(x.size());
    DataMap data(x.size());
    for (std::size_t s = 0; s < x.size(); ++s) {
        for (auto k : order[s]) {
            sections[s].keys.push_back(names[s][k]);
            data[s].push_back(db.record(s, k));
        }
        for (std::size_t i = 0; i < x[s].faces.size(); ++i) {
            const auto face = x[s].faces[i];
            std::vector<std::size_t> map;
            for (auto k : order[s])
                map.push_back(position[face][db[s].faces[i][k]]);
            sections[s].faces.push_back(std::move(map));
        }
    }
    return Database(KeySheaf(db.schema(), std::move(sections)), std::move(data));
}

CanonicalDb canonical_keys(const Database &db)
{
    const auto &x = *db.schema();
    std::vector<std::vector<std::string>> names(x.size());
    std::vector<std::map<std::string, std::string>> provenance(x.size());
    for (std::size_t s = 0; s < x.size(); ++s) {
        for (std::size_t k = 0; k < db[s].size(); ++k) {
            auto name = "k" + std::to_string(k);
            provenance[s].emplace(name, db[s].keys[k]);
            names[s].push_back(std::move(name));
        }
    }
    return {rename_keys(db, names), std::move(provenance)};
}

namespace {

/// Colors of keys refined by records, faces and cofaces.  Simplices of `db` are relabeled by `relabel`.
std::vector<std::vector<std::size_t>> refine_colors(const Database &db, const std::vector<std::size_t> &relabel,
                                                    std::map<std::string, std::size_t> &dictionary, std::size_t rounds)
{
    const auto &x = *db.schema();
    auto intern = [&](const std::string &s) { return dictionary.emplace(s, dictionary.size()).first->second; };
    std::vector<std::vector<std::size_t>> color(x.size());
    for (std::size_t s = 0; s < x.size(); ++s) {
        for (std::size_t k = 0; k < db[s].size(); ++k)
            color[s].push_back(intern("r" + render_record(db.record(s, k))));
    }
    for (std::size_t round = 0; round < rounds; ++round) {
        std::vector<std::vector<std::vector<std::string>>> up(x.size());
        for (std::size_t s = 0; s < x.size(); ++s)
            up[s].resize(db[s].size());
        for (std::size_t c = 0; c < x.size(); ++c) {
            for (std::size_t i = 0; i < x[c].faces.size(); ++i) {
                const auto f = x[c].faces[i];
                for (std::size_t k = 0; k < db[c].size(); ++k)
                    up[f][db[c].faces[i][k]].push_back(std::to_string(relabel[c]) + "." + std::to_string(i) + "." +
                                                       std::to_string(color[c][k]));
            }
        }
        std::vector<std::vector<std::size_t>> next(x.size());
        for (std::size_t s = 0; s < x.size(); ++s) {
            for (std::size_t k = 0; k < db[s].size(); ++k) {
                std::string sig = std::to_string(color[s][k]) + "|";
                for (std::size_t i = 0; i < x[s].faces.size(); ++i)
                    sig += std::to_string(color[x[s].faces[i]][db[s].faces[i][k]]) + ",";
                auto &u = up[s][k];
                std::sort(u.begin(), u.end());
                for (auto &e : u)
                    sig += "|" + e;
                next[s].push_back(intern(sig));
            }
        }
        color = std::move(next);
    }
    return color;
}

}

std::optional<DbIsomorphism> find_db_isomorphism(const Database &a, const Database &b, std::size_t cap)
{
    const auto &xa = *a.schema();
    const auto &xb = *b.schema();
    std::optional<DbIsomorphism> out;
    std::size_t steps = 0;
    for_each_schema_isomorphism(xa, xb, [&](const std::vector<std::size_t> &phi) {
        for (std::size_t s = 0; s < xa.size(); ++s) {
            if (a[s].size() != b[phi[s]].size())
                return false;
        }
        std::vector<std::size_t> inverse(xb.size());
        for (std::size_t s = 0; s < xa.size(); ++s)
            inverse[phi[s]] = s;
        std::map<std::string, std::size_t> dictionary;
        auto ca = refine_colors(a, identity_map(xa.size()), dictionary, 3);
        auto cb = refine_colors(b, inverse, dictionary, 3);

        std::vector<std::vector<std::size_t>> map(xa.size());
        std::vector<std::vector<bool>> used(xa.size());
        std::vector<std::pair<std::size_t, std::size_t>> slots;
        for (std::size_t s = 0; s < xa.size(); ++s) {
            map[s].assign(a[s].size(), npos);
            used[s].assign(a[s].size(), false);
            for (std::size_t k = 0; k < a[s].size(); ++k)
                slots.emplace_back(s, k);
        }
        auto rec = [&](auto &self, std::size_t q) -> bool {
            if (q == slots.size())
                return true;
            if (++steps > cap)
                throw Error(Errc::too_large, "isomorphism search exceeded " + std::to_string(cap) + " steps");
            auto [s, k] = slots[q];
            const auto t = phi[s];
            for (std::size_t j = 0; j < b[t].size(); ++j) {
                if (used[s][j] or cb[t][j] != ca[s][k] or b.record(t, j) != a.record(s, k))
                    continue;
                bool ok = true;
                for (std::size_t i = 0; i < xa[s].faces.size() and ok; ++i)
                    ok = b[t].faces[i][j] == map[xa[s].faces[i]][a[s].faces[i][k]];
                if (not ok)
                    continue;
                used[s][j] = true;
                map[s][k] = j;
                if (self(self, q + 1))
                    return true;
                used[s][j] = false;
            }
            map[s][k] = npos;
            return false;
        };
        if (not rec(rec, 0))
            return false;
        out = DbIsomorphism{phi, std::move(map)};
        return true;
    });
    return out;
}

Database initial_database(const TypeSpecPtr &spec)
{
    if (not spec->all_enumerable())
        throw Error(Errc::initial_not_materializable, "the initial database needs every type to be enumerable");
    auto types = spec->names();
    if (types.size() > 4)
        throw Error(Errc::too_large, "the initial database is only built for at most 4 types");
    Schema::Builder builder(spec);
    for (auto &t : types)
        builder.add_vertex(t, t, t);
    // ordered tuples of distinct types, by length
    std::vector<std::vector<std::size_t>> level;
    for (std::size_t i = 0; i < types.size(); ++i)
        level.push_back({i});
    auto id_of = [&](const std::vector<std::size_t> &tuple) {
        std::string id;
        for (auto i : tuple)
            id += (id.empty() ? "" : ",") + types[i];
        return id;
    };
    while (true) {
        std::vector<std::vector<std::size_t>> next;
        for (auto &tuple : level) {
            for (std::size_t i = 0; i < types.size(); ++i) {
                if (std::find(tuple.begin(), tuple.end(), i) != tuple.end())
                    continue;
                auto longer = tuple;
                longer.push_back(i);
                next.push_back(std::move(longer));
            }
        }
        if (next.empty())
            break;
        std::sort(next.begin(), next.end());
        for (auto &tuple : next) {
            std::vector<std::string> faces;
            for (std::size_t p = 0; p < tuple.size(); ++p) {
                auto face = tuple;
                face.erase(face.begin() + static_cast<std::ptrdiff_t>(p));
                faces.push_back(id_of(face));
            }
            builder.add_simplex(id_of(tuple), std::move(faces));
        }
        level = std::move(next);
    }
    auto schema = builder.build();
    const auto &x = *schema;

    std::vector<std::vector<Value>> domains;
    for (auto &t : types)
        domains.push_back(enumerate_domain(*spec, t));
    std::size_t total = 0;
    std::vector<Section> sections(x.size());
    DataMap data(x.size());
    std::vector<std::map<std::string, std::size_t>> index(x.size());
    for (std::size_t s = 0; s < x.size(); ++s) {
        std::vector<const std::vector<Value> *> ds;
        for (auto v : x[s].vertices)
            ds.push_back(&domains[v]);
        std::vector<std::pair<std::string, Record>> rows;
        std::vector<std::size_t> choice(ds.size(), 0);
        bool empty = std::any_of(ds.begin(), ds.end(), [](auto *d) { return d->empty(); });
        while (not empty) {
            Record r;
            std::vector<std::string> parts;
            for (std::size_t p = 0; p < ds.size(); ++p) {
                r.push_back((*ds[p])[choice[p]]);
                parts.push_back(render_value(r.back()));
            }
            rows.emplace_back(ds.size() == 1 ? parts[0] : tuple_key(parts), std::move(r));
            if (++total > 100000)
                throw Error(Errc::too_large, "the initial database has more than 100000 keys");
            std::size_t i = 0;
            while (i < choice.size() and ++choice[i] == ds[i]->size())
                choice[i++] = 0;
            if (i == choice.size())
                break;
        }
        std::sort(rows.begin(), rows.end(), [](auto &p, auto &q) { return p.first < q.first; });
        for (auto &[name, r] : rows) {
            index[s].emplace(render_record(r), sections[s].keys.size());
            sections[s].keys.push_back(name);
            data[s].push_back(std::move(r));
        }
    }
    for (std::size_t s = 0; s < x.size(); ++s) {
        for (std::size_t i = 0; i < x[s].faces.size(); ++i) {
            std::vector<std::size_t> map;
            for (auto &r : data[s]) {
                Record face = r;
                face.erase(face.begin() + static_cast<std::ptrdiff_t>(i));
                map.push_back(index[x[s].faces[i]].at(render_record(face)));
            }
            sections[s].faces.push_back(std::move(map));
        }
    }
    return Database(KeySheaf(schema, std::move(sections)), std::move(data));
}

}
