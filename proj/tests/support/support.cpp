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

#include "support.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>

#include "sdb/io.hpp"

namespace sdb::testing {

std::uint64_t test_seed()
{
    static const std::uint64_t seed = [] {
        if (const char *env = std::getenv("SDB_SEED"); env and *env)
            return static_cast<std::uint64_t>(std::strtoull(env, nullptr, 10));
        return std::uint64_t{20260101};
    }();
    return seed;
}

std::mt19937_64 make_rng(std::uint64_t salt)
{
    std::seed_seq seq{test_seed(), salt};
    return std::mt19937_64(seq);
}

TypeSpecPtr str_int_spec()
{
    auto spec = std::make_shared<TypeSpec>();
    spec->add("Str", DataTypeDomain::strings());
    spec->add("Z", DataTypeDomain::integers());
    return spec;
}

TypeSpecPtr bool_spec()
{
    auto spec = std::make_shared<TypeSpec>();
    spec->add("Bool", DataTypeDomain::booleans());
    return spec;
}

TypeSpecPtr random_spec()
{
    auto spec = std::make_shared<TypeSpec>();
    spec->add("Bool", DataTypeDomain::booleans());
    spec->add("Color", DataTypeDomain::enumeration({"red", "green", "blue"}));
    spec->add("Str", DataTypeDomain::strings());
    return spec;
}

Value str(const TypeSpecPtr &spec, const std::string &s) { return make_value(*spec, "Str", s); }
Value integer(const TypeSpecPtr &spec, std::int64_t n) { return make_value(*spec, "Z", n); }
Value boolean(const TypeSpecPtr &spec, bool b) { return make_value(*spec, "Bool", b); }

Database build_db(const SchemaPtr &x, const VertexRows &vertices, const SimplexRows &simplices)
{
    const auto &schema = *x;
    std::vector<Section> sections(schema.size());
    DataMap vertex_data(schema.size());
    std::vector<std::vector<std::pair<std::string, std::vector<std::string>>>> named(schema.size());
    for (auto &[id, rows] : vertices) {
        auto v = schema.index_of(id);
        auto sorted = rows;
        std::sort(sorted.begin(), sorted.end(), [](auto &a, auto &b) { return a.first < b.first; });
        for (auto &[k, value] : sorted) {
            sections[v].keys.push_back(k);
            vertex_data[v].push_back({value});
        }
    }
    for (auto &[id, rows] : simplices) {
        auto s = schema.index_of(id);
        named[s] = rows;
        std::sort(named[s].begin(), named[s].end(), [](auto &a, auto &b) { return a.first < b.first; });
        for (auto &row : named[s])
            sections[s].keys.push_back(row.first);
    }
    for (std::size_t s = 0; s < schema.size(); ++s) {
        sections[s].faces.assign(schema[s].faces.size(), {});
        for (auto &[k, faces] : named[s]) {
            if (faces.size() != schema[s].faces.size())
                throw Error(Errc::arity, "simplex '" + schema[s].id + "' key '" + k + "' needs one key per face");
            for (std::size_t i = 0; i < faces.size(); ++i) {
                auto idx = sections[schema[s].faces[i]].index_of(faces[i]);
                if (idx == npos)
                    throw Error(Errc::invalid_sheaf, "unknown face key '" + faces[i] + "'");
                sections[s].faces[i].push_back(idx);
            }
        }
    }
    KeySheaf keys(x, std::move(sections));
    auto data = derive_data(keys, vertex_data);
    return Database(std::move(keys), std::move(data));
}

SchemaPtr edge_schema(const TypeSpecPtr &spec, const std::string &id, std::pair<std::string, std::string> v0,
                      std::pair<std::string, std::string> v1)
{
    return Schema::Builder(spec)
        .add_vertex(v0.first, v0.first, v0.second)
        .add_vertex(v1.first, v1.first, v1.second)
        .add_simplex(id, {v1.first, v0.first})
        .build();
}

SchemaPtr random_schema(std::mt19937_64 &rng, const TypeSpecPtr &spec, std::size_t max_simplices,
                        const std::string &prefix, std::size_t max_vertices)
{
    auto types = spec->names();
    auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
    auto nv = 1 + pick(std::min(max_vertices, max_simplices));
    Schema::Builder b(spec);
    std::vector<std::string> ids;
    for (std::size_t v = 0; v < nv; ++v) {
        ids.push_back(prefix + std::to_string(v));
        b.add_vertex(ids.back(), ids.back(), types[pick(types.size())]);
    }
    std::size_t budget = max_simplices - nv;
    std::vector<std::pair<std::size_t, std::size_t>> candidates;
    for (std::size_t i = 0; i < nv; ++i) {
        for (std::size_t j = i + 1; j < nv; ++j)
            candidates.push_back(pick(2) == 0 ? std::pair{i, j} : std::pair{j, i});
    }
    std::shuffle(candidates.begin(), candidates.end(), rng);
    std::map<std::pair<std::size_t, std::size_t>, std::string> edges;
    auto wanted = budget == 0 ? 0 : pick(std::min(budget, candidates.size()) + 1);
    for (std::size_t e = 0; e < wanted; ++e) {
        auto [i, j] = candidates[e];
        auto id = prefix + "e" + std::to_string(i) + std::to_string(j);
        b.add_simplex(id, {ids[j], ids[i]});
        edges[{i, j}] = id;
    }
    budget -= wanted;
    for (std::size_t a = 0; a < nv and budget > 0; ++a) {
        for (std::size_t c = 0; c < nv and budget > 0; ++c) {
            for (std::size_t m = 0; m < nv and budget > 0; ++m) {
                if (a == c or a == m or c == m)
                    continue;
                auto ab = edges.find({a, c});
                auto bc = edges.find({c, m});
                auto ac = edges.find({a, m});
                if (ab == edges.end() or bc == edges.end() or ac == edges.end() or pick(2) == 0)
                    continue;
                b.add_simplex(prefix + "t" + std::to_string(a) + std::to_string(c) + std::to_string(m),
                              {bc->second, ac->second, ab->second});
                --budget;
            }
        }
    }
    return b.build();
}

std::vector<Value> value_pool(const TypeSpecPtr &spec, const std::string &type)
{
    const auto &domain = spec->domain(type);
    switch (domain.kind()) {
    case DomainKind::boolean:
        return {make_value(*spec, type, false), make_value(*spec, type, true)};
    case DomainKind::enumeration:
        return enumerate_domain(*spec, type);
    case DomainKind::string:
        return {make_value(*spec, type, std::string("a")), make_value(*spec, type, std::string("b")),
                make_value(*spec, type, std::string("c"))};
    case DomainKind::integer:
        return {make_value(*spec, type, std::int64_t{1}), make_value(*spec, type, std::int64_t{2}),
                make_value(*spec, type, std::int64_t{3})};
    }
    return {};
}

Database random_db(std::mt19937_64 &rng, const SchemaPtr &x, std::size_t max_keys, std::size_t min_vertex_keys)
{
    const auto &schema = *x;
    auto pick = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
    auto key_name = [](std::size_t i) { return "k" + std::to_string(i + 1); };
    std::vector<Section> sections(schema.size());
    DataMap vertex_data(schema.size());
    for (std::size_t s = 0; s < schema.size(); ++s) {
        const auto &simplex = schema[s];
        sections[s].faces.assign(simplex.faces.size(), {});
        if (simplex.dim == 0) {
            auto pool = value_pool(schema.spec(), simplex.type);
            auto n = pick(std::min(min_vertex_keys, max_keys), max_keys);
            for (std::size_t k = 0; k < n; ++k) {
                sections[s].keys.push_back(key_name(k));
                vertex_data[s].push_back({pool[pick(0, pool.size() - 1)]});
            }
            continue;
        }
        auto n = pick(0, max_keys);
        std::size_t made = 0;
        for (std::size_t attempt = 0; attempt < n; ++attempt) {
            std::vector<std::size_t> choice(simplex.faces.size());
            std::function<bool(std::size_t)> fill = [&](std::size_t i) {
                if (i == simplex.faces.size())
                    return true;
                const auto &face = sections[simplex.faces[i]];
                std::vector<std::size_t> order(face.size());
                for (std::size_t k = 0; k < order.size(); ++k)
                    order[k] = k;
                std::shuffle(order.begin(), order.end(), rng);
                for (auto k : order) {
                    bool ok = true;
                    for (std::size_t j = 0; j < i and ok and simplex.dim >= 2; ++j) {
                        // d_{i-1} of face j meets d_j of face i
                        const auto &fj = sections[simplex.faces[j]];
                        ok = fj.faces[i - 1][choice[j]] == face.faces[j][k];
                    }
                    if (not ok)
                        continue;
                    choice[i] = k;
                    if (fill(i + 1))
                        return true;
                }
                return false;
            };
            if (not fill(0))
                break;
            sections[s].keys.push_back(key_name(made++));
            for (std::size_t i = 0; i < choice.size(); ++i)
                sections[s].faces[i].push_back(choice[i]);
        }
    }
    KeySheaf keys(x, std::move(sections));
    auto data = derive_data(keys, vertex_data);
    return Database(std::move(keys), std::move(data));
}

namespace {

// The least rendering over all reorderings of keys within sections.
std::string canonical_form(const KeySheaf &keys, const DataMap &data)
{
    const auto &x = *keys.schema();
    std::vector<std::vector<std::size_t>> perm(x.size());
    for (std::size_t s = 0; s < x.size(); ++s) {
        perm[s].resize(keys[s].size());
        for (std::size_t k = 0; k < perm[s].size(); ++k)
            perm[s][k] = k;
    }
    std::string best;
    bool first = true;
    std::function<void(std::size_t)> go = [&](std::size_t s) {
        if (s == x.size()) {
            std::string text;
            for (std::size_t t = 0; t < x.size(); ++t) {
                std::vector<std::size_t> inverse(perm[t].size());
                for (std::size_t k = 0; k < perm[t].size(); ++k)
                    inverse[perm[t][k]] = k;
                text += "|";
                for (auto old : inverse) {
                    text += render_record(data[t][old]);
                    for (std::size_t i = 0; i < x[t].faces.size(); ++i)
                        text += "," + std::to_string(perm[x[t].faces[i]][keys[t].faces[i][old]]);
                    text += ";";
                }
            }
            if (first or text < best)
                best = std::move(text);
            first = false;
            return;
        }
        std::sort(perm[s].begin(), perm[s].end());
        do {
            go(s + 1);
        } while (std::next_permutation(perm[s].begin(), perm[s].end()));
    };
    go(0);
    return best;
}

}

std::vector<Database> all_small_dbs(const SchemaPtr &x, std::size_t max_keys)
{
    const auto &schema = *x;
    std::vector<Database> out;
    std::set<std::string> seen;
    std::vector<Section> sections(schema.size());
    DataMap vertex_data(schema.size());
    auto key_name = [](std::size_t i) { return "k" + std::to_string(i + 1); };
    // nondecreasing index sequences of length n over m choices
    auto multisets = [](std::size_t m, std::size_t n) {
        std::vector<std::vector<std::size_t>> all;
        std::vector<std::size_t> cur;
        std::function<void(std::size_t)> go = [&](std::size_t from) {
            if (cur.size() == n) {
                all.push_back(cur);
                return;
            }
            for (std::size_t i = from; i < m; ++i) {
                cur.push_back(i);
                go(i);
                cur.pop_back();
            }
        };
        go(0);
        return all;
    };
    std::function<void(std::size_t)> fill = [&](std::size_t s) {
        if (s == schema.size()) {
            KeySheaf keys(x, sections);
            auto data = derive_data(keys, vertex_data);
            if (seen.insert(canonical_form(keys, data)).second)
                out.emplace_back(std::move(keys), std::move(data));
            return;
        }
        const auto &simplex = schema[s];
        if (simplex.dim == 0) {
            auto pool = value_pool(schema.spec(), simplex.type);
            for (std::size_t n = 0; n <= max_keys; ++n) {
                for (auto &choice : multisets(pool.size(), n)) {
                    sections[s] = Section{};
                    vertex_data[s].clear();
                    for (std::size_t k = 0; k < n; ++k) {
                        sections[s].keys.push_back(key_name(k));
                        vertex_data[s].push_back({pool[choice[k]]});
                    }
                    fill(s + 1);
                }
            }
            return;
        }
        std::vector<std::vector<std::size_t>> tuples{{}};
        for (std::size_t i = 0; i < simplex.faces.size(); ++i) {
            std::vector<std::vector<std::size_t>> next;
            const auto &face = sections[simplex.faces[i]];
            for (auto &t : tuples) {
                for (std::size_t k = 0; k < face.size(); ++k) {
                    bool ok = true;
                    for (std::size_t j = 0; j < i and ok and simplex.dim >= 2; ++j)
                        ok = sections[simplex.faces[j]].faces[i - 1][t[j]] == face.faces[j][k];
                    if (not ok)
                        continue;
                    auto u = t;
                    u.push_back(k);
                    next.push_back(std::move(u));
                }
            }
            tuples = std::move(next);
        }
        for (std::size_t n = 0; n <= max_keys; ++n) {
            for (auto &choice : multisets(tuples.size(), n)) {
                sections[s] = Section{};
                sections[s].faces.assign(simplex.faces.size(), {});
                for (std::size_t k = 0; k < n; ++k) {
                    sections[s].keys.push_back(key_name(k));
                    for (std::size_t i = 0; i < simplex.faces.size(); ++i)
                        sections[s].faces[i].push_back(tuples[choice[k]][i]);
                }
                fill(s + 1);
            }
        }
    };
    fill(0);
    return out;
}

Database keep_keys(const Database &db, const std::vector<std::vector<bool>> &keep)
{
    const auto &x = *db.schema();
    std::vector<std::vector<std::size_t>> remap(x.size());
    std::vector<Section> sections(x.size());
    DataMap data(x.size());
    for (std::size_t s = 0; s < x.size(); ++s) {
        const auto &in = db[s];
        remap[s].assign(in.size(), npos);
        sections[s].faces.assign(x[s].faces.size(), {});
        for (std::size_t k = 0; k < in.size(); ++k) {
            bool kept = keep[s][k];
            for (std::size_t i = 0; i < x[s].faces.size() and kept; ++i)
                kept = remap[x[s].faces[i]][in.faces[i][k]] != npos;
            if (not kept)
                continue;
            remap[s][k] = sections[s].keys.size();
            sections[s].keys.push_back(in.keys[k]);
            for (std::size_t i = 0; i < x[s].faces.size(); ++i)
                sections[s].faces[i].push_back(remap[x[s].faces[i]][in.faces[i][k]]);
            data[s].push_back(db.record(s, k));
        }
    }
    return Database(KeySheaf(db.schema(), std::move(sections)), std::move(data));
}

oracle::ExplicitDatabase to_explicit(const Database &db) { return oracle::parse_database(io::save_database(db)); }

oracle::ExplicitDatabase restrict_explicit(const oracle::ExplicitDatabase &db, const std::set<std::string> &ids)
{
    oracle::ExplicitDatabase out{db.spec, {}};
    for (auto &s : db.simplices) {
        if (ids.contains(s.id))
            out.simplices.push_back(s);
    }
    return out;
}

oracle::FlatTable to_flat(const Table &t)
{
    oracle::FlatTable out;
    for (auto &a : t.schema().attributes())
        out.columns.push_back({a.name, a.type});
    for (auto &[k, r] : t.rows())
        out.rows.push_back({k, r});
    return out;
}

std::vector<std::string> record_multiset(const Table &t) { return oracle::tuple_multiset(to_flat(t)); }

std::set<std::string> subschema_ids(const Schema &x, const Subschema &s)
{
    std::set<std::string> out;
    for (auto i : s.list())
        out.insert(x[i].id);
    return out;
}

Subschema random_subschema(std::mt19937_64 &rng, const Schema &x)
{
    std::vector<std::size_t> chosen;
    std::bernoulli_distribution coin(0.4);
    for (std::size_t s = 0; s < x.size(); ++s) {
        if (coin(rng))
            chosen.push_back(s);
    }
    if (chosen.empty())
        chosen.push_back(std::uniform_int_distribution<std::size_t>(0, x.size() - 1)(rng));
    return closure(x, chosen);
}

}
