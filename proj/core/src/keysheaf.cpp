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

#include "sdb/keysheaf.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <unordered_map>

#include "sdb/detail/union_find.hpp"
#include "sdb/keys.hpp"

namespace sdb {

namespace {

std::vector<std::size_t> sort_permutation(const std::vector<std::string> &keys)
{
    std::vector<std::size_t> order(keys.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return keys[a] < keys[b]; });
    return order;
}

std::vector<std::size_t> all_positions(std::size_t dim)
{
    std::vector<std::size_t> p(dim + 1);
    std::iota(p.begin(), p.end(), 0);
    return p;
}

std::string render_partial(const std::vector<std::optional<Value>> &values, const std::vector<std::size_t> &positions)
{
    Record r;
    for (auto p : positions)
        r.push_back(*values[p]);
    return render_record(r);
}

}

std::size_t Section::index_of(std::string_view key) const
{
    auto it = std::lower_bound(keys.begin(), keys.end(), key);
    if (it == keys.end() or *it != key)
        return npos;
    return static_cast<std::size_t>(it - keys.begin());
}

bool CylinderSection::fully_constrained() const
{
    return std::all_of(constrained.begin(), constrained.end(), [](bool b) { return b; });
}

KeySheaf::KeySheaf(SchemaPtr schema, std::vector<Section> sections)
    : schema_(std::move(schema)), sections_(std::move(sections))
{
    const auto &x = *schema_;
    if (sections_.size() != x.size())
        throw Error(Errc::invalid_sheaf, "one section per simplex is required");
    for (std::size_t s = 0; s < x.size(); ++s) {
        const auto &sec = sections_[s];
        for (std::size_t k = 1; k < sec.keys.size(); ++k) {
            if (not (sec.keys[k - 1] < sec.keys[k]))
                throw Error(Errc::invalid_sheaf, "keys of '" + x[s].id + "' are not strictly increasing");
        }
        if (sec.faces.size() != x[s].faces.size())
            throw Error(Errc::invalid_sheaf, "'" + x[s].id + "' needs one restriction map per face");
        for (std::size_t i = 0; i < sec.faces.size(); ++i) {
            if (sec.faces[i].size() != sec.keys.size())
                throw Error(Errc::invalid_sheaf, "restriction map " + std::to_string(i) + " of '" + x[s].id +
                                                     "' is not total");
            const auto bound = sections_[x[s].faces[i]].keys.size();
            for (auto k : sec.faces[i]) {
                if (k >= bound)
                    throw Error(Errc::invalid_sheaf, "restriction map " + std::to_string(i) + " of '" + x[s].id +
                                                         "' points outside the face");
            }
        }
    }
}

std::size_t KeySheaf::restrict_along(std::size_t s, std::size_t k, const std::vector<std::size_t> &positions) const
{
    const auto &x = *schema_;
    const auto n = x[s].dim;
    std::vector<bool> keep(n + 1, false);
    for (auto p : positions)
        keep.at(p) = true;
    std::size_t cur = s;
    for (std::size_t p = n + 1; p-- > 0;) {
        if (not keep[p]) {
            k = sections_[cur].faces[p][k];
            cur = x[cur].faces[p];
        }
    }
    return k;
}

std::size_t KeySheaf::restrict_to(std::size_t s, std::size_t k, std::size_t t) const
{
    if (s == t)
        return k;
    auto positions = schema_->face_positions(s, t);
    if (positions.empty())
        throw Error(Errc::invalid_sheaf, "'" + (*schema_)[t].id + "' is not a face of '" + (*schema_)[s].id + "'");
    return restrict_along(s, k, positions);
}

bool KeySheaf::operator==(const KeySheaf &other) const
{
    return (schema_ == other.schema_ or *schema_ == *other.schema_) and sections_ == other.sections_;
}

std::vector<Violation> validate_sheaf_and_data(const KeySheaf &keys, const DataMap *data)
{
    std::vector<Violation> out;
    const auto &x = *keys.schema();
    for (std::size_t s = 0; s < x.size(); ++s) {
        const auto &sec = keys[s];
        const auto n = x[s].dim;
        if (n >= 2) {
            for (std::size_t j = 1; j <= n; ++j) {
                for (std::size_t i = 0; i < j; ++i) {
                    const auto &via_j = keys[x[s].faces[j]].faces[i];
                    const auto &via_i = keys[x[s].faces[i]].faces[j - 1];
                    for (std::size_t k = 0; k < sec.size(); ++k) {
                        if (via_j[sec.faces[j][k]] != via_i[sec.faces[i][k]])
                            out.push_back({"functoriality", x[s].id,
                                           "key '" + sec.keys[k] + "': d" + std::to_string(i) + "d" +
                                               std::to_string(j) + " differs from d" + std::to_string(j - 1) + "d" +
                                               std::to_string(i)});
                    }
                }
            }
        }
    }
    if (not data)
        return out;
    if (data->size() != x.size()) {
        out.push_back({"naturality", "", "data map has the wrong number of simplices"});
        return out;
    }
    for (std::size_t s = 0; s < x.size(); ++s) {
        const auto &sec = keys[s];
        const auto &rows = (*data)[s];
        if (rows.size() != sec.size()) {
            out.push_back({"naturality", x[s].id, "one record per key is required"});
            continue;
        }
        auto schema = x.vertex_schema(s);
        for (std::size_t k = 0; k < sec.size(); ++k) {
            if (not is_valid_record(schema, rows[k]))
                out.push_back({"type", x[s].id, "key '" + sec.keys[k] + "' has a record of the wrong type"});
        }
        for (std::size_t i = 0; i < sec.faces.size(); ++i) {
            const auto f = x[s].faces[i];
            if ((*data)[f].size() != keys[f].size())
                continue;
            for (std::size_t k = 0; k < sec.size(); ++k) {
                if (rows[k].size() != x[s].dim + 1)
                    continue;
                Record projected = rows[k];
                projected.erase(projected.begin() + static_cast<std::ptrdiff_t>(i));
                if (projected != (*data)[f][sec.faces[i][k]])
                    out.push_back({"naturality", x[s].id,
                                   "key '" + sec.keys[k] + "' disagrees with face " + std::to_string(i) + " key '" +
                                       keys[f].keys[sec.faces[i][k]] + "'"});
            }
        }
    }
    return out;
}

DataMap derive_data(const KeySheaf &keys, const DataMap &vertex_data)
{
    const auto &x = *keys.schema();
    DataMap out(x.size());
    for (std::size_t s = 0; s < x.size(); ++s) {
        if (x[s].dim == 0) {
            out[s] = vertex_data.at(s);
            continue;
        }
        out[s].reserve(keys[s].size());
        for (std::size_t k = 0; k < keys[s].size(); ++k) {
            Record r;
            for (std::size_t p = 0; p <= x[s].dim; ++p) {
                auto v = x[s].vertices[p];
                r.push_back(vertex_data.at(v).at(keys.restrict_along(s, k, {p})).at(0));
            }
            out[s].push_back(std::move(r));
        }
    }
    return out;
}

std::string family_key(const KeySheaf &keys, const std::vector<std::size_t> &maximal, const Family &family)
{
    const auto &x = *keys.schema();
    if (maximal.empty())
        return "*";
    if (maximal.size() == 1)
        return keys[maximal[0]].keys[family[maximal[0]]];
    std::vector<std::pair<std::string, std::string>> parts;
    for (auto m : maximal)
        parts.emplace_back(x[m].id, keys[m].keys[family[m]]);
    std::sort(parts.begin(), parts.end());
    std::string out = "(";
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i)
            out += ',';
        out += escape_key_component(parts[i].first, true) + ":" + escape_key_component(parts[i].second);
    }
    return out + ")";
}

FamilySet evaluate_on_subschema(const KeySheaf &keys, const Subschema &sub)
{
    const auto &x = *keys.schema();
    FamilySet out{sub, maximal_simplices(x, sub), {}};
    const auto &maximal = out.maximal;
    if (maximal.empty()) {
        out.families.emplace_back(x.size(), npos);
        return out;
    }

    // for each maximal simplex: its faces, the restriction of each key to each face, and the faces fixed earlier
    struct Step
    {
        std::size_t simplex;
        std::vector<std::size_t> faces;
        std::vector<std::vector<std::size_t>> restricted; // [key][face]
        std::vector<std::size_t> fixed;                   // indices into `faces` already assigned
        std::unordered_map<std::string, std::vector<std::size_t>> index;
    };
    std::vector<Step> steps;
    std::vector<bool> assigned_before(x.size(), false);
    for (auto m : maximal) {
        Step st;
        st.simplex = m;
        st.faces = x.closure_of(m);
        std::vector<std::vector<std::size_t>> positions;
        for (auto t : st.faces)
            positions.push_back(t == m ? all_positions(x[m].dim) : x.face_positions(m, t));
        for (std::size_t k = 0; k < keys[m].size(); ++k) {
            std::vector<std::size_t> r;
            r.reserve(st.faces.size());
            for (auto &p : positions)
                r.push_back(keys.restrict_along(m, k, p));
            st.restricted.push_back(std::move(r));
        }
        for (std::size_t j = 0; j < st.faces.size(); ++j) {
            if (assigned_before[st.faces[j]])
                st.fixed.push_back(j);
        }
        for (std::size_t k = 0; k < keys[m].size(); ++k) {
            std::string probe;
            for (auto j : st.fixed)
                probe += std::to_string(st.restricted[k][j]) + ",";
            st.index[probe].push_back(k);
        }
        for (auto t : st.faces)
            assigned_before[t] = true;
        steps.push_back(std::move(st));
    }

    Family current(x.size(), npos);
    auto rec = [&](auto &self, std::size_t q) -> void {
        if (q == steps.size()) {
            out.families.push_back(current);
            return;
        }
        auto &st = steps[q];
        std::string probe;
        for (auto j : st.fixed)
            probe += std::to_string(current[st.faces[j]]) + ",";
        auto it = st.index.find(probe);
        if (it == st.index.end())
            return;
        for (auto k : it->second) {
            std::vector<std::size_t> newly;
            for (std::size_t j = 0; j < st.faces.size(); ++j) {
                auto t = st.faces[j];
                if (current[t] == npos) {
                    current[t] = st.restricted[k][j];
                    newly.push_back(t);
                }
            }
            self(self, q + 1);
            for (auto t : newly)
                current[t] = npos;
        }
    };
    rec(rec, 0);

    std::vector<std::string> names;
    names.reserve(out.families.size());
    for (auto &f : out.families)
        names.push_back(family_key(keys, maximal, f));
    auto order = sort_permutation(names);
    std::vector<Family> sorted;
    sorted.reserve(order.size());
    for (auto i : order)
        sorted.push_back(std::move(out.families[i]));
    out.families = std::move(sorted);
    return out;
}

Family restrict_family(const Family &family, const Subschema &smaller)
{
    Family out(family.size(), npos);
    for (std::size_t s = 0; s < family.size(); ++s) {
        if (smaller.contains(s))
            out[s] = family[s];
    }
    return out;
}

KeySheaf pullback_keys(const SchemaMorphism &f, const KeySheaf &keys)
{
    const auto &y = *f.source();
    const auto &x = *f.target();
    std::vector<Section> sections(y.size());
    for (std::size_t s = 0; s < y.size(); ++s) {
        const auto t = f[s].target;
        auto &sec = sections[s];
        sec.keys = keys[t].keys;
        for (std::size_t i = 0; i < y[s].faces.size(); ++i) {
            const auto t2 = f[y[s].faces[i]].target;
            std::vector<std::size_t> map(sec.keys.size());
            if (t2 == t) {
                std::iota(map.begin(), map.end(), 0);
            } else {
                auto positions = x.face_positions(t, t2);
                for (std::size_t k = 0; k < map.size(); ++k)
                    map[k] = keys.restrict_along(t, k, positions);
            }
            sec.faces.push_back(std::move(map));
        }
    }
    return KeySheaf(f.source(), std::move(sections));
}

SheafData pullback(const SchemaMorphism &f, const KeySheaf &keys, const DataMap &data)
{
    auto pulled = pullback_keys(f, keys);
    const auto &y = *f.source();
    DataMap out(y.size());
    for (std::size_t s = 0; s < y.size(); ++s) {
        const auto &img = f[s];
        for (auto &record : data[img.target]) {
            Record r;
            r.reserve(img.collapse.size());
            for (auto a : img.collapse)
                r.push_back(record[a]);
            out[s].push_back(std::move(r));
        }
    }
    return {std::move(pulled), std::move(out)};
}

PushforwardStar pushforward_star(const SchemaMorphism &f, const KeySheaf &keys)
{
    const auto &x = *f.target();
    std::vector<FamilySet> families;
    std::vector<Section> sections(x.size());
    std::vector<std::map<Family, std::size_t>> lookup(x.size());
    for (std::size_t s = 0; s < x.size(); ++s) {
        auto pre = preimage_subschema(f, closure(x, {s}));
        families.push_back(evaluate_on_subschema(keys, pre));
        auto &fs = families.back();
        for (std::size_t k = 0; k < fs.size(); ++k) {
            sections[s].keys.push_back(family_key(keys, fs.maximal, fs.families[k]));
            lookup[s].emplace(fs.families[k], k);
        }
    }
    for (std::size_t s = 0; s < x.size(); ++s) {
        for (auto face : x[s].faces) {
            std::vector<std::size_t> map;
            for (auto &fam : families[s].families)
                map.push_back(lookup[face].at(restrict_family(fam, families[face].subschema)));
            sections[s].faces.push_back(std::move(map));
        }
    }
    return {KeySheaf(f.target(), std::move(sections)), std::move(families)};
}

CylinderSheaf universal_cylinder(const SchemaPtr &schema)
{
    CylinderSheaf out{schema, {}};
    for (std::size_t s = 0; s < schema->size(); ++s) {
        CylinderSection sec;
        const auto n = (*schema)[s].dim + 1;
        sec.constrained.assign(n, false);
        sec.keys = {"*"};
        sec.values.push_back(std::vector<std::optional<Value>>(n));
        sec.faces.assign((*schema)[s].faces.size(), std::vector<std::size_t>{0});
        sec.sources.push_back(Family(0));
        out.sections.push_back(std::move(sec));
    }
    return out;
}

CylinderSheaf pushforward_plus(const SchemaMorphism &f, const KeySheaf &keys, const DataMap &data)
{
    const auto &y = *f.source();
    const auto &x = *f.target();
    auto star = pushforward_star(f, keys);
    CylinderSheaf out{f.target(), {}};
    std::vector<std::vector<std::size_t>> renumber(x.size());
    for (std::size_t s = 0; s < x.size(); ++s) {
        const auto &fs = star.families[s];
        const auto &vs = x[s].vertices;
        const auto n = vs.size();
        // source vertices in the preimage, grouped by vertex position of s
        std::vector<std::vector<std::size_t>> hits(n);
        for (std::size_t v = 0; v < y.size() and y[v].dim == 0; ++v) {
            if (not fs.subschema.contains(v))
                continue;
            auto it = std::find(vs.begin(), vs.end(), f[v].target);
            if (it != vs.end())
                hits[static_cast<std::size_t>(it - vs.begin())].push_back(v);
        }
        CylinderSection sec;
        sec.constrained.resize(n);
        for (std::size_t p = 0; p < n; ++p)
            sec.constrained[p] = not hits[p].empty();
        renumber[s].assign(fs.size(), npos);
        for (std::size_t k = 0; k < fs.size(); ++k) {
            const auto &fam = fs.families[k];
            std::vector<std::optional<Value>> values(n);
            bool consistent = true;
            for (std::size_t p = 0; p < n and consistent; ++p) {
                for (auto v : hits[p]) {
                    const auto &value = data[v][fam[v]][0];
                    if (not values[p])
                        values[p] = value;
                    else if (*values[p] != value)
                        consistent = false;
                }
            }
            if (not consistent)
                continue;
            renumber[s][k] = sec.keys.size();
            sec.keys.push_back(star.sheaf[s].keys[k]);
            sec.values.push_back(std::move(values));
            sec.sources.push_back(fam);
        }
        out.sections.push_back(std::move(sec));
    }
    for (std::size_t s = 0; s < x.size(); ++s) {
        auto &sec = out.sections[s];
        for (std::size_t i = 0; i < x[s].faces.size(); ++i) {
            const auto face = x[s].faces[i];
            std::vector<std::size_t> map(sec.size(), npos);
            for (std::size_t k = 0; k < renumber[s].size(); ++k) {
                if (renumber[s][k] != npos)
                    map[renumber[s][k]] = renumber[face][star.sheaf[s].faces[i][k]];
            }
            sec.faces.push_back(std::move(map));
        }
    }
    return out;
}

Materialized materialize(const CylinderSheaf &cylinder)
{
    const auto &x = *cylinder.schema;
    const auto &spec = *x.spec();
    std::vector<std::vector<std::size_t>> origin(x.size());
    std::vector<Section> sections(x.size());
    DataMap data(x.size());
    std::vector<std::map<std::pair<std::size_t, std::string>, std::size_t>> lookup(x.size());
    std::vector<std::vector<std::pair<std::size_t, Record>>> expanded(x.size()); // (row, full record)

    for (std::size_t s = 0; s < x.size(); ++s) {
        const auto &sec = cylinder.sections[s];
        const auto &vs = x[s].vertices;
        std::vector<std::size_t> free;
        std::vector<std::vector<Value>> domains;
        for (std::size_t p = 0; p < vs.size(); ++p) {
            if (sec.constrained[p])
                continue;
            const auto &type = x[vs[p]].type;
            if (sec.size() > 0 and not spec.domain(type).enumerable())
                throw Error(Errc::non_finite_result, "position " + std::to_string(p) + " of '" + x[s].id +
                                                         "' is unconstrained over the infinite type '" + type + "'");
            free.push_back(p);
            domains.push_back(sec.size() > 0 ? enumerate_domain(spec, type) : std::vector<Value>{});
        }
        std::vector<std::string> names;
        for (std::size_t row = 0; row < sec.size(); ++row) {
            std::vector<std::size_t> choice(free.size(), 0);
            while (true) {
                Record r;
                std::vector<std::string> parts{sec.keys[row]};
                std::size_t fi = 0;
                for (std::size_t p = 0; p < vs.size(); ++p) {
                    if (sec.constrained[p]) {
                        r.push_back(*sec.values[row][p]);
                    } else {
                        r.push_back(domains[fi][choice[fi]]);
                        parts.push_back(render_value(r.back()));
                        ++fi;
                    }
                }
                names.push_back(free.empty() ? sec.keys[row] : tuple_key(parts));
                expanded[s].emplace_back(row, std::move(r));
                std::size_t i = 0;
                while (i < choice.size() and ++choice[i] == domains[i].size())
                    choice[i++] = 0;
                if (i == choice.size())
                    break;
            }
        }
        auto order = sort_permutation(names);
        std::vector<std::pair<std::size_t, Record>> sorted;
        for (auto i : order) {
            sections[s].keys.push_back(names[i]);
            sorted.push_back(std::move(expanded[s][i]));
        }
        expanded[s] = std::move(sorted);
        for (std::size_t k = 0; k < expanded[s].size(); ++k) {
            auto &[row, r] = expanded[s][k];
            Record free_values;
            for (auto p : free)
                free_values.push_back(r[p]);
            lookup[s].emplace(std::make_pair(row, render_record(free_values)), k);
            origin[s].push_back(row);
            data[s].push_back(r);
        }
    }
    for (std::size_t s = 0; s < x.size(); ++s) {
        const auto &sec = cylinder.sections[s];
        for (std::size_t i = 0; i < x[s].faces.size(); ++i) {
            const auto face = x[s].faces[i];
            const auto &face_sec = cylinder.sections[face];
            std::vector<std::size_t> map;
            for (auto &[row, r] : expanded[s]) {
                Record face_free;
                std::size_t q = 0;
                for (std::size_t p = 0; p < r.size(); ++p) {
                    if (p == i)
                        continue;
                    if (not face_sec.constrained[q])
                        face_free.push_back(r[p]);
                    ++q;
                }
                map.push_back(lookup[face].at({sec.faces[i][row], render_record(face_free)}));
            }
            sections[s].faces.push_back(std::move(map));
        }
    }
    return {{KeySheaf(cylinder.schema, std::move(sections)), std::move(data)}, std::move(origin)};
}

SheafData extend_by_empty(const SchemaMorphism &f, const KeySheaf &keys, const DataMap &data)
{
    if (not f.injective())
        throw Error(Errc::not_monic, "extension by the empty set needs an injective, non-collapsing map");
    const auto &x = *f.target();
    std::vector<std::size_t> preimage(x.size(), npos);
    for (std::size_t s = 0; s < f.images().size(); ++s)
        preimage[f[s].target] = s;
    std::vector<Section> sections(x.size());
    DataMap out(x.size());
    for (std::size_t t = 0; t < x.size(); ++t) {
        if (preimage[t] == npos) {
            sections[t].faces.assign(x[t].faces.size(), {});
            continue;
        }
        sections[t] = keys[preimage[t]];
        out[t] = data[preimage[t]];
    }
    return {KeySheaf(f.target(), std::move(sections)), std::move(out)};
}

ImageData image_data(const KeySheaf &keys, const DataMap &data)
{
    const auto &x = *keys.schema();
    std::vector<std::vector<std::size_t>> rep(x.size());
    std::vector<std::vector<std::size_t>> new_index(x.size());
    std::vector<Section> sections(x.size());
    DataMap out(x.size());
    for (std::size_t s = 0; s < x.size(); ++s) {
        std::map<std::string, std::size_t> first;
        rep[s].resize(keys[s].size());
        new_index[s].assign(keys[s].size(), npos);
        for (std::size_t k = 0; k < keys[s].size(); ++k) {
            auto [it, inserted] = first.emplace(render_record(data[s][k]), k);
            rep[s][k] = it->second;
            if (inserted) {
                new_index[s][k] = sections[s].keys.size();
                sections[s].keys.push_back(keys[s].keys[k]);
                out[s].push_back(data[s][k]);
            }
        }
    }
    for (std::size_t s = 0; s < x.size(); ++s) {
        for (std::size_t i = 0; i < x[s].faces.size(); ++i) {
            const auto face = x[s].faces[i];
            std::vector<std::size_t> map;
            for (std::size_t k = 0; k < keys[s].size(); ++k) {
                if (new_index[s][k] != npos)
                    map.push_back(new_index[face][rep[face][keys[s].faces[i][k]]]);
            }
            sections[s].faces.push_back(std::move(map));
        }
    }
    return {{KeySheaf(keys.schema(), std::move(sections)), std::move(out)}, std::move(rep)};
}

CylinderLimit cylinder_limit(const SchemaPtr &schema, const std::vector<const CylinderSheaf *> &nodes,
                             const std::vector<CylinderArrow> &arrows)
{
    const auto &x = *schema;
    std::vector<std::size_t> real;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i])
            real.push_back(i);
    }
    for (auto &a : arrows) {
        if (not nodes[a.from] and nodes[a.to])
            throw Error(Errc::invalid_morphism, "arrows out of a universal node are not supported");
    }

    CylinderLimit out{{schema, std::vector<CylinderSection>(x.size())}, std::vector<std::vector<std::vector<std::size_t>>>(x.size())};
    std::vector<std::map<std::vector<std::size_t>, std::size_t>> lookup(x.size());

    for (std::size_t s = 0; s < x.size(); ++s) {
        const auto n = x[s].dim + 1;
        std::vector<std::size_t> step_of(nodes.size(), npos);
        for (std::size_t q = 0; q < real.size(); ++q)
            step_of[real[q]] = q;

        struct Plan
        {
            std::size_t node;
            std::vector<std::size_t> shared;                       // positions constrained earlier
            std::vector<const CylinderArrow *> incoming, outgoing; // with the other end earlier
            std::unordered_map<std::string, std::vector<std::size_t>> index;
        };
        std::vector<Plan> plans;
        std::vector<bool> constrained_before(n, false);
        for (std::size_t q = 0; q < real.size(); ++q) {
            Plan plan;
            plan.node = real[q];
            const auto &sec = nodes[plan.node]->sections[s];
            for (std::size_t p = 0; p < n; ++p) {
                if (sec.constrained[p] and constrained_before[p])
                    plan.shared.push_back(p);
            }
            for (auto &a : arrows) {
                if (not nodes[a.from] or not nodes[a.to])
                    continue;
                if (a.to == plan.node and step_of[a.from] < q)
                    plan.incoming.push_back(&a);
                if (a.from == plan.node and step_of[a.to] < q)
                    plan.outgoing.push_back(&a);
                if (a.from == plan.node and a.to == plan.node)
                    plan.outgoing.push_back(&a);
            }
            if (plan.incoming.empty()) {
                for (std::size_t row = 0; row < sec.size(); ++row) {
                    std::string probe = render_partial(sec.values[row], plan.shared) + "|";
                    for (auto *a : plan.outgoing)
                        probe += std::to_string(a->rows[s][row]) + ",";
                    plan.index[probe].push_back(row);
                }
            }
            for (std::size_t p = 0; p < n; ++p)
                constrained_before[p] = constrained_before[p] or sec.constrained[p];
            plans.push_back(std::move(plan));
        }

        std::vector<std::size_t> chosen(nodes.size(), npos);
        std::vector<std::optional<Value>> values(n);
        std::vector<std::vector<std::size_t>> rows_found;
        std::vector<std::vector<std::optional<Value>>> values_found;
        auto rec = [&](auto &self, std::size_t q) -> void {
            if (q == plans.size()) {
                rows_found.push_back(chosen);
                values_found.push_back(values);
                return;
            }
            auto &plan = plans[q];
            const auto &sec = nodes[plan.node]->sections[s];
            auto admissible = [&](std::size_t row) {
                for (auto p : plan.shared) {
                    if (*sec.values[row][p] != *values[p])
                        return false;
                }
                for (auto *a : plan.outgoing) {
                    auto target_row = a->to == plan.node ? row : chosen[a->to];
                    if (a->rows[s][row] != target_row)
                        return false;
                }
                for (auto *a : plan.incoming) {
                    if (a->rows[s][chosen[a->from]] != row)
                        return false;
                }
                return true;
            };
            auto descend = [&](std::size_t row) {
                chosen[plan.node] = row;
                std::vector<std::size_t> newly;
                for (std::size_t p = 0; p < n; ++p) {
                    if (sec.constrained[p] and not values[p]) {
                        values[p] = sec.values[row][p];
                        newly.push_back(p);
                    }
                }
                self(self, q + 1);
                for (auto p : newly)
                    values[p].reset();
                chosen[plan.node] = npos;
            };
            if (not plan.incoming.empty()) {
                auto row = plan.incoming.front()->rows[s][chosen[plan.incoming.front()->from]];
                if (row != npos and admissible(row))
                    descend(row);
                return;
            }
            std::string probe;
            {
                Record r;
                for (auto p : plan.shared)
                    r.push_back(*values[p]);
                probe = render_record(r) + "|";
            }
            for (auto *a : plan.outgoing) {
                if (a->to != plan.node)
                    probe += std::to_string(chosen[a->to]) + ",";
            }
            // self-loops are checked row by row
            bool has_loop = std::any_of(plan.outgoing.begin(), plan.outgoing.end(),
                                        [&](auto *a) { return a->to == plan.node; });
            if (has_loop) {
                for (std::size_t row = 0; row < sec.size(); ++row) {
                    if (admissible(row))
                        descend(row);
                }
                return;
            }
            auto it = plan.index.find(probe);
            if (it == plan.index.end())
                return;
            for (auto row : it->second) {
                if (admissible(row))
                    descend(row);
            }
        };
        rec(rec, 0);

        // keys from the components that carry information at this simplex
        auto informative = [&](std::size_t node) {
            const auto &sec = nodes[node]->sections[s];
            bool any = std::any_of(sec.constrained.begin(), sec.constrained.end(), [](bool b) { return b; });
            return any or not (sec.size() == 1 and sec.keys[0] == "*");
        };
        std::vector<std::size_t> named;
        for (auto i : real) {
            if (informative(i))
                named.push_back(i);
        }
        std::vector<std::string> names;
        for (auto &rows : rows_found) {
            if (named.empty()) {
                names.push_back("*");
            } else if (named.size() == 1) {
                names.push_back(nodes[named[0]]->sections[s].keys[rows[named[0]]]);
            } else {
                std::vector<std::string> parts;
                for (auto i : named)
                    parts.push_back(nodes[i]->sections[s].keys[rows[i]]);
                names.push_back(tuple_key(parts));
            }
        }
        auto order = sort_permutation(names);
        auto &sec = out.sheaf.sections[s];
        sec.constrained = constrained_before;
        for (auto i : order) {
            lookup[s].emplace(rows_found[i], sec.keys.size());
            sec.keys.push_back(names[i]);
            sec.values.push_back(values_found[i]);
            out.components[s].push_back(rows_found[i]);
        }
    }
    for (std::size_t s = 0; s < x.size(); ++s) {
        auto &sec = out.sheaf.sections[s];
        for (std::size_t i = 0; i < x[s].faces.size(); ++i) {
            const auto face = x[s].faces[i];
            std::vector<std::size_t> map;
            for (auto &rows : out.components[s]) {
                std::vector<std::size_t> face_rows(nodes.size(), npos);
                for (auto node : real)
                    face_rows[node] = nodes[node]->sections[s].faces[i][rows[node]];
                map.push_back(lookup[face].at(face_rows));
            }
            sec.faces.push_back(std::move(map));
        }
    }
    return out;
}

SheafColimit sheaf_colimit(const SchemaPtr &schema, const std::vector<const SheafData *> &nodes,
                           const std::vector<SheafArrow> &arrows)
{
    const auto &x = *schema;
    std::vector<std::vector<std::vector<std::pair<std::size_t, std::size_t>>>> all_classes(x.size());
    std::vector<Section> sections(x.size());
    DataMap data(x.size());
    // class index of each tagged key, per simplex
    std::vector<std::vector<std::vector<std::size_t>>> class_of(x.size());

    for (std::size_t s = 0; s < x.size(); ++s) {
        std::vector<std::size_t> offset(nodes.size() + 1, 0);
        for (std::size_t i = 0; i < nodes.size(); ++i)
            offset[i + 1] = offset[i] + nodes[i]->keys[s].size();
        detail::UnionFind uf(offset.back());
        for (auto &a : arrows) {
            const auto &map = a.keys[s];
            for (std::size_t k = 0; k < map.size(); ++k)
                uf.unite(offset[a.from] + k, offset[a.to] + map[k]);
        }
        std::map<std::size_t, std::vector<std::pair<std::size_t, std::size_t>>> members;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            for (std::size_t k = 0; k < nodes[i]->keys[s].size(); ++k)
                members[uf.find(offset[i] + k)].emplace_back(i, k);
        }
        std::vector<std::string> names;
        std::vector<std::vector<std::pair<std::size_t, std::size_t>>> classes;
        for (auto &[_, m] : members) {
            std::vector<std::string> tagged;
            for (auto [i, k] : m) {
                tagged.push_back(std::to_string(i + 1) + ":" + nodes[i]->keys[s].keys[k]);
                if (nodes[i]->data[s][k] != nodes[m.front().first]->data[s][m.front().second])
                    throw Error(Errc::invalid_morphism, "identified keys on '" + x[s].id + "' carry different records");
            }
            std::sort(tagged.begin(), tagged.end());
            std::string name;
            for (auto &t : tagged)
                name += (name.empty() ? "" : "~") + t;
            names.push_back(std::move(name));
            classes.push_back(m);
        }
        auto order = sort_permutation(names);
        class_of[s].resize(nodes.size());
        for (std::size_t i = 0; i < nodes.size(); ++i)
            class_of[s][i].assign(nodes[i]->keys[s].size(), npos);
        for (auto c : order) {
            const auto idx = sections[s].keys.size();
            sections[s].keys.push_back(names[c]);
            auto [i0, k0] = classes[c].front();
            data[s].push_back(nodes[i0]->data[s][k0]);
            for (auto [i, k] : classes[c])
                class_of[s][i][k] = idx;
            all_classes[s].push_back(classes[c]);
        }
    }
    for (std::size_t s = 0; s < x.size(); ++s) {
        for (std::size_t f = 0; f < x[s].faces.size(); ++f) {
            const auto face = x[s].faces[f];
            std::vector<std::size_t> map;
            for (auto &members : all_classes[s]) {
                auto [i0, k0] = members.front();
                auto target = class_of[face][i0][nodes[i0]->keys[s].faces[f][k0]];
                for (auto [i, k] : members) {
                    if (class_of[face][i][nodes[i]->keys[s].faces[f][k]] != target)
                        throw Error(Errc::invalid_morphism, "diagram arrows are not natural on '" + x[s].id + "'");
                }
                map.push_back(target);
            }
            sections[s].faces.push_back(std::move(map));
        }
    }
    return {{KeySheaf(schema, std::move(sections)), std::move(data)}, std::move(all_classes)};
}

std::vector<std::vector<std::vector<std::size_t>>> enumerate_sheaf_maps(const KeySheaf &a, const KeySheaf &b,
                                                                         const DataMap *a_data, const DataMap *b_data,
                                                                         std::size_t cap)
{
    const auto &x = *a.schema();
    std::vector<std::vector<std::vector<std::size_t>>> out;
    std::vector<std::vector<std::size_t>> current(x.size());
    for (std::size_t s = 0; s < x.size(); ++s)
        current[s].assign(a[s].size(), npos);
    // enumerate key by key; faces have smaller simplex index, so they are decided first
    std::vector<std::pair<std::size_t, std::size_t>> slots;
    for (std::size_t s = 0; s < x.size(); ++s) {
        for (std::size_t k = 0; k < a[s].size(); ++k)
            slots.emplace_back(s, k);
    }
    auto rec = [&](auto &self, std::size_t q) -> void {
        if (q == slots.size()) {
            if (out.size() >= cap)
                throw Error(Errc::too_large, "more than " + std::to_string(cap) + " sheaf maps");
            out.push_back(current);
            return;
        }
        auto [s, k] = slots[q];
        for (std::size_t t = 0; t < b[s].size(); ++t) {
            bool ok = true;
            for (std::size_t i = 0; i < x[s].faces.size() and ok; ++i)
                ok = b[s].faces[i][t] == current[x[s].faces[i]][a[s].faces[i][k]];
            if (ok and a_data and b_data)
                ok = (*a_data)[s][k] == (*b_data)[s][t];
            if (not ok)
                continue;
            current[s][k] = t;
            self(self, q + 1);
        }
        current[s][k] = npos;
    };
    rec(rec, 0);
    return out;
}

}
