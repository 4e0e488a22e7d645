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

#include "sdb/schema.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

#include "sdb/detail/union_find.hpp"

namespace sdb {

namespace {

bool is_identity(const Collapse &a)
{
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] != k)
            return false;
    }
    return true;
}

Collapse identity_collapse(std::size_t dim)
{
    Collapse a(dim + 1);
    std::iota(a.begin(), a.end(), 0);
    return a;
}

// image of face i of a simplex whose image is `img` in `target`
SimplexImage face_image(const Schema &target, const SimplexImage &img, std::size_t i)
{
    std::vector<std::size_t> kept;
    for (std::size_t k = 0; k < img.collapse.size(); ++k) {
        if (k != i)
            kept.push_back(img.collapse[k]);
    }
    std::vector<std::size_t> positions = kept;
    positions.erase(std::unique(positions.begin(), positions.end()), positions.end());
    SimplexImage out;
    out.target = target.face_at(img.target, positions);
    out.collapse.reserve(kept.size());
    for (auto p : kept)
        out.collapse.push_back(static_cast<std::size_t>(std::lower_bound(positions.begin(), positions.end(), p) -
                                                        positions.begin()));
    return out;
}

// collapse and deduplicated vertex tuple of an image vertex sequence; nullopt if not a degeneracy of distinct vertices
std::optional<std::pair<Collapse, std::vector<std::size_t>>> collapse_of(const std::vector<std::size_t> &tuple)
{
    Collapse alpha(tuple.size());
    std::vector<std::size_t> distinct;
    for (std::size_t k = 0; k < tuple.size(); ++k) {
        if (k == 0 or tuple[k] != tuple[k - 1])
            distinct.push_back(tuple[k]);
        alpha[k] = distinct.size() - 1;
    }
    std::set<std::size_t> seen(distinct.begin(), distinct.end());
    if (seen.size() != distinct.size())
        return std::nullopt;
    return std::make_pair(std::move(alpha), std::move(distinct));
}

std::map<std::vector<std::size_t>, std::vector<std::size_t>> simplices_by_vertices(const Schema &x)
{
    std::map<std::vector<std::size_t>, std::vector<std::size_t>> out;
    for (std::size_t t = 0; t < x.size(); ++t)
        out[x[t].vertices].push_back(t);
    return out;
}

bool faces_agree(const Schema &target, const Schema &source, std::size_t s, const SimplexImage &img,
                 const std::vector<SimplexImage> &images)
{
    const auto &simplex = source[s];
    for (std::size_t i = 0; i < simplex.faces.size(); ++i) {
        if (not (images[simplex.faces[i]] == face_image(target, img, i)))
            return false;
    }
    return true;
}

}

Schema::Builder & Schema::Builder::add_vertex(std::string id, std::string name, std::string type)
{
    pending_.push_back({std::move(id), {}, std::move(name), std::move(type), true});
    return *this;
}

Schema::Builder & Schema::Builder::add_simplex(std::string id, std::vector<std::string> faces)
{
    pending_.push_back({std::move(id), std::move(faces), {}, {}, false});
    return *this;
}

SchemaPtr Schema::Builder::build() const
{
    if (not spec_)
        throw Error(Errc::invalid_schema, "schema without a type specification");
    std::map<std::string, std::size_t, std::less<>> declared;
    for (std::size_t p = 0; p < pending_.size(); ++p) {
        if (pending_[p].id.empty())
            throw Error(Errc::invalid_schema, "simplex ids must be nonempty");
        if (not declared.emplace(pending_[p].id, p).second)
            throw Error(Errc::invalid_schema, "duplicate simplex id '" + pending_[p].id + "'");
        if (not pending_[p].vertex and pending_[p].faces.size() < 2)
            throw Error(Errc::invalid_schema, "simplex '" + pending_[p].id + "' needs at least two faces");
        if (pending_[p].vertex and not spec_->contains(pending_[p].type))
            throw Error(Errc::unknown_type, "'" + pending_[p].type + "' (vertex '" + pending_[p].id + "')");
    }
    for (auto &p : pending_) {
        for (auto &f : p.faces) {
            auto it = declared.find(f);
            if (it == declared.end())
                throw Error(Errc::invalid_schema, "simplex '" + p.id + "' names unknown face '" + f + "'");
            auto face_dim = pending_[it->second].vertex ? 0 : pending_[it->second].faces.size() - 1;
            if (face_dim + 2 != p.faces.size())
                throw Error(Errc::invalid_schema, "face '" + f + "' of '" + p.id + "' has the wrong dimension");
        }
    }

    std::vector<std::size_t> order(pending_.size());
    std::iota(order.begin(), order.end(), 0);
    auto dim_of = [&](std::size_t p) { return pending_[p].vertex ? 0 : pending_[p].faces.size() - 1; };
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return dim_of(a) < dim_of(b); });

    auto schema = std::shared_ptr<Schema>(new Schema());
    schema->spec_ = spec_;
    for (auto p : order)
        schema->index_.emplace(pending_[p].id, schema->index_.size());
    schema->simplices_.reserve(order.size());
    for (auto p : order) {
        Simplex s;
        s.id = pending_[p].id;
        s.dim = dim_of(p);
        s.name = pending_[p].name;
        s.type = pending_[p].type;
        for (auto &f : pending_[p].faces)
            s.faces.push_back(schema->index_.find(f)->second);
        schema->simplices_.push_back(std::move(s));
    }

    auto &simplices = schema->simplices_;
    for (std::size_t s = 0; s < simplices.size(); ++s) {
        auto &x = simplices[s];
        if (x.dim == 0) {
            x.vertices = {s};
            continue;
        }
        const auto n = x.dim;
        // d_i d_j = d_{j-1} d_i for i < j
        if (n >= 2) {
            for (std::size_t j = 1; j <= n; ++j) {
                for (std::size_t i = 0; i < j; ++i) {
                    if (simplices[x.faces[j]].faces[i] != simplices[x.faces[i]].faces[j - 1])
                        throw Error(Errc::invalid_schema, "simplex '" + x.id + "' violates the simplicial identity d" +
                                                              std::to_string(i) + "d" + std::to_string(j));
                }
            }
        }
        x.vertices = simplices[x.faces[n]].vertices;
        x.vertices.push_back(simplices[x.faces[0]].vertices.back());
        for (std::size_t i = 0; i <= n; ++i) {
            auto expected = x.vertices;
            expected.erase(expected.begin() + static_cast<std::ptrdiff_t>(i));
            if (simplices[x.faces[i]].vertices != expected)
                throw Error(Errc::invalid_schema, "faces of '" + x.id + "' do not share vertices consistently");
        }
        std::set<std::size_t> distinct(x.vertices.begin(), x.vertices.end());
        if (distinct.size() != x.vertices.size())
            throw Error(Errc::invalid_schema, "simplex '" + x.id + "' repeats a vertex");
    }
    schema->cofaces_.assign(simplices.size(), {});
    for (std::size_t s = 0; s < simplices.size(); ++s) {
        std::set<std::size_t> distinct(simplices[s].faces.begin(), simplices[s].faces.end());
        for (auto f : distinct)
            schema->cofaces_[f].push_back(s);
    }
    return schema;
}

std::optional<std::size_t> Schema::find(std::string_view id) const
{
    auto it = index_.find(id);
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

std::size_t Schema::index_of(std::string_view id) const
{
    auto it = index_.find(id);
    if (it == index_.end())
        throw Error(Errc::invalid_schema, "unknown simplex '" + std::string(id) + "'");
    return it->second;
}

std::size_t Schema::vertex_count() const
{
    return static_cast<std::size_t>(
        std::count_if(simplices_.begin(), simplices_.end(), [](auto &s) { return s.dim == 0; }));
}

std::size_t Schema::dimension() const
{
    return simplices_.empty() ? 0 : simplices_.back().dim;
}

std::size_t Schema::face_at(std::size_t s, const std::vector<std::size_t> &positions) const
{
    const auto n = simplices_[s].dim;
    std::vector<bool> keep(n + 1, false);
    for (auto p : positions)
        keep.at(p) = true;
    std::size_t cur = s;
    for (std::size_t p = n + 1; p-- > 0;) {
        if (not keep[p])
            cur = simplices_[cur].faces.at(p);
    }
    return cur;
}

std::vector<std::size_t> Schema::face_positions(std::size_t s, std::size_t t) const
{
    const auto &vs = simplices_[s].vertices;
    std::vector<std::size_t> positions;
    for (auto v : simplices_[t].vertices) {
        auto it = std::find(vs.begin(), vs.end(), v);
        if (it == vs.end())
            return {};
        auto p = static_cast<std::size_t>(it - vs.begin());
        if (not positions.empty() and p <= positions.back())
            return {};
        positions.push_back(p);
    }
    if (face_at(s, positions) != t)
        return {};
    return positions;
}

std::vector<std::size_t> Schema::closure_of(std::size_t s) const
{
    std::set<std::size_t> seen{s};
    std::vector<std::size_t> stack{s};
    while (not stack.empty()) {
        auto cur = stack.back();
        stack.pop_back();
        for (auto f : simplices_[cur].faces) {
            if (seen.insert(f).second)
                stack.push_back(f);
        }
    }
    return {seen.begin(), seen.end()};
}

SimpleSchema Schema::vertex_schema(std::size_t s) const
{
    std::vector<Attribute> attrs;
    std::map<std::string, std::size_t> uses;
    for (auto v : simplices_[s].vertices) {
        auto name = simplices_[v].name;
        auto n = ++uses[name];
        if (n > 1)
            name += "#" + std::to_string(n);
        attrs.push_back({std::move(name), simplices_[v].type});
    }
    return SimpleSchema(spec_, std::move(attrs));
}

bool Schema::operator==(const Schema &other) const
{
    if (simplices_.size() != other.simplices_.size())
        return false;
    if (spec_ != other.spec_ and not (*spec_ == *other.spec_))
        return false;
    for (std::size_t s = 0; s < simplices_.size(); ++s) {
        const auto &a = simplices_[s], &b = other.simplices_[s];
        if (a.id != b.id or a.dim != b.dim or a.faces != b.faces or a.name != b.name or a.type != b.type)
            return false;
    }
    return true;
}

SchemaPtr simplex_schema(const SimpleSchema &sigma)
{
    Schema::Builder builder(sigma.spec());
    const auto n = sigma.size();
    for (auto &a : sigma.attributes())
        builder.add_vertex(a.name, a.name, a.type);
    if (n > 24)
        throw Error(Errc::too_large, "simplex on " + std::to_string(n) + " columns");
    // subsets of size >= 2, by size then lexicographically
    for (std::size_t size = 2; size <= n; ++size) {
        std::vector<bool> pick(n, false);
        std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(size), true);
        do {
            std::vector<std::size_t> members;
            for (std::size_t i = 0; i < n; ++i) {
                if (pick[i])
                    members.push_back(i);
            }
            auto name_of = [&](const std::vector<std::size_t> &m) {
                std::string id;
                for (auto i : m)
                    id += (id.empty() ? "" : ",") + sigma[i].name;
                return id;
            };
            std::vector<std::string> faces;
            for (std::size_t drop = 0; drop < members.size(); ++drop) {
                auto rest = members;
                rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(drop));
                faces.push_back(name_of(rest));
            }
            builder.add_simplex(name_of(members), std::move(faces));
        } while (std::prev_permutation(pick.begin(), pick.end()));
    }
    return builder.build();
}

SchemaMorphism::SchemaMorphism(SchemaPtr source, SchemaPtr target, std::vector<SimplexImage> images)
    : source_(std::move(source)), target_(std::move(target)), images_(std::move(images))
{
    const auto &src = *source_;
    const auto &tgt = *target_;
    if (images_.size() != src.size())
        throw Error(Errc::invalid_morphism, "every source simplex needs an image");
    for (std::size_t s = 0; s < src.size(); ++s) {
        const auto &img = images_[s];
        if (img.target >= tgt.size())
            throw Error(Errc::invalid_morphism, "image of '" + src[s].id + "' is out of range");
        const auto m = tgt[img.target].dim;
        if (img.collapse.size() != src[s].dim + 1 or img.collapse.front() != 0 or img.collapse.back() != m)
            throw Error(Errc::invalid_morphism, "collapse of '" + src[s].id + "' is not surjective");
        for (std::size_t k = 1; k < img.collapse.size(); ++k) {
            auto step = img.collapse[k] - img.collapse[k - 1];
            if (img.collapse[k] < img.collapse[k - 1] or step > 1)
                throw Error(Errc::invalid_morphism, "collapse of '" + src[s].id + "' is not monotone and onto");
        }
        if (src[s].dim == 0 and src[s].type != tgt[img.target].type)
            throw Error(Errc::invalid_morphism, "vertex '" + src[s].id + "' changes type");
        if (not faces_agree(tgt, src, s, img, images_))
            throw Error(Errc::invalid_morphism, "faces of '" + src[s].id + "' do not commute with the map");
    }
}

SchemaMorphism SchemaMorphism::identity(const SchemaPtr &schema)
{
    std::vector<SimplexImage> images;
    images.reserve(schema->size());
    for (std::size_t s = 0; s < schema->size(); ++s)
        images.push_back({s, identity_collapse((*schema)[s].dim)});
    return SchemaMorphism(schema, schema, std::move(images));
}

SchemaMorphism SchemaMorphism::from_vertex_map(SchemaPtr source, SchemaPtr target,
                                               const std::vector<std::size_t> &vertex_map)
{
    const auto &src = *source;
    const auto &tgt = *target;
    auto by_vertices = simplices_by_vertices(tgt);
    std::vector<SimplexImage> images(src.size());
    for (std::size_t s = 0; s < src.size(); ++s) {
        std::vector<std::size_t> tuple;
        for (auto v : src[s].vertices) {
            if (v >= vertex_map.size() or vertex_map[v] >= tgt.size() or tgt[vertex_map[v]].dim != 0)
                throw Error(Errc::invalid_morphism, "vertex map is incomplete at '" + src[v].id + "'");
            tuple.push_back(vertex_map[v]);
        }
        auto shape = collapse_of(tuple);
        if (not shape)
            throw Error(Errc::invalid_morphism, "'" + src[s].id + "' has no image simplex");
        auto it = by_vertices.find(shape->second);
        if (it == by_vertices.end())
            throw Error(Errc::invalid_morphism, "'" + src[s].id + "' has no image simplex");
        std::optional<std::size_t> chosen;
        for (auto t : it->second) {
            SimplexImage candidate{t, shape->first};
            if (faces_agree(tgt, src, s, candidate, images)) {
                if (chosen)
                    throw Error(Errc::invalid_morphism, "image of '" + src[s].id + "' is ambiguous");
                chosen = t;
            }
        }
        if (not chosen)
            throw Error(Errc::invalid_morphism, "'" + src[s].id + "' has no image simplex");
        images[s] = {*chosen, shape->first};
    }
    return SchemaMorphism(std::move(source), std::move(target), std::move(images));
}

std::size_t SchemaMorphism::vertex_image(std::size_t s, std::size_t k) const
{
    const auto &img = images_[s];
    return (*target_)[img.target].vertices[img.collapse[k]];
}

bool SchemaMorphism::injective() const
{
    std::set<std::size_t> seen;
    for (auto &img : images_) {
        if (not seen.insert(img.target).second)
            return false;
    }
    return not collapsing();
}

bool SchemaMorphism::collapsing() const
{
    return std::any_of(images_.begin(), images_.end(), [](auto &img) { return not is_identity(img.collapse); });
}

bool SchemaMorphism::operator==(const SchemaMorphism &other) const
{
    return (source_ == other.source_ or *source_ == *other.source_) and
           (target_ == other.target_ or *target_ == *other.target_) and images_ == other.images_;
}

SchemaMorphism compose(const SchemaMorphism &g, const SchemaMorphism &f)
{
    if (f.target() != g.source() and not (*f.target() == *g.source()))
        throw Error(Errc::composition, "schema maps are not composable");
    std::vector<SimplexImage> images;
    images.reserve(f.images().size());
    for (auto &img : f.images()) {
        const auto &next = g[img.target];
        Collapse c(img.collapse.size());
        for (std::size_t k = 0; k < c.size(); ++k)
            c[k] = next.collapse[img.collapse[k]];
        images.push_back({next.target, std::move(c)});
    }
    return SchemaMorphism(f.source(), g.target(), std::move(images));
}

std::vector<SchemaMorphism> enumerate_schema_morphisms(const SchemaPtr &source, const SchemaPtr &target,
                                                       std::size_t cap)
{
    const auto &src = *source;
    const auto &tgt = *target;
    auto by_vertices = simplices_by_vertices(tgt);
    std::vector<SchemaMorphism> out;
    std::vector<SimplexImage> images(src.size());
    auto rec = [&](auto &self, std::size_t s) -> void {
        if (s == src.size()) {
            if (out.size() >= cap)
                throw Error(Errc::too_large, "more than " + std::to_string(cap) + " schema maps");
            out.emplace_back(source, target, images);
            return;
        }
        if (src[s].dim == 0) {
            for (std::size_t t = 0; t < tgt.size() and tgt[t].dim == 0; ++t) {
                if (tgt[t].type != src[s].type)
                    continue;
                images[s] = {t, {0}};
                self(self, s + 1);
            }
            return;
        }
        std::vector<std::size_t> tuple;
        for (auto v : src[s].vertices)
            tuple.push_back(images[v].target);
        auto shape = collapse_of(tuple);
        if (not shape)
            return;
        auto it = by_vertices.find(shape->second);
        if (it == by_vertices.end())
            return;
        for (auto t : it->second) {
            SimplexImage candidate{t, shape->first};
            if (not faces_agree(tgt, src, s, candidate, images))
                continue;
            images[s] = candidate;
            self(self, s + 1);
        }
    };
    rec(rec, 0);
    return out;
}

std::size_t Subschema::size() const
{
    return static_cast<std::size_t>(std::count(members_.begin(), members_.end(), true));
}

std::vector<std::size_t> Subschema::list() const
{
    std::vector<std::size_t> out;
    for (std::size_t s = 0; s < members_.size(); ++s) {
        if (members_[s])
            out.push_back(s);
    }
    return out;
}

bool is_face_closed(const Schema &x, const Subschema &s)
{
    if (s.members().size() != x.size())
        return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (not s.contains(i))
            continue;
        for (auto f : x[i].faces) {
            if (not s.contains(f))
                return false;
        }
    }
    return true;
}

Subschema closure(const Schema &x, const std::vector<std::size_t> &simplices)
{
    std::vector<bool> members(x.size(), false);
    for (auto s : simplices) {
        for (auto f : x.closure_of(s))
            members[f] = true;
    }
    return Subschema(std::move(members));
}

Subschema closure_by_id(const Schema &x, const std::vector<std::string> &ids)
{
    std::vector<std::size_t> simplices;
    for (auto &id : ids)
        simplices.push_back(x.index_of(id));
    return closure(x, simplices);
}

Subschema subschema_union(const Subschema &a, const Subschema &b)
{
    std::vector<bool> members(a.members().size());
    for (std::size_t s = 0; s < members.size(); ++s)
        members[s] = a.contains(s) or b.contains(s);
    return Subschema(std::move(members));
}

Subschema subschema_intersect(const Subschema &a, const Subschema &b)
{
    std::vector<bool> members(a.members().size());
    for (std::size_t s = 0; s < members.size(); ++s)
        members[s] = a.contains(s) and b.contains(s);
    return Subschema(std::move(members));
}

bool subschema_leq(const Subschema &a, const Subschema &b)
{
    for (std::size_t s = 0; s < a.members().size(); ++s) {
        if (a.contains(s) and not b.contains(s))
            return false;
    }
    return true;
}

std::vector<std::size_t> maximal_simplices(const Schema &x, const Subschema &s)
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (not s.contains(i))
            continue;
        auto &co = x.cofaces(i);
        if (std::none_of(co.begin(), co.end(), [&](auto c) { return s.contains(c); }))
            out.push_back(i);
    }
    return out;
}

std::vector<Subschema> enumerate_subschemas(const Schema &x)
{
    if (x.size() > 20)
        throw Error(Errc::too_large, "subschema enumeration is capped at 20 simplices");
    std::vector<Subschema> out;
    std::vector<bool> members(x.size(), false);
    // faces precede their cofaces in index order, so a simplex can be added once its faces are decided
    auto rec = [&](auto &self, std::size_t s) -> void {
        if (s == x.size()) {
            out.emplace_back(members);
            return;
        }
        self(self, s + 1);
        auto &faces = x[s].faces;
        if (std::all_of(faces.begin(), faces.end(), [&](auto f) { return members[f]; })) {
            members[s] = true;
            self(self, s + 1);
            members[s] = false;
        }
    };
    rec(rec, 0);
    std::sort(out.begin(), out.end(), [](const Subschema &a, const Subschema &b) {
        if (a.size() != b.size())
            return a.size() < b.size();
        return a.members() > b.members();
    });
    return out;
}

Subschema image_subschema(const SchemaMorphism &f, const Subschema &s)
{
    std::vector<std::size_t> targets;
    for (auto i : s.list())
        targets.push_back(f[i].target);
    return closure(*f.target(), targets);
}

Subschema preimage_subschema(const SchemaMorphism &f, const Subschema &t)
{
    std::vector<bool> members(f.source()->size(), false);
    for (std::size_t s = 0; s < members.size(); ++s)
        members[s] = t.contains(f[s].target);
    return Subschema(std::move(members));
}

Restriction restrict_schema(const SchemaPtr &x, const Subschema &s)
{
    if (not is_face_closed(*x, s))
        throw Error(Errc::invalid_schema, "restriction to a set of simplices that is not face-closed");
    Schema::Builder builder(x->spec());
    for (auto i : s.list()) {
        const auto &simplex = (*x)[i];
        if (simplex.dim == 0) {
            builder.add_vertex(simplex.id, simplex.name, simplex.type);
            continue;
        }
        std::vector<std::string> faces;
        for (auto f : simplex.faces)
            faces.push_back((*x)[f].id);
        builder.add_simplex(simplex.id, std::move(faces));
    }
    auto sub = builder.build();
    std::vector<SimplexImage> images;
    for (std::size_t i = 0; i < sub->size(); ++i)
        images.push_back({x->index_of((*sub)[i].id), identity_collapse((*sub)[i].dim)});
    SchemaMorphism inclusion(sub, x, std::move(images));
    return {std::move(sub), std::move(inclusion)};
}

NdCategory nd_category(const Schema &x)
{
    NdCategory out;
    for (std::size_t s = 0; s < x.size(); ++s) {
        out.objects.push_back(s);
        for (auto t : x.closure_of(s)) {
            if (t != s)
                out.arrows.push_back({t, s, x.face_positions(s, t)});
        }
    }
    return out;
}

VertexClassifier vertex_classifier(const SchemaPtr &x)
{
    std::vector<Attribute> attrs;
    std::map<std::string, std::size_t> uses;
    const auto nv = x->vertex_count();
    for (std::size_t v = 0; v < nv; ++v) {
        auto name = (*x)[v].name;
        auto n = ++uses[name];
        if (n > 1)
            name += "#" + std::to_string(n);
        attrs.push_back({std::move(name), (*x)[v].type});
    }
    VertexClassifier out{SimpleSchema(x->spec(), std::move(attrs)), {}, true, std::nullopt};
    for (std::size_t s = 0; s < x->size(); ++s) {
        auto &vs = (*x)[s].vertices;
        out.column_of.push_back(vs);
        if (not std::is_sorted(vs.begin(), vs.end()))
            out.order_compatible = false;
    }
    if (out.order_compatible and nv <= 12) {
        auto delta = simplex_schema(out.columns);
        std::vector<std::size_t> vertex_map(nv);
        std::iota(vertex_map.begin(), vertex_map.end(), 0);
        out.morphism = SchemaMorphism::from_vertex_map(x, delta, vertex_map);
    }
    return out;
}

SchemaColimit schema_colimit(const std::vector<SchemaPtr> &objects, const std::vector<DiagramArrow> &arrows)
{
    std::vector<std::size_t> offset(objects.size() + 1, 0);
    for (std::size_t i = 0; i < objects.size(); ++i)
        offset[i + 1] = offset[i] + objects[i]->size();
    const auto total = offset.back();
    auto global = [&](std::size_t obj, std::size_t s) { return offset[obj] + s; };
    std::vector<std::pair<std::size_t, std::size_t>> local(total);
    for (std::size_t i = 0; i < objects.size(); ++i) {
        for (std::size_t s = 0; s < objects[i]->size(); ++s)
            local[global(i, s)] = {i, s};
    }
    auto simplex_at = [&](std::size_t g) -> const Simplex & { return (*objects[local[g].first])[local[g].second]; };

    detail::UnionFind uf(total);
    std::vector<std::vector<std::pair<std::size_t, Collapse>>> collapses(total);
    for (auto &a : arrows) {
        if (a.from >= objects.size() or a.to >= objects.size())
            throw Error(Errc::invalid_morphism, "diagram arrow refers to a missing object");
        if (not (*a.map.source() == *objects[a.from]) or not (*a.map.target() == *objects[a.to]))
            throw Error(Errc::invalid_morphism, "diagram arrow does not match its endpoints");
        for (std::size_t s = 0; s < objects[a.from]->size(); ++s) {
            const auto &img = a.map[s];
            if (is_identity(img.collapse))
                uf.unite(global(a.from, s), global(a.to, img.target));
            else
                collapses[global(a.from, s)].push_back({global(a.to, img.target), img.collapse});
        }
    }

    // merge the images of each degenerate class until stable
    std::vector<std::optional<std::pair<std::size_t, Collapse>>> degenerate(total);
    for (bool changed = true; changed;) {
        changed = false;
        std::fill(degenerate.begin(), degenerate.end(), std::nullopt);
        for (std::size_t g = 0; g < total; ++g) {
            auto root = uf.find(g);
            for (auto &[t, alpha] : collapses[g]) {
                auto &slot = degenerate[root];
                if (not slot) {
                    slot = std::make_pair(t, alpha);
                    continue;
                }
                if (slot->second != alpha)
                    throw Error(Errc::unsupported_colimit, "one simplex collapses in two different ways");
                if (uf.unite(slot->first, t))
                    changed = true;
            }
        }
    }

    auto resolve = [&](std::size_t g) -> std::pair<std::size_t, Collapse> {
        auto root = uf.find(g);
        Collapse alpha = identity_collapse(simplex_at(g).dim);
        for (std::size_t steps = 0; degenerate[root]; ++steps) {
            if (steps > total)
                throw Error(Errc::unsupported_colimit, "collapse chain does not terminate");
            auto &[t, beta] = *degenerate[root];
            for (auto &a : alpha)
                a = beta[a];
            root = uf.find(t);
        }
        return {root, alpha};
    };

    // nondegenerate classes in order of first appearance
    std::vector<std::size_t> class_roots;
    std::map<std::size_t, std::vector<std::size_t>> members;
    for (std::size_t g = 0; g < total; ++g) {
        auto root = uf.find(g);
        if (degenerate[root])
            continue;
        auto [it, inserted] = members.try_emplace(root);
        if (inserted)
            class_roots.push_back(root);
        it->second.push_back(g);
    }

    std::map<std::size_t, std::string> class_id;
    {
        std::map<std::string, std::vector<std::size_t>> by_plain;
        for (auto root : class_roots) {
            std::set<std::string> ids;
            for (auto g : members[root])
                ids.insert(simplex_at(g).id);
            std::string id;
            for (auto &part : ids)
                id += (id.empty() ? "" : "~") + part;
            by_plain[id].push_back(root);
            class_id[root] = id;
        }
        for (auto &[plain, roots] : by_plain) {
            if (roots.size() < 2)
                continue;
            for (auto root : roots) {
                std::set<std::string> ids;
                for (auto g : members[root])
                    ids.insert(std::to_string(local[g].first) + ":" + simplex_at(g).id);
                std::string id;
                for (auto &part : ids)
                    id += (id.empty() ? "" : "~") + part;
                class_id[root] = id;
            }
        }
    }

    const auto spec = objects.empty() ? std::make_shared<const TypeSpec>() : objects.front()->spec();
    Schema::Builder builder(spec);
    std::vector<std::size_t> by_dim = class_roots;
    std::stable_sort(by_dim.begin(), by_dim.end(),
                     [&](auto a, auto b) { return simplex_at(a).dim < simplex_at(b).dim; });
    for (auto root : by_dim) {
        const auto &rep = simplex_at(members[root].front());
        if (rep.dim == 0) {
            std::vector<std::string> names;
            for (auto g : members[root]) {
                const auto &v = simplex_at(g);
                if (v.type != rep.type)
                    throw Error(Errc::label_conflict,
                                "vertex '" + v.id + "' of type '" + v.type + "' is identified with type '" + rep.type + "'");
                if (std::find(names.begin(), names.end(), v.name) == names.end())
                    names.push_back(v.name);
            }
            std::string name;
            for (auto &n : names)
                name += (name.empty() ? "" : "=") + n;
            builder.add_vertex(class_id[root], name, rep.type);
            continue;
        }
        std::vector<std::string> faces;
        auto g0 = members[root].front();
        for (auto f : rep.faces) {
            auto face_root = uf.find(global(local[g0].first, f));
            if (degenerate[face_root])
                throw Error(Errc::unsupported_colimit, "a face of '" + rep.id + "' becomes degenerate");
            faces.push_back(class_id[face_root]);
        }
        builder.add_simplex(class_id[root], std::move(faces));
    }
    SchemaPtr result;
    try {
        result = builder.build();
    } catch (const Error &e) {
        if (e.code() == Errc::invalid_schema)
            throw Error(Errc::unsupported_colimit, std::string("quotient is not a simplicial presentation: ") + e.what());
        throw;
    }

    std::vector<SchemaMorphism> legs;
    for (std::size_t i = 0; i < objects.size(); ++i) {
        std::vector<SimplexImage> images;
        for (std::size_t s = 0; s < objects[i]->size(); ++s) {
            auto [root, alpha] = resolve(global(i, s));
            images.push_back({result->index_of(class_id.at(root)), std::move(alpha)});
        }
        legs.emplace_back(objects[i], result, std::move(images));
    }
    return {std::move(result), std::move(legs)};
}

bool for_each_schema_isomorphism(const Schema &a, const Schema &b,
                                 const std::function<bool(const std::vector<std::size_t> &)> &visit)
{
    if (a.size() != b.size() or a.vertex_count() != b.vertex_count())
        return false;
    for (std::size_t s = 0; s < a.size(); ++s) {
        if (a[s].dim != b[s].dim)
            return false;
    }
    std::map<std::vector<std::size_t>, std::vector<std::size_t>> by_faces;
    for (std::size_t t = 0; t < b.size(); ++t) {
        if (b[t].dim > 0)
            by_faces[b[t].faces].push_back(t);
    }
    std::vector<std::size_t> map(a.size(), npos);
    std::vector<bool> used(b.size(), false);
    auto rec = [&](auto &self, std::size_t s) -> bool {
        if (s == a.size())
            return visit(map);
        std::vector<std::size_t> candidates;
        if (a[s].dim == 0) {
            for (std::size_t t = 0; t < b.size() and b[t].dim == 0; ++t) {
                if (b[t].type == a[s].type)
                    candidates.push_back(t);
            }
        } else {
            std::vector<std::size_t> faces;
            for (auto f : a[s].faces)
                faces.push_back(map[f]);
            auto it = by_faces.find(faces);
            if (it != by_faces.end())
                candidates = it->second;
        }
        for (auto t : candidates) {
            if (used[t])
                continue;
            used[t] = true;
            map[s] = t;
            if (self(self, s + 1))
                return true;
            used[t] = false;
        }
        map[s] = npos;
        return false;
    };
    return rec(rec, 0);
}

std::optional<std::vector<std::size_t>> find_schema_isomorphism(const Schema &a, const Schema &b)
{
    std::optional<std::vector<std::size_t>> out;
    for_each_schema_isomorphism(a, b, [&](const auto &map) {
        out = map;
        return true;
    });
    return out;
}

}
