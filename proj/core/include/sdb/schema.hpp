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

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sdb/simple_schema.hpp"

namespace sdb {

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

/** A non-degenerate simplex.  `faces[i]` deletes vertex `i`; `vertices` lists the vertex simplices in order.
 * Vertices carry an attribute name and a type; higher simplices carry neither. */
struct Simplex
{
    std::string id;
    std::size_t dim = 0;
    std::vector<std::size_t> faces;
    std::vector<std::size_t> vertices;
    std::string name;
    std::string type;
};

class Schema;
using SchemaPtr = std::shared_ptr<const Schema>;

/** A finite labeled semi-simplicial set.  Simplices are indexed `0..size()-1`: vertices first (in declaration
 * order), then higher simplices by dimension.  Every simplex has pairwise distinct vertices, so each face of a
 * simplex is reached by exactly one set of vertex positions. */
class Schema
{
    TypeSpecPtr spec_;
    std::vector<Simplex> simplices_;
    std::map<std::string, std::size_t, std::less<>> index_;
    std::vector<std::vector<std::size_t>> cofaces_;

    Schema() = default;

    public:
    class Builder
    {
        struct Pending
        {
            std::string id;
            std::vector<std::string> faces;
            std::string name;
            std::string type;
            bool vertex;
        };

        TypeSpecPtr spec_;
        std::vector<Pending> pending_;

        public:
        explicit Builder(TypeSpecPtr spec) : spec_(std::move(spec)) { }

        Builder & add_vertex(std::string id, std::string name, std::string type);
        Builder & add_simplex(std::string id, std::vector<std::string> faces);
        /** Validates face closure, dimensions, the simplicial identities, distinct vertices and labels.  Throws
         * `Errc::invalid_schema` or `Errc::unknown_type`. */
        SchemaPtr build() const;
    };

    const TypeSpecPtr & spec() const { return spec_; }
    std::size_t size() const { return simplices_.size(); }
    const Simplex & operator[](std::size_t i) const { return simplices_[i]; }
    const std::vector<Simplex> & simplices() const { return simplices_; }
    std::optional<std::size_t> find(std::string_view id) const;
    /// Throws `Errc::invalid_schema` for an unknown id.
    std::size_t index_of(std::string_view id) const;
    std::size_t vertex_count() const;
    std::size_t dimension() const;

    /// Simplices having `s` as a direct face.
    const std::vector<std::size_t> & cofaces(std::size_t s) const { return cofaces_[s]; }

    /** Face of `s` spanned by the vertex positions `positions` (strictly increasing, nonempty).  Returns `s` when
     * every position is kept. */
    std::size_t face_at(std::size_t s, const std::vector<std::size_t> &positions) const;
    /// Position of each vertex of `t` inside `s`, or empty if `t` is not a face of `s`.
    std::vector<std::size_t> face_positions(std::size_t s, std::size_t t) const;
    /// All faces of `s` including `s` itself, ascending by index.
    std::vector<std::size_t> closure_of(std::size_t s) const;

    /// The simple schema of the vertex tuple of `s`.  Repeated vertex names get a "#n" suffix.
    SimpleSchema vertex_schema(std::size_t s) const;

    /// Structural equality including ids.
    bool operator==(const Schema &other) const;
};

/// The σ-simplex: every nonempty subset of the columns.  Vertex ids are column names; higher ids join them with ",".
SchemaPtr simplex_schema(const SimpleSchema &sigma);

/// A map `[n] → [m]`, surjective and order-preserving.
using Collapse = std::vector<std::size_t>;

struct SimplexImage
{
    std::size_t target = 0;
    Collapse collapse;

    bool operator==(const SimplexImage&) const = default;
};

/** A morphism of schemas sending each simplex to a target simplex together with a collapse of its vertex positions.
 * A collapse that is the identity means the simplex is sent to a simplex of the same dimension. */
class SchemaMorphism
{
    SchemaPtr source_;
    SchemaPtr target_;
    std::vector<SimplexImage> images_;

    public:
    /// Throws `Errc::invalid_morphism` unless labels are preserved and faces commute.
    SchemaMorphism(SchemaPtr source, SchemaPtr target, std::vector<SimplexImage> images);

    static SchemaMorphism identity(const SchemaPtr &schema);
    /** Infers the map from a vertex assignment.  Throws `Errc::invalid_morphism` if some simplex has no image or its
     * image is ambiguous (parallel simplices). */
    static SchemaMorphism from_vertex_map(SchemaPtr source, SchemaPtr target, const std::vector<std::size_t> &vertex_map);

    const SchemaPtr & source() const { return source_; }
    const SchemaPtr & target() const { return target_; }
    const std::vector<SimplexImage> & images() const { return images_; }
    const SimplexImage & operator[](std::size_t s) const { return images_[s]; }
    /// Vertex `k` of source simplex `s` goes to this target vertex.
    std::size_t vertex_image(std::size_t s, std::size_t k) const;
    bool injective() const;
    bool collapsing() const;

    bool operator==(const SchemaMorphism &other) const;
};

/// `g ∘ f`.  Throws `Errc::composition` when `f.target()` differs from `g.source()`.
SchemaMorphism compose(const SchemaMorphism &g, const SchemaMorphism &f);

/// Every morphism `source → target`.  Throws `Errc::too_large` past `cap` results.
std::vector<SchemaMorphism> enumerate_schema_morphisms(const SchemaPtr &source, const SchemaPtr &target,
                                                       std::size_t cap = 100000);

/// A face-closed set of simplices, stored as a membership mask.
class Subschema
{
    std::vector<bool> members_;

    public:
    Subschema() = default;
    explicit Subschema(std::vector<bool> members) : members_(std::move(members)) { }
    static Subschema empty(const Schema &x) { return Subschema(std::vector<bool>(x.size(), false)); }
    static Subschema whole(const Schema &x) { return Subschema(std::vector<bool>(x.size(), true)); }

    bool contains(std::size_t s) const { return members_[s]; }
    const std::vector<bool> & members() const { return members_; }
    std::size_t size() const;
    bool is_empty() const { return size() == 0; }
    std::vector<std::size_t> list() const;

    bool operator==(const Subschema&) const = default;
    auto operator<=>(const Subschema &other) const { return members_ <=> other.members_; }
};

bool is_face_closed(const Schema &x, const Subschema &s);
Subschema closure(const Schema &x, const std::vector<std::size_t> &simplices);
/// Closure of simplices named by id.  Throws `Errc::invalid_schema` for unknown ids.
Subschema closure_by_id(const Schema &x, const std::vector<std::string> &ids);
Subschema subschema_union(const Subschema &a, const Subschema &b);
Subschema subschema_intersect(const Subschema &a, const Subschema &b);
bool subschema_leq(const Subschema &a, const Subschema &b);
/// Members of `s` that are not a proper face of another member.
std::vector<std::size_t> maximal_simplices(const Schema &x, const Subschema &s);
/// Every subschema, including the empty one.  Throws `Errc::too_large` above 20 simplices.
std::vector<Subschema> enumerate_subschemas(const Schema &x);

Subschema image_subschema(const SchemaMorphism &f, const Subschema &s);
Subschema preimage_subschema(const SchemaMorphism &f, const Subschema &t);

/// The sub-presentation on `s`, keeping ids, with its inclusion into `x`.
struct Restriction
{
    SchemaPtr schema;
    SchemaMorphism inclusion;
};
Restriction restrict_schema(const SchemaPtr &x, const Subschema &s);

struct FaceArrow
{
    std::size_t from;                   // the face
    std::size_t to;                     // the simplex it sits in
    std::vector<std::size_t> positions; // vertex positions of `from` inside `to`
};

/// Objects and non-identity arrows of ND(X).
struct NdCategory
{
    std::vector<std::size_t> objects;
    std::vector<FaceArrow> arrows;
};
NdCategory nd_category(const Schema &x);

/** The vertex classifier.  `columns` lists all vertices with their labels; `column_of[s][k]` is the column of vertex
 * `k` of simplex `s`.  When every simplex lists its vertices in increasing column order, `morphism` is the map of
 * schemas into the simplex on `columns`. */
struct VertexClassifier
{
    SimpleSchema columns;
    std::vector<std::vector<std::size_t>> column_of;
    bool order_compatible = false;
    std::optional<SchemaMorphism> morphism;
};
VertexClassifier vertex_classifier(const SchemaPtr &x);

struct DiagramArrow
{
    std::size_t from;
    std::size_t to;
    SchemaMorphism map;
};

struct SchemaColimit
{
    SchemaPtr schema;
    std::vector<SchemaMorphism> legs;
};

/** Colimit of a finite diagram of schemas by union-find on simplices.  Simplices collapsed by some arrow resolve to
 * their image.  Throws `Errc::label_conflict` when vertices of different types are identified, and
 * `Errc::unsupported_colimit` when the quotient needs a degenerate face or a simplex with repeated vertices. */
SchemaColimit schema_colimit(const std::vector<SchemaPtr> &objects, const std::vector<DiagramArrow> &arrows);

/// A simplicial isomorphism `a → b` as a simplex bijection, if one exists.  Ids and names are ignored.
std::optional<std::vector<std::size_t>> find_schema_isomorphism(const Schema &a, const Schema &b);
/// Calls `visit` on every isomorphism `a → b` until it returns true.  Returns whether some call returned true.
bool for_each_schema_isomorphism(const Schema &a, const Schema &b,
                                 const std::function<bool(const std::vector<std::size_t> &)> &visit);

}
