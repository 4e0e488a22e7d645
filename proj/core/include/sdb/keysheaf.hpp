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

#include <optional>
#include <string>
#include <vector>

#include "sdb/schema.hpp"

namespace sdb {

/// Keys over one simplex.  `faces[i][k]` is the index of the restriction of key `k` in the section of face `i`.
struct Section
{
    std::vector<std::string> keys;
    std::vector<std::vector<std::size_t>> faces;

    std::size_t size() const { return keys.size(); }
    /// Index of `key`, or `npos`.
    std::size_t index_of(std::string_view key) const;

    bool operator==(const Section&) const = default;
};

/** A presheaf of finite key sets on the non-degenerate simplices of a schema.  Keys in each section are strictly
 * increasing.  Values on subschemas are computed as matching families, never stored. */
class KeySheaf
{
    SchemaPtr schema_;
    std::vector<Section> sections_;

    public:
    /// Checks shapes only (sorted keys, restriction maps in range).  Throws `Errc::invalid_sheaf`.
    KeySheaf(SchemaPtr schema, std::vector<Section> sections);

    const SchemaPtr & schema() const { return schema_; }
    const std::vector<Section> & sections() const { return sections_; }
    const Section & operator[](std::size_t s) const { return sections_[s]; }

    /// Restriction of key `k` at `s` to the face spanned by `positions`.
    std::size_t restrict_along(std::size_t s, std::size_t k, const std::vector<std::size_t> &positions) const;
    /// Restriction of key `k` at `s` to its face `t`.  Throws `Errc::invalid_sheaf` if `t` is not a face of `s`.
    std::size_t restrict_to(std::size_t s, std::size_t k, std::size_t t) const;

    bool operator==(const KeySheaf &other) const;
};

/// Records per simplex and key, on the vertex schema of the simplex.
using DataMap = std::vector<std::vector<Record>>;

struct SheafData
{
    KeySheaf keys;
    DataMap data;
};

struct Violation
{
    std::string kind;    // "functoriality", "naturality", "type"
    std::string simplex; // simplex id
    std::string detail;
};

/// Every failure of functoriality, and of naturality and typing when `data` is given.
std::vector<Violation> validate_sheaf_and_data(const KeySheaf &keys, const DataMap *data);

/// Derives records on higher simplices from vertex records and restrictions.  `vertex_data` is indexed like `data`.
DataMap derive_data(const KeySheaf &keys, const DataMap &vertex_data);

/// A matching family: one key index per simplex of the subschema, `npos` outside it.
using Family = std::vector<std::size_t>;

struct FamilySet
{
    Subschema subschema;
    std::vector<std::size_t> maximal;
    std::vector<Family> families;

    std::size_t size() const { return families.size(); }
};

/** All matching families over `s`.  The empty subschema has exactly one family.  Families come out sorted by their
 * key (see `family_key`). */
FamilySet evaluate_on_subschema(const KeySheaf &keys, const Subschema &s);

/// "*" over the empty subschema, the bare key for one maximal simplex, else "(id:key,...)" sorted by simplex id.
std::string family_key(const KeySheaf &keys, const std::vector<std::size_t> &maximal, const Family &family);

/// Restriction of a family to a smaller subschema.
Family restrict_family(const Family &family, const Subschema &smaller);

/** `f*`: the section at `y` is the section at the image of `y`; records repeat coordinates along the collapse. */
SheafData pullback(const SchemaMorphism &f, const KeySheaf &keys, const DataMap &data);
KeySheaf pullback_keys(const SchemaMorphism &f, const KeySheaf &keys);

/** `f_*` on key sheaves: the value at `s` is the set of matching families over the preimage of the closure of `s`.
 * `families[s]` is aligned with the keys of `sheaf[s]`. */
struct PushforwardStar
{
    KeySheaf sheaf;
    std::vector<FamilySet> families;
};
PushforwardStar pushforward_star(const SchemaMorphism &f, const KeySheaf &keys);

/** A section of a cylinder sheaf.  Each row fixes the values at the constrained vertex positions and leaves the
 * others free.  `sources` records the matching family each row came from, when there is one. */
struct CylinderSection
{
    std::vector<bool> constrained;
    std::vector<std::string> keys;
    std::vector<std::vector<std::optional<Value>>> values;
    std::vector<std::vector<std::size_t>> faces;
    std::vector<Family> sources;

    std::size_t size() const { return keys.size(); }
    bool fully_constrained() const;
};

struct CylinderSheaf
{
    SchemaPtr schema;
    std::vector<CylinderSection> sections;
};

/// One unconstrained row "*" on every simplex: the final object over the universal sheaf.
CylinderSheaf universal_cylinder(const SchemaPtr &schema);

/** `f_+`: at `s`, rows are the matching families over the preimage of the closure of `s` whose vertex values agree
 * wherever two source vertices meet the same vertex of `s`.  Vertices of `s` hit by no source vertex stay free. */
CylinderSheaf pushforward_plus(const SchemaMorphism &f, const KeySheaf &keys, const DataMap &data);

/** Expands free positions over their domains.  Keys of expanded rows are "(row,v1,...)".  `origin[s][k]` is the
 * cylinder row behind materialized key `k`.  Throws `Errc::non_finite_result` when a free position has a
 * non-enumerable type. */
struct Materialized
{
    SheafData result;
    std::vector<std::vector<std::size_t>> origin;
};
Materialized materialize(const CylinderSheaf &cylinder);

/// `f_!` along a monic map: sections copied onto the image, empty elsewhere.  Throws `Errc::not_monic`.
SheafData extend_by_empty(const SchemaMorphism &f, const KeySheaf &keys, const DataMap &data);

/// Keeps the first key per distinct record on every simplex.  `representative[s][k]` is the kept index for `k`.
struct ImageData
{
    SheafData result;
    std::vector<std::vector<std::size_t>> representative;
};
ImageData image_data(const KeySheaf &keys, const DataMap &data);

/// A map of cylinder sheaves on one schema, as row maps per simplex.
struct CylinderArrow
{
    std::size_t from;
    std::size_t to;
    std::vector<std::vector<std::size_t>> rows;
};

/** Limit of a diagram of cylinder sheaves on one schema.  A null node is the universal cylinder.  Rows of the
 * result are tuples of rows, one per non-null node, agreeing on shared constrained positions and commuting with the
 * arrows; keys are "(c1,c2,...)" or the bare component key when only one node is non-null.  `components[s][k][i]` is
 * the row of node `i` (`npos` for null nodes). */
struct CylinderLimit
{
    CylinderSheaf sheaf;
    std::vector<std::vector<std::vector<std::size_t>>> components;
};
CylinderLimit cylinder_limit(const SchemaPtr &schema, const std::vector<const CylinderSheaf *> &nodes,
                             const std::vector<CylinderArrow> &arrows);

/// A map of key sheaves on one schema, as key maps per simplex.
struct SheafArrow
{
    std::size_t from;
    std::size_t to;
    std::vector<std::vector<std::size_t>> keys;
};

/** Colimit of a diagram of sheaves with data on one schema.  Keys are tagged "i:k" by 1-based node position; a class
 * with several members is named by its sorted tagged keys joined with "~".  `classes[s][k]` lists the
 * (node, key) members of result key `k`.  Throws `Errc::invalid_morphism` if an arrow does not preserve records. */
struct SheafColimit
{
    SheafData result;
    std::vector<std::vector<std::vector<std::pair<std::size_t, std::size_t>>>> classes;
};
SheafColimit sheaf_colimit(const SchemaPtr &schema, const std::vector<const SheafData *> &nodes,
                           const std::vector<SheafArrow> &arrows);

/// Natural transformations `a → b` (key maps commuting with restrictions).  Throws `Errc::too_large` past `cap`.
std::vector<std::vector<std::vector<std::size_t>>> enumerate_sheaf_maps(const KeySheaf &a, const KeySheaf &b,
                                                                         const DataMap *a_data = nullptr,
                                                                         const DataMap *b_data = nullptr,
                                                                         std::size_t cap = 1000000);

}
