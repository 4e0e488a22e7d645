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

#include <filesystem>

#include <gtest/gtest.h>

#include "sdb/io.hpp"
#include "sdb/keysheaf.hpp"
#include "support.hpp"

namespace sdb {
namespace {

using testing::bool_spec;
using testing::str_int_spec;

const std::filesystem::path fixtures = SDB_FIXTURE_DIR;

Database edge_example() { return io::load_database(io::read_file(fixtures / "edge_example.json")); }

std::vector<std::string> family_keys(const KeySheaf &keys, const FamilySet &fs)
{
    std::vector<std::string> out;
    for (const auto &f : fs.families)
        out.push_back(family_key(keys, fs.maximal, f));
    return out;
}

TEST(KeySheaf, EmptySubschemaHasOneFamily)
{
    auto db = edge_example();
    auto fs = evaluate_on_subschema(db.keys(), Subschema::empty(*db.schema()));
    ASSERT_EQ(fs.size(), 1u);
    EXPECT_EQ(family_keys(db.keys(), fs), (std::vector<std::string>{"*"}));
}

TEST(KeySheaf, EdgeExampleFamilies)
{
    auto db = edge_example();
    const auto &x = *db.schema();
    auto whole = evaluate_on_subschema(db.keys(), Subschema::whole(x));
    EXPECT_EQ(family_keys(db.keys(), whole), (std::vector<std::string>{"10", "4", "cc"}));
    auto vertices = closure_by_id(x, {"First", "BYear"});
    auto fs = evaluate_on_subschema(db.keys(), vertices);
    EXPECT_EQ(fs.size(), 6u);
    EXPECT_EQ(family_keys(db.keys(), fs)[0], "(BYear:x,First:1)");
    auto first = evaluate_on_subschema(db.keys(), closure_by_id(x, {"First"}));
    EXPECT_EQ(family_keys(db.keys(), first), (std::vector<std::string>{"1", "2"}));
}

TEST(KeySheaf, RestrictionOfFamilies)
{
    auto db = edge_example();
    const auto &x = *db.schema();
    auto whole = evaluate_on_subschema(db.keys(), Subschema::whole(x));
    auto first = closure_by_id(x, {"First"});
    auto cc = whole.families[2];
    auto r = restrict_family(cc, first);
    EXPECT_EQ(db[x.index_of("First")].keys[r[x.index_of("First")]], "2");
    EXPECT_EQ(r[x.index_of("X")], npos);
    EXPECT_EQ(db.keys().restrict_to(x.index_of("X"), 1, x.index_of("BYear")), 0u);
    EXPECT_THROW(db.keys().restrict_to(x.index_of("First"), 0, x.index_of("BYear")), Error);
}

TEST(KeySheaf, DiscreteFamiliesAreProducts)
{
    auto spec = bool_spec();
    auto x = Schema::Builder(spec)
                 .add_vertex("a", "a", "Bool")
                 .add_vertex("b", "b", "Bool")
                 .add_vertex("c", "c", "Bool")
                 .build();
    auto t = testing::boolean(spec, true);
    auto f = testing::boolean(spec, false);
    auto db = testing::build_db(x, {{"a", {{"1", t}, {"2", f}}}, {"b", {{"1", t}, {"2", f}, {"3", t}}}, {"c", {{"1", f}}}},
                                {});
    EXPECT_EQ(evaluate_on_subschema(db.keys(), Subschema::whole(*x)).size(), 6u);
    EXPECT_EQ(evaluate_on_subschema(db.keys(), closure_by_id(*x, {"a", "b"})).size(), 6u);
    EXPECT_EQ(evaluate_on_subschema(db.keys(), closure_by_id(*x, {"b"})).size(), 3u);
}

TEST(KeySheaf, ShapeChecks)
{
    auto db = edge_example();
    auto sections = db.keys().sections();
    auto unsorted = sections;
    std::swap(unsorted[0].keys[0], unsorted[0].keys[1]);
    EXPECT_THROW(KeySheaf(db.schema(), unsorted), Error);
    auto out_of_range = sections;
    out_of_range[2].faces[0][0] = 7;
    EXPECT_THROW(KeySheaf(db.schema(), out_of_range), Error);
    auto missing = sections;
    missing.pop_back();
    EXPECT_THROW(KeySheaf(db.schema(), missing), Error);
}

TEST(KeySheaf, ValidateFindsInjectedFaults)
{
    auto db = edge_example();
    EXPECT_TRUE(validate_sheaf_and_data(db.keys(), &db.data()).empty());
    auto spec = db.spec();
    auto x = db.schema()->index_of("X");

    auto wrong = db.data();
    wrong[x][0][1] = testing::integer(spec, 1900);
    auto v = validate_sheaf_and_data(db.keys(), &wrong);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].kind, "naturality");
    EXPECT_EQ(v[0].simplex, "X");

    auto typed = db.data();
    typed[db.schema()->index_of("First")][0][0] = testing::integer(spec, 3);
    auto t = validate_sheaf_and_data(db.keys(), &typed);
    ASSERT_FALSE(t.empty());
    bool saw_type = false;
    for (const auto &violation : t)
        saw_type = saw_type or violation.kind == "type";
    EXPECT_TRUE(saw_type);
    EXPECT_THROW(Database(db.keys(), typed), Error);
}

TEST(KeySheaf, FunctorialityOnATriangle)
{
    auto spec = bool_spec();
    auto tri = simplex_schema(SimpleSchema(spec, {{"a", "Bool"}, {"b", "Bool"}, {"c", "Bool"}}));
    auto t = testing::boolean(spec, true);
    auto db = testing::build_db(tri, {{"a", {{"1", t}, {"2", t}}}, {"b", {{"1", t}}}, {"c", {{"1", t}}}},
                                {{"a,b", {{"ab", {"1", "1"}}}},
                                 {"a,c", {{"ac", {"1", "1"}}}},
                                 {"b,c", {{"bc", {"1", "1"}}}},
                                 {"a,b,c", {{"t", {"bc", "ac", "ab"}}}}});
    EXPECT_TRUE(validate_sheaf_and_data(db.keys(), &db.data()).empty());
    auto sections = db.keys().sections();
    // point a,c at a vertex key that disagrees with a,b
    sections[tri->index_of("a,c")].faces[1][0] = 1;
    KeySheaf broken(tri, sections);
    auto v = validate_sheaf_and_data(broken, nullptr);
    ASSERT_FALSE(v.empty());
    EXPECT_EQ(v[0].kind, "functoriality");
    EXPECT_EQ(v[0].simplex, "a,b,c");
}

TEST(KeySheaf, DeriveDataMatchesStoredRecords)
{
    auto db = edge_example();
    DataMap vertex_only = db.data();
    vertex_only[db.schema()->index_of("X")].clear();
    EXPECT_EQ(derive_data(db.keys(), vertex_only), db.data());
}

TEST(KeySheaf, PullbackAlongACollapseRepeatsValues)
{
    auto spec = str_int_spec();
    auto y = testing::edge_schema(spec, "Y", {"a", "Str"}, {"b", "Str"});
    auto x = testing::edge_schema(spec, "X", {"S", "Str"}, {"N", "Z"});
    auto db = testing::build_db(x, {{"S", {{"s1", testing::str(spec, "foo")}, {"s2", testing::str(spec, "bar")}}},
                                    {"N", {{"n1", testing::integer(spec, 7)}}}},
                                {{"X", {{"e1", {"n1", "s1"}}}}});
    SchemaMorphism f(y, x, {{0, {0}}, {0, {0}}, {0, {0, 0}}});
    auto pb = pullback(f, db.keys(), db.data());
    EXPECT_EQ(pullback_keys(f, db.keys()), pb.keys);
    auto e = y->index_of("Y");
    ASSERT_EQ(pb.keys[e].keys, (std::vector<std::string>{"s1", "s2"}));
    EXPECT_EQ(pb.data[e][0], (Record{testing::str(spec, "foo"), testing::str(spec, "foo")}));
    EXPECT_EQ(pb.data[e][1], (Record{testing::str(spec, "bar"), testing::str(spec, "bar")}));
    EXPECT_TRUE(validate_sheaf_and_data(pb.keys, &pb.data).empty());
}

TEST(KeySheaf, PushforwardAlongIdentity)
{
    auto db = edge_example();
    auto id = SchemaMorphism::identity(db.schema());
    auto ps = pushforward_star(id, db.keys());
    for (std::size_t s = 0; s < db.schema()->size(); ++s)
        EXPECT_EQ(ps.sheaf[s].size(), db[s].size());
    auto plus = pushforward_plus(id, db.keys(), db.data());
    auto m = materialize(plus);
    for (std::size_t s = 0; s < db.schema()->size(); ++s) {
        EXPECT_TRUE(plus.sections[s].fully_constrained());
        EXPECT_EQ(m.result.keys[s].size(), db[s].size());
    }
}

TEST(KeySheaf, PushforwardPlusLeavesUnhitVerticesFree)
{
    auto spec = bool_spec();
    auto v = Schema::Builder(spec).add_vertex("v", "v", "Bool").build();
    auto x = testing::edge_schema(spec, "e", {"v", "Bool"}, {"w", "Bool"});
    auto t = testing::boolean(spec, true);
    auto f = testing::boolean(spec, false);
    auto db = testing::build_db(v, {{"v", {{"1", t}, {"2", f}, {"3", t}}}}, {});
    auto inc = SchemaMorphism::from_vertex_map(v, x, {x->index_of("v")});
    auto plus = pushforward_plus(inc, db.keys(), db.data());
    const auto &w = plus.sections[x->index_of("w")];
    ASSERT_EQ(w.size(), 1u);
    EXPECT_FALSE(w.constrained[0]);
    auto m = materialize(plus);
    EXPECT_EQ(m.result.keys[x->index_of("v")].size(), 3u);
    EXPECT_EQ(m.result.keys[x->index_of("w")].size(), 2u);
    // each key at v pairs with each value at w
    EXPECT_EQ(m.result.keys[x->index_of("e")].size(), 6u);
    EXPECT_TRUE(validate_sheaf_and_data(m.result.keys, &m.result.data).empty());
}

TEST(KeySheaf, MaterializeRefusesInfiniteFreePositions)
{
    auto spec = str_int_spec();
    auto x = testing::edge_schema(spec, "X", {"S", "Str"}, {"N", "Z"});
    auto u = universal_cylinder(x);
    for (const auto &section : u.sections)
        EXPECT_EQ(section.size(), 1u);
    try {
        materialize(u);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), Errc::non_finite_result);
    }
}

TEST(KeySheaf, ExtendByEmpty)
{
    auto db = edge_example();
    auto x = db.schema();
    auto spec = db.spec();
    auto big = Schema::Builder(spec)
                   .add_vertex("First", "First", "Str")
                   .add_vertex("BYear", "BYear", "Z")
                   .add_vertex("Other", "Other", "Z")
                   .add_simplex("X", {"BYear", "First"})
                   .add_simplex("Y", {"Other", "First"})
                   .build();
    auto inc = SchemaMorphism::from_vertex_map(x, big, {0, 1});
    auto ext = extend_by_empty(inc, db.keys(), db.data());
    EXPECT_EQ(ext.keys[big->index_of("X")].keys, db[x->index_of("X")].keys);
    EXPECT_EQ(ext.keys[big->index_of("Other")].size(), 0u);
    EXPECT_EQ(ext.keys[big->index_of("Y")].size(), 0u);
    SchemaMorphism collapse(testing::edge_schema(spec, "Y", {"a", "Str"}, {"b", "Str"}), x,
                            {{0, {0}}, {0, {0}}, {0, {0, 0}}});
    try {
        auto pb = pullback(collapse, db.keys(), db.data());
        extend_by_empty(collapse, pb.keys, pb.data);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), Errc::not_monic);
    }
}

TEST(KeySheaf, ImageIdentifiesEqualRecords)
{
    auto db = edge_example();
    auto e = db.schema()->index_of("X");
    auto img = image_data(db.keys(), db.data());
    EXPECT_EQ(img.result.keys[e].keys, (std::vector<std::string>{"10", "4"}));
    EXPECT_EQ(img.representative[e], (std::vector<std::size_t>{0, 1, 0}));
    EXPECT_TRUE(validate_sheaf_and_data(img.result.keys, &img.result.data).empty());
}

TEST(KeySheaf, ColimitTagsAndGlues)
{
    auto db = edge_example();
    SheafData sd{db.keys(), db.data()};
    auto coproduct = sheaf_colimit(db.schema(), {&sd, &sd}, {});
    auto first = db.schema()->index_of("First");
    EXPECT_EQ(coproduct.result.keys[first].keys, (std::vector<std::string>{"1:1", "1:2", "2:1", "2:2"}));
    std::vector<std::vector<std::size_t>> id;
    for (std::size_t s = 0; s < db.schema()->size(); ++s) {
        id.emplace_back();
        for (std::size_t k = 0; k < db[s].size(); ++k)
            id.back().push_back(k);
    }
    auto glued = sheaf_colimit(db.schema(), {&sd, &sd}, {{0, 1, id}});
    EXPECT_EQ(glued.result.keys[first].keys, (std::vector<std::string>{"1:1~2:1", "1:2~2:2"}));
    EXPECT_EQ(glued.classes[first][0].size(), 2u);
}

TEST(KeySheaf, SheafMapsRespectRecords)
{
    auto spec = bool_spec();
    auto v = Schema::Builder(spec).add_vertex("v", "v", "Bool").build();
    auto t = testing::boolean(spec, true);
    auto f = testing::boolean(spec, false);
    auto a = testing::build_db(v, {{"v", {{"1", t}, {"2", f}}}}, {});
    auto b = testing::build_db(v, {{"v", {{"1", t}, {"2", t}, {"3", f}}}}, {});
    EXPECT_EQ(enumerate_sheaf_maps(a.keys(), b.keys()).size(), 9u);
    EXPECT_EQ(enumerate_sheaf_maps(a.keys(), b.keys(), &a.data(), &b.data()).size(), 2u);
    EXPECT_THROW(enumerate_sheaf_maps(a.keys(), b.keys(), nullptr, nullptr, 3), Error);
}

TEST(KeySheaf, CylinderLimitOfNothingIsUniversal)
{
    auto db = edge_example();
    auto lim = cylinder_limit(db.schema(), {nullptr, nullptr}, {});
    for (const auto &section : lim.sheaf.sections) {
        ASSERT_EQ(section.size(), 1u);
        for (auto c : section.constrained)
            EXPECT_FALSE(c);
    }
}

}
}
