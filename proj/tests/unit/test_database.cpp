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

#include "sdb/database.hpp"
#include "sdb/io.hpp"
#include "support.hpp"

namespace sdb {
namespace {

using testing::bool_spec;

const std::filesystem::path fixtures = SDB_FIXTURE_DIR;

DatabasePtr load(const char *name)
{
    return std::make_shared<const Database>(io::load_database_or_table(io::read_file(fixtures / name)));
}

Errc code_of(const std::function<void()> &f)
{
    try {
        f();
    } catch (const Error &e) {
        return e.code();
    }
    ADD_FAILURE() << "no error";
    return Errc::script;
}

std::vector<std::string> keys_at(const Database &db, const std::string &id)
{
    return db[db.schema()->index_of(id)].keys;
}

/// The selection `First = name` on the edge example.
DatabasePtr first_is(const Database &db, const std::string &name)
{
    auto view = db_project(db, closure_by_id(*db.schema(), {"First"}));
    return std::make_shared<const Database>(
        testing::build_db(view.schema(), {{"First", {{"s", testing::str(db.spec(), name)}}}}, {}));
}

TEST(Database, MarxJoinIsLossy)
{
    auto titles = load("marx_titles.json");
    auto names = load("marx_names.json");
    auto j = db_join(titles, names, {{"LastName", "LastName"}});
    auto t = global_table(*j.result);
    EXPECT_EQ(t.size(), 4u);
    EXPECT_EQ(t.schema().size(), 3u);
    ASSERT_TRUE(j.legs[0].has_value());
    EXPECT_TRUE(validate_db_morphism(*j.legs[0]).empty());
    EXPECT_TRUE(validate_db_morphism(*j.legs[1]).empty());
}

TEST(Database, MarxPathIsLossless)
{
    auto db = load("marx_lossless.json");
    auto t = global_table(*db);
    ASSERT_EQ(t.size(), 2u);
    std::set<std::string> rows;
    for (const auto &[k, r] : t.rows())
        rows.insert(render_record(r));
    EXPECT_EQ(rows.size(), 2u);
}

TEST(Database, SingleNodeLimitIsIsomorphic)
{
    auto db = load("edge_example.json");
    auto lim = db_limit({db}, {});
    EXPECT_TRUE(find_db_isomorphism(*lim.result, *db).has_value());
    ASSERT_TRUE(lim.legs[0].has_value());
    EXPECT_TRUE(validate_db_morphism(*lim.legs[0]).empty());
}

TEST(Database, MapToTheFinalDatabaseChangesNothing)
{
    auto db = load("edge_example.json");
    auto id = SchemaMorphism::identity(db->schema());
    auto lim = db_limit({db, FinalDb{db->schema()}}, {{0, 1, id, {}}});
    EXPECT_TRUE(find_db_isomorphism(*lim.result, *db).has_value());
    EXPECT_FALSE(lim.legs[1].has_value());
    EXPECT_EQ(code_of([&] { db_limit({db, FinalDb{db->schema()}}, {{1, 0, id, {}}}); }), Errc::invalid_morphism);
}

TEST(Database, ProductCountsMultiply)
{
    auto titles = load("marx_titles.json");
    auto names = load("marx_names.json");
    auto p = db_product(titles, names);
    auto t = global_table(*p.result);
    EXPECT_EQ(t.size(), titles->keys()[titles->schema()->size() - 1].size() * 2);
    EXPECT_EQ(p.result->schema()->vertex_count(), 4u);
}

TEST(Database, UnionAndInsert)
{
    auto db = load("marx_lossless.json");
    auto coproduct = db_coproduct(db, db);
    EXPECT_EQ(coproduct.key_count(), 2 * db->key_count());
    auto u = db_union(db, db);
    // UNION identifies by record, so the two Marx keys merge
    auto r = std::make_shared<const Database>(to_relational(*db));
    EXPECT_EQ(keys_at(*r, "LastName").size(), 1u);
    EXPECT_EQ(keys_at(u, "LastName").size(), 1u);
    EXPECT_TRUE(find_db_isomorphism(u, *r).has_value());
    EXPECT_TRUE(find_db_isomorphism(db_union(r, r), *r).has_value());
    auto inserted = db_insert(db, db);
    EXPECT_EQ(inserted.key_count(), 2 * db->key_count());
    EXPECT_EQ(global_table(inserted).size(), 4u);
}

TEST(Database, RelationalQuotient)
{
    auto db = load("edge_example.json");
    EXPECT_FALSE(is_relational(*db));
    auto r = to_relational(*db);
    EXPECT_TRUE(is_relational(r));
    EXPECT_EQ(keys_at(r, "X").size(), 2u);
    EXPECT_EQ(keys_at(r, "BYear").size(), 3u);
}

TEST(Database, SelectAndDelete)
{
    auto db = load("edge_example.json");
    auto s = closure_by_id(*db->schema(), {"First"});
    auto sel = db_select(db, s, first_is(*db, "Michelle"));
    auto first = db->schema()->index_of("First");
    EXPECT_EQ(sel.selected[first], (std::vector<bool>{false, true}));
    EXPECT_TRUE(validate_db_morphism(*sel.limit.legs[0]).empty());
    auto global = global_table(*sel.limit.result);
    EXPECT_EQ(global.size(), 2u);

    auto d = db_delete(db, s, first_is(*db, "Michelle"));
    EXPECT_EQ(keys_at(d, "First"), (std::vector<std::string>{"1"}));
    EXPECT_EQ(keys_at(d, "X"), (std::vector<std::string>{"4"}));
    EXPECT_EQ(keys_at(d, "BYear").size(), 3u);
    EXPECT_TRUE(validate_sheaf_and_data(d.keys(), &d.data()).empty());

    auto none = db_delete(db, s, first_is(*db, "Sasha"));
    EXPECT_EQ(none, *db);
}

TEST(Database, SelectionMustBeRelational)
{
    auto db = load("edge_example.json");
    auto s = closure_by_id(*db->schema(), {"First"});
    auto view = db_project(*db, s);
    auto dup = std::make_shared<const Database>(testing::build_db(
        view.schema(), {{"First", {{"a", testing::str(db->spec(), "x")}, {"b", testing::str(db->spec(), "x")}}}}, {}));
    EXPECT_EQ(code_of([&] { db_select(db, s, dup); }), Errc::not_relational);
}

TEST(Database, Views)
{
    auto db = load("edge_example.json");
    auto s = closure_by_id(*db->schema(), {"First"});
    EXPECT_EQ(view_extract(*db, s), db_project(*db, s));
    EXPECT_EQ(view_commit_delete(db, s, first_is(*db, "Michelle")), db_delete(db, s, first_is(*db, "Michelle")));

    auto view = view_extract(*db, s);
    auto spec = db->spec();
    auto updated = std::make_shared<const Database>(testing::build_db(
        view.schema(),
        {{"First", {{"1", testing::str(spec, "Barack")}, {"2", testing::str(spec, "Michelle")}, {"3", testing::str(spec, "Sasha")}}}},
        {}));
    auto committed = view_commit_insert(db, s, updated);
    EXPECT_EQ(keys_at(committed, "First").size(), 3u);
    EXPECT_EQ(keys_at(committed, "X"), keys_at(*db, "X"));
    EXPECT_TRUE(validate_sheaf_and_data(committed.keys(), &committed.data()).empty());
}

TEST(Database, CanonicalKeysAndIsomorphism)
{
    auto db = load("edge_example.json");
    auto c = canonical_keys(*db);
    EXPECT_EQ(keys_at(c.db, "BYear"), (std::vector<std::string>{"k0", "k1", "k2"}));
    EXPECT_EQ(c.provenance[db->schema()->index_of("X")].at("k2"), "cc");
    EXPECT_EQ(canonical_keys(c.db).db, c.db);
    auto iso = find_db_isomorphism(*db, c.db);
    ASSERT_TRUE(iso.has_value());
    EXPECT_EQ(iso->keys[0], (std::vector<std::size_t>{0, 1}));

    auto d = db_delete(db, closure_by_id(*db->schema(), {"First"}), first_is(*db, "Barack"));
    EXPECT_FALSE(find_db_isomorphism(*db, d).has_value());
}

TEST(Database, RenameKeys)
{
    auto db = load("edge_example.json");
    auto names = std::vector<std::vector<std::string>>{{"b", "a"}, {"p", "q", "r"}, {"u", "v", "w"}};
    auto r = rename_keys(*db, names);
    EXPECT_EQ(keys_at(r, "First"), (std::vector<std::string>{"a", "b"}));
    EXPECT_TRUE(find_db_isomorphism(r, *db).has_value());
    names[0] = {"a", "a"};
    EXPECT_THROW(rename_keys(*db, names), Error);
}

TEST(Database, MorphismValidation)
{
    auto db = load("edge_example.json");
    auto id = identity_db_morphism(db);
    EXPECT_TRUE(validate_db_morphism(id).empty());
    auto broken = id;
    broken.f_sharp[db->schema()->index_of("First")] = {1, 0};
    EXPECT_FALSE(validate_db_morphism(broken).empty());
    broken.integrity = false;
    // swapping First keys still breaks naturality along the edge
    EXPECT_FALSE(validate_db_morphism(broken).empty());
}

TEST(Database, TableRoundTrip)
{
    auto t = io::load_table(io::read_file(fixtures / "obama.json"));
    auto db = from_table(t);
    EXPECT_EQ(db.schema()->size(), 7u);
    EXPECT_EQ(global_table(db), t);
    EXPECT_TRUE(is_relational(db) or t.size() != global_table(to_relational(db)).size());
}

TEST(Database, ZeroColumnTableCollapsesToOneFamily)
{
    Table t(SimpleSchema(bool_spec(), {}), {{"a", {}}, {"b", {}}});
    auto db = from_table(t);
    EXPECT_EQ(db.schema()->size(), 0u);
    auto g = global_table(db);
    EXPECT_EQ(g.keys(), (std::vector<std::string>{"*"}));
}

TEST(Database, GlobalTableOfEdgeExample)
{
    auto db = load("edge_example.json");
    auto t = global_table(*db);
    EXPECT_EQ(t.keys(), (std::vector<std::string>{"10", "4", "cc"}));
    EXPECT_EQ(t.schema().size(), 2u);
}

TEST(Database, PushforwardPullbackExtend)
{
    auto db = load("edge_example.json");
    auto id = SchemaMorphism::identity(db->schema());
    EXPECT_TRUE(find_db_isomorphism(db_pushforward(id, *db), *db).has_value());
    EXPECT_TRUE(find_db_isomorphism(db_pullback(id, *db), *db).has_value());
    EXPECT_TRUE(find_db_isomorphism(db_extend(id, *db), *db).has_value());
    auto first = Schema::Builder(db->spec()).add_vertex("First", "First", "Str").build();
    auto inc = SchemaMorphism::from_vertex_map(first, db->schema(), {0});
    auto pulled = db_pullback(inc, *db);
    EXPECT_EQ(keys_at(pulled, "First"), keys_at(*db, "First"));
    // BYear is an unconstrained integer column
    EXPECT_EQ(code_of([&] { db_pushforward(inc, pulled); }), Errc::non_finite_result);
    auto ext = db_extend(inc, pulled);
    EXPECT_EQ(keys_at(ext, "X").size(), 0u);
}

TEST(Database, InitialDatabase)
{
    EXPECT_EQ(code_of([] { initial_database(testing::str_int_spec()); }), Errc::initial_not_materializable);
    auto b = initial_database(bool_spec());
    ASSERT_EQ(b.schema()->size(), 1u);
    EXPECT_EQ(b[0].size(), 2u);
    auto spec = std::make_shared<TypeSpec>();
    spec->add("Bool", DataTypeDomain::booleans());
    spec->add("Color", DataTypeDomain::enumeration({"red", "green", "blue"}));
    auto two = initial_database(spec);
    EXPECT_EQ(two.schema()->vertex_count(), 2u);
    for (std::size_t s = 0; s < two.schema()->size(); ++s) {
        if ((*two.schema())[s].dim == 1)
            EXPECT_EQ(two[s].size(), 6u);
    }
    auto many = std::make_shared<TypeSpec>();
    for (int i = 0; i < 5; ++i)
        many->add("B" + std::to_string(i), DataTypeDomain::booleans());
    EXPECT_EQ(code_of([&] { initial_database(many); }), Errc::too_large);
}

TEST(Database, RandomDeletesStayValid)
{
    auto rng = testing::make_rng(31);
    auto spec = testing::random_spec();
    for (int round = 0; round < 40; ++round) {
        auto x = testing::random_schema(rng, spec, 8, "v");
        auto db = std::make_shared<const Database>(testing::random_db(rng, x, 3));
        auto s = testing::random_subschema(rng, *x);
        auto sel = std::make_shared<const Database>(to_relational(testing::random_db(rng, db_project(*db, s).schema(), 2)));
        auto d = db_delete(db, s, sel);
        EXPECT_TRUE(validate_sheaf_and_data(d.keys(), &d.data()).empty());
        EXPECT_LE(d.key_count(), db->key_count());
    }
}

}
}
