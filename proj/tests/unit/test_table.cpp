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
#include "sdb/oracle.hpp"
#include "sdb/table.hpp"
#include "support.hpp"

namespace sdb {
namespace {

const std::filesystem::path fixtures = SDB_FIXTURE_DIR;

TablePtr obama() { return std::make_shared<const Table>(io::load_table(io::read_file(fixtures / "obama.json"))); }

Value s(const TypeSpecPtr &spec, const char *text) { return make_value(*spec, "Str", std::string(text)); }

TablePtr first_last(const TypeSpecPtr &spec)
{
    SimpleSchema sigma(spec, {{"First Name", "Str"}, {"Last Name", "Str"}});
    return std::make_shared<const Table>(
        sigma, std::map<std::string, Record>{{"5", {s(spec, "Barack"), s(spec, "Obama")}},
                                             {"6", {s(spec, "Michelle"), s(spec, "Obama")}},
                                             {"bar", {s(spec, "George"), s(spec, "Bush")}}});
}

TEST(Table, RejectsInvalidRows)
{
    auto t = obama();
    std::map<std::string, Record> bad{{"k", {s(t->schema().spec(), "x")}}};
    EXPECT_THROW(Table(t->schema(), bad), Error);
}

TEST(Table, MorphismToTwoColumnTable)
{
    auto t1 = obama();
    auto t2 = first_last(t1->schema().spec());
    TableMorphism m{t1, t2, {{"1", "5"}, {"2", "6"}, {"foo", "5"}},
                    SimpleSchemaMorphism::inclusion(t1->schema(), {0, 1})};
    // the schema map runs from the target's columns to the source's
    m.schema_map = SimpleSchemaMorphism(t2->schema(), t1->schema(), {0, 1});
    EXPECT_TRUE(validate_table_morphism(m));
    auto all = enumerate_table_morphisms(t1, t2);
    ASSERT_EQ(all.size(), 1u);
    EXPECT_EQ(all[0].key_map, m.key_map);
    m.key_map["foo"] = "6";
    EXPECT_FALSE(validate_table_morphism(m));
}

TEST(Table, NoMorphismBackToTheWiderTable)
{
    auto t1 = obama();
    auto t2 = first_last(t1->schema().spec());
    EXPECT_TRUE(enumerate_table_morphisms(t2, t1).empty());
}

TEST(Table, WrongDirectionThrows)
{
    auto t1 = obama();
    auto t2 = first_last(t1->schema().spec());
    TableMorphism m{t1, t2, {{"1", "5"}, {"2", "6"}, {"foo", "5"}}, SimpleSchemaMorphism::identity(t1->schema())};
    try {
        validate_table_morphism(m);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), Errc::direction);
    }
}

TEST(Table, IdentityIsValid)
{
    auto t = obama();
    EXPECT_TRUE(validate_table_morphism(identity_table_morphism(t)));
}

TEST(Table, MarxLossyAndLosslessJoins)
{
    auto titles = std::make_shared<const Table>(io::load_table(io::read_file(fixtures / "marx_titles.json")));
    auto names = std::make_shared<const Table>(io::load_table(io::read_file(fixtures / "marx_names.json")));
    auto spec = titles->schema().spec();
    SimpleSchema last(spec, {{"LastName", "Str"}});
    auto one = std::make_shared<const Table>(last, std::map<std::string, Record>{{"m", {s(spec, "Marx")}}});
    auto two = std::make_shared<const Table>(last, std::map<std::string, Record>{{"x", {s(spec, "Marx")}},
                                                                                  {"y", {s(spec, "Marx")}}});
    auto into = [&](const TablePtr &t, const TablePtr &target, std::map<std::string, std::string> keys) {
        return TableMorphism{t, target, std::move(keys), SimpleSchemaMorphism(target->schema(), t->schema(), {1})};
    };
    auto lossy = table_fiber_product(into(titles, one, {{"1", "m"}, {"2", "m"}}),
                                     into(names, one, {{"A", "m"}, {"B", "m"}}));
    EXPECT_EQ(lossy.table->size(), 4u);
    EXPECT_EQ(lossy.table->schema().size(), 3u);
    EXPECT_TRUE(validate_table_morphism(lossy.first));
    EXPECT_TRUE(validate_table_morphism(lossy.second));

    auto lossless = table_fiber_product(into(titles, two, {{"1", "x"}, {"2", "y"}}),
                                        into(names, two, {{"A", "x"}, {"B", "y"}}));
    ASSERT_EQ(lossless.table->size(), 2u);
    std::set<std::string> rows;
    for (auto &[k, r] : lossless.table->rows())
        rows.insert(render_record(r));
    // columns merge as Title, FirstName, LastName
    EXPECT_EQ(rows, (std::set<std::string>{render_record({s(spec, "Dr."), s(spec, "Karl"), s(spec, "Marx")}),
                                           render_record({s(spec, "Mr."), s(spec, "Groucho"), s(spec, "Marx")})}));
}

TEST(Table, DiagonalFiberProduct)
{
    auto t = obama();
    auto id = identity_table_morphism(t);
    auto p = table_fiber_product(id, id);
    EXPECT_EQ(p.table->size(), 3u);
    EXPECT_TRUE(p.table->contains("(1,1)"));
    EXPECT_TRUE(p.table->contains("(foo,foo)"));
    EXPECT_EQ(p.table->schema(), t->schema());
}

TEST(Table, UnionAll)
{
    auto t = obama();
    auto u = union_all(*t, *t);
    EXPECT_EQ(u.size(), 6u);
    EXPECT_EQ(u.row("1:1"), u.row("2:1"));
    auto empty = Table(t->schema());
    EXPECT_EQ(union_all(*t, empty).size(), 3u);
    EXPECT_THROW(union_all(*t, *first_last(t->schema().spec())), Error);
}

TEST(Table, UnionOverOverlap)
{
    auto t = obama();
    auto overlap = std::make_shared<const Table>(t->schema(), std::map<std::string, Record>{{"o", t->row("2")}});
    auto id = SimpleSchemaMorphism::identity(t->schema());
    auto u = union_over({overlap, t, {{"o", "2"}}, id}, {overlap, t, {{"o", "2"}}, id});
    EXPECT_EQ(u.size(), 5u);
    EXPECT_TRUE(u.contains("1:2~2:2"));

    auto none = std::make_shared<const Table>(t->schema());
    EXPECT_EQ(union_over({none, t, {}, id}, {none, t, {}, id}).size(), union_all(*t, *t).size());

    std::map<std::string, std::string> all{{"1", "1"}, {"2", "2"}, {"foo", "foo"}};
    EXPECT_EQ(union_over({t, t, all, id}, {t, t, all, id}).size(), t->size());
}

TEST(Table, Project)
{
    auto t = obama();
    auto p = project_table(*t, {"First Name", "Last Name"});
    EXPECT_EQ(p.size(), 3u);
    EXPECT_EQ(p.row("1"), p.row("foo"));
    EXPECT_EQ(project_table(*t, {"First Name", "Last Name", "BYear"}), *t);
    auto none = project_table(*t, {});
    EXPECT_EQ(none.size(), 3u);
    EXPECT_TRUE(none.row("1").empty());
    try {
        project_table(*t, {"Age"});
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), Errc::unknown_attribute);
    }
}

TEST(Table, SelectBarack)
{
    auto t = obama();
    auto spec = t->schema().spec();
    Table sel(SimpleSchema(spec, {{"First Name", "Str"}}), {{"k'", {s(spec, "Barack")}}});
    auto out = select_table(*t, {"First Name"}, sel);
    EXPECT_EQ(out.keys(), (std::vector<std::string>{"1", "foo"}));
    EXPECT_EQ(out.row("foo"), t->row("foo"));
    EXPECT_EQ(select_table(*t, {"First Name"}, Table(sel.schema())).size(), 0u);
    EXPECT_THROW(select_table(*t, {"Last Name"}, Table(SimpleSchema(spec, {{"First Name", "Str"}}))), Error);
}

TEST(Table, SelectByFullProjectionAgreesWithOracle)
{
    auto t = obama();
    auto sel = image_table(project_table(*t, {"Last Name", "BYear"}));
    auto out = select_table(*t, {"Last Name", "BYear"}, sel);
    std::vector<Record> accepted;
    for (auto &[k, r] : sel.rows())
        accepted.push_back(r);
    auto expected = oracle::select(testing::to_flat(*t), {"Last Name", "BYear"}, accepted);
    EXPECT_EQ(testing::record_multiset(out), oracle::tuple_multiset(expected));
    EXPECT_EQ(out.keys(), t->keys());
}

TEST(Table, SelectByDuplicatedSelectionPairsKeys)
{
    auto t = obama();
    auto sel = project_table(*t, {"Last Name", "BYear"});
    auto out = select_table(*t, {"Last Name", "BYear"}, sel);
    // 1 and foo each match both (Obama, 1961) rows of the selection
    EXPECT_EQ(out.size(), 5u);
    EXPECT_TRUE(out.contains("(1,foo)"));
    EXPECT_TRUE(out.contains("(2,2)"));
}

TEST(Table, Image)
{
    auto t = obama();
    auto img = image_table(*t);
    EXPECT_EQ(img.size(), 2u);
    EXPECT_TRUE(is_relational(img));
    EXPECT_FALSE(is_relational(*t));
    EXPECT_EQ(image_table(img), img);
    EXPECT_EQ(testing::record_multiset(image_table(union_all(*t, *t))), testing::record_multiset(img));
}

TEST(Table, TerminalAndInitial)
{
    auto spec = testing::str_int_spec();
    auto term = std::make_shared<const Table>(terminal_table(spec));
    EXPECT_EQ(term->size(), 1u);
    EXPECT_EQ(term->schema().size(), 0u);
    EXPECT_EQ(enumerate_table_morphisms(obama(), term).size(), 1u);
    EXPECT_EQ(initial_table(spec).size(), 0u);
}

}
}
