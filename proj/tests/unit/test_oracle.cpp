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

namespace sdb::oracle {
namespace {

const std::filesystem::path fixtures = SDB_FIXTURE_DIR;

FlatTable table(const char *name) { return parse_table(io::read_file(fixtures / name)); }

std::vector<std::string> keys(const FlatTable &t)
{
    std::vector<std::string> out;
    for (const auto &r : t.rows)
        out.push_back(r.key);
    return out;
}

TEST(Oracle, MarxJoin)
{
    auto j = equijoin(table("marx_titles.json"), table("marx_names.json"), {{"LastName", "LastName"}});
    ASSERT_EQ(j.columns.size(), 3u);
    EXPECT_EQ(j.columns[2].name, "FirstName");
    EXPECT_EQ(j.rows.size(), 4u);
    EXPECT_EQ(keys(j)[0], "(1,A)");
}

TEST(Oracle, EmptyAndCartesianJoins)
{
    auto titles = table("marx_titles.json");
    auto empty = titles;
    empty.rows.clear();
    EXPECT_TRUE(equijoin(titles, empty, {{"LastName", "LastName"}}).rows.empty());
    auto product = equijoin(titles, table("obama.json"), {});
    EXPECT_EQ(product.rows.size(), 6u);
    EXPECT_EQ(product.columns.size(), 5u);
}

TEST(Oracle, JoinErrors)
{
    auto titles = table("marx_titles.json");
    try {
        equijoin(titles, titles, {{"Nope", "LastName"}});
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), Errc::unknown_attribute);
    }
    try {
        equijoin(titles, table("obama.json"), {{"LastName", "BYear"}});
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), Errc::type_mismatch);
    }
}

TEST(Oracle, SelectProjectDedupe)
{
    auto t = table("obama.json");
    TypeSpec spec;
    spec.add("Str", DataTypeDomain::strings());
    std::vector<Record> accepted{{make_value(spec, "Str", std::string("Barack"))}};
    auto sel = select(t, {"First Name"}, accepted);
    EXPECT_EQ(keys(sel), (std::vector<std::string>{"1", "foo"}));
    auto p = project(t, {"Last Name", "First Name"});
    EXPECT_EQ(p.columns[0].name, "Last Name");
    EXPECT_EQ(p.rows.size(), 3u);
    auto d = dedupe(project(t, {"Last Name"}));
    EXPECT_EQ(keys(d), (std::vector<std::string>{"1"}));
}

TEST(Oracle, MatchingFamiliesOfTheEdgeExample)
{
    auto db = parse_database(io::read_file(fixtures / "edge_example.json"));
    auto f = matching_families(db);
    EXPECT_EQ(f.rows.size(), 3u);
    EXPECT_EQ(f.columns.size(), 2u);
    EXPECT_EQ(f.columns[0].name, "First");
}

TEST(Oracle, MatchingFamiliesOfTheLosslessPath)
{
    auto db = parse_database(io::read_file(fixtures / "marx_lossless.json"));
    auto f = matching_families(db);
    auto rows = tuple_multiset(f);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_NE(rows[0], rows[1]);
}

TEST(Oracle, ParseErrors)
{
    try {
        parse_table("{\"kind\": \"table\"");
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), Errc::parse);
    }
    EXPECT_THROW(parse_database(io::read_file(fixtures / "obama.json")), Error);
}

}
}
