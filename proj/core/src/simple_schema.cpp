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

#include "sdb/simple_schema.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <set>

#include "sdb/detail/union_find.hpp"

namespace sdb {

SimpleSchema::SimpleSchema(TypeSpecPtr spec, std::vector<Attribute> attributes)
    : spec_(std::move(spec)), attributes_(std::move(attributes))
{
    if (not spec_)
        throw Error(Errc::unknown_type, "simple schema without a type specification");
    std::set<std::string_view> names;
    for (auto &a : attributes_) {
        if (not spec_->contains(a.type))
            throw Error(Errc::unknown_type, "'" + a.type + "' (attribute '" + a.name + "')");
        if (not names.insert(a.name).second)
            throw Error(Errc::schema_mismatch, "duplicate attribute name '" + a.name + "'");
    }
}

std::optional<std::size_t> SimpleSchema::index_of(std::string_view name) const
{
    for (std::size_t i = 0; i < attributes_.size(); ++i) {
        if (attributes_[i].name == name)
            return i;
    }
    return std::nullopt;
}

SimpleSchema SimpleSchema::select(std::span<const std::size_t> indices) const
{
    std::vector<Attribute> out;
    out.reserve(indices.size());
    for (auto i : indices)
        out.push_back(attributes_.at(i));
    return SimpleSchema(spec_, std::move(out));
}

bool SimpleSchema::operator==(const SimpleSchema &other) const
{
    if (attributes_ != other.attributes_)
        return false;
    return spec_ == other.spec_ or *spec_ == *other.spec_;
}

Record check_record(const SimpleSchema &schema, std::span<const Payload> values)
{
    if (values.size() != schema.size())
        throw Error(Errc::arity, "expected " + std::to_string(schema.size()) + " values, got " +
                                     std::to_string(values.size()));
    Record out;
    out.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (not check_member(*schema.spec(), schema[i].type, values[i]))
            throw Error(Errc::type_mismatch, i, "value is not of type '" + schema[i].type + "'");
        out.push_back(make_value(*schema.spec(), schema[i].type, values[i]));
    }
    return out;
}

bool is_valid_record(const SimpleSchema &schema, const Record &record)
{
    if (record.size() != schema.size())
        return false;
    for (std::size_t i = 0; i < record.size(); ++i) {
        if (record[i].type() != schema[i].type)
            return false;
        if (not check_member(*schema.spec(), schema[i].type, record[i].payload()))
            return false;
    }
    return true;
}

SimpleSchemaMorphism::SimpleSchemaMorphism(SimpleSchema source, SimpleSchema target, std::vector<std::size_t> map)
    : source_(std::move(source)), target_(std::move(target)), map_(std::move(map))
{
    if (map_.size() != source_.size())
        throw Error(Errc::composition, "column map is not total");
    for (std::size_t a = 0; a < map_.size(); ++a) {
        if (map_[a] >= target_.size())
            throw Error(Errc::composition, "column map points outside the target");
        if (source_[a].type != target_[map_[a]].type)
            throw Error(Errc::composition, "column map does not preserve the type of '" + source_[a].name + "'");
        if (a > 0 and map_[a] < map_[a - 1])
            throw Error(Errc::composition, "column map is not order-preserving");
    }
}

SimpleSchemaMorphism SimpleSchemaMorphism::identity(const SimpleSchema &schema)
{
    std::vector<std::size_t> map(schema.size());
    std::iota(map.begin(), map.end(), 0);
    return SimpleSchemaMorphism(schema, schema, std::move(map));
}

SimpleSchemaMorphism SimpleSchemaMorphism::inclusion(const SimpleSchema &schema, std::vector<std::size_t> subset)
{
    for (std::size_t i = 1; i < subset.size(); ++i) {
        if (subset[i] <= subset[i - 1])
            throw Error(Errc::composition, "inclusion subset must be strictly increasing");
    }
    auto source = schema.select(subset);
    return SimpleSchemaMorphism(std::move(source), schema, std::move(subset));
}

SimpleSchemaMorphism SimpleSchemaMorphism::by_name(SimpleSchema source, SimpleSchema target,
                                                   const std::vector<std::pair<std::string, std::string>> &pairs)
{
    std::vector<std::size_t> map(source.size(), target.size());
    for (auto &[from, to] : pairs) {
        auto a = source.index_of(from);
        if (not a)
            throw Error(Errc::unknown_attribute, "'" + from + "' in the source schema");
        auto b = target.index_of(to);
        if (not b)
            throw Error(Errc::unknown_attribute, "'" + to + "' in the target schema");
        map[*a] = *b;
    }
    for (std::size_t a = 0; a < map.size(); ++a) {
        if (map[a] == target.size())
            throw Error(Errc::unknown_attribute, "'" + source[a].name + "' is not mapped");
    }
    return SimpleSchemaMorphism(std::move(source), std::move(target), std::move(map));
}

SimpleSchemaMorphism identity_ssm(const SimpleSchema &schema)
{
    return SimpleSchemaMorphism::identity(schema);
}

SimpleSchemaMorphism compose_ssm(const SimpleSchemaMorphism &g, const SimpleSchemaMorphism &f)
{
    if (not (f.target() == g.source()))
        throw Error(Errc::composition, "target of the first map differs from the source of the second");
    std::vector<std::size_t> map(f.map().size());
    for (std::size_t a = 0; a < map.size(); ++a)
        map[a] = g(f(a));
    return SimpleSchemaMorphism(f.source(), g.target(), std::move(map));
}

Record restrict_record(const SimpleSchemaMorphism &f, const Record &record)
{
    Record out;
    out.reserve(f.map().size());
    for (auto b : f.map())
        out.push_back(record.at(b));
    return out;
}

SimplePushout pushout_simple_schema(const SimpleSchemaMorphism &first, const SimpleSchemaMorphism &second)
{
    if (not (first.source() == second.source()))
        throw Error(Errc::composition, "pushout legs do not share a source");
    const auto &s1 = first.target();
    const auto &s2 = second.target();
    const std::size_t n1 = s1.size(), n2 = s2.size(), n = n1 + n2;

    detail::UnionFind uf(n);
    for (std::size_t c = 0; c < first.source().size(); ++c)
        uf.unite(first(c), n1 + second(c));

    // classes are numbered by their root
    std::map<std::size_t, std::size_t> class_of_root;
    std::vector<std::size_t> cls(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto root = uf.find(i);
        auto [it, _] = class_of_root.emplace(root, class_of_root.size());
        cls[i] = it->second;
    }
    const std::size_t m = class_of_root.size();

    std::vector<std::set<std::size_t>> succ(m);
    std::vector<std::size_t> indegree(m, 0);
    auto add_edge = [&](std::size_t a, std::size_t b) {
        if (a == b)
            return;
        if (succ[a].insert(b).second)
            ++indegree[b];
    };
    for (std::size_t i = 1; i < n1; ++i)
        add_edge(cls[i - 1], cls[i]);
    for (std::size_t i = 1; i < n2; ++i)
        add_edge(cls[n1 + i - 1], cls[n1 + i]);

    // priority: classes meeting the first schema by first position, then the rest by position in the second
    std::vector<std::pair<std::size_t, std::size_t>> priority(m, {2, 0});
    for (std::size_t i = n; i-- > 0;) {
        auto p = i < n1 ? std::pair<std::size_t, std::size_t>{0, i} : std::pair<std::size_t, std::size_t>{1, i - n1};
        priority[cls[i]] = std::min(priority[cls[i]], p);
    }
    using Item = std::pair<std::pair<std::size_t, std::size_t>, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> ready;
    for (std::size_t c = 0; c < m; ++c) {
        if (indegree[c] == 0)
            ready.push({priority[c], c});
    }
    std::vector<std::size_t> position(m);
    std::size_t placed = 0;
    while (not ready.empty()) {
        auto c = ready.top().second;
        ready.pop();
        position[c] = placed++;
        for (auto d : succ[c]) {
            if (--indegree[d] == 0)
                ready.push({priority[d], d});
        }
    }
    if (placed != m)
        throw Error(Errc::order_conflict, "the two column orders cannot be merged");

    std::vector<std::vector<std::string>> names(m);
    std::vector<std::string> types(m);
    for (std::size_t i = 0; i < n; ++i) {
        const auto &attr = i < n1 ? s1[i] : s2[i - n1];
        auto &ns = names[position[cls[i]]];
        if (std::find(ns.begin(), ns.end(), attr.name) == ns.end())
            ns.push_back(attr.name);
        types[position[cls[i]]] = attr.type;
    }
    std::vector<Attribute> attrs;
    std::set<std::string> used;
    for (std::size_t p = 0; p < m; ++p) {
        std::string name;
        for (auto &part : names[p])
            name += (name.empty() ? "" : "=") + part;
        if (used.contains(name)) {
            std::size_t suffix = 2;
            while (used.contains(name + "#" + std::to_string(suffix)))
                ++suffix;
            name += "#" + std::to_string(suffix);
        }
        used.insert(name);
        attrs.push_back({std::move(name), types[p]});
    }
    SimpleSchema result(s1.spec(), std::move(attrs));
    std::vector<std::size_t> leg1(n1), leg2(n2);
    for (std::size_t i = 0; i < n1; ++i)
        leg1[i] = position[cls[i]];
    for (std::size_t i = 0; i < n2; ++i)
        leg2[i] = position[cls[n1 + i]];
    SimpleSchemaMorphism l1(s1, result, std::move(leg1));
    SimpleSchemaMorphism l2(s2, result, std::move(leg2));
    return {std::move(result), std::move(l1), std::move(l2)};
}

std::vector<SimpleSchemaMorphism> enumerate_ssm(const SimpleSchema &source, const SimpleSchema &target)
{
    std::vector<SimpleSchemaMorphism> out;
    std::vector<std::size_t> map(source.size());
    auto rec = [&](auto &self, std::size_t a, std::size_t lo) -> void {
        if (a == source.size()) {
            out.emplace_back(source, target, map);
            return;
        }
        for (std::size_t b = lo; b < target.size(); ++b) {
            if (target[b].type != source[a].type)
                continue;
            map[a] = b;
            self(self, a + 1, b);
        }
    };
    rec(rec, 0, 0);
    return out;
}

}
