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

#include "sdb/typespec.hpp"

#include <algorithm>
#include <charconv>
#include <set>

namespace sdb {

const char *to_string(Errc code) noexcept
{
    switch (code) {
        case Errc::unknown_type: return "UnknownType";
        case Errc::parse: return "ParseError";
        case Errc::not_enumerable: return "NotEnumerable";
        case Errc::arity: return "ArityError";
        case Errc::type_mismatch: return "TypeError";
        case Errc::composition: return "CompositionError";
        case Errc::order_conflict: return "OrderConflict";
        case Errc::direction: return "DirectionError";
        case Errc::schema_mismatch: return "SchemaMismatch";
        case Errc::unknown_attribute: return "UnknownAttribute";
        case Errc::unsupported_colimit: return "UnsupportedColimit";
        case Errc::label_conflict: return "LabelConflict";
        case Errc::too_large: return "TooLarge";
        case Errc::not_monic: return "NotMonic";
        case Errc::non_finite_result: return "NonFiniteResult";
        case Errc::initial_not_materializable: return "InitialNotMaterializable";
        case Errc::not_relational: return "NotRelational";
        case Errc::invalid_schema: return "InvalidSchema";
        case Errc::invalid_morphism: return "InvalidMorphism";
        case Errc::invalid_sheaf: return "InvalidSheaf";
        case Errc::io: return "IoError";
        case Errc::version: return "VersionError";
        case Errc::script: return "ScriptError";
    }
    return "Error";
}

DataTypeDomain DataTypeDomain::enumeration(std::vector<std::string> literals)
{
    if (literals.empty())
        throw Error(Errc::parse, "enumeration domain needs at least one literal");
    std::set<std::string> seen;
    for (auto &l : literals) {
        if (not seen.insert(l).second)
            throw Error(Errc::parse, "duplicate enumeration literal '" + l + "'");
    }
    return {DomainKind::enumeration, std::move(literals)};
}

TypeSpec & TypeSpec::add(std::string name, DataTypeDomain domain)
{
    if (name.empty())
        throw Error(Errc::parse, "type names must be nonempty");
    if (types_.contains(name))
        throw Error(Errc::parse, "duplicate type name '" + name + "'");
    types_.emplace(std::move(name), std::move(domain));
    return *this;
}

const DataTypeDomain & TypeSpec::domain(std::string_view name) const
{
    auto it = types_.find(name);
    if (it == types_.end())
        throw Error(Errc::unknown_type, "'" + std::string(name) + "'");
    return it->second;
}

std::vector<std::string> TypeSpec::names() const
{
    std::vector<std::string> out;
    out.reserve(types_.size());
    for (auto &[name, _] : types_)
        out.push_back(name);
    return out;
}

bool TypeSpec::all_enumerable() const
{
    return std::all_of(types_.begin(), types_.end(), [](auto &entry) { return entry.second.enumerable(); });
}

bool Value::operator<(const Value &other) const
{
    if (type_ != other.type_)
        return type_ < other.type_;
    return payload_ < other.payload_;
}

bool check_member(const TypeSpec &spec, std::string_view type_name, const Payload &payload)
{
    const auto &dom = spec.domain(type_name);
    switch (dom.kind()) {
        case DomainKind::integer: return std::holds_alternative<std::int64_t>(payload);
        case DomainKind::string: return std::holds_alternative<std::string>(payload);
        case DomainKind::boolean: return std::holds_alternative<bool>(payload);
        case DomainKind::enumeration: {
            const std::string *lit = nullptr;
            if (auto *e = std::get_if<EnumLiteral>(&payload))
                lit = &e->literal;
            else if (auto *s = std::get_if<std::string>(&payload))
                lit = s;
            if (not lit)
                return false;
            auto &lits = dom.literals();
            return std::find(lits.begin(), lits.end(), *lit) != lits.end();
        }
    }
    return false;
}

Value make_value(const TypeSpec &spec, std::string_view type_name, Payload payload)
{
    if (not check_member(spec, type_name, payload))
        throw Error(Errc::type_mismatch, "payload is not a member of '" + std::string(type_name) + "'");
    if (spec.domain(type_name).kind() == DomainKind::enumeration) {
        if (auto *s = std::get_if<std::string>(&payload))
            payload = EnumLiteral{*s};
    }
    return Value(std::string(type_name), std::move(payload));
}

Value parse_value(const TypeSpec &spec, std::string_view type_name, std::string_view text)
{
    const auto &dom = spec.domain(type_name);
    auto fail = [&]() -> Error {
        return Error(Errc::parse, "'" + std::string(text) + "' is not a literal of '" + std::string(type_name) + "'");
    };
    switch (dom.kind()) {
        case DomainKind::integer: {
            std::int64_t v = 0;
            auto first = text.data(), last = text.data() + text.size();
            auto [ptr, ec] = std::from_chars(first, last, v);
            if (ec != std::errc() or ptr != last or text.empty())
                throw fail();
            // canonical form only: no leading '+', no leading zeros, no "-0"
            if (std::to_string(v) != text)
                throw fail();
            return Value(std::string(type_name), v);
        }
        case DomainKind::string: return Value(std::string(type_name), std::string(text));
        case DomainKind::boolean:
            if (text == "true") return Value(std::string(type_name), true);
            if (text == "false") return Value(std::string(type_name), false);
            throw fail();
        case DomainKind::enumeration: {
            auto &lits = dom.literals();
            if (std::find(lits.begin(), lits.end(), text) == lits.end())
                throw fail();
            return Value(std::string(type_name), EnumLiteral{std::string(text)});
        }
    }
    throw fail();
}

std::string render_value(const Value &value)
{
    return std::visit([](const auto &p) -> std::string {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(p);
        else if constexpr (std::is_same_v<T, std::string>) return p;
        else if constexpr (std::is_same_v<T, bool>) return p ? "true" : "false";
        else return p.literal;
    }, value.payload());
}

std::vector<Value> enumerate_domain(const TypeSpec &spec, std::string_view type_name)
{
    const auto &dom = spec.domain(type_name);
    std::vector<Value> out;
    switch (dom.kind()) {
        case DomainKind::boolean:
            out.emplace_back(std::string(type_name), false);
            out.emplace_back(std::string(type_name), true);
            return out;
        case DomainKind::enumeration:
            for (auto &l : dom.literals())
                out.emplace_back(std::string(type_name), EnumLiteral{l});
            return out;
        default:
            throw Error(Errc::not_enumerable, "'" + std::string(type_name) + "'");
    }
}

std::string render_record(const Record &record)
{
    std::string out;
    for (auto &v : record) {
        auto text = render_value(v);
        out += std::to_string(v.payload().index());
        out += ':';
        out += std::to_string(text.size());
        out += ':';
        out += text;
        out += ';';
    }
    return out;
}

}
