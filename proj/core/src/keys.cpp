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

#include "sdb/keys.hpp"

namespace sdb {

namespace {

bool well_formed(std::string_view s, bool colon_is_special)
{
    int depth = 0;
    for (char c : s) {
        if (c == '\\')
            return false;
        if (c == '(')
            ++depth;
        else if (c == ')') {
            if (--depth < 0)
                return false;
        } else if (depth == 0 and (c == ',' or (colon_is_special and c == ':')))
            return false;
    }
    return depth == 0;
}

}

std::string escape_key_component(std::string_view component, bool colon_is_special)
{
    if (well_formed(component, colon_is_special))
        return std::string(component);
    std::string out;
    out.reserve(component.size() + 4);
    for (char c : component) {
        if (c == '(' or c == ')' or c == ',' or c == ':' or c == '\\')
            out += '\\';
        out += c;
    }
    return out;
}

std::string tuple_key(std::span<const std::string> components)
{
    std::string out = "(";
    for (std::size_t i = 0; i < components.size(); ++i) {
        if (i)
            out += ',';
        out += escape_key_component(components[i]);
    }
    out += ')';
    return out;
}

}
