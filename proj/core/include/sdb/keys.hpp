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

#include <span>
#include <string>
#include <string_view>

namespace sdb {

/// Escapes `(),:\` unless `component` is already a well-formed key (balanced parentheses, no top-level comma).
std::string escape_key_component(std::string_view component, bool colon_is_special = false);

/// "(a,b,...)" with components escaped as needed.  Injective on lists of equal length.
std::string tuple_key(std::span<const std::string> components);

}
