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

#include <map>
#include <memory>
#include <random>
#include <string>

#include <benchmark/benchmark.h>

#include "sdb/database.hpp"

namespace sdb {
namespace {

TypeSpecPtr city_spec()
{
    auto spec = std::make_shared<TypeSpec>();
    spec->add("City", DataTypeDomain::strings());
    return spec;
}

/// A Src/Dest table over `cities` cities with `rows` random flights.
Table flights(std::size_t rows, std::size_t cities)
{
    auto spec = city_spec();
    std::mt19937_64 rng(rows * 31 + cities);
    std::uniform_int_distribution<std::size_t> pick(0, cities - 1);
    std::map<std::string, Record> out;
    for (std::size_t i = 0; i < rows; ++i) {
        out.emplace("f" + std::to_string(i),
                    Record{make_value(*spec, "City", "c" + std::to_string(pick(rng))),
                           make_value(*spec, "City", "c" + std::to_string(pick(rng)))});
    }
    return Table(SimpleSchema(spec, {{"Src", "City"}, {"Dest", "City"}}), std::move(out));
}

void BM_FlightSelfJoin(benchmark::State &state)
{
    auto rows = static_cast<std::size_t>(state.range(0));
    auto db = std::make_shared<const Database>(from_table(flights(rows, rows / 2 + 1)));
    for (auto _ : state) {
        auto j = db_join(db, db, {{"Dest", "Src"}});
        benchmark::DoNotOptimize(j.result);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FlightSelfJoin)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

// Gluing both ends yields a circle; the edge each leg misses carries every (Src, Dest) pair, so this is quadratic.
void BM_RoundTripLimit(benchmark::State &state)
{
    auto rows = static_cast<std::size_t>(state.range(0));
    auto db = std::make_shared<const Database>(from_table(flights(rows, rows / 2 + 1)));
    for (auto _ : state) {
        auto j = db_join(db, db, {{"Src", "Dest"}, {"Dest", "Src"}});
        benchmark::DoNotOptimize(j.result);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_RoundTripLimit)->RangeMultiplier(4)->Range(16, 256)->Complexity(benchmark::oNSquared);

void BM_GlobalTable(benchmark::State &state)
{
    auto rows = static_cast<std::size_t>(state.range(0));
    auto db = std::make_shared<const Database>(from_table(flights(rows, rows / 2 + 1)));
    auto j = db_join(db, db, {{"Dest", "Src"}});
    for (auto _ : state) {
        auto t = global_table(*j.result);
        benchmark::DoNotOptimize(t);
    }
}
BENCHMARK(BM_GlobalTable)->RangeMultiplier(4)->Range(16, 1024);

}
}

BENCHMARK_MAIN();
