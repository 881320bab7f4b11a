/*
 * Copyright 2026 The polargen authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>

#include "polargen/netlist.hpp"
#include "polargen/netlist_json.hpp"

using namespace polargen;

TEST_CASE("permutation table traces for small sizes") {
    CHECK(permutation_table(8) == std::vector<std::uint32_t>{0, 4, 2, 6, 1, 5, 3, 7});
    CHECK(permutation_table(4) == std::vector<std::uint32_t>{0, 2, 1, 3});
    CHECK_THROWS_AS(permutation_table(2), std::invalid_argument);
    CHECK_THROWS_AS(permutation_table(6), std::invalid_argument);
}

TEST_CASE("permutation tables are involutions and bijections") {
    for (std::uint32_t p = 4; p <= 256; p *= 2) {
        const std::vector<std::uint32_t> t = permutation_table(p);
        std::vector<bool> seen(p, false);
        for (std::uint32_t i = 0; i < p; ++i) {
            REQUIRE(t[i] < p);
            CHECK_FALSE(seen[t[i]]);
            seen[t[i]] = true;
            CHECK(t[t[i]] == i);
        }
    }
}

TEST_CASE("the worked 32x8 design has 20 XOR gates and 40 delay elements") {
    const Netlist nl = elaborate(specialized_formula(32, 8));
    const CostReport report = cost_report(nl);
    CHECK(report.xor_count == 20);
    CHECK(report.mem_count == 40);
    CHECK(report.latency_cycles == 5);
    CHECK(report.bits_per_cycle == 8);
}

TEST_CASE("the minimum 8x4 design has 6 XOR gates and 8 delay elements") {
    const CostReport report = cost_report(elaborate(specialized_formula(8, 4)));
    CHECK(report.xor_count == 6);
    CHECK(report.mem_count == 8);
    CHECK(report.latency_cycles == 2);
}

TEST_CASE("cost report matches the closed forms at the table extremes") {
    const CostReport narrow = cost_report(elaborate(specialized_formula(1024, 4)));
    CHECK(narrow.xor_count == 20);
    CHECK(narrow.mem_count == 1532);
    CHECK(narrow.latency_cycles == 383);

    const CostReport wide = cost_report(elaborate(specialized_formula(1024, 512)));
    CHECK(wide.xor_count == 2560);
    CHECK(wide.mem_count == 1024);
    CHECK(wide.latency_cycles == 2);
}

TEST_CASE("latency closed form") {
    CHECK(latency(32, 8) == 5);
    CHECK(latency(8, 4) == 2);
    for (std::uint32_t n = 8; n <= 2048; n *= 2) CHECK(latency(n, n / 2) == 2);
    CHECK_THROWS_AS(latency(32, 64), std::invalid_argument);
}

TEST_CASE("walked counts equal closed forms across the design space") {
    for (std::uint32_t n = 8; n <= 2048; n *= 2) {
        for (std::uint32_t m = 4; m <= n / 2; m *= 2) {
            const Netlist nl = elaborate(specialized_formula(n, m));
            std::uint32_t xors = 0, delays = 0;
            for (const Cell& cell : nl.cells) {
                if (cell.kind == CellKind::Xp) ++xors;
                if (cell.kind == CellKind::Delay) ++delays;
            }
            CHECK(xors == (m / 2) * log2_exact(n));
            CHECK(delays == 3 * n / 2 - m);
            CHECK_NOTHROW(cost_report(nl));
        }
    }
}

TEST_CASE("switch modulus multiset per netlist") {
    for (std::uint32_t n : {64u, 256u}) {
        for (std::uint32_t m = 4; m <= n / 2; m *= 2) {
            const Netlist nl = elaborate(specialized_formula(n, m));
            std::map<std::uint32_t, std::uint32_t> census;  // modulus -> switch cells
            for (const Cell& cell : nl.cells) {
                if (cell.kind == CellKind::Switch) ++census[cell.modulus];
            }
            std::map<std::uint32_t, std::uint32_t> want;
            for (std::uint32_t k = n / m; k >= 2; k /= 2) want[k] += m / 2;
            want[n / m] += m / 2;  // final stage
            CHECK(census == want);
        }
    }
}

TEST_CASE("every wire has exactly one driver and outputs are cell-driven") {
    const Netlist nl = elaborate(specialized_formula(64, 8));
    std::vector<int> drivers(nl.wire_count, 0);
    for (std::uint32_t w : nl.input_wires) ++drivers[w];
    for (const Cell& cell : nl.cells) {
        for (std::uint32_t w : cell.outputs) ++drivers[w];
    }
    CHECK(std::all_of(drivers.begin(), drivers.end(), [](int d) { return d == 1; }));
    for (std::uint32_t w : nl.output_wires) CHECK(w >= nl.lanes);
}

TEST_CASE("cells consume only wires that are already driven") {
    const Netlist nl = elaborate(specialized_formula(128, 16));
    std::vector<bool> driven(nl.wire_count, false);
    for (std::uint32_t w : nl.input_wires) driven[w] = true;
    for (const Cell& cell : nl.cells) {
        for (std::uint32_t w : cell.inputs) CHECK(driven[w]);
        for (std::uint32_t w : cell.outputs) driven[w] = true;
    }
}

TEST_CASE("elaboration refuses unspecialized formulas") {
    CHECK_THROWS_AS(elaborate(general_formula(32, 8)), std::invalid_argument);
}

TEST_CASE("elaboration is deterministic") {
    const std::string a = serialize_netlist(elaborate(specialized_formula(64, 16)));
    const std::string b = serialize_netlist(elaborate(specialized_formula(64, 16)));
    CHECK(a == b);
    CHECK(a.find("\"delay_side\": \"bottom-in/top-out\"") != std::string::npos);
}

TEST_CASE("netlist json carries the schema keys") {
    const nlohmann::ordered_json doc = netlist_to_json(elaborate(specialized_formula(8, 4)));
    CHECK(doc["n"] == 8);
    CHECK(doc["m"] == 4);
    REQUIRE(doc["cells"].is_array());
    for (const auto& cell : doc["cells"]) {
        CHECK(cell.contains("id"));
        CHECK(cell.contains("kind"));
        CHECK(cell.contains("params"));
        CHECK(cell.contains("in"));
        CHECK(cell.contains("out"));
    }
    CHECK(doc["inputs"].size() == 4);
    CHECK(doc["outputs"].size() == 4);
}
