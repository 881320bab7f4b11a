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

#include <random>

#include "polargen/formula.hpp"

using namespace polargen;

namespace {

constexpr const char* kGeneral32x8 =
    "(I4xXP)(I2xP4)(I4xW4)(I4xXP)(I4xW2)(I4xXP)(W1)(I4xXP)(I2xP4)(I4xS4)(I4xXP)";
constexpr const char* kSpecial32x8 =
    "(I4xXP)(I2xP4)(I4xS4)(I4xXP)(I4xS2)(I4xXP)(P8)(I4xXP)(I2xP4)(I4xS4)(I4xXP)";

}  // namespace

TEST_CASE("general formula for (32, 8) matches the framework expansion") {
    const Formula f = general_formula(32, 8);
    CHECK(f.length == 32);
    CHECK(f.lanes == 8);
    CHECK(format_formula(f) == kGeneral32x8);
}

TEST_CASE("general formula for the minimum size (8, 4)") {
    CHECK(format_formula(general_formula(8, 4)) == "(I2xXP)(P4)(I2xW2)(I2xXP)(P4)(I2xS2)(I2xXP)");
}

TEST_CASE("parameter bounds are enforced") {
    CHECK_THROWS_AS(general_formula(32, 2), std::invalid_argument);   // M below 4
    CHECK_THROWS_AS(general_formula(32, 32), std::invalid_argument);  // M above N/2
    CHECK_THROWS_AS(general_formula(31, 8), std::invalid_argument);
    CHECK_THROWS_AS(general_formula(4, 4), std::invalid_argument);
    CHECK_THROWS_AS(general_formula(32, 3), std::invalid_argument);
}

TEST_CASE("specialization reproduces the (32, 8) switch/permutation split") {
    const Formula f = specialize(general_formula(32, 8));
    CHECK(format_formula(f) == kSpecial32x8);
    CHECK_FALSE(contains_placeholders(f));
}

TEST_CASE("specialization at (16, 8) maps W2 to a switch and W1 to P8") {
    const Formula f = specialized_formula(16, 8);
    CHECK(format_formula(f) == "(I4xXP)(I2xP4)(I4xS2)(I4xXP)(P8)(I4xXP)(I2xP4)(I4xS2)(I4xXP)");
}

TEST_CASE("fractional subscripts appear for M >= 16 and become permutation banks") {
    const Formula general = general_formula(32, 16);
    CHECK(format_formula(general) ==
          "(I8xXP)(I4xP4)(I8xW2)(I8xXP)(W1)(I8xXP)(W1/2)(I8xXP)(I4xP4)(I8xS2)(I8xXP)");
    const Formula f = specialize(general);
    CHECK(format_formula(f) ==
          "(I8xXP)(I4xP4)(I8xS2)(I8xXP)(P16)(I8xXP)(I2xP8)(I8xXP)(I4xP4)(I8xS2)(I8xXP)");
}

TEST_CASE("no W atoms survive specialization at any size") {
    for (std::uint32_t n = 8; n <= 4096; n *= 2) {
        for (std::uint32_t m = 4; m <= n / 2; m *= 2) {
            const Formula f = specialized_formula(n, m);
            CHECK_FALSE(contains_placeholders(f));
            CHECK(f.stages.size() == 2 * log2_exact(n) + 1);
            std::size_t xp_stages = 0;
            for (const Stage& s : f.stages) {
                if (std::holds_alternative<XpAtom>(s.atom)) ++xp_stages;
            }
            CHECK(xp_stages == log2_exact(n));
        }
    }
}

TEST_CASE("switch size multiset is the descending ladder plus the final stage") {
    for (std::uint32_t n : {32u, 256u}) {
        for (std::uint32_t m = 4; m <= n / 2; m *= 2) {
            const Formula f = specialized_formula(n, m);
            std::vector<std::uint32_t> sizes;
            for (const Stage& s : f.stages) {
                if (const auto* sw = std::get_if<SwitchAtom>(&s.atom)) sizes.push_back(sw->modulus);
            }
            std::vector<std::uint32_t> want;
            for (std::uint32_t k = n / m; k >= 2; k /= 2) want.push_back(k);
            want.push_back(n / m);
            std::sort(sizes.begin(), sizes.end());
            std::sort(want.begin(), want.end());
            CHECK(sizes == want);
        }
    }
}

TEST_CASE("formula text round-trips") {
    const Formula f = parse_formula("(I2xXP)(P4)(I2xS2)(I2xXP)(P4)(I2xS2)(I2xXP)");
    CHECK(f.length == 8);
    CHECK(f.lanes == 4);
    CHECK(f == specialized_formula(8, 4));

    std::mt19937_64 rng(3);
    for (int rep = 0; rep < 40; ++rep) {
        const std::uint32_t n = 8u << (rng() % 8);
        const std::uint32_t m = 4u << (rng() % (log2_exact(n) - 2));
        const Formula spec = specialized_formula(n, m);
        CHECK(parse_formula(format_formula(spec)) == spec);
        const Formula gen = general_formula(n, m);
        CHECK(parse_formula(format_formula(gen)) == gen);
        CHECK(format_formula(parse_formula(format_formula(spec))) == format_formula(spec));
    }
}

TEST_CASE("parser reports positions and structural problems") {
    CHECK_THROWS_AS(parse_formula("(I4xXP)(I3xP4)"), FormulaError);
    try {
        parse_formula("(I4xXP)(I3xP4)");
    } catch (const FormulaError& e) {
        CHECK(e.position() == 9);  // the '3'
    }

    CHECK_THROWS_AS(parse_formula("(I4xXP)(I2xP4"), FormulaError);   // missing ')'
    CHECK_THROWS_AS(parse_formula(""), FormulaError);                // empty
    CHECK_THROWS_AS(parse_formula("(I4xQ2)"), FormulaError);         // unknown atom
    CHECK_THROWS_AS(parse_formula("(I4xXP)(I4xS2)(I2xXP)"), FormulaError);  // span mismatch
    CHECK_THROWS_AS(parse_formula("(I4xXP)(I2xP4)"), FormulaError);  // no switch: N unknown
    CHECK_THROWS_AS(parse_formula("(P2)"), FormulaError);            // P size bound
    CHECK_THROWS_AS(parse_formula("(I2xW1)(I2xS2)"), FormulaError);  // wrapped W1
}

TEST_CASE("whitespace between groups is ignored") {
    const Formula f = parse_formula("(I2xXP) (P4)\n(I2xS2)(I2xXP)\t(P4)(I2xS2)(I2xXP)");
    CHECK(f == specialized_formula(8, 4));
}

TEST_CASE("validate accepts generated formulas") {
    CHECK(validate(specialized_formula(32, 8)).empty());
    CHECK(validate(specialized_formula(1024, 4)).empty());
    CHECK(validate(specialized_formula(1024, 512)).empty());
}

TEST_CASE("validate flags placeholders as non-elaboratable") {
    const std::vector<Violation> violations = validate(general_formula(32, 8));
    std::size_t placeholder = 0;
    for (const Violation& v : violations) {
        if (v.kind == ViolationKind::Placeholder) ++placeholder;
    }
    CHECK(placeholder == 3);  // W4, W2, W1
    CHECK(violations.size() == placeholder);
}

TEST_CASE("validate flags template deviations") {
    Formula f = specialized_formula(32, 8);
    f.stages.erase(f.stages.begin());  // drop an XP stage
    bool template_violation = false;
    for (const Violation& v : validate(f)) {
        if (v.kind == ViolationKind::Template) template_violation = true;
    }
    CHECK(template_violation);

    Formula g = specialized_formula(32, 8);
    g.stages[6] = Stage{4, PermAtom{2}};  // Perm(2) is below the size bound
    bool size_violation = false;
    for (const Violation& v : validate(g)) {
        if (v.kind == ViolationKind::SizeBound) size_violation = true;
    }
    CHECK(size_violation);
}
