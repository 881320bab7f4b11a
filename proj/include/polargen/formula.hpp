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

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "polargen/bit_vector.hpp"

namespace polargen {

// ---------------------------------------------------------------------------
// IR types
//
// A formula is an ordered, left-to-right sequence of stages. Each stage is
// I_k (x) A for an atom A: an XOR-and-pass pair, a 2-lane switch S_K, a fixed
// P-lane rewiring P_P, or (in unspecialized formulas only) the placeholder
// W_v whose dyadic subscript v = N/(2^i M) selects a switch or a permutation
// during specialization.
// ---------------------------------------------------------------------------

struct XpAtom {
    bool operator==(const XpAtom&) const = default;
};

struct SwitchAtom {
    std::uint32_t modulus = 0;  // K; a power of two >= 2
    bool operator==(const SwitchAtom&) const = default;
};

struct PermAtom {
    std::uint32_t width = 0;  // P; a power of two >= 4
    bool operator==(const PermAtom&) const = default;
};

/// W_v with v = 2^log2_value (log2_value may be zero or negative).
/// `span` is the lane width the placeholder covers: 2 when v >= 2 (it will
/// become one switch), the full lane count when v <= 1 (it will become a
/// permutation bank).
struct PlaceholderAtom {
    std::int32_t log2_value = 0;
    std::uint32_t span = 0;
    bool operator==(const PlaceholderAtom&) const = default;
};

using Atom = std::variant<XpAtom, SwitchAtom, PermAtom, PlaceholderAtom>;

inline std::uint32_t atom_width(const Atom& atom) {
    if (std::holds_alternative<XpAtom>(atom) || std::holds_alternative<SwitchAtom>(atom)) return 2;
    if (const auto* p = std::get_if<PermAtom>(&atom)) return p->width;
    return std::get<PlaceholderAtom>(atom).span;
}

struct Stage {
    std::uint32_t copies = 1;  // the I_k wrapper; 1 means the bare atom
    Atom atom;

    bool operator==(const Stage&) const = default;
    std::uint32_t lane_span() const { return copies * atom_width(atom); }
};

struct Formula {
    std::uint32_t length = 0;  // N
    std::uint32_t lanes = 0;   // M
    std::vector<Stage> stages;

    bool operator==(const Formula&) const = default;
};

inline bool contains_placeholders(const Formula& f) {
    for (const Stage& s : f.stages) {
        if (std::holds_alternative<PlaceholderAtom>(s.atom)) return true;
    }
    return false;
}

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

inline void check_design_params(std::uint32_t n, std::uint32_t m) {
    if (!is_power_of_two(n)) throw std::invalid_argument("N must be a power of two, got " + std::to_string(n));
    if (!is_power_of_two(m)) throw std::invalid_argument("M must be a power of two, got " + std::to_string(m));
    if (n < 8) throw std::invalid_argument("N must be at least 8, got " + std::to_string(n));
    if (m < 4) throw std::invalid_argument("M must be at least 4, got " + std::to_string(m));
    if (m > n / 2) {
        throw std::invalid_argument("M must satisfy M <= N/2, got M = " + std::to_string(m) +
                                    " with N = " + std::to_string(n));
    }
}

/// The general framework F(N, M): stage sequence with W placeholders whose
/// subscripts are v_i = N/(2^i M) for i = 0 .. log2(N)-3.
inline Formula general_formula(std::uint32_t n, std::uint32_t m) {
    check_design_params(n, m);
    const std::int32_t log2_n = static_cast<std::int32_t>(log2_exact(n));
    const std::int32_t log2_m = static_cast<std::int32_t>(log2_exact(m));

    Formula f;
    f.length = n;
    f.lanes = m;
    f.stages.push_back({m / 2, XpAtom{}});
    f.stages.push_back({m / 4, PermAtom{4}});
    for (std::int32_t i = 0; i <= log2_n - 3; ++i) {
        const std::int32_t e = log2_n - i - log2_m;  // subscript v_i = 2^e
        if (e >= 1) {
            f.stages.push_back({m / 2, PlaceholderAtom{e, 2}});
        } else {
            f.stages.push_back({1, PlaceholderAtom{e, m}});
        }
        f.stages.push_back({m / 2, XpAtom{}});
    }
    f.stages.push_back({m / 4, PermAtom{4}});
    f.stages.push_back({m / 2, SwitchAtom{n / m}});
    f.stages.push_back({m / 2, XpAtom{}});
    return f;
}

/// Rewrites every W placeholder: v >= 2 becomes I_{M/2} (x) S_v, and
/// v = 1/k becomes I_k (x) P_{M/k}. The result carries no W atoms.
inline Formula specialize(const Formula& general) {
    Formula f = general;
    for (Stage& s : f.stages) {
        const auto* w = std::get_if<PlaceholderAtom>(&s.atom);
        if (w == nullptr) continue;
        if (w->log2_value >= 1) {
            if (s.copies != f.lanes / 2) {
                throw std::logic_error("specialize: switch-bound W must carry I_{M/2}");
            }
            s.atom = SwitchAtom{1u << w->log2_value};
        } else {
            const std::uint32_t k = 1u << (-w->log2_value);
            if (s.copies != 1 || w->span != f.lanes || f.lanes / k < 4) {
                throw std::logic_error("specialize: permutation-bound W has inconsistent shape");
            }
            s.copies = k;
            s.atom = PermAtom{f.lanes / k};
        }
    }
    return f;
}

/// F(N, M) with Algorithm-2 specialization already applied.
inline Formula specialized_formula(std::uint32_t n, std::uint32_t m) {
    return specialize(general_formula(n, m));
}

// ---------------------------------------------------------------------------
// Text form
//
//   formula := group+
//   group   := "(" [ "I" INT "x" ] atom ")"
//   atom    := "XP" | "S" INT | "P" INT | "W" SUB
//
// INT is a positive power of two in decimal. SUB is INT or, in unspecialized
// formulas only, the dyadic "1/" INT. Whitespace between groups is ignored.
// ---------------------------------------------------------------------------

inline std::string format_atom(const Atom& atom) {
    if (std::holds_alternative<XpAtom>(atom)) return "XP";
    if (const auto* s = std::get_if<SwitchAtom>(&atom)) return "S" + std::to_string(s->modulus);
    if (const auto* p = std::get_if<PermAtom>(&atom)) return "P" + std::to_string(p->width);
    const auto& w = std::get<PlaceholderAtom>(atom);
    if (w.log2_value >= 0) return "W" + std::to_string(1u << w.log2_value);
    return "W1/" + std::to_string(1u << (-w.log2_value));
}

inline std::string format_stage(const Stage& s) {
    std::string text = "(";
    if (s.copies != 1) text += "I" + std::to_string(s.copies) + "x";
    text += format_atom(s.atom);
    text += ")";
    return text;
}

/// Canonical text: one parenthesized group per stage, I_1 elided.
inline std::string format_formula(const Formula& f) {
    std::string text;
    for (const Stage& s : f.stages) text += format_stage(s);
    return text;
}

/// Thrown on malformed formula text; `position` is the 0-based character
/// offset of the offending token.
class FormulaError : public std::runtime_error {
public:
    FormulaError(const std::string& message, std::size_t position)
        : std::runtime_error(message + " (at offset " + std::to_string(position) + ")"),
          position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

namespace detail {

class FormulaParser {
public:
    explicit FormulaParser(std::string_view text) : text_(text) {}

    Formula parse() {
        std::vector<Stage> stages;
        std::vector<std::size_t> positions;
        skip_space();
        while (!at_end()) {
            positions.push_back(pos_);
            stages.push_back(parse_group());
            skip_space();
        }
        if (stages.empty()) throw FormulaError("empty formula", 0);
        return assemble(std::move(stages), positions);
    }

private:
    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }

    void skip_space() {
        while (!at_end() && (peek() == ' ' || peek() == '\t' || peek() == '\n' || peek() == '\r')) ++pos_;
    }

    void expect(char c) {
        if (at_end() || peek() != c) {
            throw FormulaError(std::string("expected '") + c + "'", pos_);
        }
        ++pos_;
    }

    std::uint32_t parse_int(const char* what) {
        const std::size_t start = pos_;
        std::uint64_t value = 0;
        while (!at_end() && peek() >= '0' && peek() <= '9') {
            value = value * 10 + static_cast<std::uint64_t>(peek() - '0');
            if (value > (1u << 30)) throw FormulaError(std::string(what) + " out of range", start);
            ++pos_;
        }
        if (pos_ == start) throw FormulaError(std::string("expected ") + what, pos_);
        if (!is_power_of_two(value)) {
            throw FormulaError(std::string(what) + " must be a power of two, got " + std::to_string(value),
                               start);
        }
        return static_cast<std::uint32_t>(value);
    }

    Stage parse_group() {
        expect('(');
        skip_space();
        Stage stage;
        stage.copies = 1;
        if (!at_end() && peek() == 'I') {
            ++pos_;
            stage.copies = parse_int("copy count");
            expect('x');
        }
        stage.atom = parse_atom();
        skip_space();
        expect(')');
        return stage;
    }

    Atom parse_atom() {
        if (at_end()) throw FormulaError("expected atom", pos_);
        const std::size_t start = pos_;
        const char c = peek();
        ++pos_;
        switch (c) {
            case 'X':
                if (at_end() || peek() != 'P') throw FormulaError("expected 'XP'", start);
                ++pos_;
                return XpAtom{};
            case 'S': {
                const std::uint32_t k = parse_int("switch size");
                if (k < 2) throw FormulaError("switch size must be >= 2", start);
                return SwitchAtom{k};
            }
            case 'P': {
                const std::uint32_t p = parse_int("permutation size");
                if (p < 4) throw FormulaError("permutation size must be >= 4 (P_N requires N > 2)", start);
                return PermAtom{p};
            }
            case 'W': {
                const std::uint32_t num = parse_int("W subscript");
                if (!at_end() && peek() == '/') {
                    if (num != 1) throw FormulaError("fractional W subscript must be 1/k", start);
                    ++pos_;
                    const std::uint32_t den = parse_int("W subscript denominator");
                    return PlaceholderAtom{-static_cast<std::int32_t>(log2_exact(den)), 0};
                }
                return PlaceholderAtom{static_cast<std::int32_t>(log2_exact(num)), 0};
            }
            default:
                throw FormulaError("unknown atom", start);
        }
    }

    /// Infers M from the non-placeholder stages, fixes up W spans, checks the
    /// uniform lane span, and reconstructs N from the final switch size.
    Formula assemble(std::vector<Stage> stages, const std::vector<std::size_t>& positions) {
        std::optional<std::uint32_t> lanes;
        std::size_t lanes_source = 0;
        for (std::size_t i = 0; i < stages.size(); ++i) {
            if (std::holds_alternative<PlaceholderAtom>(stages[i].atom)) continue;
            const std::uint32_t span = stages[i].lane_span();
            if (lanes && *lanes != span) {
                throw FormulaError("lane span " + std::to_string(span) + " does not match span " +
                                       std::to_string(*lanes) + " of earlier stages",
                                   positions[i]);
            }
            if (!lanes) lanes_source = i;
            lanes = span;
        }
        if (!lanes) throw FormulaError("cannot infer lane count: no non-placeholder stage", positions[0]);
        (void)lanes_source;

        for (std::size_t i = 0; i < stages.size(); ++i) {
            auto* w = std::get_if<PlaceholderAtom>(&stages[i].atom);
            if (w == nullptr) continue;
            if (w->log2_value >= 1) {
                w->span = 2;
            } else {
                if (stages[i].copies != 1) {
                    throw FormulaError("W with subscript <= 1 cannot carry an I wrapper", positions[i]);
                }
                w->span = *lanes;
            }
            if (stages[i].lane_span() != *lanes) {
                throw FormulaError("lane span " + std::to_string(stages[i].lane_span()) +
                                       " does not match span " + std::to_string(*lanes) +
                                       " of earlier stages",
                                   positions[i]);
            }
        }

        std::optional<std::uint32_t> final_switch;
        for (const Stage& s : stages) {
            if (const auto* sw = std::get_if<SwitchAtom>(&s.atom)) final_switch = sw->modulus;
        }
        if (!final_switch) {
            throw FormulaError("cannot reconstruct N: formula has no switch stage", positions.back());
        }

        Formula f;
        f.lanes = *lanes;
        f.length = *lanes * *final_switch;
        f.stages = std::move(stages);
        return f;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses canonical formula text. M is inferred from the stage lane spans and
/// N from the final switch size times M. Throws FormulaError with the
/// offending character offset.
inline Formula parse_formula(std::string_view text) { return detail::FormulaParser(text).parse(); }

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

enum class ViolationKind {
    SizeBound,       // atom size outside its power-of-two bounds
    LaneSpan,        // stage does not span exactly M lanes
    Placeholder,     // unspecialized W atom (not elaboratable)
    Template,        // stage sequence deviates from the framework template
    Params,          // (N, M) outside the supported region
};

struct Violation {
    ViolationKind kind;
    std::size_t stage_index;  // SIZE_MAX for formula-level violations
    std::string message;
};

inline constexpr std::size_t kFormulaLevel = static_cast<std::size_t>(-1);

/// Structural checks; an empty result means the formula is elaboratable.
inline std::vector<Violation> validate(const Formula& f) {
    std::vector<Violation> out;
    const auto add = [&out](ViolationKind kind, std::size_t stage, std::string message) {
        out.push_back(Violation{kind, stage, std::move(message)});
    };

    try {
        check_design_params(f.length, f.lanes);
    } catch (const std::invalid_argument& e) {
        add(ViolationKind::Params, kFormulaLevel, e.what());
        return out;
    }

    for (std::size_t i = 0; i < f.stages.size(); ++i) {
        const Stage& s = f.stages[i];
        if (!is_power_of_two(s.copies)) {
            add(ViolationKind::SizeBound, i, "copy count " + std::to_string(s.copies) + " is not a power of two");
        }
        if (const auto* sw = std::get_if<SwitchAtom>(&s.atom)) {
            if (sw->modulus < 2 || !is_power_of_two(sw->modulus)) {
                add(ViolationKind::SizeBound, i, "switch size " + std::to_string(sw->modulus) + " out of bounds");
            }
        } else if (const auto* p = std::get_if<PermAtom>(&s.atom)) {
            if (p->width < 4 || !is_power_of_two(p->width)) {
                add(ViolationKind::SizeBound, i,
                    "permutation size " + std::to_string(p->width) + " out of bounds (P_N requires N > 2)");
            }
        } else if (std::holds_alternative<PlaceholderAtom>(s.atom)) {
            add(ViolationKind::Placeholder, i, "unspecialized W atom: specialize before elaboration");
        }
        if (s.lane_span() != f.lanes) {
            add(ViolationKind::LaneSpan, i,
                "stage spans " + std::to_string(s.lane_span()) + " lanes, formula has M = " +
                    std::to_string(f.lanes));
        }
    }

    // Template conformance: the framework fixes the whole stage sequence.
    const std::uint32_t log2_n = log2_exact(f.length);
    const std::uint32_t inner_count = log2_n - 2;
    const std::size_t expected_stages = 2 * static_cast<std::size_t>(log2_n) + 1;
    if (f.stages.size() != expected_stages) {
        add(ViolationKind::Template, kFormulaLevel,
            "stage count " + std::to_string(f.stages.size()) + " != " + std::to_string(expected_stages) +
                " expected for N = " + std::to_string(f.length));
        return out;
    }

    const auto expect_xp = [&](std::size_t i) {
        if (!std::holds_alternative<XpAtom>(f.stages[i].atom) || f.stages[i].copies != f.lanes / 2) {
            add(ViolationKind::Template, i, "expected (I" + std::to_string(f.lanes / 2) + "xXP)");
        }
    };
    const auto expect_p4 = [&](std::size_t i) {
        const auto* p = std::get_if<PermAtom>(&f.stages[i].atom);
        if (p == nullptr || p->width != 4 || f.stages[i].copies != f.lanes / 4) {
            add(ViolationKind::Template, i, "expected the fixed P4 bank at this position");
        }
    };

    expect_xp(0);
    expect_p4(1);
    const std::int32_t log2_m = static_cast<std::int32_t>(log2_exact(f.lanes));
    for (std::uint32_t i = 0; i < inner_count; ++i) {
        const std::size_t at = 2 + 2 * static_cast<std::size_t>(i);
        const std::int32_t e = static_cast<std::int32_t>(log2_n) - static_cast<std::int32_t>(i) - log2_m;
        const Stage& s = f.stages[at];
        bool ok = false;
        if (const auto* w = std::get_if<PlaceholderAtom>(&s.atom)) {
            ok = w->log2_value == e;
        } else if (e >= 1) {
            const auto* sw = std::get_if<SwitchAtom>(&s.atom);
            ok = sw != nullptr && sw->modulus == (1u << e) && s.copies == f.lanes / 2;
        } else {
            const std::uint32_t k = 1u << (-e);
            const auto* p = std::get_if<PermAtom>(&s.atom);
            ok = p != nullptr && s.copies == k && p->width == f.lanes / k;
        }
        if (!ok) {
            add(ViolationKind::Template, at,
                "inner stage " + std::to_string(i) + " does not match subscript v = N/(2^" + std::to_string(i) +
                    " M)");
        }
        expect_xp(at + 1);
    }
    const std::size_t tail = 2 + 2 * static_cast<std::size_t>(inner_count);
    expect_p4(tail);
    {
        const auto* sw = std::get_if<SwitchAtom>(&f.stages[tail + 1].atom);
        if (sw == nullptr || sw->modulus != f.length / f.lanes || f.stages[tail + 1].copies != f.lanes / 2) {
            add(ViolationKind::Template, tail + 1,
                "expected the final (I" + std::to_string(f.lanes / 2) + "xS" +
                    std::to_string(f.length / f.lanes) + ")");
        }
    }
    expect_xp(tail + 2);
    return out;
}

}  // namespace polargen
