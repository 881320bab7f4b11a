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
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "polargen/formula.hpp"

namespace polargen {

// ---------------------------------------------------------------------------
// Streaming permutation tables (output index -> input index)
// ---------------------------------------------------------------------------

/// Fixed rewiring of a P-lane bus: even lanes in the lower half and odd lanes
/// in the upper half stay put; odd lane i < P/2 swaps with lane i-1+P/2. The
/// table is an involution.
inline std::vector<std::uint32_t> permutation_table(std::uint32_t size) {
    if (size < 4 || !is_power_of_two(size)) {
        throw std::invalid_argument("permutation_table: size must be a power of two >= 4, got " +
                                    std::to_string(size));
    }
    std::vector<std::uint32_t> table(size);
    for (std::uint32_t i = 0; i < size / 2; i += 2) table[i] = i;
    for (std::uint32_t i = size - 1; i > size / 2; i -= 2) table[i] = i;
    for (std::uint32_t i = 1; i < size / 2; i += 2) {
        table[i] = i - 1 + size / 2;
        table[i - 1 + size / 2] = i;
    }
    return table;
}

// ---------------------------------------------------------------------------
// Cells and netlist
// ---------------------------------------------------------------------------

enum class CellKind : std::uint8_t {
    Xp,      // 2-in/2-out, one XOR: (a, b) -> (a^b, b)
    Delay,   // 1-in/1-out, one register
    Switch,  // 2-in/2-out crossbar driven by the MSB of a modulus-K counter
    Perm,    // P-in/P-out fixed rewiring, zero storage
};

inline const char* cell_kind_name(CellKind kind) {
    switch (kind) {
        case CellKind::Xp: return "xp";
        case CellKind::Delay: return "delay";
        case CellKind::Switch: return "switch";
        case CellKind::Perm: return "perm";
    }
    return "?";
}

struct Cell {
    std::uint32_t id = 0;
    CellKind kind = CellKind::Xp;
    std::uint32_t modulus = 0;                // Switch: K
    std::uint32_t phase = 0;                  // Switch: counter reset value
    std::vector<std::uint32_t> table;         // Perm: output <- input lane map
    std::vector<std::uint32_t> inputs;        // wire ids
    std::vector<std::uint32_t> outputs;       // wire ids
    std::uint32_t stage = 0;                  // source formula stage index
};

/// Delay registers sit on the bottom lane of a switch before the crossbar and
/// on the top lane after it; both lane paths cross exactly K/2 registers.
inline constexpr const char* kDelaySide = "bottom-in/top-out";

struct Netlist {
    std::uint32_t length = 0;  // N
    std::uint32_t lanes = 0;   // M
    std::vector<Cell> cells;   // ids equal positions; listed in stage order
    std::vector<std::uint32_t> input_wires;
    std::vector<std::uint32_t> output_wires;
    std::uint32_t wire_count = 0;
    std::vector<std::string> stage_symbols;  // formula text per stage
};

/// Connects the cells of a specialized formula lane by lane, left to right.
/// ids and wires are assigned in stage order, top lane first, so identical
/// formulas elaborate to identical netlists.
inline Netlist elaborate(const Formula& f) {
    const std::vector<Violation> violations = validate(f);
    if (!violations.empty()) {
        throw std::invalid_argument("elaborate: formula is not elaboratable: " + violations.front().message);
    }

    Netlist nl;
    nl.length = f.length;
    nl.lanes = f.lanes;
    nl.wire_count = f.lanes;
    for (std::uint32_t l = 0; l < f.lanes; ++l) nl.input_wires.push_back(l);

    std::vector<std::uint32_t> lane = nl.input_wires;
    const auto new_wire = [&nl]() { return nl.wire_count++; };
    const auto add_cell = [&nl](Cell cell) -> const Cell& {
        cell.id = static_cast<std::uint32_t>(nl.cells.size());
        nl.cells.push_back(std::move(cell));
        return nl.cells.back();
    };

    for (std::size_t stage_idx = 0; stage_idx < f.stages.size(); ++stage_idx) {
        const Stage& stage = f.stages[stage_idx];
        nl.stage_symbols.push_back(format_stage(stage));
        const std::uint32_t s = static_cast<std::uint32_t>(stage_idx);

        if (std::holds_alternative<XpAtom>(stage.atom)) {
            for (std::uint32_t c = 0; c < stage.copies; ++c) {
                Cell cell;
                cell.kind = CellKind::Xp;
                cell.stage = s;
                cell.inputs = {lane[2 * c], lane[2 * c + 1]};
                cell.outputs = {new_wire(), new_wire()};
                lane[2 * c] = cell.outputs[0];
                lane[2 * c + 1] = cell.outputs[1];
                add_cell(std::move(cell));
            }
        } else if (const auto* perm = std::get_if<PermAtom>(&stage.atom)) {
            const std::vector<std::uint32_t> table = permutation_table(perm->width);
            for (std::uint32_t c = 0; c < stage.copies; ++c) {
                Cell cell;
                cell.kind = CellKind::Perm;
                cell.stage = s;
                cell.table = table;
                for (std::uint32_t l = 0; l < perm->width; ++l) {
                    cell.inputs.push_back(lane[c * perm->width + l]);
                }
                for (std::uint32_t l = 0; l < perm->width; ++l) {
                    cell.outputs.push_back(new_wire());
                    lane[c * perm->width + l] = cell.outputs.back();
                }
                add_cell(std::move(cell));
            }
        } else {
            const auto& sw = std::get<SwitchAtom>(stage.atom);
            const std::uint32_t depth = sw.modulus / 2;
            for (std::uint32_t c = 0; c < stage.copies; ++c) {
                // Bottom-lane delay line feeding the crossbar.
                std::uint32_t bottom = lane[2 * c + 1];
                for (std::uint32_t d = 0; d < depth; ++d) {
                    Cell reg;
                    reg.kind = CellKind::Delay;
                    reg.stage = s;
                    reg.inputs = {bottom};
                    reg.outputs = {new_wire()};
                    bottom = reg.outputs[0];
                    add_cell(std::move(reg));
                }
                Cell cross;
                cross.kind = CellKind::Switch;
                cross.stage = s;
                cross.modulus = sw.modulus;
                cross.phase = 0;
                cross.inputs = {lane[2 * c], bottom};
                cross.outputs = {new_wire(), new_wire()};
                const std::uint32_t cross_top = cross.outputs[0];
                const std::uint32_t cross_bottom = cross.outputs[1];
                add_cell(std::move(cross));
                // Top-lane delay line draining the crossbar.
                std::uint32_t top = cross_top;
                for (std::uint32_t d = 0; d < depth; ++d) {
                    Cell reg;
                    reg.kind = CellKind::Delay;
                    reg.stage = s;
                    reg.inputs = {top};
                    reg.outputs = {new_wire()};
                    top = reg.outputs[0];
                    add_cell(std::move(reg));
                }
                lane[2 * c] = top;
                lane[2 * c + 1] = cross_bottom;
            }
        }
    }
    nl.output_wires = lane;
    return nl;
}

// ---------------------------------------------------------------------------
// Cost accounting
// ---------------------------------------------------------------------------

/// Clock cycles from the first input slice to the first output slice.
inline std::uint32_t latency(std::uint32_t n, std::uint32_t m) {
    check_design_params(n, m);
    return 3 * n / (2 * m) - 1;
}

struct StageCost {
    std::uint32_t index = 0;
    std::string symbol;
    std::uint32_t xor_gates = 0;
    std::uint32_t delay_elements = 0;
    std::uint32_t latency_cycles = 0;
};

struct CostReport {
    std::uint32_t xor_count = 0;       // (M/2) * log2(N)
    std::uint32_t mem_count = 0;       // 3N/2 - M
    std::uint32_t latency_cycles = 0;  // 3N/(2M) - 1
    std::uint32_t bits_per_cycle = 0;  // M
    std::vector<StageCost> stages;
};

/// Counts gates and registers by walking the cells and cross-checks the
/// closed forms; a disagreement means elaboration is broken and throws.
inline CostReport cost_report(const Netlist& nl) {
    CostReport report;
    report.bits_per_cycle = nl.lanes;
    report.stages.resize(nl.stage_symbols.size());
    for (std::size_t i = 0; i < nl.stage_symbols.size(); ++i) {
        report.stages[i].index = static_cast<std::uint32_t>(i);
        report.stages[i].symbol = nl.stage_symbols[i];
    }

    for (const Cell& cell : nl.cells) {
        StageCost& sc = report.stages.at(cell.stage);
        switch (cell.kind) {
            case CellKind::Xp:
                ++report.xor_count;
                ++sc.xor_gates;
                break;
            case CellKind::Delay:
                ++report.mem_count;
                ++sc.delay_elements;
                break;
            case CellKind::Switch:
                sc.latency_cycles = cell.modulus / 2;
                break;
            case CellKind::Perm:
                break;
        }
    }
    for (const StageCost& sc : report.stages) report.latency_cycles += sc.latency_cycles;

    const std::uint32_t n = nl.length;
    const std::uint32_t m = nl.lanes;
    const std::uint32_t xor_closed = (m / 2) * log2_exact(n);
    const std::uint32_t mem_closed = 3 * n / 2 - m;
    const std::uint32_t latency_closed = latency(n, m);
    if (report.xor_count != xor_closed || report.mem_count != mem_closed ||
        report.latency_cycles != latency_closed) {
        throw std::logic_error(
            "cost_report: walked counts disagree with closed forms: xor " + std::to_string(report.xor_count) +
            "/" + std::to_string(xor_closed) + ", mem " + std::to_string(report.mem_count) + "/" +
            std::to_string(mem_closed) + ", latency " + std::to_string(report.latency_cycles) + "/" +
            std::to_string(latency_closed));
    }
    return report;
}

}  // namespace polargen
