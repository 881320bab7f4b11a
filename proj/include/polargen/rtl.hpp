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

#include <algorithm>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "polargen/netlist.hpp"
#include "polargen/stimulus.hpp"

namespace polargen {

/// Verilog sources for one design. The emitted structure corresponds cell
/// for cell to the netlist: delay_cell instances equal the report's mem
/// count, xp_cell instances its xor count.
struct RtlBundle {
    std::string design_name;  // polar_enc_N{N}_M{M}
    std::string top;          // top.v
    std::string cells;        // cells.v
    std::string testbench;    // tb.v; filled in via emit_testbench
    nlohmann::ordered_json manifest;
};

inline std::string design_name(std::uint32_t n, std::uint32_t m) {
    return "polar_enc_N" + std::to_string(n) + "_M" + std::to_string(m);
}

namespace detail {

inline std::string rtl_banner(const std::string& design, const char* what) {
    return "// " + design + ": " + what + "\n// Generated file; do not edit.\n\n`timescale 1ns / 1ps\n\n";
}

inline std::string net_ref(std::uint32_t wire) { return "net[" + std::to_string(wire) + "]"; }

/// {net[hi], ..., net[lo]} concatenation mapping bus bit k to wires[k].
inline std::string bus_concat(const std::vector<std::uint32_t>& wires) {
    std::string out = "{";
    for (std::size_t i = wires.size(); i-- > 0;) {
        out += net_ref(wires[i]);
        if (i != 0) out += ", ";
    }
    out += "}";
    return out;
}

inline std::string cells_source(const std::string& design, const std::set<std::uint32_t>& perm_widths) {
    std::string v = rtl_banner(design, "behavioral leaf cells");
    v +=
        "module xp_cell (\n"
        "  input  wire a,\n"
        "  input  wire b,\n"
        "  output wire x,\n"
        "  output wire y\n"
        ");\n"
        "  assign x = a ^ b;\n"
        "  assign y = b;\n"
        "endmodule\n"
        "\n"
        "module delay_cell (\n"
        "  input  wire clk,\n"
        "  input  wire rst,\n"
        "  input  wire d,\n"
        "  output reg  q\n"
        ");\n"
        "  always @(posedge clk) begin\n"
        "    if (rst) q <= 1'b0;\n"
        "    else q <= d;\n"
        "  end\n"
        "endmodule\n"
        "\n"
        "// 2-lane crossbar: port a is the direct top input, port b arrives\n"
        "// through the bottom delay line, port x feeds the top delay line and\n"
        "// port y leaves directly. The counter MSB selects cross transfer.\n"
        "module switch_cell #(\n"
        "  parameter LOG2K = 1,\n"
        "  parameter PHASE = 0\n"
        ") (\n"
        "  input  wire clk,\n"
        "  input  wire rst,\n"
        "  input  wire en,\n"
        "  input  wire a,\n"
        "  input  wire b,\n"
        "  output wire x,\n"
        "  output wire y\n"
        ");\n"
        "  localparam [LOG2K-1:0] PHASE_VAL = PHASE;\n"
        "  reg [LOG2K-1:0] cnt;\n"
        "  always @(posedge clk) begin\n"
        "    if (rst) cnt <= PHASE_VAL;\n"
        "    else if (en) cnt <= cnt + 1'b1;\n"
        "  end\n"
        "  wire cross = cnt[LOG2K-1];\n"
        "  assign x = cross ? b : a;\n"
        "  assign y = cross ? a : b;\n"
        "endmodule\n";
    for (std::uint32_t p : perm_widths) {
        const std::vector<std::uint32_t> table = permutation_table(p);
        v += "\nmodule perm_cell_p" + std::to_string(p) +
             " (\n"
             "  input  wire [" + std::to_string(p - 1) + ":0] d,\n"
             "  output wire [" + std::to_string(p - 1) + ":0] q\n"
             ");\n";
        for (std::uint32_t i = 0; i < p; ++i) {
            v += "  assign q[" + std::to_string(i) + "] = d[" + std::to_string(table[i]) + "];\n";
        }
        v += "endmodule\n";
    }
    return v;
}

}  // namespace detail

/// Synthesizable single-clock Verilog for a netlist: ports clk, rst
/// (synchronous, active-high), in_valid, u[M-1:0], out_valid, x[M-1:0].
/// Emission is deterministic; the same netlist yields byte-identical text.
inline RtlBundle emit_verilog(const Netlist& nl) {
    const std::uint32_t n = nl.length;
    const std::uint32_t m = nl.lanes;
    const std::uint32_t total_latency = latency(n, m);

    RtlBundle bundle;
    bundle.design_name = design_name(n, m);

    std::set<std::uint32_t> perm_widths;
    for (const Cell& cell : nl.cells) {
        if (cell.kind == CellKind::Perm) perm_widths.insert(static_cast<std::uint32_t>(cell.table.size()));
    }
    bundle.cells = detail::cells_source(bundle.design_name, perm_widths);

    // Register depth at the input of each stage: switch counters must only
    // advance when the data wavefront has actually reached them.
    std::vector<std::uint32_t> stage_modulus(nl.stage_symbols.size(), 0);
    for (const Cell& cell : nl.cells) {
        if (cell.kind == CellKind::Switch) stage_modulus[cell.stage] = cell.modulus;
    }
    std::vector<std::uint32_t> stage_depth(nl.stage_symbols.size(), 0);
    std::uint32_t depth = 0;
    for (std::size_t s = 0; s < stage_modulus.size(); ++s) {
        stage_depth[s] = depth;
        depth += stage_modulus[s] / 2;
    }

    std::string v = detail::rtl_banner(bundle.design_name,
                                       ("pipelined polar encoder, N=" + std::to_string(n) + ", M=" +
                                        std::to_string(m))
                                           .c_str());
    const std::string mrange = "[" + std::to_string(m - 1) + ":0]";
    v += "module " + bundle.design_name +
         " (\n"
         "  input  wire       clk,\n"
         "  input  wire       rst,\n"
         "  input  wire       in_valid,\n"
         "  input  wire " + mrange +
         " u,\n"
         "  output wire       out_valid,\n"
         "  output wire " + mrange + " x\n);\n";
    v += "  wire [" + std::to_string(nl.wire_count - 1) + ":0] net;\n\n";
    v += "  assign net[" + std::to_string(m - 1) + ":0] = u;\n\n";

    const std::string lat = std::to_string(total_latency);
    v += "  // in_valid delayed to each pipeline depth; the tail is out_valid.\n";
    v += "  reg [" + std::to_string(total_latency - 1) + ":0] vpipe;\n";
    v += "  always @(posedge clk) begin\n";
    v += "    if (rst) vpipe <= " + lat + "'d0;\n";
    v += "    else vpipe <= {vpipe[" + std::to_string(total_latency - 2) + ":0], in_valid};\n";
    v += "  end\n";
    v += "  assign out_valid = vpipe[" + std::to_string(total_latency - 1) + "];\n\n";

    for (std::size_t s = 0; s < stage_modulus.size(); ++s) {
        if (stage_modulus[s] == 0) continue;
        const std::uint32_t d = stage_depth[s];
        v += "  wire en_d" + std::to_string(d) + " = " +
             (d == 0 ? std::string("in_valid") : "vpipe[" + std::to_string(d - 1) + "]") + ";\n";
    }
    v += "\n";

    std::size_t current_stage = static_cast<std::size_t>(-1);
    for (const Cell& cell : nl.cells) {
        if (cell.stage != current_stage) {
            current_stage = cell.stage;
            v += "  // stage " + std::to_string(cell.stage) + ": " + nl.stage_symbols[cell.stage] + "\n";
        }
        const std::string name = "c" + std::to_string(cell.id);
        switch (cell.kind) {
            case CellKind::Xp:
                v += "  xp_cell " + name + " (.a(" + detail::net_ref(cell.inputs[0]) + "), .b(" +
                     detail::net_ref(cell.inputs[1]) + "), .x(" + detail::net_ref(cell.outputs[0]) +
                     "), .y(" + detail::net_ref(cell.outputs[1]) + "));\n";
                break;
            case CellKind::Delay:
                v += "  delay_cell " + name + " (.clk(clk), .rst(rst), .d(" + detail::net_ref(cell.inputs[0]) +
                     "), .q(" + detail::net_ref(cell.outputs[0]) + "));\n";
                break;
            case CellKind::Switch:
                v += "  switch_cell #(.LOG2K(" + std::to_string(log2_exact(cell.modulus)) + "), .PHASE(" +
                     std::to_string(cell.phase) + ")) " + name + " (.clk(clk), .rst(rst), .en(en_d" +
                     std::to_string(stage_depth[cell.stage]) + "), .a(" + detail::net_ref(cell.inputs[0]) +
                     "), .b(" + detail::net_ref(cell.inputs[1]) + "), .x(" + detail::net_ref(cell.outputs[0]) +
                     "), .y(" + detail::net_ref(cell.outputs[1]) + "));\n";
                break;
            case CellKind::Perm:
                v += "  perm_cell_p" + std::to_string(cell.table.size()) + " " + name + " (.d(" +
                     detail::bus_concat(cell.inputs) + "), .q(" + detail::bus_concat(cell.outputs) + "));\n";
                break;
        }
    }
    v += "\n";
    for (std::uint32_t l = 0; l < m; ++l) {
        v += "  assign x[" + std::to_string(l) + "] = " + detail::net_ref(nl.output_wires[l]) + ";\n";
    }
    v += "endmodule\n";
    bundle.top = std::move(v);

    bundle.manifest["design"] = bundle.design_name;
    bundle.manifest["n"] = n;
    bundle.manifest["m"] = m;
    bundle.manifest["files"] = {"top.v",       "cells.v",      "tb.v",         "netlist.json",
                                "cost.json",   "stimulus.txt", "expected.txt"};
    return bundle;
}

/// Self-checking testbench: reads stimulus.txt/expected.txt (the plain-text
/// slice format), drives gapless frames, compares every valid output vector
/// and reports the first mismatch. Prints "TB PASS" or a "TB FAIL" line.
inline std::string emit_testbench(const Netlist& nl, const std::vector<std::vector<BitVector>>& stimulus,
                                  const std::vector<std::vector<BitVector>>& expected) {
    if (stimulus.size() != expected.size()) {
        throw std::invalid_argument("emit_testbench: stimulus has " + std::to_string(stimulus.size()) +
                                    " frames, expected vectors have " + std::to_string(expected.size()));
    }
    const std::uint32_t n = nl.length;
    const std::uint32_t m = nl.lanes;
    const std::uint32_t slices = n / m;
    for (std::size_t f = 0; f < stimulus.size(); ++f) {
        if (stimulus[f].size() != slices || expected[f].size() != slices) {
            throw std::invalid_argument("emit_testbench: frame " + std::to_string(f) +
                                        " does not have N/M slices");
        }
    }

    const std::string design = design_name(n, m);
    const std::size_t num_vectors = stimulus.size() * slices;
    const std::size_t mem_cap = std::max<std::size_t>(num_vectors, 1) - 1;
    const std::size_t line_chars = (m + 3) / 4 + 16;
    const std::string mrange = "[" + std::to_string(m - 1) + ":0]";

    std::string v = detail::rtl_banner(design, "self-checking testbench");
    v += "module tb;\n";
    v += "  localparam integer NVEC = " + std::to_string(num_vectors) + ";\n";
    v += "  localparam integer LATENCY = " + std::to_string(latency(n, m)) + ";\n\n";
    v += "  reg clk;\n  reg rst;\n  reg in_valid;\n  reg " + mrange + " u;\n";
    v += "  wire out_valid;\n  wire " + mrange + " x;\n\n";
    v += "  " + design + " dut (.clk(clk), .rst(rst), .in_valid(in_valid), .u(u), .out_valid(out_valid), .x(x));\n\n";
    v += "  always #5 clk = ~clk;\n\n";
    v += "  reg " + mrange + " stim_mem [0:" + std::to_string(mem_cap) + "];\n";
    v += "  reg " + mrange + " exp_mem [0:" + std::to_string(mem_cap) + "];\n";
    v += "  integer fd, code, nstim, nexp, ncomp, errors, i;\n";
    v += "  reg [" + std::to_string(8 * line_chars - 1) + ":0] line;\n";
    v += "  reg " + mrange + " tmp;\n\n";
    v +=
        "  initial begin\n"
        "    clk = 1'b0;\n"
        "    rst = 1'b1;\n"
        "    in_valid = 1'b0;\n"
        "    u = {" + std::to_string(m) + "{1'b0}};\n"
        "    ncomp = 0;\n"
        "    errors = 0;\n"
        "\n"
        "    nstim = 0;\n"
        "    fd = $fopen(\"stimulus.txt\", \"r\");\n"
        "    if (fd == 0) begin\n"
        "      $display(\"TB FAIL: cannot open stimulus.txt\");\n"
        "      $fatal;\n"
        "    end\n"
        "    while (!$feof(fd)) begin\n"
        "      code = $fgets(line, fd);\n"
        "      if (code > 0) begin\n"
        "        code = $sscanf(line, \"%h\", tmp);\n"
        "        if (code == 1) begin\n"
        "          if (nstim < NVEC) stim_mem[nstim] = tmp;\n"
        "          nstim = nstim + 1;\n"
        "        end\n"
        "      end\n"
        "    end\n"
        "    $fclose(fd);\n"
        "    if (nstim != NVEC) begin\n"
        "      $display(\"TB FAIL: stimulus.txt holds %0d vectors, expected %0d\", nstim, NVEC);\n"
        "      $fatal;\n"
        "    end\n"
        "\n"
        "    nexp = 0;\n"
        "    fd = $fopen(\"expected.txt\", \"r\");\n"
        "    if (fd == 0) begin\n"
        "      $display(\"TB FAIL: cannot open expected.txt\");\n"
        "      $fatal;\n"
        "    end\n"
        "    while (!$feof(fd)) begin\n"
        "      code = $fgets(line, fd);\n"
        "      if (code > 0) begin\n"
        "        code = $sscanf(line, \"%h\", tmp);\n"
        "        if (code == 1) begin\n"
        "          if (nexp < NVEC) exp_mem[nexp] = tmp;\n"
        "          nexp = nexp + 1;\n"
        "        end\n"
        "      end\n"
        "    end\n"
        "    $fclose(fd);\n"
        "    if (nexp != NVEC) begin\n"
        "      $display(\"TB FAIL: expected.txt holds %0d vectors, expected %0d\", nexp, NVEC);\n"
        "      $fatal;\n"
        "    end\n"
        "\n"
        "    repeat (4) @(negedge clk);\n"
        "    rst = 1'b0;\n"
        "    @(negedge clk);\n"
        "    for (i = 0; i < NVEC; i = i + 1) begin\n"
        "      u = stim_mem[i];\n"
        "      in_valid = 1'b1;\n"
        "      @(negedge clk);\n"
        "    end\n"
        "    in_valid = 1'b0;\n"
        "    u = {" + std::to_string(m) + "{1'b0}};\n"
        "    repeat (LATENCY + 8) @(negedge clk);\n"
        "    if (ncomp != NVEC) begin\n"
        "      $display(\"TB FAIL: captured %0d output vectors, expected %0d\", ncomp, NVEC);\n"
        "      errors = errors + 1;\n"
        "    end\n"
        "    if (errors == 0) begin\n"
        "      $display(\"TB PASS\");\n"
        "      $finish;\n"
        "    end\n"
        "    $display(\"TB FAIL: %0d errors\", errors);\n"
        "    $fatal;\n"
        "  end\n"
        "\n"
        "  always @(posedge clk) begin\n"
        "    if (!rst && out_valid) begin\n"
        "      if (ncomp < NVEC) begin\n"
        "        if (x !== exp_mem[ncomp]) begin\n"
        "          if (errors == 0)\n"
        "            $display(\"TB FAIL: first mismatch at output vector %0d: expected %h, got %h\",\n"
        "                     ncomp, exp_mem[ncomp], x);\n"
        "          errors = errors + 1;\n"
        "        end\n"
        "      end else begin\n"
        "        if (errors == 0) $display(\"TB FAIL: unexpected extra output vector\");\n"
        "        errors = errors + 1;\n"
        "      end\n"
        "      ncomp = ncomp + 1;\n"
        "    end\n"
        "  end\n"
        "endmodule\n";
    return v;
}

namespace detail {

inline std::size_t count_occurrences(const std::string& text, const std::string& needle) {
    std::size_t count = 0;
    std::size_t pos = 0;
    while ((pos = text.find(needle, pos)) != std::string::npos) {
        ++count;
        pos += needle.size();
    }
    return count;
}

}  // namespace detail

struct StructuralCounts {
    std::uint32_t xor_count = 0;
    std::uint32_t register_count = 0;  // delay elements only; control state excluded
};

/// Census of the emitted text. Each xp_cell instance carries exactly one XOR
/// operator and each delay_cell instance exactly one register; both facts are
/// re-checked against the emitted cell library.
inline StructuralCounts structural_counts(const RtlBundle& bundle) {
    const std::size_t xp_def = bundle.cells.find("module xp_cell");
    const std::size_t xp_end = bundle.cells.find("endmodule", xp_def);
    const std::size_t delay_def = bundle.cells.find("module delay_cell");
    const std::size_t delay_end = bundle.cells.find("endmodule", delay_def);
    if (xp_def == std::string::npos || delay_def == std::string::npos || xp_end == std::string::npos ||
        delay_end == std::string::npos) {
        throw std::logic_error("structural_counts: emitted cell library is missing leaf modules");
    }
    if (detail::count_occurrences(bundle.cells.substr(xp_def, xp_end - xp_def), "^") != 1) {
        throw std::logic_error("structural_counts: xp_cell does not hold exactly one XOR operator");
    }
    if (detail::count_occurrences(bundle.cells.substr(delay_def, delay_end - delay_def), "q <= d;") != 1) {
        throw std::logic_error("structural_counts: delay_cell does not hold exactly one register load");
    }
    StructuralCounts counts;
    counts.xor_count = static_cast<std::uint32_t>(detail::count_occurrences(bundle.top, "\n  xp_cell "));
    counts.register_count =
        static_cast<std::uint32_t>(detail::count_occurrences(bundle.top, "\n  delay_cell "));
    return counts;
}

}  // namespace polargen
