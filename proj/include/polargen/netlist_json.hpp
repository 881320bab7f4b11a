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

#include <string>

#include <json.hpp>

#include "polargen/netlist.hpp"

namespace polargen {

/// Stable-key-order JSON document for a netlist; the same (N, M) always
/// serializes to the same bytes.
inline nlohmann::ordered_json netlist_to_json(const Netlist& nl) {
    nlohmann::ordered_json doc;
    doc["n"] = nl.length;
    doc["m"] = nl.lanes;
    doc["cells"] = nlohmann::ordered_json::array();
    for (const Cell& cell : nl.cells) {
        nlohmann::ordered_json params;
        params["stage"] = cell.stage;
        if (cell.kind == CellKind::Switch) {
            params["k"] = cell.modulus;
            params["phase"] = cell.phase;
        } else if (cell.kind == CellKind::Perm) {
            params["table"] = cell.table;
        }
        nlohmann::ordered_json entry;
        entry["id"] = cell.id;
        entry["kind"] = cell_kind_name(cell.kind);
        entry["params"] = std::move(params);
        entry["in"] = cell.inputs;
        entry["out"] = cell.outputs;
        doc["cells"].push_back(std::move(entry));
    }
    doc["inputs"] = nl.input_wires;
    doc["outputs"] = nl.output_wires;
    doc["delay_side"] = kDelaySide;
    return doc;
}

inline std::string serialize_netlist(const Netlist& nl) { return netlist_to_json(nl).dump(2) + "\n"; }

/// CostReport as a JSON document, one entry per formula stage.
inline nlohmann::ordered_json cost_to_json(const Netlist& nl, const CostReport& report) {
    nlohmann::ordered_json doc;
    doc["n"] = nl.length;
    doc["m"] = nl.lanes;
    doc["xor"] = report.xor_count;
    doc["mem"] = report.mem_count;
    doc["latency_cycles"] = report.latency_cycles;
    doc["bits_per_cycle"] = report.bits_per_cycle;
    doc["stages"] = nlohmann::ordered_json::array();
    for (const StageCost& sc : report.stages) {
        nlohmann::ordered_json entry;
        entry["index"] = sc.index;
        entry["symbol"] = sc.symbol;
        entry["xor"] = sc.xor_gates;
        entry["mem"] = sc.delay_elements;
        entry["latency_cycles"] = sc.latency_cycles;
        doc["stages"].push_back(std::move(entry));
    }
    return doc;
}

}  // namespace polargen
