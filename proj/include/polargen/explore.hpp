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
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "polargen/netlist.hpp"

namespace polargen {

/// One design point of the cost/performance trade-off space for a fixed N.
struct ExploreRow {
    std::uint32_t parallelism = 0;      // M
    std::uint32_t xor_count = 0;
    std::uint32_t mem_count = 0;
    std::uint32_t latency_cycles = 0;
    std::uint32_t bits_per_cycle = 0;   // equals M
    std::optional<double> throughput_bps;  // M * f when a frequency is known
};

/// Frequencies in MHz; key 0 applies to every M without its own entry.
using FrequencyMap = std::map<std::uint32_t, double>;

/// One row per valid parallelism level M = 4 .. N/2 (powers of two), i.e.
/// log2(N) - 2 designs.
inline std::vector<ExploreRow> design_space(std::uint32_t n, const FrequencyMap& freq_mhz = {}) {
    if (!is_power_of_two(n) || n < 8) {
        throw std::invalid_argument("design_space: N must be a power of two >= 8, got " + std::to_string(n));
    }
    std::vector<ExploreRow> rows;
    for (std::uint32_t m = 4; m <= n / 2; m *= 2) {
        ExploreRow row;
        row.parallelism = m;
        row.xor_count = (m / 2) * log2_exact(n);
        row.mem_count = 3 * n / 2 - m;
        row.latency_cycles = latency(n, m);
        row.bits_per_cycle = m;
        auto it = freq_mhz.find(m);
        if (it == freq_mhz.end()) it = freq_mhz.find(0);
        if (it != freq_mhz.end()) row.throughput_bps = static_cast<double>(m) * it->second * 1e6;
        rows.push_back(row);
    }
    return rows;
}

inline std::string format_explore_table(std::uint32_t n, const std::vector<ExploreRow>& rows) {
    std::ostringstream os;
    os << "design space for N = " << n << " (" << rows.size() << " designs)\n";
    os << std::left << std::setw(8) << "M" << std::setw(8) << "XOR" << std::setw(8) << "MEM" << std::setw(12)
       << "latency" << std::setw(12) << "bits/cyc" << "T/P (Gbps)\n";
    for (const ExploreRow& row : rows) {
        os << std::left << std::setw(8) << row.parallelism << std::setw(8) << row.xor_count << std::setw(8)
           << row.mem_count << std::setw(12) << row.latency_cycles << std::setw(12) << row.bits_per_cycle;
        if (row.throughput_bps) {
            os << std::fixed << std::setprecision(3) << (*row.throughput_bps / 1e9);
        } else {
            os << "-";
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace polargen
