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

#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "polargen/bit_vector.hpp"

namespace polargen {

// Stimulus/response text format: one M-bit hex vector per line with the MSB
// on lane M-1, "#" starts a comment, a blank line separates frames.

inline std::string slice_to_hex(const BitVector& slice) {
    const std::size_t m = slice.size();
    const std::size_t digits = (m + 3) / 4;
    std::string out(digits, '0');
    for (std::size_t d = 0; d < digits; ++d) {
        unsigned nibble = 0;
        for (unsigned b = 0; b < 4; ++b) {
            const std::size_t lane = 4 * (digits - 1 - d) + b;
            if (lane < m && slice[lane]) nibble |= 1u << b;
        }
        out[d] = static_cast<char>(nibble < 10 ? '0' + nibble : 'a' + (nibble - 10));
    }
    return out;
}

inline BitVector hex_to_slice(const std::string& hex, std::uint32_t m, std::size_t line_number) {
    const std::size_t digits = (m + 3) / 4;
    if (hex.size() != digits) {
        throw std::runtime_error("line " + std::to_string(line_number) + ": expected " + std::to_string(digits) +
                                 " hex digits for " + std::to_string(m) + " lanes, got \"" + hex + "\"");
    }
    BitVector slice(m);
    for (std::size_t d = 0; d < digits; ++d) {
        const char c = hex[d];
        unsigned nibble;
        if (c >= '0' && c <= '9') nibble = static_cast<unsigned>(c - '0');
        else if (c >= 'a' && c <= 'f') nibble = static_cast<unsigned>(c - 'a') + 10;
        else if (c >= 'A' && c <= 'F') nibble = static_cast<unsigned>(c - 'A') + 10;
        else {
            throw std::runtime_error("line " + std::to_string(line_number) + ": invalid hex digit '" +
                                     std::string(1, c) + "'");
        }
        for (unsigned b = 0; b < 4; ++b) {
            const std::size_t lane = 4 * (digits - 1 - d) + b;
            if (lane < m) slice.set(lane, static_cast<Bit>((nibble >> b) & 1u));
            else if ((nibble >> b) & 1u) {
                throw std::runtime_error("line " + std::to_string(line_number) +
                                         ": hex value exceeds lane count " + std::to_string(m));
            }
        }
    }
    return slice;
}

/// Hex lines per frame, one blank line between frames.
inline std::string format_frame_slices(const std::vector<std::vector<BitVector>>& frames) {
    std::string out;
    for (std::size_t f = 0; f < frames.size(); ++f) {
        if (f > 0) out += "\n";
        for (const BitVector& slice : frames[f]) {
            out += slice_to_hex(slice);
            out += "\n";
        }
    }
    return out;
}

/// Parses frames of M-lane slices; throws with the 1-based line number on
/// malformed input.
inline std::vector<std::vector<BitVector>> parse_frame_slices(std::istream& in, std::uint32_t m) {
    std::vector<std::vector<BitVector>> frames;
    std::vector<BitVector> current;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r')) {
            line.pop_back();
        }
        std::size_t start = 0;
        while (start < line.size() && (line[start] == ' ' || line[start] == '\t')) ++start;
        line.erase(0, start);
        if (line.empty()) {
            if (!current.empty()) {
                frames.push_back(std::move(current));
                current.clear();
            }
            continue;
        }
        current.push_back(hex_to_slice(line, m, line_number));
    }
    if (!current.empty()) frames.push_back(std::move(current));
    return frames;
}

inline std::vector<std::vector<BitVector>> parse_frame_slices(const std::string& text, std::uint32_t m) {
    std::istringstream in(text);
    return parse_frame_slices(in, m);
}

/// Reassembles source words from stimulus slices (the inverse of
/// input_schedule), validating the slice count per frame.
inline BitVector deschedule_input(const std::vector<BitVector>& slices, std::uint32_t n, std::uint32_t m) {
    if (slices.size() != n / m) {
        throw std::runtime_error("frame has " + std::to_string(slices.size()) + " slices, expected " +
                                 std::to_string(n / m));
    }
    BitVector u(n);
    for (std::uint32_t i = 0; i < n / m; ++i) {
        if (slices[i].size() != m) throw std::runtime_error("slice width mismatch");
        for (std::uint32_t j = 0; j < m / 2; ++j) {
            u.set((m / 2) * i + j, slices[i][2 * j]);
            u.set((m / 2) * i + j + n / 2, slices[i][2 * j + 1]);
        }
    }
    return u;
}

}  // namespace polargen
