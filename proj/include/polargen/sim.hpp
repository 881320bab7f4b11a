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
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "polargen/golden.hpp"
#include "polargen/netlist.hpp"

namespace polargen {

// ---------------------------------------------------------------------------
// Frame schedules
// ---------------------------------------------------------------------------

/// Splits a source word into N/M input slices: slice i interleaves
/// u[(M/2)i + j] and u[(M/2)i + j + N/2] for j = 0..M/2-1, lane 0 first.
inline std::vector<BitVector> input_schedule(const BitVector& u, std::uint32_t n, std::uint32_t m) {
    check_design_params(n, m);
    if (u.size() != n) {
        throw std::invalid_argument("input_schedule: source word length " + std::to_string(u.size()) +
                                    " != N = " + std::to_string(n));
    }
    std::vector<BitVector> slices;
    slices.reserve(n / m);
    for (std::uint32_t i = 0; i < n / m; ++i) {
        BitVector slice(m);
        for (std::uint32_t j = 0; j < m / 2; ++j) {
            slice.set(2 * j, u[(m / 2) * i + j]);
            slice.set(2 * j + 1, u[(m / 2) * i + j + n / 2]);
        }
        slices.push_back(std::move(slice));
    }
    return slices;
}

/// Output slices: slice i holds M consecutive bits of the bit-reversed
/// codeword y starting at M*i.
inline std::vector<BitVector> output_schedule(const BitVector& x, std::uint32_t n, std::uint32_t m) {
    check_design_params(n, m);
    if (x.size() != n) {
        throw std::invalid_argument("output_schedule: codeword length " + std::to_string(x.size()) +
                                    " != N = " + std::to_string(n));
    }
    const BitVector y = bitrev_permute(x);
    std::vector<BitVector> slices;
    slices.reserve(n / m);
    for (std::uint32_t i = 0; i < n / m; ++i) {
        BitVector slice(m);
        for (std::uint32_t l = 0; l < m; ++l) slice.set(l, y[m * i + l]);
        slices.push_back(std::move(slice));
    }
    return slices;
}

/// One frame per row: the expected output slices for each source word.
inline std::vector<std::vector<BitVector>> expected_frames(const std::vector<BitVector>& frames,
                                                           std::uint32_t n, std::uint32_t m) {
    std::vector<std::vector<BitVector>> out;
    out.reserve(frames.size());
    const CodeParams params = CodeParams::of(n);
    for (const BitVector& u : frames) out.push_back(output_schedule(encode_reference(u, params), n, m));
    return out;
}

/// Deterministic random source words (raw engine bits, no distribution).
inline std::vector<BitVector> random_frames(std::uint32_t n, std::uint32_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<BitVector> frames;
    frames.reserve(count);
    for (std::uint32_t f = 0; f < count; ++f) {
        BitVector u(n);
        std::uint64_t word = 0;
        for (std::uint32_t i = 0; i < n; ++i) {
            if (i % 64 == 0) word = rng();
            u.set(i, static_cast<Bit>((word >> (i % 64)) & 1u));
        }
        frames.push_back(std::move(u));
    }
    return frames;
}

// ---------------------------------------------------------------------------
// Cycle-accurate interpreter
// ---------------------------------------------------------------------------

/// Architectural state of a running netlist: one (bit, valid) pair per delay
/// register, one counter per switch, and the global cycle index. Wire arrays
/// are scratch space for the combinational pass.
struct SimState {
    std::vector<Bit> reg_bit;        // per cell id; used by Delay cells
    std::vector<Bit> reg_valid;      // per cell id; used by Delay cells
    std::vector<std::uint32_t> counter;  // per cell id; used by Switch cells
    std::vector<Bit> wire_bit;
    std::vector<Bit> wire_valid;
    std::uint64_t cycle = 0;
    std::size_t bound_cells = 0;
    std::uint32_t bound_wires = 0;
};

inline SimState make_sim_state(const Netlist& nl) {
    SimState st;
    st.reg_bit.assign(nl.cells.size(), 0);
    st.reg_valid.assign(nl.cells.size(), 0);
    st.counter.assign(nl.cells.size(), 0);
    for (const Cell& cell : nl.cells) {
        if (cell.kind == CellKind::Switch) st.counter[cell.id] = cell.phase;
    }
    st.wire_bit.assign(nl.wire_count, 0);
    st.wire_valid.assign(nl.wire_count, 0);
    st.bound_cells = nl.cells.size();
    st.bound_wires = nl.wire_count;
    return st;
}

struct StepResult {
    BitVector out;
    bool out_valid = false;
};

/// Advances one clock edge. The combinational cone is evaluated in cell-id
/// order (elaboration order is topological); registers present their stored
/// value during evaluation and capture afterwards. Switch counters advance
/// only on cycles whose crossbar-side data is valid, so inter-frame gaps do
/// not disturb the commutation pattern.
inline StepResult step(const Netlist& nl, SimState& st, const BitVector& in, bool in_valid) {
    if (st.bound_cells != nl.cells.size() || st.bound_wires != nl.wire_count) {
        throw std::logic_error("step: state was not initialized for this netlist");
    }
    if (in.size() != nl.lanes) {
        throw std::invalid_argument("step: input slice has " + std::to_string(in.size()) + " lanes, expected " +
                                    std::to_string(nl.lanes));
    }

    for (std::uint32_t l = 0; l < nl.lanes; ++l) {
        st.wire_bit[nl.input_wires[l]] = in[l];
        st.wire_valid[nl.input_wires[l]] = in_valid ? 1 : 0;
    }

    for (const Cell& cell : nl.cells) {
        switch (cell.kind) {
            case CellKind::Xp: {
                const Bit a = st.wire_bit[cell.inputs[0]];
                const Bit b = st.wire_bit[cell.inputs[1]];
                const Bit v = st.wire_valid[cell.inputs[0]] & st.wire_valid[cell.inputs[1]];
                st.wire_bit[cell.outputs[0]] = a ^ b;
                st.wire_bit[cell.outputs[1]] = b;
                st.wire_valid[cell.outputs[0]] = v;
                st.wire_valid[cell.outputs[1]] = v;
                break;
            }
            case CellKind::Delay:
                st.wire_bit[cell.outputs[0]] = st.reg_bit[cell.id];
                st.wire_valid[cell.outputs[0]] = st.reg_valid[cell.id];
                break;
            case CellKind::Switch: {
                const std::uint32_t msb = cell.modulus / 2;
                const bool cross = (st.counter[cell.id] & msb) != 0;
                const std::uint32_t direct = cell.inputs[0];
                const std::uint32_t delayed = cell.inputs[1];
                const std::uint32_t top = cross ? delayed : direct;
                const std::uint32_t bottom = cross ? direct : delayed;
                st.wire_bit[cell.outputs[0]] = st.wire_bit[top];
                st.wire_valid[cell.outputs[0]] = st.wire_valid[top];
                st.wire_bit[cell.outputs[1]] = st.wire_bit[bottom];
                st.wire_valid[cell.outputs[1]] = st.wire_valid[bottom];
                break;
            }
            case CellKind::Perm:
                for (std::size_t i = 0; i < cell.table.size(); ++i) {
                    st.wire_bit[cell.outputs[i]] = st.wire_bit[cell.inputs[cell.table[i]]];
                    st.wire_valid[cell.outputs[i]] = st.wire_valid[cell.inputs[cell.table[i]]];
                }
                break;
        }
    }

    // Commit phase.
    for (const Cell& cell : nl.cells) {
        if (cell.kind == CellKind::Delay) {
            st.reg_bit[cell.id] = st.wire_bit[cell.inputs[0]];
            st.reg_valid[cell.id] = st.wire_valid[cell.inputs[0]];
        } else if (cell.kind == CellKind::Switch) {
            if (st.wire_valid[cell.inputs[0]]) {
                st.counter[cell.id] = (st.counter[cell.id] + 1) % cell.modulus;
            }
        }
    }
    ++st.cycle;

    StepResult result;
    result.out = BitVector(nl.lanes);
    Bit all = 1, any = 0;
    for (std::uint32_t l = 0; l < nl.lanes; ++l) {
        result.out.set(l, st.wire_bit[nl.output_wires[l]]);
        all &= st.wire_valid[nl.output_wires[l]];
        any |= st.wire_valid[nl.output_wires[l]];
    }
    if (all != any) throw std::logic_error("step: output lane valids diverged");
    result.out_valid = all != 0;
    return result;
}

// ---------------------------------------------------------------------------
// Frame-level driving
// ---------------------------------------------------------------------------

struct RunResult {
    std::vector<std::vector<BitVector>> frame_outputs;  // N/M slices per frame
    std::int64_t first_output_latency = -1;             // cycles, -1 if no output
};

/// Streams frames through a fresh simulation, `gap` idle cycles between
/// consecutive frames, then drains. Slices are regrouped per frame.
inline RunResult run_frames(const Netlist& nl, const std::vector<BitVector>& frames, std::uint32_t gap = 0) {
    const std::uint32_t slices_per_frame = nl.length / nl.lanes;
    std::vector<BitVector> in_slices;
    std::vector<bool> in_valid;
    for (std::size_t f = 0; f < frames.size(); ++f) {
        if (frames[f].size() != nl.length) {
            throw std::invalid_argument("run_frames: frame " + std::to_string(f) + " has length " +
                                        std::to_string(frames[f].size()) + ", expected " +
                                        std::to_string(nl.length));
        }
        if (f > 0) {
            for (std::uint32_t g = 0; g < gap; ++g) {
                in_slices.emplace_back(nl.lanes);
                in_valid.push_back(false);
            }
        }
        for (BitVector& slice : input_schedule(frames[f], nl.length, nl.lanes)) {
            in_slices.push_back(std::move(slice));
            in_valid.push_back(true);
        }
    }

    SimState st = make_sim_state(nl);
    const std::size_t expected = frames.size() * slices_per_frame;
    std::vector<BitVector> collected;
    std::int64_t first_in = -1;
    std::int64_t first_out = -1;

    const std::uint64_t budget = in_slices.size() + latency(nl.length, nl.lanes) + slices_per_frame + 16;
    const BitVector idle(nl.lanes);
    for (std::uint64_t t = 0; t < budget; ++t) {
        const bool driving = t < in_slices.size();
        const bool valid = driving && in_valid[t];
        if (valid && first_in < 0) first_in = static_cast<std::int64_t>(t);
        const StepResult r = step(nl, st, driving ? in_slices[t] : idle, valid);
        if (r.out_valid) {
            if (first_out < 0) first_out = static_cast<std::int64_t>(t);
            if (collected.size() == expected) {
                throw std::logic_error("run_frames: more output slices than input slices");
            }
            collected.push_back(r.out);
        }
    }
    if (collected.size() != expected) {
        throw std::logic_error("run_frames: collected " + std::to_string(collected.size()) +
                               " output slices, expected " + std::to_string(expected));
    }

    RunResult result;
    result.first_output_latency = (first_in >= 0 && first_out >= 0) ? first_out - first_in : -1;
    result.frame_outputs.reserve(frames.size());
    for (std::size_t f = 0; f < frames.size(); ++f) {
        result.frame_outputs.emplace_back(collected.begin() + static_cast<std::ptrdiff_t>(f * slices_per_frame),
                                          collected.begin() +
                                              static_cast<std::ptrdiff_t>((f + 1) * slices_per_frame));
    }
    return result;
}

// ---------------------------------------------------------------------------
// Golden-model equivalence
// ---------------------------------------------------------------------------

struct MismatchDetail {
    std::uint32_t frame = 0;
    std::uint32_t slice = 0;
    std::uint32_t lane = 0;
    Bit expected = 0;
    Bit actual = 0;
};

struct EquivalenceReport {
    bool passed = false;
    std::uint32_t length = 0;
    std::uint32_t lanes = 0;
    std::uint32_t frames_checked = 0;
    std::int64_t measured_latency = -1;
    std::optional<MismatchDetail> first_mismatch;
    std::string error;  // non-empty when the run itself failed

    std::string describe() const {
        std::ostringstream os;
        os << "N=" << length << " M=" << lanes << " frames=" << frames_checked;
        if (passed) {
            os << " latency=" << measured_latency << " PASS";
        } else if (!error.empty()) {
            os << " FAIL: " << error;
        } else if (first_mismatch) {
            os << " FAIL: frame " << first_mismatch->frame << ", output slice " << first_mismatch->slice
               << ", lane " << first_mismatch->lane << ": expected " << int(first_mismatch->expected)
               << ", got " << int(first_mismatch->actual);
        } else {
            os << " FAIL: latency " << measured_latency << " != expected";
        }
        return os.str();
    }
};

/// Runs the given frames through the netlist and compares every output slice
/// with the golden model's bit-reversed codeword.
inline EquivalenceReport check_against_golden(const Netlist& nl, const std::vector<BitVector>& frames,
                                              std::uint32_t gap = 0) {
    EquivalenceReport report;
    report.length = nl.length;
    report.lanes = nl.lanes;
    report.frames_checked = static_cast<std::uint32_t>(frames.size());

    RunResult run;
    try {
        run = run_frames(nl, frames, gap);
    } catch (const std::exception& e) {
        report.error = e.what();
        return report;
    }
    report.measured_latency = run.first_output_latency;

    const std::vector<std::vector<BitVector>> expected = expected_frames(frames, nl.length, nl.lanes);
    for (std::uint32_t f = 0; f < frames.size(); ++f) {
        for (std::uint32_t s = 0; s < expected[f].size(); ++s) {
            const BitVector& want = expected[f][s];
            const BitVector& got = run.frame_outputs[f][s];
            for (std::uint32_t l = 0; l < nl.lanes; ++l) {
                if (want[l] != got[l]) {
                    report.first_mismatch = MismatchDetail{f, s, l, want[l], got[l]};
                    return report;
                }
            }
        }
    }
    if (run.first_output_latency != static_cast<std::int64_t>(latency(nl.length, nl.lanes))) {
        return report;  // passed stays false; describe() reports the latency
    }
    report.passed = true;
    return report;
}

/// End-to-end oracle: random back-to-back frames, deterministic in the seed.
inline EquivalenceReport verify_equivalence(std::uint32_t n, std::uint32_t m, std::uint32_t num_frames,
                                            std::uint64_t seed) {
    const Netlist nl = elaborate(specialized_formula(n, m));
    return check_against_golden(nl, random_frames(n, num_frames, seed));
}

/// Exhaustive single-frame oracle; practical only for tiny N.
inline EquivalenceReport verify_equivalence_exhaustive(std::uint32_t n, std::uint32_t m) {
    if (n > 16) throw std::invalid_argument("verify_equivalence_exhaustive: 2^N inputs; N must be <= 16");
    const Netlist nl = elaborate(specialized_formula(n, m));
    std::vector<BitVector> frames;
    frames.reserve(std::size_t{1} << n);
    for (std::uint64_t word = 0; word < (std::uint64_t{1} << n); ++word) {
        BitVector u(n);
        for (std::uint32_t i = 0; i < n; ++i) u.set(i, static_cast<Bit>((word >> i) & 1u));
        frames.push_back(std::move(u));
    }
    return check_against_golden(nl, frames);
}

}  // namespace polargen
