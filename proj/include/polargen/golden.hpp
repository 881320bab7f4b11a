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
#include <vector>

#include "polargen/bit_vector.hpp"

namespace polargen {

/// Code length N plus its stage count n = log2(N).
struct CodeParams {
    std::uint32_t length = 0;      // N
    std::uint32_t stage_count = 0; // n

    static CodeParams of(std::uint32_t n) {
        if (n < 2 || !is_power_of_two(n)) {
            throw std::invalid_argument("CodeParams: code length must be a power of two >= 2, got " +
                                        std::to_string(n));
        }
        return CodeParams{n, log2_exact(n)};
    }
};

/// Encodes x = u * B_N * F^{(x)n} over GF(2) in O(N log N): bit-reversal
/// first, then one in-place butterfly layer per stage in ascending stride.
inline BitVector encode_reference(const BitVector& u, const CodeParams& params) {
    if (u.size() != params.length) {
        throw std::invalid_argument("encode_reference: source word length " + std::to_string(u.size()) +
                                    " != N = " + std::to_string(params.length));
    }
    std::vector<Bit> w(params.length);
    for (std::uint32_t i = 0; i < params.length; ++i) {
        w[i] = u[bitrev_index(i, params.stage_count)];
    }
    for (std::uint32_t stride = 1; stride < params.length; stride <<= 1) {
        for (std::uint32_t block = 0; block < params.length; block += 2 * stride) {
            for (std::uint32_t j = block; j < block + stride; ++j) {
                w[j] ^= w[j + stride];
            }
        }
    }
    return BitVector::from_bits(std::move(w));
}

using BitMatrix = std::vector<std::vector<Bit>>;

inline constexpr std::uint32_t kMatrixOracleMaxLength = 64;

/// Explicit G_N = B_N * F^{(x)n}, built by repeated Kronecker product of
/// F = [[1,0],[1,1]]. Deliberately small-scale (N <= 64): it is the
/// independent oracle for the fast path, not a production encoder.
inline BitMatrix generator_matrix(const CodeParams& params) {
    if (params.length > kMatrixOracleMaxLength) {
        throw std::invalid_argument("generator_matrix: oracle is capped at N = " +
                                    std::to_string(kMatrixOracleMaxLength));
    }
    const std::uint32_t n = params.length;
    BitMatrix kron{{1}};
    for (std::uint32_t size = 1; size < n; size <<= 1) {
        BitMatrix next(2 * size, std::vector<Bit>(2 * size, 0));
        for (std::uint32_t r = 0; r < size; ++r) {
            for (std::uint32_t c = 0; c < size; ++c) {
                if (!kron[r][c]) continue;
                next[r][c] = 1;          // F[0][0]
                next[r + size][c] = 1;   // F[1][0]
                next[r + size][c + size] = 1; // F[1][1]
            }
        }
        kron = std::move(next);
    }
    BitMatrix g(n, std::vector<Bit>(n, 0));
    for (std::uint32_t r = 0; r < n; ++r) {
        g[r] = kron[bitrev_index(r, params.stage_count)];
    }
    return g;
}

/// Row-vector-times-matrix product x = u * G_N over GF(2).
inline BitVector encode_via_matrix(const BitVector& u, const CodeParams& params) {
    if (u.size() != params.length) {
        throw std::invalid_argument("encode_via_matrix: source word length " + std::to_string(u.size()) +
                                    " != N = " + std::to_string(params.length));
    }
    const BitMatrix g = generator_matrix(params);
    BitVector x(params.length);
    for (std::uint32_t j = 0; j < params.length; ++j) {
        Bit acc = 0;
        for (std::uint32_t i = 0; i < params.length; ++i) {
            acc ^= static_cast<Bit>(u[i] & g[i][j]);
        }
        x.set(j, acc);
    }
    return x;
}

}  // namespace polargen
