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
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace polargen {

using Bit = std::uint8_t;

inline bool is_power_of_two(std::uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

/// Floor log2; exact for powers of two.
inline std::uint32_t log2_exact(std::uint64_t v) {
    if (!is_power_of_two(v)) {
        throw std::invalid_argument("log2_exact: " + std::to_string(v) + " is not a power of two");
    }
    std::uint32_t n = 0;
    while (v > 1) {
        v >>= 1;
        ++n;
    }
    return n;
}

/// A vector of GF(2) elements. Every element is 0 or 1.
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t n) : bits_(n, 0) {}
    BitVector(std::initializer_list<int> init) {
        bits_.reserve(init.size());
        for (int b : init) {
            if (b != 0 && b != 1) throw std::invalid_argument("BitVector: element must be 0 or 1");
            bits_.push_back(static_cast<Bit>(b));
        }
    }

    static BitVector from_bits(std::vector<Bit> bits) {
        for (Bit b : bits) {
            if (b > 1) throw std::invalid_argument("BitVector: element must be 0 or 1");
        }
        BitVector v;
        v.bits_ = std::move(bits);
        return v;
    }

    /// One-hot vector e_i of the given length.
    static BitVector one_hot(std::size_t n, std::size_t i) {
        if (i >= n) throw std::invalid_argument("BitVector::one_hot: index out of range");
        BitVector v(n);
        v.bits_[i] = 1;
        return v;
    }

    std::size_t size() const { return bits_.size(); }
    bool empty() const { return bits_.empty(); }

    Bit operator[](std::size_t i) const { return bits_[i]; }
    Bit at(std::size_t i) const { return bits_.at(i); }

    void set(std::size_t i, Bit b) {
        if (b > 1) throw std::invalid_argument("BitVector::set: element must be 0 or 1");
        bits_.at(i) = b;
    }
    void flip(std::size_t i) { bits_.at(i) ^= 1; }

    BitVector operator^(const BitVector& other) const {
        if (size() != other.size()) throw std::invalid_argument("BitVector::operator^: length mismatch");
        BitVector r(size());
        for (std::size_t i = 0; i < size(); ++i) r.bits_[i] = bits_[i] ^ other.bits_[i];
        return r;
    }

    bool operator==(const BitVector&) const = default;

    const std::vector<Bit>& bits() const { return bits_; }

    std::string to_string() const {
        std::string s;
        s.reserve(size());
        for (Bit b : bits_) s.push_back(b ? '1' : '0');
        return s;
    }

private:
    std::vector<Bit> bits_;
};

/// Reverses the n_bits-wide binary expansion of i.
inline std::uint32_t bitrev_index(std::uint32_t i, std::uint32_t n_bits) {
    if (n_bits >= 32 || i >= (1u << n_bits)) {
        throw std::invalid_argument("bitrev_index: index " + std::to_string(i) + " out of range for " +
                                    std::to_string(n_bits) + " bits");
    }
    std::uint32_t r = 0;
    for (std::uint32_t b = 0; b < n_bits; ++b) {
        r = (r << 1) | ((i >> b) & 1u);
    }
    return r;
}

/// out[i] = v[bitrev_index(i, n)]. Requires a power-of-two length.
inline BitVector bitrev_permute(const BitVector& v) {
    if (!is_power_of_two(v.size())) {
        throw std::invalid_argument("bitrev_permute: length must be a power of two");
    }
    const std::uint32_t n = log2_exact(v.size());
    BitVector out(v.size());
    for (std::uint32_t i = 0; i < v.size(); ++i) {
        out.set(i, v[bitrev_index(i, n)]);
    }
    return out;
}

}  // namespace polargen
