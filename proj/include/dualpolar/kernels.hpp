/*
 * Copyright 2026 The dualpolar Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Data-parallel inner loops. Every kernel has a plain serial reference in
// kernels::serial and an OpenMP version in kernels::omp with identical
// results (the tests compare them; bench/ times them). Library code calls
// the unqualified dispatchers at the bottom.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dualpolar/bitset.hpp"

namespace dualpolar::kernels {

// Compressed sparse rows: row i is target[offset[i] .. offset[i+1]).
struct Csr {
    std::vector<std::uint32_t> offset{0};
    std::vector<std::uint32_t> target;

    std::uint32_t rows() const { return static_cast<std::uint32_t>(offset.size() - 1); }
    std::span<const std::uint32_t> row(std::uint32_t i) const {
        return {target.data() + offset[i], offset[i + 1] - offset[i]};
    }
    static Csr from_lists(const std::vector<std::vector<std::uint32_t>>& lists);
};

inline constexpr std::uint8_t kUnreachable = 0xff;

// Measured intersection numbers of a graph given all distances.
struct RegularityProfile {
    std::uint32_t diameter = 0;
    std::vector<std::uint32_t> c, a, b;  // indexed by distance; c[0] = b[d] = 0
    std::vector<std::uint64_t> k;        // sphere sizes around vertex 0
    // lexicographically smallest pair whose local counts differ from the
    // reference pair's, if any
    std::optional<std::pair<std::uint32_t, std::uint32_t>> witness;
};

// Mod-p row reduction over p = 2^31 - 1.
inline constexpr std::uint32_t kModP = 2147483647u;

inline std::uint32_t mod_reduce(std::uint64_t x) {
    x = (x & kModP) + (x >> 31);
    x = (x & kModP) + (x >> 31);
    return x >= kModP ? static_cast<std::uint32_t>(x - kModP) : static_cast<std::uint32_t>(x);
}
inline std::uint32_t mod_mul(std::uint32_t a, std::uint32_t b) { return mod_reduce(std::uint64_t(a) * b); }
inline std::uint32_t mod_add(std::uint32_t a, std::uint32_t b) {
    const std::uint32_t s = a + b;
    return s >= kModP ? s - kModP : s;
}
inline std::uint32_t mod_sub(std::uint32_t a, std::uint32_t b) { return a >= b ? a - b : a + kModP - b; }
std::uint32_t mod_inv(std::uint32_t a);
inline std::uint32_t mod_from_int(std::int64_t v) {
    const std::int64_t p = kModP;
    return static_cast<std::uint32_t>(((v % p) + p) % p);
}

struct ModMatrix {
    std::uint32_t rows = 0, cols = 0;
    std::vector<std::uint32_t> data;
    ModMatrix() = default;
    ModMatrix(std::uint32_t r, std::uint32_t c) : rows(r), cols(c), data(std::size_t(r) * c, 0) {}
    std::uint32_t& operator()(std::uint32_t i, std::uint32_t j) { return data[std::size_t(i) * cols + j]; }
    std::uint32_t operator()(std::uint32_t i, std::uint32_t j) const { return data[std::size_t(i) * cols + j]; }
};

namespace serial {
std::vector<std::uint8_t> distance_matrix(const Csr& g);
void adjacency_apply(const Csr& g, std::span<const double> x, std::span<double> y);
std::vector<std::uint32_t> line_counts(const Csr& lines, std::span<const Word> members);
RegularityProfile regularity_profile(const Csr& g, std::span<const std::uint8_t> dist);
// Reduced row echelon form in place; returns pivot columns.
std::vector<std::uint32_t> row_reduce(ModMatrix& m);
}  // namespace serial

namespace omp {
std::vector<std::uint8_t> distance_matrix(const Csr& g);
void adjacency_apply(const Csr& g, std::span<const double> x, std::span<double> y);
std::vector<std::uint32_t> line_counts(const Csr& lines, std::span<const Word> members);
RegularityProfile regularity_profile(const Csr& g, std::span<const std::uint8_t> dist);
std::vector<std::uint32_t> row_reduce(ModMatrix& m);
}  // namespace omp

// BFS distances from one source (used when the full matrix is not stored).
std::vector<std::uint8_t> bfs_row(const Csr& g, std::uint32_t source);

inline std::vector<std::uint8_t> distance_matrix(const Csr& g) { return omp::distance_matrix(g); }
inline void adjacency_apply(const Csr& g, std::span<const double> x, std::span<double> y) {
    omp::adjacency_apply(g, x, y);
}
inline std::vector<std::uint32_t> line_counts(const Csr& lines, std::span<const Word> members) {
    return omp::line_counts(lines, members);
}
inline RegularityProfile regularity_profile(const Csr& g, std::span<const std::uint8_t> dist) {
    return omp::regularity_profile(g, dist);
}
inline std::vector<std::uint32_t> row_reduce(ModMatrix& m) { return omp::row_reduce(m); }

}  // namespace dualpolar::kernels
