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

#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dualpolar/field.hpp"

namespace dualpolar {

// Dense row-major matrix of field encodings. Small sizes only (ambient
// dimension <= 9), so plain value semantics.
struct Matrix {
    std::uint32_t rows = 0;
    std::uint32_t cols = 0;
    std::vector<Elem> data;

    Matrix() = default;
    Matrix(std::uint32_t r, std::uint32_t c) : rows(r), cols(c), data(std::size_t(r) * c, 0) {}

    Elem& operator()(std::uint32_t i, std::uint32_t j) { return data[std::size_t(i) * cols + j]; }
    Elem operator()(std::uint32_t i, std::uint32_t j) const { return data[std::size_t(i) * cols + j]; }
    std::span<Elem> row(std::uint32_t i) { return {data.data() + std::size_t(i) * cols, cols}; }
    std::span<const Elem> row(std::uint32_t i) const { return {data.data() + std::size_t(i) * cols, cols}; }

    static Matrix identity(std::uint32_t n);

    auto operator<=>(const Matrix&) const = default;
};

// In-place reduced row echelon form with unit pivots; zero rows dropped.
// Returns the rank.
std::uint32_t rref(const Field& F, Matrix& m);

std::uint32_t rank(const Field& F, Matrix m);

// Basis (as rows) of { x : m * x^T = 0 }.
Matrix null_space(const Field& F, const Matrix& m);

Matrix multiply(const Field& F, const Matrix& a, const Matrix& b);

std::optional<Matrix> inverse(const Field& F, const Matrix& m);

// Entrywise x -> x^{p^r}.
Matrix frobenius(const Field& F, const Matrix& m, std::uint32_t r);

// Scale so the first nonzero entry is one; returns false for the zero vector.
bool normalize(const Field& F, std::span<Elem> v);

}  // namespace dualpolar
