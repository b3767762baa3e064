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

#include "dualpolar/linalg.hpp"

#include <algorithm>

namespace dualpolar {

Matrix Matrix::identity(std::uint32_t n) {
    Matrix m(n, n);
    for (std::uint32_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

std::uint32_t rref(const Field& F, Matrix& m) {
    std::uint32_t r = 0;
    for (std::uint32_t c = 0; c < m.cols && r < m.rows; ++c) {
        std::uint32_t piv = r;
        while (piv < m.rows && m(piv, c) == 0) ++piv;
        if (piv == m.rows) continue;
        if (piv != r)
            for (std::uint32_t j = 0; j < m.cols; ++j) std::swap(m(piv, j), m(r, j));
        const Elem s = F.inv(m(r, c));
        for (std::uint32_t j = c; j < m.cols; ++j) m(r, j) = F.mul(m(r, j), s);
        for (std::uint32_t i = 0; i < m.rows; ++i) {
            if (i == r || m(i, c) == 0) continue;
            const Elem f = F.neg(m(i, c));
            for (std::uint32_t j = c; j < m.cols; ++j) m(i, j) = F.add(m(i, j), F.mul(f, m(r, j)));
        }
        ++r;
    }
    m.data.resize(std::size_t(r) * m.cols);
    m.rows = r;
    return r;
}

std::uint32_t rank(const Field& F, Matrix m) { return rref(F, m); }

Matrix null_space(const Field& F, const Matrix& a) {
    Matrix m = a;
    const std::uint32_t r = rref(F, m);
    std::vector<int> pivot_of_col(m.cols, -1);
    for (std::uint32_t i = 0; i < r; ++i) {
        std::uint32_t c = 0;
        while (m(i, c) == 0) ++c;
        pivot_of_col[c] = static_cast<int>(i);
    }
    Matrix out(m.cols - r, m.cols);
    std::uint32_t k = 0;
    for (std::uint32_t free = 0; free < m.cols; ++free) {
        if (pivot_of_col[free] >= 0) continue;
        out(k, free) = 1;
        for (std::uint32_t c = 0; c < m.cols; ++c)
            if (pivot_of_col[c] >= 0) out(k, c) = F.neg(m(static_cast<std::uint32_t>(pivot_of_col[c]), free));
        ++k;
    }
    return out;
}

Matrix multiply(const Field& F, const Matrix& a, const Matrix& b) {
    Matrix out(a.rows, b.cols);
    for (std::uint32_t i = 0; i < a.rows; ++i)
        for (std::uint32_t l = 0; l < a.cols; ++l) {
            const Elem x = a(i, l);
            if (x == 0) continue;
            for (std::uint32_t j = 0; j < b.cols; ++j) out(i, j) = F.add(out(i, j), F.mul(x, b(l, j)));
        }
    return out;
}

std::optional<Matrix> inverse(const Field& F, const Matrix& m) {
    if (m.rows != m.cols) return std::nullopt;
    const std::uint32_t n = m.rows;
    Matrix aug(n, 2 * n);
    for (std::uint32_t i = 0; i < n; ++i) {
        for (std::uint32_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
        aug(i, n + i) = 1;
    }
    if (rref(F, aug) < n) return std::nullopt;
    for (std::uint32_t i = 0; i < n; ++i)
        if (aug(i, i) != 1) return std::nullopt;
    Matrix out(n, n);
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = 0; j < n; ++j) out(i, j) = aug(i, n + j);
    return out;
}

Matrix frobenius(const Field& F, const Matrix& m, std::uint32_t r) {
    if (r == 0) return m;
    Matrix out = m;
    for (auto& x : out.data) x = F.frobenius(x, r);
    return out;
}

bool normalize(const Field& F, std::span<Elem> v) {
    auto it = std::find_if(v.begin(), v.end(), [](Elem x) { return x != 0; });
    if (it == v.end()) return false;
    if (*it == 1) return true;
    const Elem s = F.inv(*it);
    for (; it != v.end(); ++it) *it = F.mul(*it, s);
    return true;
}

}  // namespace dualpolar
