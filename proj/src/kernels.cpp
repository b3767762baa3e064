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

#include "dualpolar/kernels.hpp"

#include <algorithm>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dualpolar::kernels {

Csr Csr::from_lists(const std::vector<std::vector<std::uint32_t>>& lists) {
    Csr g;
    g.offset.assign(lists.size() + 1, 0);
    for (std::size_t i = 0; i < lists.size(); ++i) g.offset[i + 1] = g.offset[i] + static_cast<std::uint32_t>(lists[i].size());
    g.target.reserve(g.offset.back());
    for (const auto& l : lists) g.target.insert(g.target.end(), l.begin(), l.end());
    return g;
}

std::uint32_t mod_inv(std::uint32_t a) {
    // a^(p-2)
    std::uint32_t r = 1, b = a;
    std::uint32_t e = kModP - 2;
    while (e) {
        if (e & 1) r = mod_mul(r, b);
        b = mod_mul(b, b);
        e >>= 1;
    }
    return r;
}

std::vector<std::uint8_t> bfs_row(const Csr& g, std::uint32_t source) {
    const std::uint32_t n = g.rows();
    std::vector<std::uint8_t> dist(n, kUnreachable);
    std::vector<std::uint32_t> queue;
    queue.reserve(n);
    dist[source] = 0;
    queue.push_back(source);
    for (std::size_t h = 0; h < queue.size(); ++h) {
        const std::uint32_t u = queue[h];
        for (auto v : g.row(u))
            if (dist[v] == kUnreachable) {
                dist[v] = static_cast<std::uint8_t>(dist[u] + 1);
                queue.push_back(v);
            }
    }
    return dist;
}

namespace {

// Local counts at pair (x, y) given x's distance row.
inline void local_counts(const Csr& g, const std::uint8_t* dx, std::uint32_t y, std::uint32_t& c, std::uint32_t& a,
                         std::uint32_t& b) {
    const std::uint8_t i = dx[y];
    c = a = b = 0;
    for (auto z : g.row(y)) {
        const std::uint8_t j = dx[z];
        if (j + 1 == i) ++c;
        else if (j == i) ++a;
        else ++b;
    }
}

RegularityProfile reference_profile(const Csr& g, std::span<const std::uint8_t> dist) {
    const std::uint32_t n = g.rows();
    RegularityProfile p;
    std::uint32_t diam = 0;
    for (auto v : dist)
        if (v != kUnreachable) diam = std::max<std::uint32_t>(diam, v);
    p.diameter = diam;
    p.c.assign(diam + 1, 0);
    p.a.assign(diam + 1, 0);
    p.b.assign(diam + 1, 0);
    p.k.assign(diam + 1, 0);
    std::vector<bool> seen(diam + 1, false);
    for (std::uint32_t y = 0; y < n; ++y) {
        const std::uint8_t i = dist[y];
        if (i == kUnreachable) continue;
        ++p.k[i];
        if (!seen[i]) {
            seen[i] = true;
            local_counts(g, dist.data(), y, p.c[i], p.a[i], p.b[i]);
        }
    }
    return p;
}

}  // namespace

namespace serial {

std::vector<std::uint8_t> distance_matrix(const Csr& g) {
    const std::uint32_t n = g.rows();
    std::vector<std::uint8_t> out(std::size_t(n) * n);
    for (std::uint32_t s = 0; s < n; ++s) {
        auto row = bfs_row(g, s);
        std::copy(row.begin(), row.end(), out.begin() + std::size_t(s) * n);
    }
    return out;
}

void adjacency_apply(const Csr& g, std::span<const double> x, std::span<double> y) {
    for (std::uint32_t i = 0; i < g.rows(); ++i) {
        double s = 0;
        for (auto j : g.row(i)) s += x[j];
        y[i] = s;
    }
}

std::vector<std::uint32_t> line_counts(const Csr& lines, std::span<const Word> members) {
    std::vector<std::uint32_t> out(lines.rows());
    for (std::uint32_t l = 0; l < lines.rows(); ++l) {
        std::uint32_t c = 0;
        for (auto p : lines.row(l)) c += test_bit(members, p);
        out[l] = c;
    }
    return out;
}

RegularityProfile regularity_profile(const Csr& g, std::span<const std::uint8_t> dist) {
    const std::uint32_t n = g.rows();
    RegularityProfile p = reference_profile(g, dist);
    for (std::uint32_t x = 0; x < n && !p.witness; ++x) {
        const std::uint8_t* dx = dist.data() + std::size_t(x) * n;
        for (std::uint32_t y = 0; y < n; ++y) {
            const std::uint8_t i = dx[y];
            if (i == kUnreachable) {
                p.witness = std::make_pair(x, y);
                break;
            }
            std::uint32_t c, a, b;
            local_counts(g, dx, y, c, a, b);
            if (c != p.c[i] || a != p.a[i] || b != p.b[i]) {
                p.witness = std::make_pair(x, y);
                break;
            }
        }
    }
    return p;
}

std::vector<std::uint32_t> row_reduce(ModMatrix& m) {
    std::vector<std::uint32_t> pivots;
    std::uint32_t r = 0;
    for (std::uint32_t c = 0; c < m.cols && r < m.rows; ++c) {
        std::uint32_t piv = r;
        while (piv < m.rows && m(piv, c) == 0) ++piv;
        if (piv == m.rows) continue;
        if (piv != r)
            for (std::uint32_t j = 0; j < m.cols; ++j) std::swap(m(piv, j), m(r, j));
        const std::uint32_t s = mod_inv(m(r, c));
        for (std::uint32_t j = c; j < m.cols; ++j) m(r, j) = mod_mul(m(r, j), s);
        for (std::uint32_t i = 0; i < m.rows; ++i) {
            if (i == r || m(i, c) == 0) continue;
            const std::uint32_t f = m(i, c);
            for (std::uint32_t j = c; j < m.cols; ++j) m(i, j) = mod_sub(m(i, j), mod_mul(f, m(r, j)));
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

}  // namespace serial

namespace omp {

std::vector<std::uint8_t> distance_matrix(const Csr& g) {
    const std::int64_t n = g.rows();
    std::vector<std::uint8_t> out(std::size_t(n) * n);
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t s = 0; s < n; ++s) {
        auto row = bfs_row(g, static_cast<std::uint32_t>(s));
        std::copy(row.begin(), row.end(), out.begin() + std::size_t(s) * n);
    }
    return out;
}

void adjacency_apply(const Csr& g, std::span<const double> x, std::span<double> y) {
    const std::int64_t n = g.rows();
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        double s = 0;
        for (auto j : g.row(static_cast<std::uint32_t>(i))) s += x[j];
        y[i] = s;
    }
}

std::vector<std::uint32_t> line_counts(const Csr& lines, std::span<const Word> members) {
    const std::int64_t L = lines.rows();
    std::vector<std::uint32_t> out(L);
#pragma omp parallel for schedule(static)
    for (std::int64_t l = 0; l < L; ++l) {
        std::uint32_t c = 0;
        for (auto p : lines.row(static_cast<std::uint32_t>(l))) c += test_bit(members, p);
        out[l] = c;
    }
    return out;
}

RegularityProfile regularity_profile(const Csr& g, std::span<const std::uint8_t> dist) {
    const std::uint32_t n = g.rows();
    RegularityProfile p = reference_profile(g, dist);
    constexpr std::uint64_t kNone = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t best = kNone;  // x * n + y of the smallest witness
#pragma omp parallel for schedule(dynamic, 4) reduction(min : best)
    for (std::int64_t xs = 0; xs < static_cast<std::int64_t>(n); ++xs) {
        const auto x = static_cast<std::uint32_t>(xs);
        const std::uint8_t* dx = dist.data() + std::size_t(x) * n;
        for (std::uint32_t y = 0; y < n; ++y) {
            const std::uint8_t i = dx[y];
            bool bad = i == kUnreachable;
            if (!bad) {
                std::uint32_t c, a, b;
                local_counts(g, dx, y, c, a, b);
                bad = c != p.c[i] || a != p.a[i] || b != p.b[i];
            }
            if (bad) {
                best = std::min<std::uint64_t>(best, std::uint64_t(x) * n + y);
                break;
            }
        }
    }
    if (best != kNone) p.witness = std::make_pair(static_cast<std::uint32_t>(best / n), static_cast<std::uint32_t>(best % n));
    return p;
}

std::vector<std::uint32_t> row_reduce(ModMatrix& m) {
    std::vector<std::uint32_t> pivots;
    std::uint32_t r = 0;
    for (std::uint32_t c = 0; c < m.cols && r < m.rows; ++c) {
        std::uint32_t piv = r;
        while (piv < m.rows && m(piv, c) == 0) ++piv;
        if (piv == m.rows) continue;
        if (piv != r)
            for (std::uint32_t j = 0; j < m.cols; ++j) std::swap(m(piv, j), m(r, j));
        const std::uint32_t s = mod_inv(m(r, c));
        for (std::uint32_t j = c; j < m.cols; ++j) m(r, j) = mod_mul(m(r, j), s);
        const std::int64_t rows = m.rows;
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < rows; ++i) {
            const auto ii = static_cast<std::uint32_t>(i);
            if (ii == r || m(ii, c) == 0) continue;
            const std::uint32_t f = m(ii, c);
            std::uint32_t* dst = &m.data[std::size_t(ii) * m.cols];
            const std::uint32_t* src = &m.data[std::size_t(r) * m.cols];
            for (std::uint32_t j = c; j < m.cols; ++j) dst[j] = mod_sub(dst[j], mod_mul(f, src[j]));
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

}  // namespace omp

}  // namespace dualpolar::kernels
