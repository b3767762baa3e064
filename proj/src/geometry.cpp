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

#include "dualpolar/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dualpolar {

Geometry Geometry::from_lines(std::uint32_t n, std::vector<std::vector<std::uint32_t>> lines, GeometryMeta meta) {
    if (n == 0) throw GeometryError("geometry has no points");
    if (lines.empty()) throw GeometryError("geometry has no lines");
    Geometry G;
    G.n_ = n;
    G.meta_ = std::move(meta);
    G.line_size_ = static_cast<std::uint32_t>(lines.front().size());
    if (G.line_size_ < 2) throw GeometryError("lines need at least two points");

    std::vector<std::vector<std::uint32_t>> on(n);
    G.adjacency_ = BitMatrix(n, n);
    for (std::size_t l = 0; l < lines.size(); ++l) {
        const auto& L = lines[l];
        if (L.size() != G.line_size_)
            throw GeometryError("line " + std::to_string(l) + " has " + std::to_string(L.size()) + " points, expected " +
                                std::to_string(G.line_size_));
        for (std::size_t j = 0; j < L.size(); ++j) {
            if (L[j] >= n) throw GeometryError("line " + std::to_string(l) + " has an out-of-range point");
            if (j && L[j] <= L[j - 1]) throw GeometryError("line " + std::to_string(l) + " is not strictly ascending");
            on[L[j]].push_back(static_cast<std::uint32_t>(l));
        }
        for (std::size_t i = 0; i < L.size(); ++i)
            for (std::size_t j = i + 1; j < L.size(); ++j) {
                if (G.adjacency_.test(L[i], L[j]))
                    throw GeometryError("points " + std::to_string(L[i]) + " and " + std::to_string(L[j]) +
                                        " share more than one line");
                G.adjacency_.set(L[i], L[j]);
                G.adjacency_.set(L[j], L[i]);
            }
    }
    G.lines_per_point_ = static_cast<std::uint32_t>(on[0].size());
    for (std::uint32_t p = 0; p < n; ++p)
        if (on[p].size() != G.lines_per_point_ || on[p].empty())
            throw GeometryError("point " + std::to_string(p) + " is on " + std::to_string(on[p].size()) +
                                " lines, expected " + std::to_string(G.lines_per_point_));

    std::vector<std::vector<std::uint32_t>> nb(n);
    for (std::uint32_t p = 0; p < n; ++p) {
        nb[p].reserve(std::size_t(G.line_size_ - 1) * G.lines_per_point_);
        for_each_bit(G.adjacency_.row(p), [&](std::size_t q) { nb[p].push_back(static_cast<std::uint32_t>(q)); });
    }
    G.graph_ = kernels::Csr::from_lists(nb);
    G.point_lines_ = kernels::Csr::from_lists(on);
    G.line_csr_ = kernels::Csr::from_lists(lines);
    G.lines_ = std::move(lines);

    if (n <= kDenseDistanceLimit) {
        G.dist_ = kernels::distance_matrix(G.graph_);
        std::uint8_t mx = 0;
        for (auto v : G.dist_) {
            if (v == kernels::kUnreachable) throw GeometryError("collinearity graph is disconnected");
            mx = std::max(mx, v);
        }
        G.diameter_ = mx;
    } else {
        // Large case: eccentricity of point 0 (exact for point-transitive inputs).
        const auto row = kernels::bfs_row(G.graph_, 0);
        std::uint8_t mx = 0;
        for (auto v : row) {
            if (v == kernels::kUnreachable) throw GeometryError("collinearity graph is disconnected");
            mx = std::max(mx, v);
        }
        G.diameter_ = mx;
    }
    G.hash_ = sha256_hex(G.serialize());
    return G;
}

Geometry Geometry::from_npg(const NpgData& data) { return from_lines(data.n, data.lines, data.meta); }

std::string Geometry::serialize() const { return serialize_npg(meta_, n_, lines_); }

void Geometry::index_points() {
    point_index_.clear();
    point_index_.reserve(points_.size() * 2);
    for (std::uint32_t i = 0; i < points_.size(); ++i) point_index_.emplace(points_[i].bytes(), i);
}

std::optional<std::uint32_t> Geometry::index_of(const Subspace& s) const {
    auto it = point_index_.find(s.bytes());
    if (it == point_index_.end()) return std::nullopt;
    return it->second;
}

std::uint32_t Geometry::subspace_distance(std::uint32_t x, std::uint32_t y) const {
    const Matrix& a = points_[x].basis;
    const Matrix& b = points_[y].basis;
    Matrix m(a.rows + b.rows, a.cols);
    std::copy(a.data.begin(), a.data.end(), m.data.begin());
    std::copy(b.data.begin(), b.data.end(), m.data.begin() + static_cast<std::ptrdiff_t>(a.data.size()));
    // d - dim(x meet y) = rank(x + y) - d
    return rank(form_->field, std::move(m)) - form_->rank;
}

std::uint32_t Geometry::distance(std::uint32_t x, std::uint32_t y) const {
    if (x >= n_ || y >= n_) throw GeometryError("point index out of range");
    if (!dist_.empty()) return dist_[std::size_t(x) * n_ + y];
    if (form_) return subspace_distance(x, y);
    thread_local const Geometry* owner = nullptr;
    thread_local std::uint32_t source = 0;
    thread_local std::vector<std::uint8_t> row;
    if (owner != this || source != x || row.size() != n_) {
        row = kernels::bfs_row(graph_, x);
        owner = this;
        source = x;
    }
    return row[y];
}

std::vector<std::uint8_t> Geometry::distance_row(std::uint32_t x) const {
    if (x >= n_) throw GeometryError("point index out of range");
    if (!dist_.empty()) return {dist_.begin() + std::ptrdiff_t(std::size_t(x) * n_), dist_.begin() + std::ptrdiff_t(std::size_t(x + 1) * n_)};
    return kernels::bfs_row(graph_, x);
}

std::vector<std::uint32_t> Geometry::sphere(std::uint32_t x, std::uint32_t i) const {
    if (i > diameter_) throw GeometryError("sphere radius " + std::to_string(i) + " exceeds the diameter");
    const auto row = distance_row(x);
    std::vector<std::uint32_t> out;
    for (std::uint32_t y = 0; y < n_; ++y)
        if (row[y] == i) out.push_back(y);
    return out;
}

Bitset Geometry::sphere_bits(std::uint32_t x, std::uint32_t i) const {
    if (i > diameter_) throw GeometryError("sphere radius " + std::to_string(i) + " exceeds the diameter");
    Bitset b(n_);
    if (!dist_.empty()) {
        const std::uint8_t* r = dist_.data() + std::size_t(x) * n_;
        for (std::uint32_t y = 0; y < n_; ++y)
            if (r[y] == i) b.set(y);
        return b;
    }
    const auto row = distance_row(x);
    for (std::uint32_t y = 0; y < n_; ++y)
        if (row[y] == i) b.set(y);
    return b;
}

std::optional<std::pair<std::uint32_t, std::uint32_t>> Geometry::near_polygon_violation() const {
    constexpr std::uint64_t kNone = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t best = kNone;
    const std::size_t L = lines_.size();
#pragma omp parallel for schedule(dynamic, 4) reduction(min : best)
    for (std::int64_t ps = 0; ps < static_cast<std::int64_t>(n_); ++ps) {
        const auto p = static_cast<std::uint32_t>(ps);
        const auto row = distance_row(p);
        for (std::size_t l = 0; l < L; ++l) {
            std::uint8_t lo = kernels::kUnreachable;
            std::uint32_t hits = 0;
            for (auto x : lines_[l]) {
                if (row[x] < lo) {
                    lo = row[x];
                    hits = 1;
                } else if (row[x] == lo) {
                    ++hits;
                }
            }
            if (hits != 1) {
                best = std::min<std::uint64_t>(best, std::uint64_t(p) * L + l);
                break;
            }
        }
    }
    if (best == kNone) return std::nullopt;
    return std::make_pair(static_cast<std::uint32_t>(best / L), static_cast<std::uint32_t>(best % L));
}

GeometryMeta meta_for(const FormSpace& S) {
    GeometryMeta m;
    m.name = S.name();
    m.family = family_tag(S.family);
    m.q = S.field.q();
    m.d = S.rank;
    return m;
}

std::optional<FormSpace> form_for(const GeometryMeta& meta) {
    if (meta.family == "none") return std::nullopt;
    const Family f = parse_family(meta.family);
    std::uint32_t q = meta.q;
    if (f == Family::H) {
        const auto r = static_cast<std::uint32_t>(std::lround(std::sqrt(static_cast<double>(q))));
        if (r * r != q) throw GeometryError("Hermitian geometry header q must be a square");
        q = r;
    }
    return form_make(f, meta.d, q);
}

Geometry build_dual_polar(const FormSpace& S, std::size_t max_generators) {
    const Field& F = S.field;
    const std::uint32_t d = S.rank;
    auto gens = enumerate_generators(S, max_generators);
    const auto n = static_cast<std::uint32_t>(gens.maximals.size());

    std::unordered_map<std::string, std::uint32_t> line_index;
    line_index.reserve(gens.next_to_maximals.size() * 2);
    for (std::uint32_t i = 0; i < gens.next_to_maximals.size(); ++i)
        line_index.emplace(gens.next_to_maximals[i].bytes(), i);

    // Hyperplanes of each generator, one per normalized functional on F^d.
    std::vector<Matrix> kernels;
    {
        std::vector<Elem> phi(d, 0);
        const std::uint32_t q = F.q();
        for (std::uint32_t lead = 0; lead < d; ++lead) {
            std::fill(phi.begin(), phi.end(), 0);
            phi[lead] = 1;
            while (true) {
                Matrix f(1, d);
                std::copy(phi.begin(), phi.end(), f.data.begin());
                kernels.push_back(null_space(F, f));
                bool carry = true;
                for (std::uint32_t i = d; i > lead + 1 && carry;) {
                    --i;
                    if (++phi[i] < q) carry = false;
                    else phi[i] = 0;
                }
                if (carry) break;
            }
        }
    }

    std::vector<std::vector<std::uint32_t>> on(n);
    bool missing = false;
#pragma omp parallel for schedule(dynamic, 16) reduction(|| : missing)
    for (std::int64_t ps = 0; ps < static_cast<std::int64_t>(n); ++ps) {
        const auto& M = gens.maximals[ps].basis;
        for (const auto& K : kernels) {
            auto h = Subspace::from_rows(F, multiply(F, K, M));
            auto it = line_index.find(h.bytes());
            if (it == line_index.end()) missing = true;
            else on[ps].push_back(it->second);
        }
    }
    if (missing) throw GeometryError("hyperplane of a generator is not a listed next-to-maximal subspace");

    std::vector<std::vector<std::uint32_t>> lines(gens.next_to_maximals.size());
    for (std::uint32_t p = 0; p < n; ++p)
        for (auto l : on[p]) lines[l].push_back(p);

    Geometry G = Geometry::from_lines(n, std::move(lines), meta_for(S));
    G.form_ = S;
    G.points_ = std::move(gens.maximals);
    G.index_points();
    if (G.dist_.empty()) G.diameter_ = d;
    return G;
}

}  // namespace dualpolar
