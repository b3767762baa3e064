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

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "dualpolar/bitset.hpp"
#include "dualpolar/io.hpp"
#include "dualpolar/kernels.hpp"
#include "dualpolar/polar.hpp"

namespace dualpolar {

class GeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Full distance matrices are stored up to this many points.
inline constexpr std::uint32_t kDenseDistanceLimit = 4096;

// Point-line geometry with its collinearity graph. Immutable after
// construction; all accessors are safe for concurrent use.
class Geometry {
public:
    // Validates: lines ascending, constant line size >= 2, constant number
    // of lines per point, two points on at most one line.
    static Geometry from_lines(std::uint32_t n, std::vector<std::vector<std::uint32_t>> lines, GeometryMeta meta);
    static Geometry from_npg(const NpgData& data);

    std::uint32_t n() const { return n_; }
    std::size_t num_lines() const { return lines_.size(); }
    const std::vector<std::vector<std::uint32_t>>& lines() const { return lines_; }
    std::span<const std::uint32_t> line(std::size_t i) const { return lines_[i]; }
    std::span<const std::uint32_t> lines_on(std::uint32_t p) const { return point_lines_.row(p); }
    std::span<const std::uint32_t> neighbors(std::uint32_t p) const { return graph_.row(p); }
    const kernels::Csr& graph() const { return graph_; }
    const kernels::Csr& line_csr() const { return line_csr_; }
    const BitMatrix& adjacency() const { return adjacency_; }

    std::uint32_t s() const { return line_size_ - 1; }
    std::uint32_t t() const { return lines_per_point_ - 1; }
    std::uint32_t diameter() const { return diameter_; }

    std::uint32_t distance(std::uint32_t x, std::uint32_t y) const;
    // Distances from x to every point.
    std::vector<std::uint8_t> distance_row(std::uint32_t x) const;
    // Gamma_i(x), ascending.
    std::vector<std::uint32_t> sphere(std::uint32_t x, std::uint32_t i) const;
    // Gamma_i(x) as a bit row.
    Bitset sphere_bits(std::uint32_t x, std::uint32_t i) const;
    bool has_distance_matrix() const { return !dist_.empty(); }
    std::span<const std::uint8_t> distance_matrix() const { return dist_; }

    const GeometryMeta& meta() const { return meta_; }
    const std::string& hash() const { return hash_; }
    std::string serialize() const;

    // Subspace data, present when built from a form.
    bool has_subspaces() const { return form_.has_value(); }
    const FormSpace& form() const { return *form_; }
    const std::vector<Subspace>& points() const { return points_; }
    std::optional<std::uint32_t> index_of(const Subspace& s) const;

    // First (point, line) breaking the unique-nearest-point axiom, if any.
    std::optional<std::pair<std::uint32_t, std::uint32_t>> near_polygon_violation() const;

private:
    friend Geometry build_dual_polar(const FormSpace& S, std::size_t max_generators);
    void index_points();
    std::uint32_t subspace_distance(std::uint32_t x, std::uint32_t y) const;

    std::uint32_t n_ = 0;
    std::vector<std::vector<std::uint32_t>> lines_;
    kernels::Csr line_csr_;
    kernels::Csr point_lines_;
    kernels::Csr graph_;
    BitMatrix adjacency_;
    std::vector<std::uint8_t> dist_;
    std::uint32_t line_size_ = 0, lines_per_point_ = 0, diameter_ = 0;
    GeometryMeta meta_;
    std::string hash_;

    std::optional<FormSpace> form_;
    std::vector<Subspace> points_;
    std::unordered_map<std::string, std::uint32_t> point_index_;
};

// Dual polar space: points are the generators of S, lines the
// next-to-maximal totally isotropic subspaces; indices follow the sorted
// canonical bytes.
Geometry build_dual_polar(const FormSpace& S, std::size_t max_generators = 4'000'000);

// Meta block for a form, as written to .npg headers.
GeometryMeta meta_for(const FormSpace& S);

// Rebuilds the form named in a geometry's header; nullopt for family none.
std::optional<FormSpace> form_for(const GeometryMeta& meta);

}  // namespace dualpolar
