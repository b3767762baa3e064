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
#include <vector>

#include "dualpolar/geometry.hpp"

namespace dualpolar {

class GroupError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// v -> frob^r(v) * m, taken projectively (m up to a nonzero scalar).
struct Semilinear {
    Matrix m;
    std::uint32_t frob = 0;
    auto operator<=>(const Semilinear&) const = default;
};

// First a, then b.
Semilinear compose(const Field& F, const Semilinear& a, const Semilinear& b);
// Scales m so its first nonzero entry is 1.
Semilinear projective_normal(const Field& F, Semilinear g);
bool is_projective_identity(const Field& F, const Semilinear& g);

// Point permutation induced on a geometry built from a form; throws
// GroupError if some generator is not a point of the geometry's image.
std::vector<std::uint32_t> permutation_of(const Geometry& G, const Semilinear& g);

// The semilinear map inducing a point permutation of a geometry built from a
// form, recovered from its action on singular points; nullopt if the
// permutation is not induced by a collineation preserving the form.
std::optional<Semilinear> semilinear_of(const Geometry& G, std::span<const std::uint32_t> perm);

struct PrescribedGroup {
    std::vector<Semilinear> gens;              // empty for permutation-only groups
    std::vector<std::vector<std::uint32_t>> perms;
    std::vector<std::uint32_t> orbit_of;       // orbits numbered by smallest point
    std::vector<std::vector<std::uint32_t>> orbits;
    std::string digest;                        // identifies the group in checkpoints

    std::size_t num_orbits() const { return orbits.size(); }
    bool is_union_of_orbits(std::span<const std::uint32_t> members) const;
};

// Checks each generator: entries in range, invertible, preserves the form
// up to a scalar, permutes points and lines.
PrescribedGroup induce_permutations(const Geometry& G, const GrpData& data);

// Orbits of a group given by point permutations (validated).
PrescribedGroup group_from_permutations(std::uint32_t n, std::vector<std::vector<std::uint32_t>> perms);

// All elements generated by gens, projectively normalized, in BFS order
// starting with the identity. Throws GroupError past cap.
std::vector<Semilinear> enumerate_elements(const FormSpace& S, std::span<const Semilinear> gens, std::size_t cap);

std::uint64_t element_order(const FormSpace& S, const Semilinear& g, std::uint64_t cap = 1'000'000);

GrpData to_grp(const FormSpace& S, std::span<const Semilinear> gens);
std::vector<Semilinear> from_grp(const GrpData& data);

}  // namespace dualpolar
