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

// Canonical labeling of the point/line incidence graph with a marked point
// set, by individualization-refinement. Vertices 0..n-1 are points,
// n..n+L-1 lines; colors are (marked point, unmarked point, line).

#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dualpolar/geometry.hpp"
#include "dualpolar/group.hpp"
#include "dualpolar/ovoid.hpp"

namespace dualpolar {

class CanonError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CanonOptions {
    std::uint64_t node_cap = 2'000'000;
};

struct Labeling {
    std::string bytes;                                 // canonical form
    std::vector<std::uint32_t> order;                  // canonical position -> vertex
    std::vector<std::vector<std::uint32_t>> generators;  // automorphisms, as point permutations
    std::uint64_t nodes = 0;
};

// `marked` must be ascending point indices.
Labeling canonical_labeling(const Geometry& G, std::span<const std::uint32_t> marked, const CanonOptions& opts = {});
// General point coloring; colors are small integers, cells ordered by color.
Labeling canonical_labeling(const Geometry& G, std::span<const std::uint8_t> point_color, const CanonOptions& opts = {});

std::string canonical_form(const Geometry& G, const OvoidCertificate& cert, const CanonOptions& opts = {});

struct Classes {
    std::vector<std::vector<std::size_t>> members;  // indices into the input, ordered by first occurrence
    std::size_t count() const { return members.size(); }
};

Classes classify(const Geometry& G, std::span<const OvoidCertificate> certs, const CanonOptions& opts = {});

struct StabilizerReport {
    std::uint64_t group_order = 0;
    std::uint64_t order = 0;
    std::map<std::uint64_t, std::uint64_t> element_orders;  // order -> count
};

// Setwise stabilizer of cert.members inside the group, by enumerating its
// elements (matrix generators if present, else point permutations).
StabilizerReport stabilizer_in_group(const Geometry& G, const OvoidCertificate& cert, const PrescribedGroup& group,
                                     std::size_t cap = 10'000'000);

}  // namespace dualpolar
