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

// Exact m-ovoid search: depth-first search over point (or orbit) variables
// with line-count propagation and, when the system is small enough, exact
// propagation of the line equations modulo p = 2^31 - 1.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dualpolar/geometry.hpp"
#include "dualpolar/group.hpp"
#include "dualpolar/ovoid.hpp"

namespace dualpolar {

class SearchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class SearchMode { first, all };
enum class SearchStatus { found, exhausted, budget };
const char* status_name(SearchStatus s);

struct SearchOptions {
    std::uint32_t m = 0;
    SearchMode mode = SearchMode::first;
    // Orbit variables: every orbit is decided as a whole.
    const PrescribedGroup* group = nullptr;
    // Symmetry breaking by automorphisms of the geometry: root subproblems
    // are taken up to Aut(G), and while the partial assignment has a
    // nontrivial stabilizer the "out" branch excludes the whole orbit of the
    // branching point. Results are then complete up to automorphisms.
    bool symmetry = false;
    std::uint64_t node_budget = 0;  // 0 = unlimited
    std::optional<std::filesystem::path> checkpoint;
    unsigned threads = 1;
    // Exact propagation of the line equations modulo 2^31 - 1.
    bool linear = false;
    // Skipped above 4096 variables, or when variables * rank^2 exceeds this.
    std::uint64_t linear_cap = 400'000'000;
    // Called with each root subproblem index as it completes.
    std::function<void(std::uint32_t, std::uint32_t)> progress;
};

struct SearchStats {
    std::uint64_t nodes = 0;
    std::uint64_t propagations = 0;
    std::uint64_t eliminations = 0;
    std::uint32_t max_depth = 0;
    std::uint32_t variables = 0;
    std::uint32_t linear_rank = 0;  // dimension of the mod-p solution space; 0 if off
    bool linear_used = false;
    std::uint32_t subproblems = 0;
    std::uint32_t subproblems_done = 0;
    std::uint32_t resumed = 0;
    std::uint64_t symmetry_calls = 0;  // stabilizer computations
};

struct SearchResult {
    SearchStatus status = SearchStatus::exhausted;
    std::vector<OvoidCertificate> certificates;  // sorted by members
    SearchStats stats;
};

SearchResult search(const Geometry& G, const SearchOptions& opts);

// Point states for propagate(): -1 undecided, 0 out, 1 in.
enum class Propagation { fixpoint, conflict };
// Line rules only, on plain point variables, to fixpoint.
Propagation propagate(const Geometry& G, std::uint32_t m, std::vector<std::int8_t>& state);

// Group acting on the orbits of `group` (or on points when group is null):
// the generators of `symmetry` that permute the orbits.
PrescribedGroup symmetry_on_variables(const PrescribedGroup& symmetry, const PrescribedGroup* group);

}  // namespace dualpolar
