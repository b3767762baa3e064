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

// Shared fixtures and independent oracles for the unit tests.

#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "dualpolar/geometry.hpp"
#include "dualpolar/io.hpp"
#include "dualpolar/ovoid.hpp"

namespace fixtures {

using namespace dualpolar;

inline const Geometry& gq22() {
    static const Geometry G = build_dual_polar(form_make(Family::W, 2, 2));
    return G;
}
inline const Geometry& dq63() {
    static const Geometry G = build_dual_polar(form_make(Family::Q, 3, 3));
    return G;
}
inline const Geometry& dw53() {
    static const Geometry G = build_dual_polar(form_make(Family::W, 3, 3));
    return G;
}
inline const Geometry& dh54() {
    static const Geometry G = build_dual_polar(form_make(Family::H, 3, 2));
    return G;
}

inline std::string data_path(const std::string& name) { return std::string(DUALPOLAR_TEST_DATA) + "/" + name; }

inline OvoidCertificate dq63_hemisystem() {
    return certify(dq63(), parse_ovd(read_file(data_path("dq63_hemisystem.ovd"))));
}

// Breadth-first search over the line lists only (no precomputed graph).
inline std::vector<int> line_bfs(const Geometry& G, std::uint32_t src) {
    std::vector<std::vector<std::uint32_t>> on(G.n());
    for (std::uint32_t l = 0; l < G.num_lines(); ++l)
        for (auto p : G.line(l)) on[p].push_back(l);
    std::vector<int> dist(G.n(), -1);
    std::deque<std::uint32_t> queue{src};
    dist[src] = 0;
    while (!queue.empty()) {
        const auto x = queue.front();
        queue.pop_front();
        for (auto l : on[x])
            for (auto y : G.line(l))
                if (dist[y] < 0) {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
    }
    return dist;
}

// All m-ovoids of a geometry with at most 24 points, by subset enumeration,
// grouped by m.
inline std::vector<std::vector<std::vector<std::uint32_t>>> brute_force_ovoids(const Geometry& G) {
    const std::uint32_t n = G.n();
    std::vector<std::vector<std::vector<std::uint32_t>>> out(G.s() + 2);
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
        int m = -1;
        bool ok = true;
        for (std::uint32_t l = 0; l < G.num_lines() && ok; ++l) {
            int c = 0;
            for (auto p : G.line(l)) c += (mask >> p) & 1;
            if (m < 0) m = c;
            else ok = c == m;
        }
        if (!ok) continue;
        std::vector<std::uint32_t> set;
        for (std::uint32_t p = 0; p < n; ++p)
            if ((mask >> p) & 1) set.push_back(p);
        out[m].push_back(std::move(set));
    }
    for (auto& v : out) std::sort(v.begin(), v.end());
    return out;
}

}  // namespace fixtures
