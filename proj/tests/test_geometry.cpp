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

#include <doctest.h>

#include <random>

#include "dualpolar/geometry.hpp"
#include "support.hpp"

using namespace dualpolar;
using fixtures::line_bfs;

namespace {

std::uint32_t meet_dimension(const Field& F, const Subspace& a, const Subspace& b) {
    Matrix m(a.basis.rows + b.basis.rows, a.basis.cols);
    std::copy(a.basis.data.begin(), a.basis.data.end(), m.data.begin());
    std::copy(b.basis.data.begin(), b.basis.data.end(), m.data.begin() + a.basis.data.size());
    return a.basis.rows + b.basis.rows - rank(F, m);
}

// Independent near-polygon scan: every line has a unique point nearest to x.
bool near_polygon_scan(const Geometry& G) {
    for (std::uint32_t x = 0; x < G.n(); ++x) {
        const auto dist = line_bfs(G, x);
        for (const auto& l : G.lines()) {
            int best = 1 << 20, count = 0;
            for (auto p : l) {
                if (dist[p] < best) {
                    best = dist[p];
                    count = 0;
                }
                count += dist[p] == best;
            }
            if (count != 1) return false;
        }
    }
    return true;
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("construction counts") {
    const auto& gq = fixtures::gq22();
    CHECK(gq.n() == 15);
    CHECK(gq.num_lines() == 15);
    CHECK(gq.s() + 1 == 3);
    CHECK(gq.t() + 1 == 3);
    CHECK(gq.diameter() == 2);

    for (const Geometry* G : {&fixtures::dq63(), &fixtures::dw53()}) {
        CHECK(G->n() == 1120);
        CHECK(G->num_lines() == 3640);
        CHECK(G->s() + 1 == 4);
        CHECK(G->t() + 1 == 13);
        CHECK(G->diameter() == 3);
        // flag count
        CHECK(std::uint64_t(G->n()) * (G->t() + 1) == G->num_lines() * (G->s() + 1));
    }
    const auto& dh = fixtures::dh54();
    CHECK(dh.n() == 891);
    CHECK(dh.s() + 1 == 3);
    CHECK(dh.t() + 1 == 21);
    CHECK(dh.meta().family == "dh");
    CHECK(dh.meta().q == 4);
}

TEST_CASE("lines are the next-to-maximals contained in their points") {
    const auto& G = fixtures::dq63();
    const auto gens = enumerate_generators(G.form());
    REQUIRE(gens.next_to_maximals.size() == G.num_lines());
    for (std::size_t l = 0; l < G.num_lines(); l += 37) {
        const auto& L = gens.next_to_maximals[l];
        std::vector<std::uint32_t> on;
        for (std::uint32_t p = 0; p < G.n(); ++p)
            if (meet_dimension(G.form().field, G.points()[p], L) == L.dimension()) on.push_back(p);
        CHECK(std::vector<std::uint32_t>(G.line(l).begin(), G.line(l).end()) == on);
    }
    for (std::uint32_t p = 0; p < G.n(); p += 101) CHECK(G.index_of(G.points()[p]) == p);
}

TEST_CASE("distance agrees with BFS and with subspace meets") {
    const auto& gq = fixtures::gq22();
    for (std::uint32_t x = 0; x < gq.n(); ++x) {
        const auto d = line_bfs(gq, x);
        for (std::uint32_t y = 0; y < gq.n(); ++y) CHECK(int(gq.distance(x, y)) == d[y]);
    }
    std::mt19937_64 rng(31);
    for (const Geometry* G : {&fixtures::dq63(), &fixtures::dw53(), &fixtures::dh54()}) {
        const std::uint32_t dmax = G->form().rank;
        for (int trial = 0; trial < 12; ++trial) {
            const std::uint32_t x = rng() % G->n();
            const auto d = line_bfs(*G, x);
            const auto row = G->distance_row(x);
            bool ok = true;
            for (std::uint32_t y = 0; y < G->n(); ++y) {
                ok = ok && int(row[y]) == d[y] && int(G->distance(x, y)) == d[y];
                ok = ok && d[y] == int(dmax - meet_dimension(G->form().field, G->points()[x], G->points()[y]));
            }
            CHECK(ok);
        }
        CHECK(G->distance(5, 5) == 0);
    }
}

TEST_CASE("spheres of DQ(6,3)") {
    const auto& G = fixtures::dq63();
    for (std::uint32_t x : {0u, 17u, 1119u}) {
        CHECK(G.sphere(x, 0) == std::vector<std::uint32_t>{x});
        const std::vector<std::size_t> sizes{1, 39, 351, 729};
        for (std::uint32_t i = 0; i <= 3; ++i) {
            const auto sp = G.sphere(x, i);
            CHECK(sp.size() == sizes[i]);
            CHECK(G.sphere_bits(x, i).count() == sizes[i]);
            for (auto y : sp) CHECK(G.distance(x, y) == i);
        }
    }
}

TEST_CASE("near polygon axiom, full scan") {
    for (const Geometry* G : {&fixtures::gq22(), &fixtures::dq63(), &fixtures::dw53(), &fixtures::dh54()}) {
        CHECK_FALSE(G->near_polygon_violation().has_value());
        CHECK(near_polygon_scan(*G));
    }
    // a triangle: each point sees the opposite line at distance 1 twice
    const auto tri = Geometry::from_lines(3, {{0, 1}, {1, 2}, {0, 2}}, GeometryMeta{});
    CHECK(tri.near_polygon_violation().has_value());
    CHECK_FALSE(near_polygon_scan(tri));
}

TEST_CASE("from_lines validation") {
    CHECK_THROWS_AS(Geometry::from_lines(3, {{1, 0}, {1, 2}, {0, 2}}, {}), GeometryError);
    CHECK_THROWS_AS(Geometry::from_lines(4, {{0, 1, 2}, {2, 3}}, {}), GeometryError);
    CHECK_THROWS_AS(Geometry::from_lines(3, {{0, 1}, {0, 1}, {1, 2}, {0, 2}}, {}), GeometryError);
    CHECK_THROWS_AS(Geometry::from_lines(3, {{0, 5}}, {}), GeometryError);
    CHECK_THROWS_AS(Geometry::from_lines(4, {{0, 1}, {1, 2}, {2, 3}}, {}), GeometryError);
}

TEST_CASE("serialization round trip and stable hash") {
    for (const Geometry* G : {&fixtures::gq22(), &fixtures::dh54()}) {
        const auto text = G->serialize();
        const auto back = Geometry::from_npg(parse_npg(text));
        CHECK(back.hash() == G->hash());
        CHECK(back.lines() == G->lines());
        CHECK(back.meta() == G->meta());
        CHECK(back.serialize() == text);
        CHECK(G->hash() == sha256_hex(text));
    }
    const auto again = build_dual_polar(form_make(Family::Q, 3, 3));
    CHECK(again.hash() == fixtures::dq63().hash());
    CHECK(fixtures::dq63().hash() == fixtures::dq63_hemisystem().geom_hash);
    CHECK(fixtures::dq63().hash() != fixtures::dw53().hash());
    CHECK(form_for(fixtures::dq63().meta()).has_value());
    CHECK(meta_for(fixtures::dh54().form()) == fixtures::dh54().meta());
}

}  // TEST_SUITE
