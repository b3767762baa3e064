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

#include "dualpolar/kernels.hpp"
#include "support.hpp"

using namespace dualpolar;
using namespace dualpolar::kernels;

namespace {

bool same_profile(const RegularityProfile& a, const RegularityProfile& b) {
    return a.diameter == b.diameter && a.a == b.a && a.b == b.b && a.c == b.c && a.k == b.k && a.witness == b.witness;
}

ModMatrix random_mod(std::uint32_t r, std::uint32_t c, std::mt19937_64& rng, bool sparse) {
    ModMatrix m(r, c);
    for (auto& e : m.data) e = sparse ? static_cast<std::uint32_t>(rng() % 3) : static_cast<std::uint32_t>(rng() % kModP);
    return m;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("modular arithmetic") {
    std::mt19937_64 rng(71);
    for (int i = 0; i < 10000; ++i) {
        const std::uint64_t x = rng();
        CHECK(mod_reduce(x >> 2) == (x >> 2) % kModP);
        const auto a = static_cast<std::uint32_t>(rng() % kModP), b = static_cast<std::uint32_t>(rng() % kModP);
        CHECK(mod_mul(a, b) == std::uint64_t(a) * b % kModP);
        CHECK(mod_add(a, b) == (std::uint64_t(a) + b) % kModP);
        CHECK(mod_sub(a, b) == (std::uint64_t(a) + kModP - b) % kModP);
        if (a) CHECK(mod_mul(a, mod_inv(a)) == 1);
    }
    CHECK(mod_from_int(-1) == kModP - 1);
}

TEST_CASE("distance matrices and BFS rows") {
    for (const Geometry* G : {&fixtures::gq22(), &fixtures::dq63(), &fixtures::dh54()}) {
        const auto s = serial::distance_matrix(G->graph());
        const auto o = omp::distance_matrix(G->graph());
        CHECK(s == o);
        for (std::uint32_t x = 0; x < G->n(); x += 53) {
            const auto row = bfs_row(G->graph(), x);
            const auto ref = fixtures::line_bfs(*G, x);
            bool ok = true;
            for (std::uint32_t y = 0; y < G->n(); ++y) ok = ok && row[y] == ref[y] && s[std::size_t(x) * G->n() + y] == ref[y];
            CHECK(ok);
        }
    }
    // disconnected graph: two triangles
    const auto g = Csr::from_lists({{1, 2}, {0, 2}, {0, 1}, {4, 5}, {3, 5}, {3, 4}});
    const auto d = serial::distance_matrix(g);
    CHECK(d == omp::distance_matrix(g));
    CHECK(d[3] == kUnreachable);
}

TEST_CASE("adjacency products") {
    std::mt19937_64 rng(72);
    std::uniform_int_distribution<int> small(-5, 5);
    for (const Geometry* G : {&fixtures::dq63(), &fixtures::dh54()}) {
        std::vector<double> x(G->n()), ys(G->n()), yo(G->n()), direct(G->n(), 0);
        for (auto& v : x) v = small(rng);
        serial::adjacency_apply(G->graph(), x, ys);
        omp::adjacency_apply(G->graph(), x, yo);
        for (std::uint32_t p = 0; p < G->n(); ++p)
            for (auto q : G->neighbors(p)) direct[p] += x[q];
        CHECK(ys == yo);
        CHECK(ys == direct);
    }
}

TEST_CASE("line counts") {
    const auto& G = fixtures::dq63();
    const auto cert = fixtures::dq63_hemisystem();
    Bitset b(G.n());
    for (auto p : cert.members) b.set(p);
    const auto s = serial::line_counts(G.line_csr(), b.words());
    CHECK(s == omp::line_counts(G.line_csr(), b.words()));
    CHECK(s == std::vector<std::uint32_t>(G.num_lines(), 2));
    std::mt19937_64 rng(73);
    Bitset r(G.n());
    for (std::uint32_t p = 0; p < G.n(); ++p)
        if (rng() & 1) r.set(p);
    const auto rs = serial::line_counts(G.line_csr(), r.words());
    CHECK(rs == omp::line_counts(G.line_csr(), r.words()));
    for (std::size_t l = 0; l < G.num_lines(); ++l) {
        std::uint32_t c = 0;
        for (auto p : G.line(l)) c += r.test(p);
        CHECK(rs[l] == c);
    }
}

TEST_CASE("regularity profiles") {
    for (const Geometry* G : {&fixtures::gq22(), &fixtures::dq63(), &fixtures::dw53()}) {
        const auto d = serial::distance_matrix(G->graph());
        const auto s = serial::regularity_profile(G->graph(), d);
        const auto o = omp::regularity_profile(G->graph(), d);
        CHECK(same_profile(s, o));
        CHECK_FALSE(s.witness.has_value());
    }
    const auto prism = Csr::from_lists({{1, 2, 3}, {0, 2, 4}, {0, 1, 5}, {0, 4, 5}, {1, 3, 5}, {2, 3, 4}});
    // the 3-prism is regular but its rungs lie in no triangle
    const auto pd = serial::distance_matrix(prism);
    const auto s = serial::regularity_profile(prism, pd);
    CHECK(s.witness.has_value());
    CHECK(same_profile(s, omp::regularity_profile(prism, pd)));
}

TEST_CASE("row reduction") {
    std::mt19937_64 rng(74);
    for (int trial = 0; trial < 40; ++trial) {
        const std::uint32_t r = 1 + rng() % 30, c = 1 + rng() % 40;
        const auto orig = random_mod(r, c, rng, trial % 2 == 0);
        auto a = orig, b = orig;
        const auto pa = serial::row_reduce(a);
        const auto pb = omp::row_reduce(b);
        CHECK(pa == pb);
        CHECK(a.data == b.data);
        // reduced echelon structure
        for (std::size_t i = 0; i < pa.size(); ++i) {
            for (std::uint32_t k = 0; k < a.rows && k < pa.size(); ++k) CHECK(a(k, pa[i]) == (k == i ? 1u : 0u));
            for (std::uint32_t j = 0; j < pa[i]; ++j) CHECK(a(i, j) == 0);
        }
        // every original row is the combination of reduced rows given by its pivot entries
        bool spans = true;
        for (std::uint32_t i = 0; i < orig.rows; ++i)
            for (std::uint32_t j = 0; j < orig.cols; ++j) {
                std::uint32_t v = 0;
                for (std::size_t k = 0; k < pa.size(); ++k) v = mod_add(v, mod_mul(orig(i, pa[k]), a(k, j)));
                spans = spans && v == orig(i, j);
            }
        CHECK(spans);
    }
}

}  // TEST_SUITE
