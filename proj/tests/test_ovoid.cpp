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

#include <numeric>
#include <random>

#include "dualpolar/ovoid.hpp"
#include "support.hpp"

using namespace dualpolar;
using fixtures::line_bfs;

namespace {

ParameterSet params(std::int64_t s, std::vector<std::int64_t> tail) { return ParameterSet::make(s, tail); }

std::vector<bool> indicator(const Geometry& G, std::span<const std::uint32_t> members) {
    std::vector<bool> in(G.n(), false);
    for (auto p : members) in[p] = true;
    return in;
}

std::vector<std::uint32_t> all_points(const Geometry& G) {
    std::vector<std::uint32_t> v(G.n());
    std::iota(v.begin(), v.end(), 0u);
    return v;
}

// A verified-looking certificate whose members are not an ovoid: one member
// swapped for a non-member.
OvoidCertificate tampered(const Geometry& G, const OvoidCertificate& c) {
    auto in = indicator(G, c.members);
    OvoidCertificate t = c;
    std::uint32_t out = 0;
    while (in[out]) ++out;
    t.members.erase(t.members.begin());
    t.members.push_back(out);
    std::sort(t.members.begin(), t.members.end());
    return t;
}

}  // namespace

TEST_SUITE("ovoid") {

TEST_CASE("verify examples") {
    const auto& G = fixtures::dq63();
    const std::vector<std::uint32_t> none;
    CHECK(verify_m_ovoid(G, none).m == 0u);
    CHECK(verify_m_ovoid(G, all_points(G)).m == 4u);
    const auto cert = fixtures::dq63_hemisystem();
    CHECK(cert.verified);
    CHECK(cert.m == 2);
    CHECK(cert.members.size() == 560);
    CHECK(verify_m_ovoid(G, cert.members).m == 2u);

    std::vector<std::uint32_t> unsorted{3, 1};
    CHECK_THROWS_AS(verify_m_ovoid(G, unsorted), OvoidError);
    std::vector<std::uint32_t> range{5, 1120};
    CHECK_THROWS_AS(verify_m_ovoid(G, range), OvoidError);
}

TEST_CASE("corrupted certificates report the first bad line") {
    const auto& G = fixtures::dq63();
    const auto cert = fixtures::dq63_hemisystem();
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 10; ++trial) {
        auto members = cert.members;
        members.erase(members.begin() + static_cast<std::ptrdiff_t>(rng() % members.size()));
        const auto in = indicator(G, members);
        std::vector<std::uint32_t> counts;
        for (const auto& l : G.lines()) {
            std::uint32_t c = 0;
            for (auto p : l) c += in[p];
            counts.push_back(c);
        }
        std::uint32_t first = 0;
        while (counts[first] == counts[0]) ++first;
        const auto r = verify_m_ovoid(G, members);
        CHECK_FALSE(r.ok());
        REQUIRE(r.violation.has_value());
        CHECK(r.violation->line == first);
        CHECK(r.violation->count == counts[first]);
        CHECK(r.violation->expected == counts[0]);
        CHECK_THROWS_AS(certify(G, members), OvoidError);
    }
    auto data = cert.to_ovd();
    data.m = 1;
    CHECK_THROWS_AS(certify(G, data), OvoidError);
    data = cert.to_ovd();
    data.geom_hash = fixtures::dw53().hash();
    CHECK_THROWS_AS(certify(G, data), OvoidError);
}

TEST_CASE("complements") {
    const auto& G = fixtures::dq63();
    const auto cert = fixtures::dq63_hemisystem();
    const auto comp = complement(G, cert);
    CHECK(comp.m == 2);
    CHECK(comp.members.size() == 560);
    const auto in = indicator(G, cert.members);
    for (auto p : comp.members) CHECK_FALSE(in[p]);
    const auto empty = certify(G, std::vector<std::uint32_t>{});
    CHECK(complement(G, empty).m == 4);
    CHECK(complement(G, complement(G, empty)).members.empty());
    const auto& gq = fixtures::gq22();
    const auto full = certify(gq, all_points(gq));
    CHECK(full.m == 3);
    CHECK(complement(gq, full).members.empty());
}

TEST_CASE("sphere counts") {
    const auto& G = fixtures::dq63();
    const auto SD = eigendata(parameters_from_geometry(G));
    const auto cert = fixtures::dq63_hemisystem();
    const auto in = indicator(G, cert.members);
    const std::vector<std::uint64_t> inside{1, 13, 195, 351}, outside{0, 26, 156, 378};
    for (std::uint32_t x = 0; x < G.n(); x += 7) {
        const auto dist = line_bfs(G, x);
        std::vector<std::uint64_t> direct(4, 0);
        for (std::uint32_t y = 0; y < G.n(); ++y) direct[dist[y]] += in[y];
        CHECK(direct == (in[x] ? inside : outside));
        const auto r = sphere_count_check(G, SD, cert, x);
        CHECK(r.ok);
        CHECK(r.in == in[x]);
        CHECK(r.measured == direct);
        for (std::uint32_t i = 0; i <= 3; ++i) CHECK(r.expected[i] == Rational(std::int64_t(direct[i])));
    }
    const auto sum = sphere_count_summary(G, SD, cert, 1);
    CHECK(sum.checked == 1120);
    CHECK(sum.failures == 0);
    CHECK(sum.first_in.has_value());
    CHECK(sum.first_out.has_value());
    const auto bad = sphere_count_summary(G, SD, tampered(G, cert), 1);
    CHECK(bad.failures > 0);
}

TEST_CASE("eigen identity") {
    const auto& G = fixtures::dq63();
    const auto cert = fixtures::dq63_hemisystem();
    const auto r = eigen_identity_check(G, cert.members, 2);
    CHECK(r.ok());
    CHECK(r.value == 26);
    // direct evaluation of (A + 13 I) chi
    const auto in = indicator(G, cert.members);
    for (std::uint32_t x = 0; x < G.n(); x += 13) {
        std::uint64_t v = 13 * in[x];
        for (auto y : G.neighbors(x)) v += in[y];
        CHECK(v == 26);
    }
    const auto full = all_points(G);
    const auto rf = eigen_identity_check(G, full, 4);
    CHECK(rf.ok());
    CHECK(rf.value == 52);

    std::mt19937_64 rng(52);
    auto pts = all_points(G);
    std::shuffle(pts.begin(), pts.end(), rng);
    pts.resize(560);
    std::sort(pts.begin(), pts.end());
    CHECK_FALSE(eigen_identity_check(G, pts, 2).ok());
}

TEST_CASE("vanhove check") {
    const auto& G = fixtures::dq63();
    const auto SD = eigendata(parameters_from_geometry(G));
    const auto cert = fixtures::dq63_hemisystem();
    const auto r = vanhove_check(G, SD, cert, 3, 1);
    CHECK(r.ok());
    CHECK(r.alpha == 3);
    CHECK(r.ones_expected == 32);
    CHECK(r.mu_expected == Rational(16));
    CHECK(r.pairs >= 1000);
    CHECK_THROWS_AS(vanhove_check(G, SD, cert, 2, 1), OvoidError);

    // direct enumeration for a few pairs
    const auto in = indicator(G, cert.members);
    for (std::uint32_t x = 0; x < G.n(); x += 97) {
        const auto dx = line_bfs(G, x);
        std::uint32_t y = 0;
        while (dx[y] != 3) ++y;
        const auto dy = line_bfs(G, y);
        std::int64_t mu = 3 * (in[x] + in[y]), ones = 6;
        for (std::uint32_t z = 0; z < G.n(); ++z)
            if ((dx[z] == 1 && dy[z] == 2) || (dx[z] == 2 && dy[z] == 1)) {
                mu += in[z];
                ++ones;
            }
        CHECK(mu == 16);
        CHECK(ones == 32);
    }
    CHECK_FALSE(vanhove_check(G, SD, tampered(G, cert), 3, 1).ok());
}

TEST_CASE("cross sphere check") {
    const auto& G = fixtures::dq63();
    const auto SD = eigendata(parameters_from_geometry(G));
    const auto cert = fixtures::dq63_hemisystem();
    const auto r = cross_sphere_check(G, SD, cert, 1);
    CHECK(r.ok());
    CHECK(r.samples > 0);
    CHECK(r.f[1] == Rational(1));
    CHECK(r.f[2] == Rational(1, 3));
    CHECK(r.f[3] == Rational(5, 9));
    CHECK(r.expected[1] == Rational(1));
    CHECK(r.expected[2] == Rational(12));
    CHECK(r.expected[3] == Rational(135));

    const auto in = indicator(G, cert.members);
    int checked = 0;
    for (std::uint32_t x = 0; x < G.n() && checked < 10; x += 11) {
        if (in[x]) continue;
        const auto dx = line_bfs(G, x);
        for (auto z : G.neighbors(x)) {
            if (!in[z]) continue;
            const auto dz = line_bfs(G, z);
            std::vector<int> c(4, 0);
            for (std::uint32_t y = 0; y < G.n(); ++y)
                if (in[y] && dx[y] >= 1 && dz[y] == dx[y] - 1) ++c[dx[y]];
            CHECK(c == std::vector<int>{0, 1, 12, 135});
            ++checked;
            break;
        }
    }
    CHECK(checked == 10);
    CHECK_FALSE(cross_sphere_check(G, SD, tampered(G, cert), 1).ok());
}

TEST_CASE("pair double count") {
    const auto& G = fixtures::dq63();
    const auto SD = eigendata(parameters_from_geometry(G));
    const auto cert = fixtures::dq63_hemisystem();
    const auto r = pair_count_check(G, SD, cert, 3, 1);
    CHECK(r.ok());
    CHECK(r.points == 560);
    CHECK(r.first_formula == Rational(4914));
    CHECK(r.second_formula == Rational(4914));
    CHECK(r.by_y == 4914);
    CHECK(r.by_z == 4914);

    // pairs (y, z): y in O at distance 3 from x, z in O adjacent to x and at
    // distance 2 from y, or at distance 2 from x and adjacent to y
    const auto in = indicator(G, cert.members);
    std::uint32_t x = 0;
    while (in[x]) ++x;
    const auto dx = line_bfs(G, x);
    std::uint64_t pairs = 0;
    for (std::uint32_t y = 0; y < G.n(); ++y) {
        if (!in[y] || dx[y] != 3) continue;
        const auto dy = line_bfs(G, y);
        for (std::uint32_t z = 0; z < G.n(); ++z)
            if (in[z] && ((dx[z] == 1 && dy[z] == 2) || (dx[z] == 2 && dy[z] == 1))) ++pairs;
    }
    CHECK(pairs == 4914);
}

TEST_CASE("regularity hypothesis and bounds") {
    const auto dq = params(3, {3, 12}), dh = params(2, {4, 20});
    for (const auto& P : {dq, dh}) {
        const auto rows = check_thm2_hypothesis(P);
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].i == 3);
        CHECK(rows[0].holds);
        CHECK(rows[0].rhs == Rational(rows[0].lhs));
        CHECK(thm2_indices(P) == std::vector<std::uint32_t>{3});
    }
    CHECK(check_thm2_hypothesis(dq)[0].lhs == 13);
    CHECK(check_thm2_hypothesis(dh)[0].lhs == 21);
    const auto perturbed = params(3, {3, 13});
    CHECK_FALSE(check_thm2_hypothesis(perturbed)[0].holds);
    CHECK(thm2_indices(perturbed).empty());

    const auto b = check_dbv_bounds(dq);
    const auto row3 = std::find_if(b.begin(), b.end(), [](const BoundRow& r) { return r.i == 3; });
    REQUIRE(row3 != b.end());
    CHECK(row3->lower == Rational(13));
    CHECK(row3->value == 13);
    CHECK(row3->upper == Rational(49));
    CHECK(row3->attained == BoundSide::lower);
    CHECK_FALSE(row3->violated);
    const auto bh = check_dbv_bounds(dh);
    const auto h3 = std::find_if(bh.begin(), bh.end(), [](const BoundRow& r) { return r.i == 3; });
    REQUIRE(h3 != bh.end());
    CHECK(h3->lower == Rational(21));
    CHECK((h3->attained == BoundSide::lower || h3->attained == BoundSide::both));
    const auto big = check_dbv_bounds(params(3, {3, 60}));
    CHECK(std::any_of(big.begin(), big.end(), [](const BoundRow& r) { return r.violated; }));
    CHECK(std::string(bound_side_name(BoundSide::lower)) == "lower");
}

TEST_CASE("admissible m") {
    CHECK(admissible_m(parameters_from_geometry(fixtures::dq63())) == std::vector<std::uint32_t>{2});
    CHECK(admissible_m(parameters_from_geometry(fixtures::dw53())) == std::vector<std::uint32_t>{2});
    CHECK(admissible_m(parameters_from_geometry(fixtures::dh54())).empty());
    CHECK(admissible_m(params(3, {3, 13})) == std::vector<std::uint32_t>{1, 2, 3});
    CHECK(admissible_m(params(2, {2})) == std::vector<std::uint32_t>{1, 2});  // d = 2: no claim
}

TEST_CASE("helpers") {
    CHECK(neg_inv_power(3, 0) == Rational(1));
    CHECK(neg_inv_power(3, 1) == Rational(-1, 3));
    CHECK(neg_inv_power(3, 2) == Rational(1, 9));
    CHECK(witness_points(10, 1).size() == 10);
    const auto w = witness_points(5000, 3);
    CHECK(w.size() == 1000);
    CHECK(w == witness_points(5000, 3));
    CHECK(std::all_of(w.begin(), w.end(), [](std::uint32_t p) { return p < 5000; }));
}

}  // TEST_SUITE
