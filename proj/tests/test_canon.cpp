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
#include <set>

#include "dualpolar/canon.hpp"
#include "dualpolar/search.hpp"
#include "support.hpp"

using namespace dualpolar;

namespace {

struct Relabeled {
    Geometry G;
    std::vector<std::uint32_t> marked;
};

// Random point permutation and line order, rebuilt from scratch.
Relabeled relabel(const Geometry& G, std::span<const std::uint32_t> marked, std::mt19937_64& rng) {
    std::vector<std::uint32_t> pi(G.n());
    std::iota(pi.begin(), pi.end(), 0u);
    std::shuffle(pi.begin(), pi.end(), rng);
    auto lines = G.lines();
    for (auto& l : lines) {
        for (auto& p : l) p = pi[p];
        std::sort(l.begin(), l.end());
    }
    std::shuffle(lines.begin(), lines.end(), rng);
    std::vector<std::uint32_t> m;
    for (auto p : marked) m.push_back(pi[p]);
    std::sort(m.begin(), m.end());
    return {Geometry::from_lines(G.n(), std::move(lines), GeometryMeta{}), std::move(m)};
}

std::vector<std::uint32_t> image(std::span<const std::uint32_t> members, const std::vector<std::uint32_t>& perm) {
    std::vector<std::uint32_t> out;
    for (auto p : members) out.push_back(perm[p]);
    std::sort(out.begin(), out.end());
    return out;
}

bool is_automorphism(const Geometry& G, const std::vector<std::uint32_t>& perm) {
    std::set<std::vector<std::uint32_t>> lines(G.lines().begin(), G.lines().end());
    for (const auto& l : G.lines())
        if (!lines.count(image(l, perm))) return false;
    return true;
}

std::vector<std::uint32_t> random_subset(std::uint32_t n, std::size_t k, std::mt19937_64& rng) {
    std::vector<std::uint32_t> v(n);
    std::iota(v.begin(), v.end(), 0u);
    std::shuffle(v.begin(), v.end(), rng);
    v.resize(k);
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

TEST_SUITE("canon") {

TEST_CASE("relabeling invariance, 100 trials per instance") {
    std::mt19937_64 rng(61);
    const auto gq_ovoid = fixtures::brute_force_ovoids(fixtures::gq22())[1].at(0);
    struct Instance {
        const Geometry* G;
        std::vector<std::uint32_t> marked;
    };
    const std::vector<Instance> instances{
        {&fixtures::gq22(), gq_ovoid},
        {&fixtures::dq63(), fixtures::dq63_hemisystem().members},
        {&fixtures::dh54(), random_subset(891, 300, rng)},
    };
    for (const auto& inst : instances) {
        const auto ref = canonical_labeling(*inst.G, inst.marked).bytes;
        int same = 0;
        for (int trial = 0; trial < 100; ++trial) {
            const auto r = relabel(*inst.G, inst.marked, rng);
            same += canonical_labeling(r.G, r.marked).bytes == ref;
        }
        CHECK(same == 100);
    }
}

TEST_CASE("isometry images share the canonical form") {
    const auto& G = fixtures::dq63();
    const auto cert = fixtures::dq63_hemisystem();
    const auto ref = canonical_form(G, cert);
    std::mt19937_64 rng(62);
    for (int trial = 0; trial < 5; ++trial) {
        const auto perm = permutation_of(G, Semilinear{random_isometry(G.form(), rng), 0});
        const auto img = certify(G, image(cert.members, perm));
        CHECK(canonical_form(G, img) == ref);
    }
    // complement: either answer is acceptable, but it must be stable
    const auto comp = complement(G, cert);
    CHECK(canonical_form(G, comp) == canonical_form(G, comp));
    auto wrong = cert;
    wrong.geom_hash = fixtures::dw53().hash();
    CHECK_THROWS(canonical_form(G, wrong));
}

TEST_CASE("distinct random sets get distinct forms") {
    const auto& G = fixtures::dq63();
    std::mt19937_64 rng(63);
    std::set<std::string> forms;
    for (int trial = 0; trial < 10; ++trial) forms.insert(canonical_labeling(G, random_subset(G.n(), 560, rng)).bytes);
    CHECK(forms.size() == 10);
}

TEST_CASE("generators are automorphisms preserving the marking") {
    const auto& G = fixtures::dq63();
    const auto cert = fixtures::dq63_hemisystem();
    const auto lab = canonical_labeling(G, cert.members);
    CHECK(!lab.generators.empty());
    for (const auto& g : lab.generators) {
        CHECK(is_automorphism(G, g));
        CHECK(image(cert.members, g) == cert.members);
    }
    std::vector<std::uint32_t> sorted = lab.order;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::uint32_t> all(G.n() + G.num_lines());
    std::iota(all.begin(), all.end(), 0u);
    CHECK(sorted == all);

    const auto& gq = fixtures::gq22();
    const std::vector<std::uint8_t> colors(gq.n(), 0);
    const auto aut = canonical_labeling(gq, std::span<const std::uint8_t>(colors));
    for (const auto& g : aut.generators) CHECK(is_automorphism(gq, g));
    // Aut(GQ(2,2)) = Sp(4,2) has order 720
    const auto grp = group_from_permutations(gq.n(), aut.generators);
    const auto rep = stabilizer_in_group(gq, certify(gq, std::vector<std::uint32_t>(all.begin(), all.begin() + 15)), grp);
    CHECK(rep.group_order == 720);
}

TEST_CASE("resource cap") {
    CanonOptions tiny;
    tiny.node_cap = 1;
    CHECK_THROWS_AS(canonical_labeling(fixtures::dq63(), fixtures::dq63_hemisystem().members, tiny), CanonError);
}

TEST_CASE("classify") {
    const auto& G = fixtures::dq63();
    const auto cert = fixtures::dq63_hemisystem();
    CHECK(classify(G, {}).count() == 0);

    std::mt19937_64 rng(64);
    std::vector<OvoidCertificate> certs{cert};
    for (int i = 0; i < 3; ++i) {
        const auto perm = permutation_of(G, Semilinear{random_isometry(G.form(), rng), 0});
        certs.push_back(certify(G, image(cert.members, perm)));
    }
    CHECK(classify(G, certs).count() == 1);

    const auto& gq = fixtures::gq22();
    std::vector<OvoidCertificate> mixed;
    const auto brute = fixtures::brute_force_ovoids(gq);
    for (std::uint32_t m = 0; m <= 3; ++m)
        for (const auto& s : brute[m]) mixed.push_back(certify(gq, s));
    const auto cls = classify(gq, mixed);
    // one class per m: the 6 ovoids form one orbit, as do their complements
    CHECK(cls.count() == 4);
    // order independence
    std::vector<OvoidCertificate> reversed(mixed.rbegin(), mixed.rend());
    const auto rcls = classify(gq, reversed);
    CHECK(rcls.count() == cls.count());
    std::set<std::set<std::vector<std::uint32_t>>> a, b;
    for (const auto& c : cls.members) {
        std::set<std::vector<std::uint32_t>> s;
        for (auto i : c) s.insert(mixed[i].members);
        a.insert(s);
    }
    for (const auto& c : rcls.members) {
        std::set<std::vector<std::uint32_t>> s;
        for (auto i : c) s.insert(reversed[i].members);
        b.insert(s);
    }
    CHECK(a == b);
    // idempotence on representatives
    std::vector<OvoidCertificate> reps;
    for (const auto& c : cls.members) reps.push_back(mixed[c.front()]);
    CHECK(classify(gq, reps).count() == reps.size());
}

TEST_CASE("stabilizers") {
    const auto& G = fixtures::dq63();
    const auto cert = fixtures::dq63_hemisystem();
    const auto trivial = group_from_permutations(G.n(), {});
    CHECK(stabilizer_in_group(G, cert, trivial).order == 1);

    const auto data = parse_grp(read_file(fixtures::data_path("dq63_stabilizer120.grp")));
    const auto H = induce_permutations(G, data);
    const auto rep = stabilizer_in_group(G, cert, H);
    CHECK(rep.group_order == 120);
    CHECK(rep.order == 120);
    // element orders of 2 x A5: A5 has 1 + 15 + 20 + 24, the central
    // involution doubles each class with orders lcm(o, 2)
    const std::map<std::uint64_t, std::uint64_t> twoA5{{1, 1}, {2, 31}, {3, 20}, {5, 24}, {6, 20}, {10, 24}};
    CHECK(rep.element_orders == twoA5);

    // the same group given by point permutations only
    const auto Hp = group_from_permutations(G.n(), H.perms);
    const auto rp = stabilizer_in_group(G, cert, Hp);
    CHECK(rp.order == 120);
    CHECK(rp.element_orders == twoA5);

    std::mt19937_64 rng(65);
    int trivial_count = 0;
    for (int trial = 0; trial < 5; ++trial) {
        auto s = random_subset(G.n(), 560, rng);
        OvoidCertificate fake{G.hash(), 2, s, false};
        trivial_count += stabilizer_in_group(G, fake, H).order == 1;
    }
    CHECK(trivial_count >= 4);
}

}  // TEST_SUITE
