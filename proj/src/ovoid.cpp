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

#include "dualpolar/ovoid.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace dualpolar {

namespace {

// Gamma_0(x) .. Gamma_d(x) as packed rows; precomputed for every point when
// the geometry stores its distance matrix.
class SphereTable {
public:
    explicit SphereTable(const Geometry& G)
        : G_(G), n_(G.n()), levels_(G.diameter() + 1), stride_(words_for(G.n())) {
        if (!G.has_distance_matrix()) return;
        table_.assign(std::size_t(n_) * levels_ * stride_, 0);
        const auto dist = G.distance_matrix();
#pragma omp parallel for schedule(static)
        for (std::int64_t xs = 0; xs < static_cast<std::int64_t>(n_); ++xs) {
            Word* base = table_.data() + std::size_t(xs) * levels_ * stride_;
            const std::uint8_t* r = dist.data() + std::size_t(xs) * n_;
            for (std::uint32_t y = 0; y < n_; ++y) base[std::size_t(r[y]) * stride_ + (y >> 6)] |= Word(1) << (y & 63);
        }
    }

    struct View {
        std::vector<Word> own;
        const Word* base = nullptr;
        std::size_t stride = 0;
        std::span<const Word> at(std::uint32_t i) const { return {base + std::size_t(i) * stride, stride}; }
    };

    View of(std::uint32_t x) const {
        View v;
        v.stride = stride_;
        if (!table_.empty()) {
            v.base = table_.data() + std::size_t(x) * levels_ * stride_;
            return v;
        }
        v.own.assign(std::size_t(levels_) * stride_, 0);
        const auto r = G_.distance_row(x);
        for (std::uint32_t y = 0; y < n_; ++y) v.own[std::size_t(r[y]) * stride_ + (y >> 6)] |= Word(1) << (y & 63);
        v.base = v.own.data();
        return v;
    }

private:
    const Geometry& G_;
    std::uint32_t n_, levels_;
    std::size_t stride_;
    std::vector<Word> table_;
};

Bitset member_bits(const Geometry& G, std::span<const std::uint32_t> members) {
    Bitset b(G.n());
    for (auto x : members) b.set(x);
    return b;
}

void require_verified(const OvoidCertificate& cert) {
    if (!cert.verified) throw OvoidError("certificate has not been verified");
}

std::int64_t ipow(std::int64_t b, std::uint32_t e) {
    std::int64_t r = 1;
    while (e--) r *= b;
    return r;
}

std::int64_t sign(std::uint32_t i) { return i % 2 ? -1 : 1; }

std::int64_t vanhove_alpha(const SchemeData& SD, std::uint32_t i) {
    const std::int64_t s = SD.params.s;
    return s * (SD.c[i - 1] + sign(i) * ipow(s, i - 2));
}

void require_hypothesis(const SchemeData& SD, std::uint32_t i) {
    if (i < 3 || i > SD.params.d)
        throw OvoidError("distance " + std::to_string(i) + " is outside 3.." + std::to_string(SD.params.d) +
                         "; the design-orthogonality argument needs 3 <= i <= d");
    const auto ok = thm2_indices(SD.params);
    if (std::find(ok.begin(), ok.end(), i) == ok.end())
        throw OvoidError("parameters " + SD.params.to_string() + " do not satisfy t_i + 1 = (s^i + (-1)^i)(t_{i-1} + 1 + (-1)^i s^(i-2)) / (s^(i-2) + (-1)^i) at i = " +
                         std::to_string(i) + ", so the Vanhove vector need not be design-orthogonal to the ovoid");
}

}  // namespace

VerifyResult verify_m_ovoid(const Geometry& G, std::span<const std::uint32_t> members) {
    for (std::size_t j = 0; j < members.size(); ++j) {
        if (members[j] >= G.n()) throw OvoidError("member index " + std::to_string(members[j]) + " out of range");
        if (j && members[j] <= members[j - 1]) throw OvoidError("member indices not strictly increasing");
    }
    const Bitset b = member_bits(G, members);
    const auto counts = kernels::line_counts(G.line_csr(), b.words());
    VerifyResult r;
    for (std::uint32_t l = 0; l < counts.size(); ++l)
        if (counts[l] != counts[0]) {
            r.violation = LineViolation{l, counts[l], counts[0]};
            return r;
        }
    r.m = counts.empty() ? 0 : counts[0];
    return r;
}

OvoidCertificate certify(const Geometry& G, std::vector<std::uint32_t> members) {
    const auto r = verify_m_ovoid(G, members);
    if (!r.ok())
        throw OvoidError("line " + std::to_string(r.violation->line) + " meets the set in " +
                         std::to_string(r.violation->count) + " points, line 0 in " + std::to_string(r.violation->expected));
    OvoidCertificate c;
    c.geom_hash = G.hash();
    c.m = *r.m;
    c.members = std::move(members);
    c.verified = true;
    return c;
}

OvoidCertificate certify(const Geometry& G, const OvdData& data) {
    if (data.geom_hash != G.hash()) throw OvoidError("ovoid file belongs to geometry " + data.geom_hash + ", not " + G.hash());
    auto c = certify(G, data.members);
    if (c.m != data.m)
        throw OvoidError("file declares m = " + std::to_string(data.m) + " but lines meet the set in " + std::to_string(c.m));
    return c;
}

OvoidCertificate complement(const Geometry& G, const OvoidCertificate& cert) {
    require_verified(cert);
    if (cert.geom_hash != G.hash()) throw OvoidError("certificate belongs to another geometry");
    std::vector<std::uint32_t> out;
    out.reserve(G.n() - cert.members.size());
    std::size_t j = 0;
    for (std::uint32_t x = 0; x < G.n(); ++x) {
        if (j < cert.members.size() && cert.members[j] == x) ++j;
        else out.push_back(x);
    }
    auto c = certify(G, std::move(out));
    if (c.m != G.s() + 1 - cert.m) throw OvoidError("complement has unexpected m");
    return c;
}

std::vector<std::uint32_t> witness_points(std::uint32_t n, std::uint64_t seed) {
    std::vector<std::uint32_t> all(n);
    std::iota(all.begin(), all.end(), 0u);
    if (n <= kExhaustiveLimit) return all;
    std::vector<std::uint32_t> out;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint32_t> pick(0, n - 1);
    out.reserve(1000);
    for (int k = 0; k < 1000; ++k) out.push_back(pick(rng));
    return out;
}

Rational neg_inv_power(std::int64_t s, std::uint32_t i) { return Rational(sign(i), ipow(s, i)); }

SphereCountReport sphere_count_check(const Geometry& G, const SchemeData& SD, const OvoidCertificate& cert,
                                     std::uint32_t x) {
    require_verified(cert);
    if (x >= G.n()) throw OvoidError("point index out of range");
    const std::int64_t s = SD.params.s;
    const std::uint32_t d = SD.params.d;
    const Rational frac(cert.m, s + 1);
    SphereCountReport r;
    r.x = x;
    r.in = std::binary_search(cert.members.begin(), cert.members.end(), x);
    const auto row = G.distance_row(x);
    r.measured.assign(d + 1, 0);
    for (auto y : cert.members) ++r.measured[row[y]];
    for (std::uint32_t i = 0; i <= d; ++i) {
        const Rational e = r.in ? SD.k[i] * (frac + neg_inv_power(s, i) * (1 - frac))
                                : SD.k[i] * frac * (1 - neg_inv_power(s, i));
        r.expected.push_back(e);
        if (e != Rational(static_cast<std::int64_t>(r.measured[i]))) r.ok = false;
    }
    return r;
}

SphereCountSummary sphere_count_summary(const Geometry& G, const SchemeData& SD, const OvoidCertificate& cert,
                                        std::uint64_t seed) {
    const auto xs = witness_points(G.n(), seed);
    std::vector<SphereCountReport> reports(xs.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(xs.size()); ++k)
        reports[k] = sphere_count_check(G, SD, cert, xs[k]);
    SphereCountSummary sum;
    sum.checked = static_cast<std::uint32_t>(reports.size());
    for (auto& r : reports) {
        if (!r.ok) {
            ++sum.failures;
            if (!sum.first_failure) sum.first_failure = r;
        }
        if (r.in && !sum.first_in) sum.first_in = r;
        if (!r.in && !sum.first_out) sum.first_out = r;
    }
    return sum;
}

EigenIdentityReport eigen_identity_check(const Geometry& G, std::span<const std::uint32_t> members, std::uint32_t m) {
    const Bitset b = member_bits(G, members);
    const std::uint64_t t1 = G.t() + 1;
    EigenIdentityReport r;
    r.value = std::uint64_t(m) * t1;
    for (std::uint32_t x = 0; x < G.n(); ++x) {
        std::uint64_t v = b.test(x) ? t1 : 0;
        for (auto y : G.neighbors(x)) v += b.test(y);
        if (v != r.value) {
            r.bad_point = x;
            r.bad_value = v;
            break;
        }
    }
    return r;
}

VanhoveReport vanhove_check(const Geometry& G, const SchemeData& SD, const OvoidCertificate& cert, std::uint32_t i,
                            std::uint64_t seed) {
    require_verified(cert);
    require_hypothesis(SD, i);
    const std::int64_t s = SD.params.s;
    VanhoveReport r;
    r.i = i;
    r.alpha = vanhove_alpha(SD, i);
    r.ones_expected = 2 * (r.alpha + SD.c[i]);
    r.mu_expected = Rational(r.ones_expected * cert.m, s + 1);

    const SphereTable T(G);
    const Bitset O = member_bits(G, cert.members);
    const bool exhaustive = G.n() <= kExhaustiveLimit;
    const auto xs = witness_points(G.n(), seed);

    std::uint64_t pairs = 0, bad = 0, best = std::numeric_limits<std::uint64_t>::max();
    std::int64_t best_value = 0;
#pragma omp parallel for schedule(dynamic, 4) reduction(+ : pairs, bad)
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(xs.size()); ++k) {
        const std::uint32_t x = xs[k];
        const auto Sx = T.of(x);
        std::vector<std::uint32_t> ys;
        for_each_bit(Sx.at(i), [&](std::size_t y) { ys.push_back(static_cast<std::uint32_t>(y)); });
        if (!exhaustive) {
            std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ull * (std::uint64_t(k) + 1)));
            ys = {ys[std::uniform_int_distribution<std::size_t>(0, ys.size() - 1)(rng)]};
        }
        for (auto y : ys) {
            const auto Sy = T.of(y);
            const std::int64_t c1 = static_cast<std::int64_t>(and_count(Sx.at(1), Sy.at(i - 1)));
            const std::int64_t c2 = static_cast<std::int64_t>(and_count(Sx.at(i - 1), Sy.at(1)));
            const std::int64_t ones = 2 * r.alpha + c1 + c2;
            const std::int64_t mu = r.alpha * (O.test(x) + O.test(y)) +
                                    static_cast<std::int64_t>(and3_count(Sx.at(1), Sy.at(i - 1), O.words())) +
                                    static_cast<std::int64_t>(and3_count(Sx.at(i - 1), Sy.at(1), O.words()));
            ++pairs;
            if (ones != r.ones_expected || Rational(mu) != r.mu_expected) {
                ++bad;
                const std::uint64_t key = std::uint64_t(x) * G.n() + y;
#pragma omp critical(vanhove_first)
                if (key < best) {
                    best = key;
                    best_value = mu;
                }
            }
        }
    }
    r.pairs = pairs;
    r.mismatches = bad;
    if (bad) {
        r.first_bad = std::make_pair(static_cast<std::uint32_t>(best / G.n()), static_cast<std::uint32_t>(best % G.n()));
        r.first_bad_value = best_value;
    }
    return r;
}

CrossSphereReport cross_sphere_check(const Geometry& G, const SchemeData& SD, const OvoidCertificate& cert,
                                     std::uint64_t seed) {
    require_verified(cert);
    const std::int64_t s = SD.params.s;
    const std::uint32_t d = SD.params.d;
    CrossSphereReport r;
    r.f.assign(d + 1, 0);
    r.expected.assign(d + 1, 0);
    r.f[1] = 1;
    for (std::uint32_t i = 2; i <= d; ++i) r.f[i] = (Rational(cert.m) - r.f[i - 1]) / s;
    for (std::uint32_t i = 1; i <= d; ++i) r.expected[i] = SD.p[1][i][i - 1] * r.f[i];

    const SphereTable T(G);
    const Bitset O = member_bits(G, cert.members);
    std::vector<std::uint32_t> xs;
    for (auto x : witness_points(G.n(), seed))
        if (!O.test(x)) xs.push_back(x);

    std::uint64_t samples = 0, bad = 0, best = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t levels = d + 1;
#pragma omp parallel for schedule(dynamic, 4) reduction(+ : samples, bad)
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(xs.size()); ++k) {
        const std::uint32_t x = xs[k];
        const auto Sx = T.of(x);
        for (auto z : G.neighbors(x)) {
            if (!O.test(z)) continue;
            const auto Sz = T.of(z);
            ++samples;
            for (std::uint32_t i = 1; i <= d; ++i) {
                const auto c = static_cast<std::int64_t>(and3_count(Sz.at(i - 1), Sx.at(i), O.words()));
                if (Rational(c) != r.expected[i]) {
                    ++bad;
                    const std::uint64_t key = (std::uint64_t(x) * G.n() + z) * levels + i;
#pragma omp critical(cross_first)
                    best = std::min(best, key);
                }
            }
        }
    }
    r.samples = samples;
    r.mismatches = bad;
    if (bad) {
        const auto i = static_cast<std::uint32_t>(best % levels);
        const std::uint64_t xz = best / levels;
        r.first_bad = std::make_tuple(static_cast<std::uint32_t>(xz / G.n()), static_cast<std::uint32_t>(xz % G.n()), i);
    }
    return r;
}

PairCountReport pair_count_check(const Geometry& G, const SchemeData& SD, const OvoidCertificate& cert,
                                 std::uint32_t i, std::uint64_t seed) {
    require_verified(cert);
    require_hypothesis(SD, i);
    const std::int64_t s = SD.params.s, t = SD.params.t_top(), m = cert.m;
    PairCountReport r;
    r.i = i;
    const Rational base = Rational(m * SD.k[i - 1] * (t - SD.params.t[i - 1]), s + 1);
    r.first_formula = base * (1 - neg_inv_power(s, i)) *
                      Rational(2 * SD.c[i] * m * s - (s + 1 - 2 * m) * (SD.c[i - 1] * s * s + sign(i) * ipow(s, i)),
                               SD.c[i] * (s + 1));
    r.second_formula = base * (2 * m - 1 + neg_inv_power(s, i - 1) * (s - 2 * m + 2));

    const SphereTable T(G);
    const Bitset O = member_bits(G, cert.members);
    std::vector<std::uint32_t> xs;
    for (auto x : witness_points(G.n(), seed))
        if (!O.test(x)) xs.push_back(x);

    std::vector<std::pair<std::uint64_t, std::uint64_t>> counts(xs.size());
#pragma omp parallel for schedule(dynamic, 4)
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(xs.size()); ++k) {
        const auto Sx = T.of(xs[k]);
        std::uint64_t by_y = 0, by_z = 0;
        // y first: y in O at distance i, then z in O adjacent to one end
        for_each_bit(Sx.at(i), [&](std::size_t y) {
            if (!O.test(y)) return;
            const auto Sy = T.of(static_cast<std::uint32_t>(y));
            by_y += and3_count(Sx.at(1), Sy.at(i - 1), O.words()) + and3_count(Sx.at(i - 1), Sy.at(1), O.words());
        });
        // z first
        for (std::uint32_t j : {1u, i - 1}) {
            const std::uint32_t other = j == 1 ? i - 1 : 1;
            for_each_bit(Sx.at(j), [&](std::size_t z) {
                if (!O.test(z)) return;
                const auto Sz = T.of(static_cast<std::uint32_t>(z));
                by_z += and3_count(Sz.at(other), Sx.at(i), O.words());
            });
        }
        counts[k] = {by_y, by_z};
    }
    r.points = xs.size();
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const auto [a, b] = counts[k];
        if (k == 0) {
            r.by_y = a;
            r.by_z = b;
        }
        const Rational ra(static_cast<std::int64_t>(a)), rb(static_cast<std::int64_t>(b));
        if (a != b || ra != r.first_formula || rb != r.second_formula) {
            ++r.mismatches;
            if (!r.first_bad) r.first_bad = xs[k];
        }
    }
    return r;
}

std::vector<Thm2Row> check_thm2_hypothesis(const ParameterSet& P) {
    std::vector<Thm2Row> out;
    const std::int64_t s = P.s;
    for (std::uint32_t i = 3; i <= P.d; ++i) {
        Thm2Row row;
        row.i = i;
        row.lhs = P.t[i] + 1;
        const std::int64_t den = ipow(s, i - 2) + sign(i);
        if (den != 0) {
            row.rhs = Rational((ipow(s, i) + sign(i)) * (P.t[i - 1] + 1 + sign(i) * ipow(s, i - 2)), den);
            row.holds = *row.rhs == Rational(row.lhs);
        }
        out.push_back(row);
    }
    return out;
}

std::vector<std::uint32_t> thm2_indices(const ParameterSet& P) {
    std::vector<std::uint32_t> out;
    for (const auto& r : check_thm2_hypothesis(P))
        if (r.holds) out.push_back(r.i);
    return out;
}

std::vector<BoundRow> check_dbv_bounds(const ParameterSet& P) {
    std::vector<BoundRow> out;
    const std::int64_t s = P.s;
    for (std::uint32_t i = 3; i <= P.d; ++i) {
        BoundRow row;
        row.i = i;
        row.value = P.t[i] + 1;
        const std::int64_t si2 = ipow(s, i - 2);
        if (si2 != 1) row.lower = Rational((ipow(s, i) - 1) * (P.t[i - 1] + 1 - si2), si2 - 1);
        row.upper = Rational((ipow(s, i) + 1) * (P.t[i - 1] + 1 + si2), si2 + 1);
        const Rational v(row.value);
        const bool lo = row.lower && v == *row.lower;
        const bool hi = v == row.upper;
        row.attained = lo && hi ? BoundSide::both : lo ? BoundSide::lower : hi ? BoundSide::upper : BoundSide::none;
        row.violated = (row.lower && v < *row.lower) || v > row.upper;
        out.push_back(row);
    }
    return out;
}

const char* bound_side_name(BoundSide s) {
    switch (s) {
        case BoundSide::lower: return "lower";
        case BoundSide::upper: return "upper";
        case BoundSide::both: return "both";
        default: return "none";
    }
}

std::vector<std::uint32_t> admissible_m(const ParameterSet& P) {
    std::vector<std::uint32_t> out;
    if (!thm2_indices(P).empty()) {
        if (P.s % 2 == 1) out.push_back(static_cast<std::uint32_t>((P.s + 1) / 2));
        return out;
    }
    for (std::int64_t m = 1; m <= P.s; ++m) out.push_back(static_cast<std::uint32_t>(m));
    return out;
}

}  // namespace dualpolar
