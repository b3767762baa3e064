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

#include "dualpolar/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace dualpolar {

ParameterSet ParameterSet::make(std::int64_t s, std::span<const std::int64_t> t_tail) {
    if (s < 1) throw SchemeError("s must be at least 1");
    if (t_tail.empty()) throw SchemeError("need at least t_2 (diameter >= 2)");
    ParameterSet P;
    P.s = s;
    P.d = static_cast<std::uint32_t>(t_tail.size() + 1);
    P.t = {-1, 0};
    P.t.insert(P.t.end(), t_tail.begin(), t_tail.end());
    for (std::uint32_t i = 2; i <= P.d; ++i)
        if (P.t[i] < 0) throw SchemeError("t_" + std::to_string(i) + " must be non-negative");
    return P;
}

std::string ParameterSet::to_string() const {
    std::ostringstream os;
    os << "(s=" << s << ", d=" << d;
    for (std::uint32_t i = 2; i <= d; ++i) os << ", t" << i << "=" << t[i];
    os << ")";
    return os.str();
}

namespace {

void local_counts(const Geometry& G, const std::uint8_t* dx, std::uint32_t y, std::uint32_t& c, std::uint32_t& a,
                  std::uint32_t& b) {
    const std::uint8_t i = dx[y];
    c = a = b = 0;
    for (auto z : G.neighbors(y)) {
        if (dx[z] + 1 == i) ++c;
        else if (dx[z] == i) ++a;
        else ++b;
    }
}

kernels::RegularityProfile sampled_profile(const Geometry& G, std::uint64_t seed) {
    const std::uint32_t n = G.n();
    const auto row0 = G.distance_row(0);
    kernels::RegularityProfile p;
    std::uint32_t diam = 0;
    for (auto v : row0) {
        if (v == kernels::kUnreachable) throw SchemeError("collinearity graph is disconnected");
        diam = std::max<std::uint32_t>(diam, v);
    }
    p.diameter = diam;
    p.c.assign(diam + 1, 0);
    p.a.assign(diam + 1, 0);
    p.b.assign(diam + 1, 0);
    p.k.assign(diam + 1, 0);
    std::vector<bool> seen(diam + 1, false);
    for (std::uint32_t y = 0; y < n; ++y) {
        ++p.k[row0[y]];
        if (!seen[row0[y]]) {
            seen[row0[y]] = true;
            local_counts(G, row0.data(), y, p.c[row0[y]], p.a[row0[y]], p.b[row0[y]]);
        }
    }
    std::vector<std::uint32_t> all(n);
    std::iota(all.begin(), all.end(), 0u);
    std::vector<std::uint32_t> xs;
    std::mt19937_64 rng(seed);
    std::sample(all.begin(), all.end(), std::back_inserter(xs), 1000, rng);
    constexpr std::uint64_t kNone = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t best = kNone;
#pragma omp parallel for schedule(dynamic, 1) reduction(min : best)
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(xs.size()); ++k) {
        const std::uint32_t x = xs[k];
        const auto row = G.distance_row(x);
        for (std::uint32_t y = 0; y < n; ++y) {
            const std::uint8_t i = row[y];
            bool bad = i == kernels::kUnreachable || i > diam;
            if (!bad) {
                std::uint32_t c, a, b;
                local_counts(G, row.data(), y, c, a, b);
                bad = c != p.c[i] || a != p.a[i] || b != p.b[i];
            }
            if (bad) {
                best = std::min<std::uint64_t>(best, std::uint64_t(x) * n + y);
                break;
            }
        }
    }
    if (best != kNone) p.witness = std::make_pair(static_cast<std::uint32_t>(best / n), static_cast<std::uint32_t>(best % n));
    return p;
}

}  // namespace

ParameterSet parameters_from_geometry(const Geometry& G, std::uint64_t seed) {
    const auto prof = G.has_distance_matrix() ? kernels::regularity_profile(G.graph(), G.distance_matrix())
                                              : sampled_profile(G, seed);
    if (prof.witness) throw NotDistanceRegular(prof.witness->first, prof.witness->second, "local counts differ");
    if (prof.diameter < 2) throw SchemeError("diameter must be at least 2");
    const std::int64_t s = G.s(), t = G.t();
    std::vector<std::int64_t> tail;
    const auto row0 = G.distance_row(0);
    for (std::uint32_t i = 1; i <= prof.diameter; ++i) {
        const std::int64_t ti = std::int64_t(prof.c[i]) - 1;
        const bool ok = std::int64_t(prof.a[i]) == (s - 1) * (ti + 1) && std::int64_t(prof.b[i]) == s * (t - ti);
        if (!ok || (i == 1 && ti != 0)) {
            const auto y = static_cast<std::uint32_t>(std::find(row0.begin(), row0.end(), i) - row0.begin());
            throw NotDistanceRegular(0, y, "intersection numbers are not those of a regular near polygon");
        }
        if (i >= 2) tail.push_back(ti);
    }
    return ParameterSet::make(s, tail);
}

SchemeData intersection_table(const ParameterSet& P) {
    const std::uint32_t d = P.d;
    if (P.t.size() != d + 1 || P.t[0] != -1 || P.t[1] != 0) throw SchemeError("malformed parameter set");
    SchemeData SD;
    SD.params = P;
    SD.a.resize(d + 1);
    SD.b.resize(d + 1);
    SD.c.resize(d + 1);
    for (std::uint32_t i = 0; i <= d; ++i) {
        SD.a[i] = P.a(i);
        SD.b[i] = P.b(i);
        SD.c[i] = P.c(i);
    }
    SD.c[0] = 0;
    SD.a[0] = 0;
    for (std::uint32_t i = 1; i <= d; ++i)
        if (SD.c[i] <= 0) throw SchemeError("c_" + std::to_string(i) + " must be positive");
    for (std::uint32_t i = 0; i < d; ++i)
        if (SD.b[i] <= 0) throw SchemeError("b_" + std::to_string(i) + " must be positive");

    SD.k.assign(d + 1, 1);
    for (std::uint32_t i = 1; i <= d; ++i) {
        const std::int64_t num = SD.k[i - 1] * SD.b[i - 1];
        if (num % SD.c[i]) throw SchemeError("k_" + std::to_string(i) + " is not an integer");
        SD.k[i] = num / SD.c[i];
    }
    SD.n = std::accumulate(SD.k.begin(), SD.k.end(), std::int64_t(0));

    using Cube = std::vector<std::vector<std::vector<Rational>>>;
    Cube p(d + 1, std::vector<std::vector<Rational>>(d + 1, std::vector<Rational>(d + 1, 0)));
    for (std::uint32_t l = 0; l <= d; ++l) {
        p[l][0][l] = 1;
        if (l >= 1) p[l][1][l - 1] = SD.c[l];
        p[l][1][l] = SD.a[l];
        if (l + 1 <= d) p[l][1][l + 1] = SD.b[l];
    }
    for (std::uint32_t i = 1; i < d; ++i)
        for (std::uint32_t l = 0; l <= d; ++l)
            for (std::uint32_t j = 0; j <= d; ++j) {
                Rational v = p[l][i][j] * SD.a[l] - p[l][i - 1][j] * SD.b[i - 1] - p[l][i][j] * SD.a[i];
                if (l >= 1) v += p[l - 1][i][j] * SD.c[l];
                if (l + 1 <= d) v += p[l + 1][i][j] * SD.b[l];
                p[l][i + 1][j] = v / SD.c[i + 1];
            }

    SD.p.assign(d + 1, std::vector<std::vector<std::int64_t>>(d + 1, std::vector<std::int64_t>(d + 1, 0)));
    auto where = [](std::uint32_t l, std::uint32_t i, std::uint32_t j) {
        return " at p^" + std::to_string(l) + "_{" + std::to_string(i) + "," + std::to_string(j) + "}";
    };
    for (std::uint32_t l = 0; l <= d; ++l)
        for (std::uint32_t i = 0; i <= d; ++i)
            for (std::uint32_t j = 0; j <= d; ++j) {
                const Rational& v = p[l][i][j];
                if (v.denominator() != 1) throw SchemeError("non-integral intersection number" + where(l, i, j));
                if (v < 0) throw SchemeError("negative intersection number" + where(l, i, j));
                SD.p[l][i][j] = v.numerator();
            }
    for (std::uint32_t l = 0; l <= d; ++l)
        for (std::uint32_t i = 0; i <= d; ++i) {
            std::int64_t row = 0;
            for (std::uint32_t j = 0; j <= d; ++j) {
                if (SD.p[l][i][j] != SD.p[l][j][i]) throw SchemeError("asymmetric intersection number" + where(l, i, j));
                if (SD.p[l][i][j] * SD.k[l] != SD.p[i][l][j] * SD.k[i])
                    throw SchemeError("unbalanced intersection number" + where(l, i, j));
                row += SD.p[l][i][j];
            }
            if (row != SD.k[i]) throw SchemeError("intersection numbers do not sum to k_" + std::to_string(i));
        }
    return SD;
}

__int128 characteristic_value(const ParameterSet& P, std::int64_t theta) {
    // Continuant of theta I - L, rows indexed by distance.
    __int128 prev = 1;
    __int128 cur = theta;  // a_0 = 0
    for (std::uint32_t i = 1; i <= P.d; ++i) {
        const __int128 next = (theta - P.a(i)) * cur - __int128(P.b(i - 1)) * P.c(i) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

namespace {

// Number of eigenvalues of L strictly greater than theta (Sturm count).
std::uint32_t count_above(const ParameterSet& P, double theta) {
    double prev = 1, cur = theta;
    std::uint32_t changes = 0;
    auto sign_change = [](double a, double b) { return (a < 0) != (b < 0); };
    if (cur == 0) cur = -1e-300;
    changes += sign_change(prev, cur);
    for (std::uint32_t i = 1; i <= P.d; ++i) {
        double next = (theta - double(P.a(i))) * cur - double(P.b(i - 1)) * double(P.c(i)) * prev;
        // keep magnitudes bounded
        const double scale = std::max(std::abs(next), std::abs(cur));
        if (scale > 1e100) {
            next /= scale;
            cur /= scale;
        }
        if (next == 0) next = -1e-300 * (cur < 0 ? -1 : 1);
        changes += sign_change(cur, next);
        prev = cur;
        cur = next;
    }
    return changes;
}

}  // namespace

SchemeData eigendata(const ParameterSet& P) {
    SchemeData SD = intersection_table(P);
    const std::uint32_t d = P.d;
    const double k1 = double(SD.k[1]);
    SD.eigenvalues.resize(d + 1);
    SD.eigenvalue_integral.resize(d + 1);
    for (std::uint32_t j = 0; j <= d; ++j) {
        double lo = -k1 - 1, hi = k1 + 1;
        while (hi - lo > 1e-12 * std::max(1.0, std::abs(hi))) {
            const double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            if (count_above(P, mid) > j) lo = mid;
            else hi = mid;
        }
        double theta = 0.5 * (lo + hi);
        const auto r = std::llround(theta);
        const bool exact = std::abs(theta - double(r)) < 1e-6 && characteristic_value(P, r) == 0;
        if (exact) theta = double(r);
        SD.eigenvalues[j] = theta;
        SD.eigenvalue_integral[j] = exact;
    }
    for (std::uint32_t j = 1; j <= d; ++j)
        if (SD.eigenvalues[j - 1] - SD.eigenvalues[j] < 1e-9) throw SchemeError("repeated eigenvalue");
    if (SD.eigenvalues[0] != k1) throw SchemeError("largest eigenvalue differs from k_1");

    SD.multiplicities.resize(d + 1);
    std::int64_t total = 0;
    for (std::uint32_t j = 0; j <= d; ++j) {
        const double th = SD.eigenvalues[j];
        std::vector<double> u(d + 1);
        u[0] = 1;
        u[1] = th / k1;
        for (std::uint32_t i = 1; i < d; ++i)
            u[i + 1] = ((th - double(SD.a[i])) * u[i] - double(SD.c[i]) * u[i - 1]) / double(SD.b[i]);
        double denom = 0;
        for (std::uint32_t i = 0; i <= d; ++i) denom += double(SD.k[i]) * u[i] * u[i];
        const double m = double(SD.n) / denom;
        const auto mr = std::llround(m);
        if (mr <= 0 || std::abs(m - double(mr)) > 1e-6 * std::max(1.0, m))
            throw SchemeError("non-integral multiplicity for eigenvalue " + std::to_string(th));
        SD.multiplicities[j] = mr;
        total += mr;
    }
    if (total != SD.n) throw SchemeError("multiplicities do not sum to n");

    bool found = false;
    for (std::uint32_t j = 0; j <= d; ++j)
        if (SD.eigenvalue_integral[j] && std::llround(SD.eigenvalues[j]) == -(P.t_top() + 1)) {
            SD.minus_t1_index = j;
            found = true;
        }
    if (!found) throw SchemeError("eigenvalue -(t+1) is missing");

    SD.projector.assign(d + 1, {});
    for (std::uint32_t j = 0; j <= d; ++j) {
        std::vector<double> poly{1.0};
        for (std::uint32_t l = 0; l <= d; ++l) {
            if (l == j) continue;
            const double den = SD.eigenvalues[j] - SD.eigenvalues[l];
            std::vector<double> next(poly.size() + 1, 0.0);
            for (std::size_t r = 0; r < poly.size(); ++r) {
                next[r + 1] += poly[r] / den;
                next[r] -= poly[r] * SD.eigenvalues[l] / den;
            }
            poly = std::move(next);
        }
        SD.projector[j] = std::move(poly);
    }
    return SD;
}

std::vector<double> project(const Geometry& G, const SchemeData& SD, std::uint32_t j, std::span<const double> v) {
    if (v.size() != G.n()) throw SchemeError("vector length does not match the number of points");
    if (SD.eigenvalues.empty()) throw SchemeError("eigendata not computed");
    if (j > SD.params.d) throw SchemeError("idempotent index out of range");
    std::vector<double> w(v.begin(), v.end()), aw(v.size());
    for (std::uint32_t l = 0; l <= SD.params.d; ++l) {
        if (l == j) continue;
        kernels::adjacency_apply(G.graph(), w, aw);
        const double th = SD.eigenvalues[l];
        const double den = SD.eigenvalues[j] - th;
        for (std::size_t x = 0; x < w.size(); ++x) w[x] = (aw[x] - th * w[x]) / den;
    }
    return w;
}

std::vector<std::uint32_t> dual_degree_set(const Geometry& G, const SchemeData& SD, std::span<const double> v) {
    if (v.size() != G.n()) throw SchemeError("vector length does not match the number of points");
    double norm = 0;
    for (double x : v) norm += x * x;
    std::vector<std::uint32_t> out;
    if (norm == 0) return out;
    const double eps = 1e-8 * double(G.n());
    for (std::uint32_t j = 1; j <= SD.params.d; ++j) {
        const auto e = project(G, SD, j, v);
        double en = 0;
        for (double x : e) en += x * x;
        if (en > eps * norm) out.push_back(j);
    }
    return out;
}

}  // namespace dualpolar
