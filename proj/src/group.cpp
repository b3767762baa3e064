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

#include "dualpolar/group.hpp"

#include <algorithm>
#include <iterator>
#include <map>
#include <numeric>
#include <set>
#include <unordered_set>

namespace dualpolar {

Semilinear compose(const Field& F, const Semilinear& a, const Semilinear& b) {
    // v -> frob^rb(frob^ra(v) Ma) Mb = frob^(ra+rb)(v) frob^rb(Ma) Mb
    Semilinear c;
    c.m = multiply(F, frobenius(F, a.m, b.frob), b.m);
    c.frob = (a.frob + b.frob) % F.k();
    return c;
}

Semilinear projective_normal(const Field& F, Semilinear g) {
    normalize(F, g.m.data);
    return g;
}

bool is_projective_identity(const Field& F, const Semilinear& g) {
    if (g.frob != 0) return false;
    const Elem lambda = g.m(0, 0);
    if (lambda == 0) return false;
    for (std::uint32_t i = 0; i < g.m.rows; ++i)
        for (std::uint32_t j = 0; j < g.m.cols; ++j)
            if (g.m(i, j) != (i == j ? lambda : 0)) return false;
    (void)F;
    return true;
}

std::vector<std::uint32_t> permutation_of(const Geometry& G, const Semilinear& g) {
    if (!G.has_subspaces()) throw GroupError("geometry has no subspace data (load it via build, not from a file without family)");
    const FormSpace& S = G.form();
    std::vector<std::uint32_t> perm(G.n());
    bool bad = false;
#pragma omp parallel for schedule(static) reduction(|| : bad)
    for (std::int64_t p = 0; p < static_cast<std::int64_t>(G.n()); ++p) {
        const auto img = G.index_of(apply(S, G.points()[p], g.m, g.frob));
        if (img) perm[p] = *img;
        else bad = true;
    }
    if (bad) throw GroupError("generator does not map generators of the form to generators");
    return perm;
}

namespace {

// Projective points of a subspace, as normalized vectors.
std::vector<std::vector<Elem>> points_of(const Field& F, const Matrix& basis) {
    const std::uint32_t k = basis.rows, n = basis.cols, q = F.q();
    std::vector<std::vector<Elem>> out;
    std::vector<Elem> c(k, 0);
    while (true) {
        std::uint32_t i = 0;
        while (i < k && c[i] == q - 1) c[i++] = 0;
        if (i == k) break;
        ++c[i];
        std::uint32_t lead = 0;
        while (c[lead] == 0) ++lead;
        if (c[lead] != 1) continue;
        std::vector<Elem> v(n, 0);
        for (std::uint32_t r = 0; r < k; ++r)
            if (c[r])
                for (std::uint32_t j = 0; j < n; ++j) v[j] = F.add(v[j], F.mul(c[r], basis(r, j)));
        normalize(F, v);
        out.push_back(std::move(v));
    }
    return out;
}

Matrix row_matrix(const std::vector<std::vector<Elem>>& rows) {
    Matrix m(static_cast<std::uint32_t>(rows.size()), static_cast<std::uint32_t>(rows[0].size()));
    for (std::uint32_t i = 0; i < m.rows; ++i)
        for (std::uint32_t j = 0; j < m.cols; ++j) m(i, j) = rows[i][j];
    return m;
}

}  // namespace

std::optional<Semilinear> semilinear_of(const Geometry& G, std::span<const std::uint32_t> perm) {
    if (!G.has_subspaces()) throw GroupError("geometry has no subspace data");
    if (perm.size() != G.n()) throw GroupError("permutation has wrong length");
    const FormSpace& S = G.form();
    const Field& F = S.field;
    const auto pts = singular_points(S);
    std::map<std::vector<Elem>, std::uint32_t> index;
    for (std::uint32_t i = 0; i < pts.size(); ++i) index[pts[i]] = i;

    std::vector<std::vector<std::uint32_t>> gen_pts(G.n()), through(pts.size());
    for (std::uint32_t g = 0; g < G.n(); ++g) {
        for (const auto& v : points_of(F, G.points()[g].basis)) gen_pts[g].push_back(index.at(v));
        std::sort(gen_pts[g].begin(), gen_pts[g].end());
        for (auto x : gen_pts[g]) through[x].push_back(g);
    }
    // point map: the common point of the images of the generators through x
    std::vector<std::uint32_t> img(pts.size());
    for (std::uint32_t x = 0; x < pts.size(); ++x) {
        std::vector<std::uint32_t> common = gen_pts[perm[through[x][0]]];
        for (std::size_t j = 1; j < through[x].size() && common.size() > 1; ++j) {
            std::vector<std::uint32_t> next;
            const auto& other = gen_pts[perm[through[x][j]]];
            std::set_intersection(common.begin(), common.end(), other.begin(), other.end(), std::back_inserter(next));
            common = std::move(next);
        }
        if (common.size() != 1) return std::nullopt;
        img[x] = common[0];
    }

    // frame: dim independent points b_i and u with all coordinates nonzero
    std::vector<std::uint32_t> frame;
    Matrix acc(0, S.dim);
    for (std::uint32_t x = 0; x < pts.size() && frame.size() < S.dim; ++x) {
        Matrix trial = acc;
        trial.rows += 1;
        trial.data.insert(trial.data.end(), pts[x].begin(), pts[x].end());
        if (rank(F, trial) == trial.rows) {
            acc = std::move(trial);
            frame.push_back(x);
        }
    }
    if (frame.size() != S.dim) return std::nullopt;
    std::vector<std::vector<Elem>> brows, wrows;
    for (auto x : frame) {
        brows.push_back(pts[x]);
        wrows.push_back(pts[img[x]]);
    }
    const Matrix B = row_matrix(brows), W = row_matrix(wrows);
    const auto Binv = inverse(F, B);
    const auto Winv = inverse(F, W);
    if (!Binv || !Winv) return std::nullopt;
    std::optional<std::uint32_t> unit;
    std::vector<Elem> c;
    for (std::uint32_t x = 0; x < pts.size() && !unit; ++x) {
        const Matrix cx = multiply(F, row_matrix({pts[x]}), *Binv);
        if (std::all_of(cx.data.begin(), cx.data.end(), [](Elem e) { return e != 0; })) {
            unit = x;
            c = cx.data;
        }
    }
    if (!unit) return std::nullopt;
    const Matrix xw = multiply(F, row_matrix({pts[img[*unit]]}), *Winv);
    for (std::uint32_t r = 0; r < F.k(); ++r) {
        Matrix D(S.dim, S.dim);
        bool ok = true;
        for (std::uint32_t i = 0; i < S.dim; ++i) {
            if (xw.data[i] == 0) ok = false;
            else D(i, i) = F.div(xw.data[i], F.frobenius(c[i], r));
        }
        if (!ok) continue;
        const auto Brinv = inverse(F, frobenius(F, B, r));
        if (!Brinv) continue;
        Matrix M = multiply(F, multiply(F, *Brinv, D), W);
        bool match = true;
        for (std::uint32_t x = 0; x < pts.size() && match; ++x) {
            Matrix v = multiply(F, frobenius(F, row_matrix({pts[x]}), r), M);
            normalize(F, v.data);
            match = v.data == pts[img[x]];
        }
        if (!match || !preserves_form(S, M, r)) continue;
        Semilinear g = projective_normal(F, {M, r});
        if (permutation_of(G, g) != std::vector<std::uint32_t>(perm.begin(), perm.end())) continue;
        return g;
    }
    return std::nullopt;
}

bool PrescribedGroup::is_union_of_orbits(std::span<const std::uint32_t> members) const {
    std::vector<std::uint32_t> hit(orbits.size(), 0);
    for (auto x : members) ++hit[orbit_of[x]];
    for (std::size_t o = 0; o < orbits.size(); ++o)
        if (hit[o] != 0 && hit[o] != orbits[o].size()) return false;
    return true;
}

PrescribedGroup group_from_permutations(std::uint32_t n, std::vector<std::vector<std::uint32_t>> perms) {
    std::vector<std::uint32_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0u);
    auto find = [&](std::uint32_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& p : perms) {
        if (p.size() != n) throw GroupError("permutation has wrong length");
        std::vector<bool> seen(n, false);
        for (auto v : p) {
            if (v >= n || seen[v]) throw GroupError("not a permutation");
            seen[v] = true;
        }
        for (std::uint32_t x = 0; x < n; ++x) {
            const auto a = find(x), b = find(p[x]);
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
    }
    PrescribedGroup H;
    H.perms = std::move(perms);
    H.orbit_of.assign(n, 0);
    std::vector<std::int64_t> id(n, -1);
    for (std::uint32_t x = 0; x < n; ++x) {
        const auto r = find(x);
        if (id[r] < 0) {
            id[r] = static_cast<std::int64_t>(H.orbits.size());
            H.orbits.emplace_back();
        }
        H.orbit_of[x] = static_cast<std::uint32_t>(id[r]);
        H.orbits[id[r]].push_back(x);
    }
    std::string text;
    for (const auto& p : H.perms) {
        for (auto v : p) text += std::to_string(v) + " ";
        text += "\n";
    }
    H.digest = sha256_hex(text);
    return H;
}

PrescribedGroup induce_permutations(const Geometry& G, const GrpData& data) {
    if (!G.has_subspaces()) throw GroupError("prescribed groups need a geometry with subspace data");
    const FormSpace& S = G.form();
    if (data.q != S.field.q())
        throw GroupError("group file is over GF(" + std::to_string(data.q) + "), geometry over GF(" + std::to_string(S.field.q()) + ")");
    if (data.dim != S.dim) throw GroupError("group file has dimension " + std::to_string(data.dim) + ", form has " + std::to_string(S.dim));
    const auto gens = from_grp(data);
    std::set<std::vector<std::uint32_t>> line_set(G.lines().begin(), G.lines().end());
    std::vector<std::vector<std::uint32_t>> perms;
    for (std::size_t k = 0; k < gens.size(); ++k) {
        const auto& g = gens[k];
        if (g.frob >= S.field.k()) throw GroupError("generator " + std::to_string(k) + ": frob out of range");
        if (!inverse(S.field, g.m)) throw GroupError("generator " + std::to_string(k) + " is singular");
        if (!preserves_form(S, g.m, g.frob))
            throw GroupError("generator " + std::to_string(k) + " does not preserve the form up to a scalar");
        auto perm = permutation_of(G, g);
        for (const auto& l : G.lines()) {
            std::vector<std::uint32_t> img;
            img.reserve(l.size());
            for (auto x : l) img.push_back(perm[x]);
            std::sort(img.begin(), img.end());
            if (!line_set.count(img)) throw GroupError("generator " + std::to_string(k) + " does not map lines to lines");
        }
        perms.push_back(std::move(perm));
    }
    auto H = group_from_permutations(G.n(), std::move(perms));
    H.gens = gens;
    H.digest = sha256_hex(serialize_grp(data));
    return H;
}

std::vector<Semilinear> enumerate_elements(const FormSpace& S, std::span<const Semilinear> gens, std::size_t cap) {
    const Field& F = S.field;
    std::vector<Semilinear> out;
    std::set<Semilinear> seen;
    Semilinear id{Matrix::identity(S.dim), 0};
    out.push_back(id);
    seen.insert(id);
    std::vector<Semilinear> ng;
    for (const auto& g : gens) ng.push_back(projective_normal(F, g));
    for (std::size_t h = 0; h < out.size(); ++h)
        for (const auto& g : ng) {
            auto e = projective_normal(F, compose(F, out[h], g));
            if (seen.insert(e).second) {
                if (out.size() >= cap) throw GroupError("group has more than " + std::to_string(cap) + " elements");
                out.push_back(std::move(e));
            }
        }
    return out;
}

std::uint64_t element_order(const FormSpace& S, const Semilinear& g, std::uint64_t cap) {
    const Field& F = S.field;
    Semilinear x = projective_normal(F, g);
    for (std::uint64_t k = 1; k <= cap; ++k) {
        if (is_projective_identity(F, x)) return k;
        x = projective_normal(F, compose(F, x, g));
    }
    throw GroupError("element order exceeds cap");
}

GrpData to_grp(const FormSpace& S, std::span<const Semilinear> gens) {
    GrpData d;
    d.q = S.field.q();
    d.dim = S.dim;
    for (const auto& g : gens) {
        d.gens.push_back(g.m);
        d.frob.push_back(g.frob);
    }
    return d;
}

std::vector<Semilinear> from_grp(const GrpData& data) {
    std::vector<Semilinear> out;
    for (std::size_t k = 0; k < data.gens.size(); ++k)
        out.push_back({data.gens[k], k < data.frob.size() ? data.frob[k] : 0});
    return out;
}

}  // namespace dualpolar
