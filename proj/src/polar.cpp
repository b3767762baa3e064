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

#include "dualpolar/polar.hpp"

#include <algorithm>
#include <atomic>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "dualpolar/bitset.hpp"

namespace dualpolar {

std::string family_tag(Family f) {
    switch (f) {
    case Family::Q: return "dq";
    case Family::W: return "dw";
    case Family::H: return "dh";
    }
    return "?";
}

Family parse_family(const std::string& tag) {
    if (tag == "dq" || tag == "q" || tag == "Q") return Family::Q;
    if (tag == "dw" || tag == "w" || tag == "W") return Family::W;
    if (tag == "dh" || tag == "h" || tag == "H") return Family::H;
    throw PolarError("unknown family '" + tag + "' (expected dq, dw or dh)");
}

Subspace Subspace::from_rows(const Field& F, Matrix rows) {
    rref(F, rows);
    return Subspace{std::move(rows)};
}

std::string Subspace::bytes() const {
    std::string out;
    out.reserve(basis.data.size() * 2);
    for (Elem e : basis.data) {
        out.push_back(static_cast<char>(e >> 8));
        out.push_back(static_cast<char>(e & 0xff));
    }
    return out;
}

Elem FormSpace::form(std::span<const Elem> x, std::span<const Elem> y) const {
    const Field& F = field;
    Elem acc = 0;
    for (std::uint32_t i = 0; i < dim; ++i) {
        if (x[i] == 0) continue;
        for (std::uint32_t j = 0; j < dim; ++j) {
            Elem g;
            if (family == Family::Q) {
                // polarization of sum_{i<=j} u_ij x_i x_j
                g = i == j ? F.add(gram(i, i), gram(i, i)) : (i < j ? gram(i, j) : gram(j, i));
            } else {
                g = gram(i, j);
            }
            if (g == 0 || y[j] == 0) continue;
            acc = F.add(acc, F.mul(F.mul(x[i], g), conj(y[j])));
        }
    }
    return acc;
}

Elem FormSpace::quadratic(std::span<const Elem> x) const {
    if (family != Family::Q) return form(x, x);
    const Field& F = field;
    Elem acc = 0;
    for (std::uint32_t i = 0; i < dim; ++i) {
        if (x[i] == 0) continue;
        for (std::uint32_t j = i; j < dim; ++j)
            if (gram(i, j) != 0 && x[j] != 0) acc = F.add(acc, F.mul(gram(i, j), F.mul(x[i], x[j])));
    }
    return acc;
}

bool FormSpace::is_singular(std::span<const Elem> x) const { return quadratic(x) == 0; }

std::string FormSpace::name() const {
    const std::string qs = std::to_string(family == Family::H ? q * q : q);
    switch (family) {
    case Family::Q: return "DQ(" + std::to_string(2 * rank) + "," + qs + ")";
    case Family::W: return "DW(" + std::to_string(2 * rank - 1) + "," + qs + ")";
    case Family::H: return "DH(" + std::to_string(2 * rank - 1) + "," + qs + ")";
    }
    return "?";
}

FormSpace form_make(Family family, std::uint32_t d, std::uint32_t q) {
    if (d < 2) throw PolarError("rank must be at least 2");
    if (d > 4) throw PolarError("rank above 4 is not supported");
    FormSpace S;
    S.family = family;
    S.rank = d;
    S.q = q;
    Field base = Field::of_order(q);
    if (family == Family::H) {
        S.field = Field::make(base.p(), 2 * base.k());
        S.conj_power = base.k();
    } else {
        S.field = base;
    }
    const Field& F = S.field;
    switch (family) {
    case Family::Q:
        S.dim = 2 * d + 1;
        S.gram = Matrix(S.dim, S.dim);
        S.gram(0, 0) = 1;
        for (std::uint32_t i = 0; i < d; ++i) S.gram(2 * i + 1, 2 * i + 2) = 1;
        break;
    case Family::W:
        S.dim = 2 * d;
        S.gram = Matrix(S.dim, S.dim);
        for (std::uint32_t i = 0; i < d; ++i) {
            S.gram(i, d + i) = 1;
            S.gram(d + i, i) = F.neg(1);
        }
        break;
    case Family::H:
        S.dim = 2 * d;
        S.gram = Matrix(S.dim, S.dim);
        for (std::uint32_t i = 0; i < S.dim; ++i) S.gram(i, S.dim - 1 - i) = 1;
        break;
    }
    long double vol = 1;
    for (std::uint32_t i = 0; i < S.dim; ++i) vol *= F.q();
    if (vol > 9.0e18L) throw PolarError("ambient space too large for point keys");
    return S;
}

bool is_totally_isotropic(const FormSpace& S, const Subspace& U) {
    const Matrix& b = U.basis;
    if (b.cols != S.dim) throw PolarError("subspace dimension does not match the ambient space");
    for (std::uint32_t i = 0; i < b.rows; ++i) {
        if (S.family != Family::W && S.quadratic(b.row(i)) != 0) return false;
        for (std::uint32_t j = i + 1; j < b.rows; ++j)
            if (S.form(b.row(i), b.row(j)) != 0) return false;
    }
    return true;
}

namespace {

std::uint64_t key_of(std::span<const Elem> v, std::uint32_t q) {
    std::uint64_t k = 0;
    for (Elem e : v) k = k * q + e;
    return k;
}

// Enumerate all vectors whose first nonzero coordinate is 1.
template <class Fn>
void for_each_normalized(std::uint32_t dim, std::uint32_t q, Fn&& fn) {
    std::vector<Elem> v(dim, 0);
    for (std::uint32_t lead = 0; lead < dim; ++lead) {
        std::fill(v.begin(), v.end(), 0);
        v[lead] = 1;
        while (true) {
            fn(std::span<const Elem>(v));
            bool carry = true;
            for (std::uint32_t i = dim; i > lead + 1 && carry;) {
                --i;
                if (++v[i] < q) carry = false;
                else v[i] = 0;
            }
            if (carry) break;
        }
    }
}

// Clears bits [0, upto].
void clear_prefix(std::span<Word> w, std::size_t upto) {
    const std::size_t full = (upto + 1) / 64;
    for (std::size_t i = 0; i < full; ++i) w[i] = 0;
    const std::size_t rem = (upto + 1) % 64;
    if (rem) w[full] &= ~((Word(1) << rem) - 1);
}

}  // namespace

std::vector<std::vector<Elem>> singular_points(const FormSpace& S) {
    std::vector<std::vector<Elem>> pts;
    for_each_normalized(S.dim, S.field.q(), [&](std::span<const Elem> v) {
        if (S.is_singular(v)) pts.emplace_back(v.begin(), v.end());
    });
    std::sort(pts.begin(), pts.end());
    return pts;
}

Generators enumerate_generators(const FormSpace& S, std::size_t max_generators) {
    const Field& F = S.field;
    const std::uint32_t q = F.q();
    const std::uint32_t d = S.rank;
    const auto pts = singular_points(S);
    const std::size_t P = pts.size();
    if (P == 0) throw PolarError("form has no singular points");

    std::unordered_map<std::uint64_t, std::uint32_t> index;
    index.reserve(P * 2);
    for (std::uint32_t i = 0; i < P; ++i) index.emplace(key_of(pts[i], q), i);

    BitMatrix perp(P, P);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t a = 0; a < static_cast<std::int64_t>(P); ++a)
        for (std::size_t b = 0; b < P; ++b)
            if (S.form(pts[a], pts[b]) == 0) perp.set(a, b);

    std::atomic<std::size_t> produced{0};
    std::atomic<bool> overflow{false};
    std::atomic<bool> broken{false};
    std::vector<Subspace> maximals, next;

    // Each subspace is reached once, through its greedy basis: every new
    // point of span(P_1..P_j) must have index >= P_j.
    struct Frame {
        std::vector<std::vector<Elem>> basis;
        std::vector<Word> cand;
    };

#pragma omp parallel
    {
        std::vector<Subspace> local_max, local_next;
        std::vector<Elem> tmp(S.dim);
        std::vector<std::uint32_t> coeff;

        auto record = [&](const std::vector<std::vector<Elem>>& basis) {
            Matrix m(static_cast<std::uint32_t>(basis.size()), S.dim);
            for (std::uint32_t i = 0; i < basis.size(); ++i)
                std::copy(basis[i].begin(), basis[i].end(), m.row(i).begin());
            Subspace s = Subspace::from_rows(F, std::move(m));
            if (basis.size() == d) {
                local_max.push_back(std::move(s));
                if (produced.fetch_add(1) + 1 > max_generators) overflow = true;
            } else {
                local_next.push_back(std::move(s));
            }
        };

        // Recursive extension from a frame whose last basis vector is point c.
        auto extend = [&](auto& self, Frame& fr) -> void {
            if (overflow) return;
            if (fr.basis.size() + 1 >= d) record(fr.basis);
            if (fr.basis.size() == d) return;
            const std::uint32_t j = static_cast<std::uint32_t>(fr.basis.size());
            for_each_bit(std::span<const Word>(fr.cand), [&](std::size_t c) {
                if (overflow) return;
                // New points: pts[c] + sum a_i b_i over all coefficient tuples.
                std::vector<std::uint32_t> fresh;
                bool ok = true;
                coeff.assign(j, 0);
                while (true) {
                    for (std::uint32_t t = 0; t < S.dim; ++t) {
                        Elem x = pts[c][t];
                        for (std::uint32_t i = 0; i < j; ++i)
                            if (coeff[i]) x = F.add(x, F.mul(static_cast<Elem>(coeff[i]), fr.basis[i][t]));
                        tmp[t] = x;
                    }
                    normalize(F, tmp);
                    const auto it = index.find(key_of(tmp, q));
                    if (it == index.end()) {
                        broken = true;
                        ok = false;
                        break;
                    }
                    if (it->second < c) { ok = false; break; }
                    fresh.push_back(it->second);
                    std::uint32_t i = 0;
                    while (i < j && ++coeff[i] == q) coeff[i++] = 0;
                    if (i == j) break;
                }
                if (!ok) return;
                Frame child;
                child.basis = fr.basis;
                child.basis.push_back(pts[c]);
                child.cand.assign(fr.cand.begin(), fr.cand.end());
                auto pr = perp.row(c);
                for (std::size_t w = 0; w < child.cand.size(); ++w) child.cand[w] &= pr[w];
                // only indices above c remain eligible
                clear_prefix(child.cand, c);
                for (auto f : fresh) clear_bit(child.cand, f);
                self(self, child);
            });
        };

#pragma omp for schedule(dynamic, 1)
        for (std::int64_t first = 0; first < static_cast<std::int64_t>(P); ++first) {
            Frame fr;
            fr.basis.push_back(pts[first]);
            fr.cand.assign(perp.row(first).begin(), perp.row(first).end());
            clear_prefix(fr.cand, static_cast<std::size_t>(first));
            extend(extend, fr);
        }

#pragma omp critical
        {
            maximals.insert(maximals.end(), std::make_move_iterator(local_max.begin()),
                            std::make_move_iterator(local_max.end()));
            next.insert(next.end(), std::make_move_iterator(local_next.begin()), std::make_move_iterator(local_next.end()));
        }
    }
    if (broken) throw PolarError("span of pairwise perpendicular singular points is not totally isotropic");
    if (overflow) throw PolarError("generator enumeration exceeded the memory guard");
    std::sort(maximals.begin(), maximals.end());
    std::sort(next.begin(), next.end());
    return {std::move(maximals), std::move(next)};
}

bool preserves_form(const FormSpace& S, const Matrix& m, std::uint32_t frob) {
    (void)frob;  // the standard forms have prime-field coefficients
    const Field& F = S.field;
    if (m.rows != S.dim || m.cols != S.dim) return false;
    if (!inverse(F, m)) return false;
    // Compare the transformed form's coefficient matrix with a scalar multiple.
    Matrix ref(S.dim, S.dim), img(S.dim, S.dim);
    for (std::uint32_t i = 0; i < S.dim; ++i) {
        auto ri = m.row(i);
        for (std::uint32_t j = 0; j < S.dim; ++j) {
            auto rj = m.row(j);
            if (S.family == Family::Q) {
                if (j < i) continue;
                img(i, j) = i == j ? S.quadratic(ri) : S.form(ri, rj);
                ref(i, j) = i == j ? S.gram(i, i) : F.add(S.gram(i, j), S.gram(j, i));
            } else {
                img(i, j) = S.form(ri, rj);
                ref(i, j) = S.gram(i, j);
            }
        }
    }
    Elem lambda = 0;
    for (std::size_t t = 0; t < ref.data.size(); ++t) {
        if (ref.data[t] != 0) {
            lambda = F.div(img.data[t], ref.data[t]);
            break;
        }
    }
    if (lambda == 0) return false;
    for (std::size_t t = 0; t < ref.data.size(); ++t)
        if (img.data[t] != F.mul(lambda, ref.data[t])) return false;
    return true;
}

Subspace apply(const FormSpace& S, const Subspace& U, const Matrix& m, std::uint32_t frob) {
    return Subspace::from_rows(S.field, multiply(S.field, frobenius(S.field, U.basis, frob), m));
}

Matrix random_isometry(const FormSpace& S, std::mt19937_64& rng, int factors) {
    const Field& F = S.field;
    const std::uint32_t n = S.dim;
    std::uniform_int_distribution<std::uint32_t> elem(0, F.q() - 1);
    Matrix g = Matrix::identity(n);
    std::vector<Elem> v(n);
    // column vector c with c_i = coefficient of the linear functional x -> form(x, v)
    auto functional = [&](std::span<const Elem> vv) {
        std::vector<Elem> c(n);
        std::vector<Elem> e(n, 0);
        for (std::uint32_t i = 0; i < n; ++i) {
            e[i] = 1;
            c[i] = S.form(e, vv);
            e[i] = 0;
        }
        return c;
    };
    std::vector<Elem> trace_zero;
    if (S.family == Family::H)
        for (std::uint32_t a = 1; a < F.q(); ++a)
            if (S.conj(static_cast<Elem>(a)) == F.neg(static_cast<Elem>(a))) trace_zero.push_back(static_cast<Elem>(a));

    for (int f = 0; f < factors; ++f) {
        Matrix t = Matrix::identity(n);
        Elem scale = 0;
        while (true) {
            for (auto& x : v) x = static_cast<Elem>(elem(rng));
            if (std::all_of(v.begin(), v.end(), [](Elem x) { return x == 0; })) continue;
            if (S.family == Family::W) {
                do scale = static_cast<Elem>(elem(rng)); while (scale == 0);
                break;
            }
            if (S.family == Family::H) {
                if (S.quadratic(v) != 0) continue;
                scale = trace_zero[std::uniform_int_distribution<std::size_t>(0, trace_zero.size() - 1)(rng)];
                break;
            }
            const Elem qv = S.quadratic(v);
            if (qv == 0) continue;
            scale = F.neg(F.inv(qv));
            break;
        }
        // x -> x + scale * form(x, v) * v
        const auto c = functional(v);
        for (std::uint32_t i = 0; i < n; ++i)
            for (std::uint32_t j = 0; j < n; ++j) t(i, j) = F.add(t(i, j), F.mul(scale, F.mul(c[i], v[j])));
        g = multiply(F, g, t);
    }
    return g;
}

}  // namespace dualpolar
