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

#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dualpolar/field.hpp"
#include "dualpolar/linalg.hpp"

namespace dualpolar {

enum class Family { Q, W, H };

std::string family_tag(Family f);       // "dq", "dw", "dh"
Family parse_family(const std::string& tag);

class PolarError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A projective subspace as a reduced row echelon basis with unit pivots.
// Equal subspaces have identical representations.
struct Subspace {
    Matrix basis;

    static Subspace from_rows(const Field& F, Matrix rows);

    std::uint32_t dimension() const { return basis.rows; }  // vector dimension
    // Big-endian 16-bit encodings, row major.
    std::string bytes() const;

    auto operator<=>(const Subspace&) const = default;
};

// Classical polar space: parabolic quadric Q(2d, q), symplectic W(2d-1, q)
// or Hermitian H(2d-1, q^2).
struct FormSpace {
    Family family = Family::W;
    std::uint32_t rank = 0;
    std::uint32_t q = 0;  // base order; the Hermitian field is GF(q^2)
    Field field = Field::make(2, 1);
    std::uint32_t dim = 0;
    // W: alternating Gram matrix. H: Hermitian Gram matrix. Q: upper
    // triangular coefficients u_ij of Q(x) = sum_{i<=j} u_ij x_i x_j.
    Matrix gram;
    std::uint32_t conj_power = 0;  // H only: conjugation is frobenius^conj_power

    Elem conj(Elem x) const { return family == Family::H ? field.frobenius(x, conj_power) : x; }
    // Bilinear form (polarization of Q, alternating form of W) or the
    // Hermitian form of H.
    Elem form(std::span<const Elem> x, std::span<const Elem> y) const;
    // Q(x) for quadrics; form(x, x) otherwise.
    Elem quadratic(std::span<const Elem> x) const;
    bool is_singular(std::span<const Elem> x) const;

    std::string name() const;  // e.g. "DQ(6,3)", "DH(5,4)"
};

FormSpace form_make(Family family, std::uint32_t d, std::uint32_t q);

bool is_totally_isotropic(const FormSpace& S, const Subspace& U);

struct Generators {
    std::vector<Subspace> maximals;          // projective dimension d-1
    std::vector<Subspace> next_to_maximals;  // projective dimension d-2
};

// All totally isotropic subspaces of top and next-to-top dimension, sorted
// by canonical bytes. Throws PolarError past max_generators.
Generators enumerate_generators(const FormSpace& S, std::size_t max_generators = 4'000'000);

// All singular projective points, each as a normalized vector, in
// lexicographic order of encodings.
std::vector<std::vector<Elem>> singular_points(const FormSpace& S);

// True iff x -> frob^r(x) * m preserves the form up to a nonzero scalar.
bool preserves_form(const FormSpace& S, const Matrix& m, std::uint32_t frob = 0);

// Image of U under v -> frob^r(v) * m.
Subspace apply(const FormSpace& S, const Subspace& U, const Matrix& m, std::uint32_t frob = 0);

// A product of random reflections/transvections: an isometry of the form.
Matrix random_isometry(const FormSpace& S, std::mt19937_64& rng, int factors = 12);

}  // namespace dualpolar
