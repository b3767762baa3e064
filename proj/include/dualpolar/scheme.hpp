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

#include <boost/rational.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dualpolar/geometry.hpp"

namespace dualpolar {

using Rational = boost::rational<std::int64_t>;

class SchemeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotDistanceRegular : public SchemeError {
public:
    NotDistanceRegular(std::uint32_t x, std::uint32_t y, const std::string& why)
        : SchemeError("not distance regular at pair (" + std::to_string(x) + ", " + std::to_string(y) + "): " + why),
          x(x),
          y(y) {}
    std::uint32_t x, y;
};

// Regular near 2d-gon parameters. t[0] = -1, t[1] = 0, t[d] = t.
struct ParameterSet {
    std::int64_t s = 0;
    std::uint32_t d = 0;
    std::vector<std::int64_t> t;

    // From (s, t_2, ..., t_d); validates t_0/t_1 conventions and d >= 2.
    static ParameterSet make(std::int64_t s, std::span<const std::int64_t> t_tail);
    std::int64_t c(std::uint32_t i) const { return t[i] + 1; }
    std::int64_t a(std::uint32_t i) const { return (s - 1) * (t[i] + 1); }
    std::int64_t b(std::uint32_t i) const { return s * (t[d] - t[i]); }
    std::int64_t t_top() const { return t[d]; }
    std::string to_string() const;
    bool operator==(const ParameterSet&) const = default;
};

struct SchemeData {
    ParameterSet params;
    std::vector<std::int64_t> a, b, c, k;
    std::int64_t n = 0;
    // p[l][i][j] = |Gamma_i(x) meet Gamma_j(y)| for dist(x, y) = l
    std::vector<std::vector<std::vector<std::int64_t>>> p;

    // Filled by eigendata(); descending.
    std::vector<double> eigenvalues;
    std::vector<bool> eigenvalue_integral;
    std::vector<std::int64_t> multiplicities;
    // E_j = sum_r projector[j][r] * A^r (Lagrange form over the eigenvalues)
    std::vector<std::vector<double>> projector;
    std::uint32_t minus_t1_index = 0;  // index of eigenvalue -(t+1)

    std::int64_t pval(std::uint32_t l, std::uint32_t i, std::uint32_t j) const { return p[l][i][j]; }
};

// Measures (s, t_i) and checks local counts over all pairs (n <= 4096) or
// from 1000 seeded sample points otherwise.
ParameterSet parameters_from_geometry(const Geometry& G, std::uint64_t seed = 1);

// a/b/c/k and the p-table; throws SchemeError on non-integral or negative
// entries or failed symmetry/balance.
SchemeData intersection_table(const ParameterSet& P);

// intersection_table plus eigenvalues, multiplicities and projectors.
SchemeData eigendata(const ParameterSet& P);

// E_j v, by repeated adjacency application.
std::vector<double> project(const Geometry& G, const SchemeData& SD, std::uint32_t j, std::span<const double> v);

// { j != 0 : |E_j v|^2 > eps |v|^2 }, eps = 1e-8 n.
std::vector<std::uint32_t> dual_degree_set(const Geometry& G, const SchemeData& SD, std::span<const double> v);

// det(theta I - L) for the tridiagonal intersection matrix L, exact at
// integer theta.
__int128 characteristic_value(const ParameterSet& P, std::int64_t theta);

}  // namespace dualpolar
