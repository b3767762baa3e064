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
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dualpolar {

// Canonical element encoding: e = sum c_i p^i over the polynomial basis
// 1, x, ..., x^{k-1} of GF(p)[x]/(f), f the Conway polynomial for (p, k).
using Elem = std::uint16_t;

inline constexpr std::uint32_t kMaxFieldOrder = 1u << 16;

class FieldError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

bool is_prime(std::uint32_t n);

// Conway polynomial coefficients c_0..c_k (monic), or empty when (p, k) has
// no embedded entry. Degree one is answered for every prime.
std::vector<std::uint32_t> conway_polynomial(std::uint32_t p, std::uint32_t k);

// GF(p^k) with table arithmetic. Immutable once built; copies share tables.
class Field {
public:
    static Field make(std::uint32_t p, std::uint32_t k);
    static Field of_order(std::uint32_t q);

    std::uint32_t p() const { return t_->p; }
    std::uint32_t k() const { return t_->k; }
    std::uint32_t q() const { return t_->q; }
    std::span<const std::uint32_t> modulus() const { return t_->modulus; }

    // Encoding of the class of x, a generator of the multiplicative group.
    Elem primitive() const { return t_->exp[1]; }

    Elem add(Elem a, Elem b) const {
        if (!t_->add.empty()) return t_->add[std::size_t(a) * t_->q + b];
        return add_zech(a, b);
    }
    Elem neg(Elem a) const { return t_->neg[a]; }
    Elem sub(Elem a, Elem b) const { return add(a, t_->neg[b]); }
    Elem mul(Elem a, Elem b) const {
        if (a == 0 || b == 0) return 0;
        return t_->exp[t_->log[a] + t_->log[b]];
    }
    Elem inv(Elem a) const {
        if (a == 0) throw FieldError("inverse of zero");
        return t_->exp[(t_->q - 1 - t_->log[a]) % (t_->q - 1)];
    }
    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
    Elem pow(Elem a, std::uint64_t e) const;

    // Discrete log base primitive(); a must be nonzero.
    std::uint32_t log(Elem a) const { return t_->log[a]; }
    Elem exp(std::uint64_t i) const { return t_->exp[i % (t_->q - 1)]; }

    // x -> x^{p^r}; r in [0, k).
    Elem frobenius(Elem x, std::uint32_t r) const;

    // Coefficient digits of the encoding, lowest first.
    std::vector<std::uint32_t> digits(Elem a) const;
    Elem from_digits(std::span<const std::uint32_t> c) const;

    // Embedded image of the prime-field integer v mod p.
    Elem from_int(std::int64_t v) const;

    std::string name() const;

    bool operator==(const Field& o) const { return q() == o.q(); }

private:
    struct Tables {
        std::uint32_t p = 0, k = 0, q = 0;
        std::vector<std::uint32_t> modulus;
        std::vector<Elem> exp;           // length 2(q-1) so log sums need no reduction
        std::vector<std::uint32_t> log;  // log[0] unused
        std::vector<Elem> neg;
        std::vector<std::int32_t> zech;  // x^{zech[i]} = 1 + x^i, -1 encodes zero
        std::vector<Elem> add;           // full table for q <= 256
    };
    explicit Field(std::shared_ptr<const Tables> t) : t_(std::move(t)) {}
    Elem add_zech(Elem a, Elem b) const;

    std::shared_ptr<const Tables> t_;
};

}  // namespace dualpolar
