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

#include "dualpolar/field.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <mutex>

namespace dualpolar {

namespace {

struct ConwayEntry {
    std::uint32_t p, k;
    std::array<std::uint8_t, 11> c;  // c_0..c_k, c_k = 1
};

// Conway polynomials for degree >= 2, low coefficient first.
constexpr ConwayEntry kConway[] = {
    {2, 2, {1, 1, 1}},
    {2, 3, {1, 1, 0, 1}},
    {2, 4, {1, 1, 0, 0, 1}},
    {2, 5, {1, 0, 1, 0, 0, 1}},
    {2, 6, {1, 1, 0, 1, 1, 0, 1}},
    {2, 7, {1, 1, 0, 0, 0, 0, 0, 1}},
    {2, 8, {1, 0, 1, 1, 1, 0, 0, 0, 1}},
    {2, 9, {1, 0, 0, 0, 1, 0, 0, 0, 0, 1}},
    {2, 10, {1, 1, 1, 1, 0, 1, 1, 0, 0, 0, 1}},
    {3, 2, {2, 2, 1}},
    {3, 3, {1, 2, 0, 1}},
    {3, 4, {2, 0, 0, 2, 1}},
    {3, 5, {1, 2, 0, 0, 0, 1}},
    {3, 6, {2, 2, 1, 0, 2, 0, 1}},
    {5, 2, {2, 4, 1}},
    {5, 3, {3, 3, 0, 1}},
    {5, 4, {2, 4, 4, 0, 1}},
    {7, 2, {3, 6, 1}},
    {7, 3, {4, 0, 6, 1}},
    {11, 2, {2, 7, 1}},
    {13, 2, {2, 12, 1}},
    {17, 2, {3, 16, 1}},
    {19, 2, {2, 18, 1}},
    {23, 2, {5, 21, 1}},
    {29, 2, {2, 24, 1}},
    {31, 2, {3, 29, 1}},
};

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = r * b % m;
        b = b * b % m;
        e >>= 1;
    }
    return r;
}

std::vector<std::uint32_t> prime_factors(std::uint32_t n) {
    std::vector<std::uint32_t> f;
    for (std::uint32_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            f.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) f.push_back(n);
    return f;
}

std::uint32_t least_primitive_root(std::uint32_t p) {
    if (p == 2) return 1;
    const auto fs = prime_factors(p - 1);
    for (std::uint32_t g = 2; g < p; ++g) {
        bool ok = true;
        for (auto f : fs)
            if (powmod(g, (p - 1) / f, p) == 1) { ok = false; break; }
        if (ok) return g;
    }
    throw FieldError("no primitive root");
}

}  // namespace

bool is_prime(std::uint32_t n) {
    if (n < 2) return false;
    for (std::uint32_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::vector<std::uint32_t> conway_polynomial(std::uint32_t p, std::uint32_t k) {
    if (k == 1 && is_prime(p)) {
        // x - g for the least primitive root g
        return {(p - least_primitive_root(p)) % p, 1};
    }
    for (const auto& e : kConway)
        if (e.p == p && e.k == k) return {e.c.begin(), e.c.begin() + k + 1};
    return {};
}

Field Field::of_order(std::uint32_t q) {
    if (q < 2) throw FieldError("field order must be at least 2");
    std::uint32_t p = 2;
    while (q % p) ++p;
    std::uint32_t k = 0, r = q;
    while (r % p == 0) { r /= p; ++k; }
    if (r != 1) throw FieldError("not a prime power: " + std::to_string(q));
    return make(p, k);
}

Field Field::make(std::uint32_t p, std::uint32_t k) {
    if (!is_prime(p)) throw FieldError("characteristic is not prime: " + std::to_string(p));
    if (k == 0) throw FieldError("extension degree must be positive");
    std::uint64_t q64 = 1;
    for (std::uint32_t i = 0; i < k; ++i) {
        q64 *= p;
        if (q64 > kMaxFieldOrder)
            throw FieldError("unsupported field order " + std::to_string(p) + "^" + std::to_string(k));
    }

    // Fields are cached: geometry code creates the same field many times.
    static std::mutex mu;
    static std::map<std::pair<std::uint32_t, std::uint32_t>, std::shared_ptr<const Tables>> cache;
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find({p, k}); it != cache.end()) return Field(it->second);

    auto mod = conway_polynomial(p, k);
    if (mod.empty())
        throw FieldError("unsupported field GF(" + std::to_string(p) + "^" + std::to_string(k) + ")");

    auto t = std::make_shared<Tables>();
    const auto q = static_cast<std::uint32_t>(q64);
    t->p = p;
    t->k = k;
    t->q = q;
    t->modulus = mod;

    auto encode = [&](const std::vector<std::uint32_t>& c) {
        std::uint32_t e = 0;
        for (std::uint32_t i = k; i-- > 0;) e = e * p + c[i];
        return static_cast<Elem>(e);
    };

    // Powers of x by repeated multiplication modulo the Conway polynomial.
    t->exp.assign(2 * (q - 1), 0);
    t->log.assign(q, 0);
    std::vector<std::uint32_t> cur(k, 0);
    cur[0] = 1;
    for (std::uint32_t i = 0; i < q - 1; ++i) {
        const Elem e = encode(cur);
        if (i > 0 && e == 1) throw FieldError("defining polynomial is not primitive");
        t->exp[i] = t->exp[i + q - 1] = e;
        t->log[e] = i;
        // cur *= x
        const std::uint32_t top = cur[k - 1];
        for (std::uint32_t j = k - 1; j > 0; --j) cur[j] = cur[j - 1];
        cur[0] = 0;
        for (std::uint32_t j = 0; j < k; ++j)
            cur[j] = static_cast<std::uint32_t>((cur[j] + (p - mod[j]) * std::uint64_t(top)) % p);
    }

    auto digits_of = [&](std::uint32_t e) {
        std::vector<std::uint32_t> c(k);
        for (std::uint32_t i = 0; i < k; ++i) { c[i] = e % p; e /= p; }
        return c;
    };
    auto add_digits = [&](std::uint32_t a, std::uint32_t b) {
        auto ca = digits_of(a), cb = digits_of(b);
        for (std::uint32_t i = 0; i < k; ++i) ca[i] = (ca[i] + cb[i]) % p;
        return encode(ca);
    };

    t->neg.assign(q, 0);
    for (std::uint32_t a = 0; a < q; ++a) {
        auto c = digits_of(a);
        for (auto& x : c) x = (p - x) % p;
        t->neg[a] = encode(c);
    }

    t->zech.assign(q - 1, -1);
    for (std::uint32_t i = 0; i < q - 1; ++i) {
        const Elem s = add_digits(1, t->exp[i]);
        t->zech[i] = s == 0 ? -1 : static_cast<std::int32_t>(t->log[s]);
    }

    if (q <= 256) {
        t->add.assign(std::size_t(q) * q, 0);
        for (std::uint32_t a = 0; a < q; ++a)
            for (std::uint32_t b = 0; b < q; ++b) t->add[std::size_t(a) * q + b] = add_digits(a, b);
    }

    cache.emplace(std::make_pair(p, k), t);
    return Field(std::move(t));
}

Elem Field::add_zech(Elem a, Elem b) const {
    if (a == 0) return b;
    if (b == 0) return a;
    const std::uint32_t n = t_->q - 1;
    const std::uint32_t la = t_->log[a], lb = t_->log[b];
    const std::int32_t z = t_->zech[(lb + n - la) % n];
    if (z < 0) return 0;
    return t_->exp[la + static_cast<std::uint32_t>(z)];
}

Elem Field::pow(Elem a, std::uint64_t e) const {
    if (e == 0) return 1;
    if (a == 0) return 0;
    const std::uint64_t n = t_->q - 1;
    return t_->exp[(std::uint64_t(t_->log[a]) * (e % n)) % n];
}

Elem Field::frobenius(Elem x, std::uint32_t r) const {
    if (r >= t_->k) throw FieldError("frobenius power out of range");
    std::uint64_t pr = 1;
    for (std::uint32_t i = 0; i < r; ++i) pr *= t_->p;
    return pow(x, pr);
}

std::vector<std::uint32_t> Field::digits(Elem a) const {
    std::vector<std::uint32_t> c(t_->k);
    std::uint32_t e = a;
    for (auto& x : c) { x = e % t_->p; e /= t_->p; }
    return c;
}

Elem Field::from_digits(std::span<const std::uint32_t> c) const {
    std::uint32_t e = 0;
    for (std::size_t i = c.size(); i-- > 0;) e = e * t_->p + (c[i] % t_->p);
    return static_cast<Elem>(e);
}

Elem Field::from_int(std::int64_t v) const {
    const auto p = static_cast<std::int64_t>(t_->p);
    return static_cast<Elem>(((v % p) + p) % p);
}

std::string Field::name() const { return "GF(" + std::to_string(t_->q) + ")"; }

}  // namespace dualpolar
