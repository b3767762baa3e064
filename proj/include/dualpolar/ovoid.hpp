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
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dualpolar/geometry.hpp"
#include "dualpolar/scheme.hpp"

namespace dualpolar {

class OvoidError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct OvoidCertificate {
    std::string geom_hash;
    std::uint32_t m = 0;
    std::vector<std::uint32_t> members;  // ascending
    bool verified = false;

    OvdData to_ovd() const { return {geom_hash, m, members}; }
};

struct LineViolation {
    std::uint32_t line = 0;
    std::uint32_t count = 0;
    std::uint32_t expected = 0;  // count on line 0
};

struct VerifyResult {
    std::optional<std::uint32_t> m;
    std::optional<LineViolation> violation;
    bool ok() const { return m.has_value(); }
};

// Members must be ascending and in range (throws OvoidError otherwise).
VerifyResult verify_m_ovoid(const Geometry& G, std::span<const std::uint32_t> members);

// Verified certificate or OvoidError describing the violation.
OvoidCertificate certify(const Geometry& G, std::vector<std::uint32_t> members);

// Loads an .ovd against G: hash and m must match.
OvoidCertificate certify(const Geometry& G, const OvdData& data);

OvoidCertificate complement(const Geometry& G, const OvoidCertificate& cert);

// Sample points: all of them for n <= 1200, else 1000 seeded draws.
inline constexpr std::uint32_t kExhaustiveLimit = 1200;
std::vector<std::uint32_t> witness_points(std::uint32_t n, std::uint64_t seed);

// (-1/s)^i
Rational neg_inv_power(std::int64_t s, std::uint32_t i);

struct SphereCountReport {
    std::uint32_t x = 0;
    bool in = false;
    std::vector<Rational> expected;
    std::vector<std::uint64_t> measured;
    bool ok = true;
};
SphereCountReport sphere_count_check(const Geometry& G, const SchemeData& SD, const OvoidCertificate& cert,
                                     std::uint32_t x);

// Runs sphere_count_check over witness_points; returns the first failure
// or the last report, and the number of points checked.
struct SphereCountSummary {
    std::uint32_t checked = 0;
    std::uint32_t failures = 0;
    std::optional<SphereCountReport> first_in, first_out, first_failure;
};
SphereCountSummary sphere_count_summary(const Geometry& G, const SchemeData& SD, const OvoidCertificate& cert,
                                        std::uint64_t seed);

struct EigenIdentityReport {
    std::uint64_t value = 0;                  // m (t + 1)
    std::optional<std::uint32_t> bad_point;   // first coordinate that differs
    std::uint64_t bad_value = 0;
    bool ok() const { return !bad_point; }
};
// (A + (t+1) I) chi = m (t+1) 1, exact.
EigenIdentityReport eigen_identity_check(const Geometry& G, std::span<const std::uint32_t> members, std::uint32_t m);

struct VanhoveReport {
    std::uint32_t i = 0;
    std::int64_t alpha = 0;
    std::int64_t ones_expected = 0;  // 2 (alpha + c_i)
    Rational mu_expected;
    std::uint64_t pairs = 0;
    std::uint64_t mismatches = 0;
    std::optional<std::pair<std::uint32_t, std::uint32_t>> first_bad;
    std::int64_t first_bad_value = 0;
    bool ok() const { return mismatches == 0; }
};
// Refuses (OvoidError) unless 3 <= i <= d and the identity of
// check_thm2_hypothesis holds at i.
VanhoveReport vanhove_check(const Geometry& G, const SchemeData& SD, const OvoidCertificate& cert, std::uint32_t i,
                            std::uint64_t seed);

struct CrossSphereReport {
    std::vector<Rational> f;         // f_1..f_d, index 0 unused
    std::vector<Rational> expected;  // p^1_{i,i-1} f_i
    std::uint64_t samples = 0;       // (x, z) pairs
    std::uint64_t mismatches = 0;
    std::optional<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>> first_bad;  // x, z, i
    bool ok() const { return mismatches == 0; }
};
CrossSphereReport cross_sphere_check(const Geometry& G, const SchemeData& SD, const OvoidCertificate& cert,
                                     std::uint64_t seed);

// Both sides of the pair double count for a fixed x outside the ovoid.
struct PairCountReport {
    std::uint32_t i = 0;
    std::uint64_t points = 0;
    Rational first_formula, second_formula;
    std::uint64_t mismatches = 0;  // points whose direct counts differ from either formula
    std::optional<std::uint32_t> first_bad;
    std::uint64_t by_y = 0, by_z = 0;  // direct counts at the first checked point
    bool ok() const { return mismatches == 0; }
};
PairCountReport pair_count_check(const Geometry& G, const SchemeData& SD, const OvoidCertificate& cert,
                                 std::uint32_t i, std::uint64_t seed);

struct Thm2Row {
    std::uint32_t i = 0;
    std::int64_t lhs = 0;  // t_i + 1
    std::optional<Rational> rhs;  // nullopt when the denominator vanishes
    bool holds = false;
};
std::vector<Thm2Row> check_thm2_hypothesis(const ParameterSet& P);
std::vector<std::uint32_t> thm2_indices(const ParameterSet& P);

enum class BoundSide { none, lower, upper, both };
struct BoundRow {
    std::uint32_t i = 0;
    std::optional<Rational> lower;
    std::int64_t value = 0;
    Rational upper;
    BoundSide attained = BoundSide::none;
    bool violated = false;
};
std::vector<BoundRow> check_dbv_bounds(const ParameterSet& P);
const char* bound_side_name(BoundSide s);

std::vector<std::uint32_t> admissible_m(const ParameterSet& P);

}  // namespace dualpolar
