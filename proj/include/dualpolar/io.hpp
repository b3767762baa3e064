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

// Plain-text file formats:
//
//   .npg  geometry     "NPG 1", header keys name/family/q/d/n/lines, then
//                      one line per geometry line (ascending 0-based indices)
//   .ovd  ovoid        "OVD 1", "geom <sha256 hex>", "m <int>", then one
//                      member index per line, strictly increasing
//   .grp  generators   "GRP 1", "q <int>", "dim <int>", then blank-line
//                      separated dim x dim matrices of field encodings, each
//                      optionally preceded by "frob <r>"
//
// The content hash of a geometry is SHA-256 over its serialized .npg bytes.

#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dualpolar/linalg.hpp"

namespace dualpolar {

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GeometryMeta {
    std::string name = "unnamed";
    std::string family = "none";  // dq, dw, dh or none
    std::uint32_t q = 0;          // order of the form's field (q^2 for dh)
    std::uint32_t d = 0;

    bool operator==(const GeometryMeta&) const = default;
};

struct NpgData {
    GeometryMeta meta;
    std::uint32_t n = 0;
    std::vector<std::vector<std::uint32_t>> lines;
};

std::string serialize_npg(const GeometryMeta& meta, std::uint32_t n,
                          const std::vector<std::vector<std::uint32_t>>& lines);
NpgData parse_npg(std::string_view text);

struct OvdData {
    std::string geom_hash;
    std::uint32_t m = 0;
    std::vector<std::uint32_t> members;
};

std::string serialize_ovd(const OvdData& o);
// Checks ordering; the range check needs the geometry and happens at load.
OvdData parse_ovd(std::string_view text);

struct GrpData {
    std::uint32_t q = 0;
    std::uint32_t dim = 0;
    std::vector<Matrix> gens;
    std::vector<std::uint32_t> frob;  // one per generator, 0 when absent
};

std::string serialize_grp(const GrpData& g);
GrpData parse_grp(std::string_view text);

std::string sha256_hex(std::string_view bytes);

std::string read_file(const std::filesystem::path& p);
void write_file(const std::filesystem::path& p, std::string_view text);

}  // namespace dualpolar
