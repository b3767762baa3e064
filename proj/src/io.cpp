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

#include "dualpolar/io.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <fstream>
#include <sstream>

namespace dualpolar {

namespace {

// Splits text into lines, dropping a trailing '\r'.
std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view l = text.substr(pos, nl - pos);
        if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
        out.push_back(l);
        pos = nl + 1;
    }
    return out;
}

std::vector<std::string_view> tokens(std::string_view l) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < l.size()) {
        while (i < l.size() && (l[i] == ' ' || l[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < l.size() && l[j] != ' ' && l[j] != '\t') ++j;
        if (j > i) out.push_back(l.substr(i, j - i));
        i = j;
    }
    return out;
}

std::uint64_t to_uint(std::string_view s, const char* what) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw FormatError(std::string("expected a non-negative integer for ") + what + ", got '" + std::string(s) + "'");
    return v;
}

// Reads "key value" and returns value.
std::string_view expect_key(const std::vector<std::string_view>& lines, std::size_t& i, std::string_view key) {
    if (i >= lines.size()) throw FormatError("missing header key '" + std::string(key) + "'");
    auto t = tokens(lines[i]);
    if (t.size() != 2 || t[0] != key)
        throw FormatError("expected '" + std::string(key) + " <value>' on line " + std::to_string(i + 1));
    ++i;
    return t[1];
}

void expect_magic(const std::vector<std::string_view>& lines, std::string_view magic) {
    if (lines.empty() || lines[0] != magic) throw FormatError("expected first line '" + std::string(magic) + "'");
}

}  // namespace

std::string serialize_npg(const GeometryMeta& meta, std::uint32_t n,
                          const std::vector<std::vector<std::uint32_t>>& lines) {
    std::ostringstream os;
    os << "NPG 1\n"
       << "name " << meta.name << "\n"
       << "family " << meta.family << "\n"
       << "q " << meta.q << "\n"
       << "d " << meta.d << "\n"
       << "n " << n << "\n"
       << "lines " << lines.size() << "\n";
    for (const auto& l : lines) {
        for (std::size_t j = 0; j < l.size(); ++j) os << (j ? " " : "") << l[j];
        os << "\n";
    }
    return os.str();
}

NpgData parse_npg(std::string_view text) {
    const auto lines = split_lines(text);
    expect_magic(lines, "NPG 1");
    std::size_t i = 1;
    NpgData g;
    g.meta.name = std::string(expect_key(lines, i, "name"));
    g.meta.family = std::string(expect_key(lines, i, "family"));
    if (g.meta.family != "dq" && g.meta.family != "dw" && g.meta.family != "dh" && g.meta.family != "none")
        throw FormatError("unknown family '" + g.meta.family + "'");
    g.meta.q = static_cast<std::uint32_t>(to_uint(expect_key(lines, i, "q"), "q"));
    g.meta.d = static_cast<std::uint32_t>(to_uint(expect_key(lines, i, "d"), "d"));
    g.n = static_cast<std::uint32_t>(to_uint(expect_key(lines, i, "n"), "n"));
    const auto count = to_uint(expect_key(lines, i, "lines"), "lines");
    g.lines.reserve(count);
    for (; i < lines.size(); ++i) {
        auto t = tokens(lines[i]);
        if (t.empty()) continue;
        std::vector<std::uint32_t> l;
        l.reserve(t.size());
        for (auto tok : t) {
            const auto v = to_uint(tok, "point index");
            if (v >= g.n) throw FormatError("point index " + std::to_string(v) + " out of range on line " + std::to_string(i + 1));
            if (!l.empty() && v <= l.back()) throw FormatError("line indices not ascending on line " + std::to_string(i + 1));
            l.push_back(static_cast<std::uint32_t>(v));
        }
        g.lines.push_back(std::move(l));
    }
    if (g.lines.size() != count)
        throw FormatError("declared " + std::to_string(count) + " lines, found " + std::to_string(g.lines.size()));
    return g;
}

std::string serialize_ovd(const OvdData& o) {
    std::ostringstream os;
    os << "OVD 1\n"
       << "geom " << o.geom_hash << "\n"
       << "m " << o.m << "\n";
    for (auto x : o.members) os << x << "\n";
    return os.str();
}

OvdData parse_ovd(std::string_view text) {
    const auto lines = split_lines(text);
    expect_magic(lines, "OVD 1");
    std::size_t i = 1;
    OvdData o;
    o.geom_hash = std::string(expect_key(lines, i, "geom"));
    if (o.geom_hash.size() != 64) throw FormatError("geometry hash must be 64 hex digits");
    o.m = static_cast<std::uint32_t>(to_uint(expect_key(lines, i, "m"), "m"));
    for (; i < lines.size(); ++i) {
        auto t = tokens(lines[i]);
        if (t.empty()) continue;
        if (t.size() != 1) throw FormatError("expected one index per line on line " + std::to_string(i + 1));
        const auto v = static_cast<std::uint32_t>(to_uint(t[0], "member index"));
        if (!o.members.empty() && v <= o.members.back())
            throw FormatError("member indices not strictly increasing on line " + std::to_string(i + 1));
        o.members.push_back(v);
    }
    return o;
}

std::string serialize_grp(const GrpData& g) {
    std::ostringstream os;
    os << "GRP 1\n"
       << "q " << g.q << "\n"
       << "dim " << g.dim << "\n";
    for (std::size_t k = 0; k < g.gens.size(); ++k) {
        os << "\n";
        if (k < g.frob.size() && g.frob[k] != 0) os << "frob " << g.frob[k] << "\n";
        const Matrix& m = g.gens[k];
        for (std::uint32_t i = 0; i < m.rows; ++i) {
            for (std::uint32_t j = 0; j < m.cols; ++j) os << (j ? " " : "") << m(i, j);
            os << "\n";
        }
    }
    return os.str();
}

GrpData parse_grp(std::string_view text) {
    const auto lines = split_lines(text);
    expect_magic(lines, "GRP 1");
    std::size_t i = 1;
    GrpData g;
    g.q = static_cast<std::uint32_t>(to_uint(expect_key(lines, i, "q"), "q"));
    g.dim = static_cast<std::uint32_t>(to_uint(expect_key(lines, i, "dim"), "dim"));
    if (g.dim == 0 || g.dim > 16) throw FormatError("unsupported matrix dimension");
    while (i < lines.size()) {
        if (tokens(lines[i]).empty()) {
            ++i;
            continue;
        }
        std::uint32_t frob = 0;
        auto t = tokens(lines[i]);
        if (t[0] == "frob") {
            if (t.size() != 2) throw FormatError("malformed frob line " + std::to_string(i + 1));
            frob = static_cast<std::uint32_t>(to_uint(t[1], "frob"));
            ++i;
        }
        Matrix m(g.dim, g.dim);
        for (std::uint32_t r = 0; r < g.dim; ++r, ++i) {
            if (i >= lines.size()) throw FormatError("truncated generator matrix");
            auto row = tokens(lines[i]);
            if (row.size() != g.dim) throw FormatError("matrix row of wrong length on line " + std::to_string(i + 1));
            for (std::uint32_t c = 0; c < g.dim; ++c) {
                const auto v = to_uint(row[c], "matrix entry");
                if (v >= g.q) throw FormatError("matrix entry out of range on line " + std::to_string(i + 1));
                m(r, c) = static_cast<Elem>(v);
            }
        }
        g.gens.push_back(std::move(m));
        g.frob.push_back(frob);
    }
    return g;
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 15]);
    }
    return out;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw FormatError("cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& p, std::string_view text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw FormatError("cannot write " + p.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw FormatError("write failed for " + p.string());
}

}  // namespace dualpolar
