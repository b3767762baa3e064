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

#include <doctest.h>

#include <filesystem>

#include "dualpolar/io.hpp"
#include "support.hpp"

using namespace dualpolar;

TEST_SUITE("io") {

TEST_CASE("npg round trip") {
    const GeometryMeta meta{"tri", "none", 0, 0};
    const std::vector<std::vector<std::uint32_t>> lines{{0, 1}, {1, 2}, {0, 2}};
    const auto text = serialize_npg(meta, 3, lines);
    const auto back = parse_npg(text);
    CHECK(back.meta == meta);
    CHECK(back.n == 3);
    CHECK(back.lines == lines);
    CHECK(serialize_npg(back.meta, back.n, back.lines) == text);

    const auto& G = fixtures::gq22();
    const auto g = parse_npg(G.serialize());
    CHECK(g.meta.family == "dw");
    CHECK(g.meta.q == 2);
    CHECK(g.meta.d == 2);
    CHECK(g.lines == G.lines());
}

TEST_CASE("ovd round trip") {
    const OvdData o{std::string(64, 'a'), 2, {0, 5, 9}};
    const auto back = parse_ovd(serialize_ovd(o));
    CHECK(back.geom_hash == o.geom_hash);
    CHECK(back.m == 2);
    CHECK(back.members == o.members);
    const auto fixture = parse_ovd(read_file(fixtures::data_path("dq63_hemisystem.ovd")));
    CHECK(fixture.members.size() == 560);
    CHECK(serialize_ovd(fixture) == read_file(fixtures::data_path("dq63_hemisystem.ovd")));
}

TEST_CASE("grp round trip") {
    const auto text = read_file(fixtures::data_path("dq63_stabilizer120.grp"));
    const auto g = parse_grp(text);
    CHECK(g.q == 3);
    CHECK(g.dim == 7);
    CHECK(g.gens.size() == 4);
    CHECK(g.frob.size() == 4);
    const auto again = parse_grp(serialize_grp(g));
    CHECK(again.gens == g.gens);
    CHECK(again.frob == g.frob);

    GrpData h;
    h.q = 4;
    h.dim = 2;
    Matrix m(2, 2);
    m(0, 0) = 3;
    m(1, 1) = 2;
    h.gens = {m, Matrix::identity(2)};
    h.frob = {1, 0};
    const auto back = parse_grp(serialize_grp(h));
    CHECK(back.gens == h.gens);
    CHECK(back.frob == h.frob);
}

TEST_CASE("malformed input") {
    const std::string hash(64, '0');
    CHECK_THROWS_AS(parse_ovd("OVD 2\ngeom " + hash + "\nm 1\n"), FormatError);
    CHECK_THROWS_AS(parse_ovd("OVD 1\ngeom abc\nm 1\n"), FormatError);
    CHECK_THROWS_AS(parse_ovd("OVD 1\ngeom " + hash + "\n"), FormatError);
    CHECK_THROWS_AS(parse_ovd("OVD 1\ngeom " + hash + "\nm x\n"), FormatError);
    CHECK_THROWS_AS(parse_ovd("OVD 1\ngeom " + hash + "\nm 1\n3\n2\n"), FormatError);
    CHECK_THROWS_AS(parse_ovd("OVD 1\ngeom " + hash + "\nm 1\n3\n3\n"), FormatError);
    CHECK_THROWS_AS(parse_ovd("OVD 1\ngeom " + hash + "\nm 1\n-3\n"), FormatError);
    CHECK_THROWS_AS(parse_ovd("OVD 1\ngeom " + hash + "\nm 1\n1 2\n"), FormatError);

    const std::string npg = "NPG 1\nname x\nfamily none\nq 0\nd 0\nn 3\nlines 3\n";
    CHECK_NOTHROW(parse_npg(npg + "0 1\n1 2\n0 2\n"));
    CHECK_THROWS_AS(parse_npg(npg + "0 1\n1 2\n"), FormatError);
    CHECK_THROWS_AS(parse_npg(npg + "0 1\n2 1\n0 2\n"), FormatError);
    CHECK_THROWS_AS(parse_npg(npg + "0 1\n1 3\n0 2\n"), FormatError);
    CHECK_THROWS_AS(parse_npg("NPG 1\nname x\nfamily zz\nq 0\nd 0\nn 3\nlines 0\n"), FormatError);
    CHECK_THROWS_AS(parse_npg("hello"), FormatError);

    CHECK_THROWS_AS(parse_grp("GRP 1\nq 3\ndim 2\n\n1 0\n0\n"), FormatError);
    CHECK_THROWS_AS(parse_grp("GRP 1\nq 3\ndim 2\n\n1 0\n0 3\n"), FormatError);
    CHECK_THROWS_AS(parse_grp("GRP 1\nq 3\ndim 2\n\n1 0\n"), FormatError);
    CHECK_THROWS_AS(parse_grp("GRP 1\nq 3\ndim 0\n"), FormatError);
    CHECK_THROWS_AS(read_file("/nonexistent/dualpolar/file"), FormatError);
}

TEST_CASE("files and hashing") {
    const auto p = std::filesystem::temp_directory_path() / "dualpolar_io_test.txt";
    write_file(p, "abc");
    CHECK(read_file(p) == "abc");
    std::filesystem::remove(p);
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

}  // TEST_SUITE
