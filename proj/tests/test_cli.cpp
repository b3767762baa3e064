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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>

#include "dualpolar/io.hpp"
#include "support.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

const fs::path& workdir() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / "dualpolar_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

Run cli(const std::string& args) {
    const auto log = workdir() / "last.log";
    const std::string cmd = "cd '" + workdir().string() + "' && '" + DUALPOLAR_CLI + "' " + args + " > '" +
                            log.string() + "' 2>&1";
    const int status = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = dualpolar::read_file(log);
    return r;
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("build, params and check") {
    auto r = cli("build --family dw --rank 2 --q 2 -o gq.npg");
    CHECK(r.code == 0);
    const auto g = dualpolar::parse_npg(dualpolar::read_file(workdir() / "gq.npg"));
    CHECK(g.n == 15);
    CHECK(g.lines.size() == 15);

    r = cli("build --family dq --rank 3 --q 3 -o dq63.npg");
    CHECK(r.code == 0);
    CHECK(dualpolar::parse_npg(dualpolar::read_file(workdir() / "dq63.npg")).n == 1120);
    CHECK(dualpolar::sha256_hex(dualpolar::read_file(workdir() / "dq63.npg")) == fixtures::dq63().hash());

    r = cli("params dq63.npg");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "1120"));

    r = cli("check dq63.npg");
    CHECK(r.code == 0);
    r = cli("check --params 3,3,60");
    CHECK(r.code == 1);
}

TEST_CASE("verify") {
    REQUIRE(cli("build --family dq --rank 3 --q 3 -o dq63.npg").code == 0);
    const std::string fixture = fixtures::data_path("dq63_hemisystem.ovd");
    auto r = cli("verify dq63.npg '" + fixture + "'");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "m 2"));

    auto o = dualpolar::parse_ovd(dualpolar::read_file(fixture));
    o.members.pop_back();
    dualpolar::write_file(workdir() / "broken.ovd", dualpolar::serialize_ovd(o));
    r = cli("verify dq63.npg broken.ovd");
    CHECK(r.code == 1);
    CHECK(contains(r.out, "line "));

    dualpolar::write_file(workdir() / "garbage.ovd", "OVD 1\nnonsense\n");
    CHECK(cli("verify dq63.npg garbage.ovd").code == 2);

    r = cli("invariants dq63.npg '" + fixture + "'");
    CHECK(r.code == 0);
}

TEST_CASE("search, classify, stabilizer") {
    REQUIRE(cli("build --family dq --rank 3 --q 3 -o dq63.npg").code == 0);
    auto r = cli("search dq63.npg -m 2 --mode first -o hemi.ovd");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "status FOUND"));
    const auto cert = dualpolar::certify(fixtures::dq63(), dualpolar::parse_ovd(dualpolar::read_file(workdir() / "hemi.ovd")));
    CHECK(cert.members.size() == 560);

    r = cli("search dq63.npg -m 1 --mode all");
    CHECK(r.code == 1);
    CHECK(contains(r.out, "status EXHAUSTED"));
    CHECK(contains(r.out, "certificates 0"));

    r = cli("search dq63.npg -m 2 --mode all --budget 100");
    CHECK(r.code == 3);
    CHECK(contains(r.out, "status BUDGET"));

    const std::string grp = fixtures::data_path("dq63_stabilizer120.grp");
    r = cli("stabilizer dq63.npg hemi.ovd '" + grp + "'");
    CHECK(r.code == 0);

    r = cli("classify dq63.npg hemi.ovd '" + fixtures::data_path("dq63_hemisystem.ovd") + "'");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "classes 1"));

    r = cli("build --family dw --rank 2 --q 2 -o gq.npg");
    r = cli("search gq.npg -m 1 --mode all --symmetry -o gq_sols");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "caveat"));
    CHECK(fs::exists(workdir() / "gq_sols" / "000000.ovd"));
}

TEST_CASE("usage errors") {
    CHECK(cli("").code == 2);
    CHECK(cli("frobnicate").code == 2);
    CHECK(cli("build --family xx --rank 2 --q 2 -o x.npg").code == 2);
    CHECK(cli("build --family dq --rank 3 --q 6 -o x.npg").code == 2);
    CHECK(cli("verify missing.npg missing.ovd").code == 2);
    REQUIRE(cli("build --family dw --rank 2 --q 2 -o gq.npg").code == 0);
    CHECK(cli("search gq.npg -m 1 --mode sometimes").code == 2);
}

}  // TEST_SUITE
