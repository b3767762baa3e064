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

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "dualpolar/canon.hpp"
#include "dualpolar/geometry.hpp"
#include "dualpolar/group.hpp"
#include "dualpolar/io.hpp"
#include "dualpolar/ovoid.hpp"
#include "dualpolar/scheme.hpp"
#include "dualpolar/search.hpp"

namespace fs = std::filesystem;
using namespace dualpolar;

namespace {

constexpr int kOk = 0, kFails = 1, kUsage = 2, kBudget = 3;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string str(const Rational& r) {
    std::ostringstream os;
    os << r.numerator();
    if (r.denominator() != 1) os << "/" << r.denominator();
    return os.str();
}

template <class T>
std::string join(const std::vector<T>& v, const char* sep = " ") {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? sep : "") << v[i];
    return os.str();
}

// With need_subspaces the geometry is rebuilt from the form named in its
// header and must reproduce the file's hash.
Geometry load_geometry(const std::string& path, bool need_subspaces = false) {
    const auto data = parse_npg(read_file(path));
    auto G = Geometry::from_npg(data);
    if (!need_subspaces) return G;
    const auto S = form_for(data.meta);
    if (!S) throw UsageError("geometry file " + path + " names no form (family none); matrix groups need one");
    auto B = build_dual_polar(*S);
    if (B.hash() != G.hash()) throw FormatError("geometry file " + path + " does not match the construction in its header");
    return B;
}

OvdData load_ovd(const Geometry& G, const std::string& path) {
    auto o = parse_ovd(read_file(path));
    if (o.geom_hash != G.hash())
        throw FormatError("ovoid file " + path + " belongs to geometry " + o.geom_hash + ", not " + G.hash());
    for (auto x : o.members)
        if (x >= G.n()) throw FormatError("ovoid file " + path + " has index " + std::to_string(x) + " out of range");
    return o;
}

SchemeData scheme_of(const Geometry& G, std::uint64_t seed) {
    return eigendata(parameters_from_geometry(G, seed));
}

void print_params(const SchemeData& SD) {
    const auto& P = SD.params;
    std::cout << "parameters " << P.to_string() << "\n";
    std::cout << "order s=" << P.s << " t=" << P.t_top() << "\n";
    std::cout << "vertices " << SD.n << "\n";
    for (std::uint32_t i = 0; i <= P.d; ++i)
        std::cout << "i=" << i << " a=" << SD.a[i] << " b=" << SD.b[i] << " c=" << SD.c[i] << " k=" << SD.k[i] << "\n";
    for (std::size_t j = 0; j < SD.eigenvalues.size(); ++j)
        std::cout << "eigenvalue " << SD.eigenvalues[j] << " multiplicity " << SD.multiplicities[j] << "\n";
}

int cmd_build(const std::string& family, std::uint32_t rank, std::uint32_t q, const std::string& out) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto S = form_make(parse_family(family), rank, q);
    const auto G = build_dual_polar(S);
    write_file(out, G.serialize());
    std::cout << "geometry " << G.meta().name << "\n"
              << "points " << G.n() << "\n"
              << "lines " << G.num_lines() << "\n"
              << "line_size " << G.s() + 1 << "\n"
              << "lines_per_point " << G.t() + 1 << "\n"
              << "hash " << G.hash() << "\n"
              << "output " << out << "\n"
              << "seconds " << seconds_since(t0) << "\n";
    return kOk;
}

int cmd_params(const std::string& path, std::uint64_t seed) {
    const auto G = load_geometry(path);
    std::cout << "geometry " << G.meta().name << "\npoints " << G.n() << "\nlines " << G.num_lines() << "\n";
    try {
        print_params(scheme_of(G, seed));
    } catch (const NotDistanceRegular& e) {
        std::cout << "distance_regular no\nreason " << e.what() << "\n";
        return kFails;
    }
    return kOk;
}

ParameterSet parse_param_list(const std::string& text) {
    std::vector<std::int64_t> v;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stoll(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::logic_error&) {
            throw UsageError("--params expects integers s,t2,...,t; got '" + tok + "'");
        }
    }
    if (v.size() < 2) throw UsageError("--params expects at least s and t");
    return ParameterSet::make(v[0], std::span<const std::int64_t>(v).subspan(1));
}

int cmd_check(const std::string& path, const std::string& params, std::uint64_t seed) {
    ParameterSet P;
    if (!params.empty()) {
        if (!path.empty()) throw UsageError("give either a geometry file or --params, not both");
        P = parse_param_list(params);
    } else if (!path.empty()) {
        P = parameters_from_geometry(load_geometry(path), seed);
    } else {
        throw UsageError("check needs a geometry file or --params");
    }
    std::cout << "parameters " << P.to_string() << "\n";
    bool any = false;
    for (const auto& r : check_thm2_hypothesis(P)) {
        std::cout << "thm2 i=" << r.i << " lhs=" << r.lhs << " rhs=" << (r.rhs ? str(*r.rhs) : "undefined")
                  << " holds=" << (r.holds ? "yes" : "no") << "\n";
        any = any || r.holds;
    }
    bool violated = false;
    for (const auto& b : check_dbv_bounds(P)) {
        std::cout << "bound i=" << b.i << " lower=" << (b.lower ? str(*b.lower) : "none") << " value=" << b.value
                  << " upper=" << str(b.upper) << " attained=" << bound_side_name(b.attained)
                  << (b.violated ? " VIOLATED" : "") << "\n";
        violated = violated || b.violated;
    }
    std::cout << "admissible_m {" << join(admissible_m(P), ",") << "}\n";
    std::cout << "hypothesis " << (any ? "holds" : "fails") << "\n";
    return any && !violated ? kOk : kFails;
}

int cmd_verify(const std::string& gpath, const std::string& opath) {
    const auto G = load_geometry(gpath);
    const auto o = load_ovd(G, opath);
    const auto r = verify_m_ovoid(G, o.members);
    std::cout << "points " << o.members.size() << "\n";
    if (!r.ok()) {
        std::cout << "result not an m-ovoid\n"
                  << "line " << r.violation->line << " meets " << r.violation->count << " points, line 0 meets "
                  << r.violation->expected << "\n";
        return kFails;
    }
    std::cout << "m " << *r.m << "\n";
    if (*r.m != o.m) {
        std::cout << "result file declares m=" << o.m << "\n";
        return kFails;
    }
    std::cout << "result verified\n";
    return kOk;
}

int cmd_invariants(const std::string& gpath, const std::string& opath, std::uint64_t seed) {
    const auto G = load_geometry(gpath);
    const auto cert = certify(G, load_ovd(G, opath));
    const auto SD = scheme_of(G, seed);
    bool ok = true;
    auto mark = [&](bool b) {
        ok = ok && b;
        return b ? "ok" : "FAIL";
    };
    std::cout << "parameters " << SD.params.to_string() << "\nm " << cert.m << "\nsize " << cert.members.size() << "\n";

    const auto eig = eigen_identity_check(G, cert.members, cert.m);
    std::cout << "eigen_identity constant=" << eig.value << " " << mark(eig.ok()) << "\n";

    const auto sc = sphere_count_summary(G, SD, cert, seed);
    auto counts = [](const SphereCountReport& r) { return join(r.measured, ","); };
    std::cout << "sphere_counts points=" << sc.checked << " failures=" << sc.failures;
    if (sc.first_in) std::cout << " in=(" << counts(*sc.first_in) << ")";
    if (sc.first_out) std::cout << " out=(" << counts(*sc.first_out) << ")";
    std::cout << " " << mark(sc.failures == 0) << "\n";

    for (auto i : thm2_indices(SD.params)) {
        const auto v = vanhove_check(G, SD, cert, i, seed);
        std::cout << "vanhove i=" << i << " alpha=" << v.alpha << " ones=" << v.ones_expected
                  << " mu=" << str(v.mu_expected) << " pairs=" << v.pairs << " mismatches=" << v.mismatches << " "
                  << mark(v.ok()) << "\n";
        const auto pc = pair_count_check(G, SD, cert, i, seed);
        std::cout << "pair_count i=" << i << " first=" << str(pc.first_formula) << " second=" << str(pc.second_formula)
                  << " points=" << pc.points << " mismatches=" << pc.mismatches << " " << mark(pc.ok()) << "\n";
    }
    if (thm2_indices(SD.params).empty()) std::cout << "vanhove skipped (no index satisfies the hypothesis)\n";

    const auto cs = cross_sphere_check(G, SD, cert, seed);
    std::vector<std::string> expected;
    for (std::uint32_t i = 1; i < cs.expected.size(); ++i) expected.push_back(str(cs.expected[i]));
    std::cout << "cross_sphere expected=(" << join(expected, ",") << ") samples=" << cs.samples
              << " mismatches=" << cs.mismatches << " " << mark(cs.ok()) << "\n";

    std::vector<double> chi(G.n(), 0.0);
    for (auto p : cert.members) chi[p] = 1.0;
    const auto dds = dual_degree_set(G, SD, chi);
    std::cout << "dual_degree_set {" << join(dds, ",") << "}\n";
    std::cout << "result " << (ok ? "all checks hold" : "some check failed") << "\n";
    return ok ? kOk : kFails;
}

std::vector<std::string> ovd_paths(const std::vector<std::string>& args) {
    std::vector<std::string> out;
    for (const auto& a : args) {
        if (fs::is_directory(a)) {
            std::vector<std::string> found;
            for (const auto& e : fs::directory_iterator(a))
                if (e.path().extension() == ".ovd") found.push_back(e.path().string());
            std::sort(found.begin(), found.end());
            out.insert(out.end(), found.begin(), found.end());
        } else {
            out.push_back(a);
        }
    }
    return out;
}

struct SearchArgs {
    std::string geometry;
    std::uint32_t m = 0;
    std::string mode = "first";
    std::string group;
    bool symmetry = false;
    std::uint64_t budget = 0;
    std::string checkpoint;
    unsigned threads = 1;
    bool linear = false;
    std::string out;
    bool progress = false;
};

int cmd_search(const SearchArgs& a) {
    const auto t0 = std::chrono::steady_clock::now();
    const bool need_forms = !a.group.empty();
    const auto G = load_geometry(a.geometry, need_forms);
    std::optional<PrescribedGroup> H;
    if (!a.group.empty()) H = induce_permutations(G, parse_grp(read_file(a.group)));
    SearchOptions o;
    o.m = a.m;
    if (a.mode == "all") o.mode = SearchMode::all;
    else if (a.mode != "first") throw UsageError("--mode must be first or all");
    o.group = H ? &*H : nullptr;
    o.symmetry = a.symmetry;
    o.node_budget = a.budget;
    if (!a.checkpoint.empty()) o.checkpoint = a.checkpoint;
    o.threads = a.threads;
    o.linear = a.linear;
    if (a.progress)
        o.progress = [](std::uint32_t k, std::uint32_t K) { std::cerr << "subproblem " << k << " of " << K << " done\n"; };
    const auto r = search(G, o);

    std::cout << "geometry " << G.meta().name << "\nm " << a.m << "\nmode " << a.mode << "\n";
    if (H) std::cout << "group orbits " << H->num_orbits() << "\n";
    std::cout << "status " << status_name(r.status) << "\n"
              << "certificates " << r.certificates.size() << "\n"
              << "nodes " << r.stats.nodes << "\n"
              << "propagations " << r.stats.propagations << "\n"
              << "max_depth " << r.stats.max_depth << "\n"
              << "variables " << r.stats.variables << "\n"
              << "subproblems " << r.stats.subproblems_done << "/" << r.stats.subproblems << "\n";
    if (r.stats.resumed) std::cout << "resumed " << r.stats.resumed << "\n";
    if (r.stats.linear_used) std::cout << "linear_rank " << r.stats.linear_rank << "\n";
    if (a.symmetry) std::cout << "stabilizer_computations " << r.stats.symmetry_calls << "\n";
    if (H && r.status == SearchStatus::exhausted)
        std::cout << "caveat EXHAUSTED is complete only within the symmetry class of the prescribed group\n";
    if (a.symmetry && r.status == SearchStatus::exhausted)
        std::cout << "caveat EXHAUSTED is complete up to automorphisms of the geometry\n";

    if (!r.certificates.empty()) {
        if (o.mode == SearchMode::first) {
            const std::string path = a.out.empty() ? "solution.ovd" : a.out;
            write_file(path, serialize_ovd(r.certificates[0].to_ovd()));
            std::cout << "output " << path << "\n";
        } else {
            const fs::path dir = a.out.empty() ? fs::path("solutions") : fs::path(a.out);
            fs::create_directories(dir);
            char name[32];
            for (std::size_t i = 0; i < r.certificates.size(); ++i) {
                std::snprintf(name, sizeof name, "%06zu.ovd", i);
                write_file(dir / name, serialize_ovd(r.certificates[i].to_ovd()));
            }
            std::cout << "output " << dir.string() << "\n";
        }
    }
    std::cout << "seconds " << seconds_since(t0) << "\n";
    if (r.status == SearchStatus::budget) return kBudget;
    return r.certificates.empty() ? kFails : kOk;
}

int cmd_classify(const std::string& gpath, const std::vector<std::string>& inputs) {
    const auto G = load_geometry(gpath);
    const auto paths = ovd_paths(inputs);
    std::vector<OvoidCertificate> certs;
    for (const auto& p : paths) certs.push_back(certify(G, load_ovd(G, p)));
    const auto classes = classify(G, certs);
    std::cout << "certificates " << certs.size() << "\nclasses " << classes.count() << "\n";
    for (std::size_t k = 0; k < classes.count(); ++k)
        std::cout << "class " << k << " size " << classes.members[k].size() << " representative "
                  << paths[classes.members[k][0]] << "\n";
    return kOk;
}

int cmd_stabilizer(const std::string& gpath, const std::string& opath, const std::string& grp, std::size_t cap) {
    const auto G = load_geometry(gpath, true);
    const auto cert = certify(G, load_ovd(G, opath));
    const auto H = induce_permutations(G, parse_grp(read_file(grp)));
    const auto rep = stabilizer_in_group(G, cert, H, cap);
    std::cout << "group_order " << rep.group_order << "\nstabilizer_order " << rep.order << "\nelement_orders";
    for (auto [k, c] : rep.element_orders) std::cout << " " << k << "^" << c;
    std::cout << "\n";
    return kOk;
}

int cmd_autgroup(const std::string& gpath, const std::string& opath, const std::string& out) {
    const auto G = load_geometry(gpath, true);
    std::vector<std::uint32_t> marked;
    if (!opath.empty()) marked = certify(G, load_ovd(G, opath)).members;
    const auto lab = canonical_labeling(G, marked);
    std::vector<Semilinear> gens;
    for (const auto& perm : lab.generators) {
        auto g = semilinear_of(G, perm);
        if (!g) throw std::runtime_error("an automorphism is not induced by a semilinear map of the form");
        gens.push_back(*g);
    }
    write_file(out, serialize_grp(to_grp(G.form(), gens)));
    std::cout << "generators " << gens.size() << "\noutput " << out << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Regular near polygons, dual polar spaces and m-ovoids. Point and line indices are 0-based."};
    app.require_subcommand(1);
    std::uint64_t seed = 1;
    app.add_option("--seed", seed, "Seed for sampled checks")->capture_default_str();

    auto* build = app.add_subcommand("build", "Construct DQ(2d,q), DW(2d-1,q) or DH(2d-1,q^2) as an .npg file");
    std::string family, out;
    std::uint32_t rank = 0, q = 0;
    build->add_option("--family", family, "dq, dw or dh")->required()->check(CLI::IsMember({"dq", "dw", "dh"}));
    build->add_option("--rank", rank, "Rank d of the polar space")->required();
    build->add_option("--q", q, "Base field order (dh uses GF(q^2))")->required();
    build->add_option("-o,--output", out, "Output .npg")->required();

    auto* params = app.add_subcommand("params", "Measure regularity parameters, intersection numbers and eigenvalues");
    std::string gpath, opath, param_list, grp;
    params->add_option("geometry", gpath, ".npg file")->required();

    auto* check = app.add_subcommand("check", "Bound checks and admissible m for a parameter set");
    check->add_option("geometry", gpath, ".npg file");
    check->add_option("--params", param_list, "s,t2,...,t instead of a geometry");

    auto* verify = app.add_subcommand("verify", "Verify an .ovd file as an m-ovoid");
    verify->add_option("geometry", gpath)->required();
    verify->add_option("ovoid", opath)->required();

    auto* invariants = app.add_subcommand("invariants", "Counting identities of a verified m-ovoid");
    invariants->add_option("geometry", gpath)->required();
    invariants->add_option("ovoid", opath)->required();

    auto* search_cmd = app.add_subcommand("search", "Exact search for m-ovoids");
    SearchArgs sa;
    search_cmd->add_option("geometry", sa.geometry)->required();
    search_cmd->add_option("-m", sa.m, "Points per line")->required();
    search_cmd->add_option("--mode", sa.mode, "first or all")->capture_default_str();
    search_cmd->add_option("--group", sa.group, ".grp file: search over unions of orbits");
    search_cmd->add_flag("--symmetry", sa.symmetry, "Break symmetry with automorphisms of the geometry");
    search_cmd->add_option("--budget", sa.budget, "Node budget (0 = none)");
    search_cmd->add_option("--checkpoint", sa.checkpoint, "Journal file; resumed if it exists");
    search_cmd->add_option("--threads", sa.threads)->capture_default_str();
    search_cmd->add_flag("--linear", sa.linear, "Exact propagation of the line equations mod 2^31-1");
    search_cmd->add_option("-o,--output", sa.out, "Output .ovd (mode first) or directory (mode all)");
    search_cmd->add_flag("--progress", sa.progress, "Report finished subproblems on stderr");

    auto* classify_cmd = app.add_subcommand("classify", "Equivalence classes of m-ovoids");
    std::vector<std::string> inputs;
    classify_cmd->add_option("geometry", gpath)->required();
    classify_cmd->add_option("ovoids", inputs, ".ovd files or directories")->required();

    auto* stabilizer = app.add_subcommand("stabilizer", "Stabilizer of an m-ovoid inside a matrix group");
    std::size_t cap = 10'000'000;
    stabilizer->add_option("geometry", gpath)->required();
    stabilizer->add_option("ovoid", opath)->required();
    stabilizer->add_option("group", grp, ".grp file")->required();
    stabilizer->add_option("--cap", cap, "Maximum group order enumerated")->capture_default_str();

    auto* autgroup = app.add_subcommand("autgroup", "Write automorphism generators (of an m-ovoid, if given) as a .grp");
    autgroup->add_option("geometry", gpath)->required();
    autgroup->add_option("ovoid", opath);
    autgroup->add_option("-o,--output", out)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    try {
        if (*build) return cmd_build(family, rank, q, out);
        if (*params) return cmd_params(gpath, seed);
        if (*check) return cmd_check(gpath, param_list, seed);
        if (*verify) return cmd_verify(gpath, opath);
        if (*invariants) return cmd_invariants(gpath, opath, seed);
        if (*search_cmd) return cmd_search(sa);
        if (*classify_cmd) return cmd_classify(gpath, inputs);
        if (*stabilizer) return cmd_stabilizer(gpath, opath, grp, cap);
        if (*autgroup) return cmd_autgroup(gpath, opath, out);
    } catch (const OvoidError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFails;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
