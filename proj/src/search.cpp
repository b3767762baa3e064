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

#include "dualpolar/search.hpp"

#include "dualpolar/canon.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dualpolar {

const char* status_name(SearchStatus s) {
    switch (s) {
        case SearchStatus::found: return "FOUND";
        case SearchStatus::exhausted: return "EXHAUSTED";
        default: return "BUDGET";
    }
}

namespace {

using kernels::kModP;
using kernels::mod_add;
using kernels::mod_inv;
using kernels::mod_mul;
using kernels::mod_sub;

// Affine solution space x = c + W lambda of the line equations, mod p.
// W is column major: column j occupies W[j * V .. (j + 1) * V).
struct LinearBase {
    std::uint32_t V = 0, r = 0;
    std::vector<std::uint32_t> W, c;
    bool inconsistent = false;
};

constexpr std::uint32_t kLinearMaxVariables = 4096;

struct Problem {
    const Geometry* G = nullptr;
    std::uint32_t m = 0, line_size = 0;
    std::uint32_t V = 0;
    std::vector<std::uint32_t> point_var;
    kernels::Csr var_points;
    std::optional<LinearBase> linear;
};

LinearBase linear_base(const Problem& P) {
    const Geometry& G = *P.G;
    const std::uint32_t V = P.V;
    kernels::ModMatrix B(V, V + 1);
    for (std::size_t l = 0; l < G.num_lines(); ++l) {
        const auto pts = G.line(l);
        for (auto p : pts) {
            const auto vp = P.point_var[p];
            B(vp, V) = mod_add(B(vp, V), P.m);
            for (auto q : pts) B(vp, P.point_var[q]) = mod_add(B(vp, P.point_var[q]), 1);
        }
    }
    const auto pivots = kernels::row_reduce(B);
    LinearBase base;
    base.V = V;
    if (!pivots.empty() && pivots.back() == V) {
        base.inconsistent = true;
        return base;
    }
    std::vector<std::int64_t> pivot_row(V, -1);
    for (std::size_t i = 0; i < pivots.size(); ++i) pivot_row[pivots[i]] = static_cast<std::int64_t>(i);
    std::vector<std::uint32_t> free;
    for (std::uint32_t v = 0; v < V; ++v)
        if (pivot_row[v] < 0) free.push_back(v);
    base.r = static_cast<std::uint32_t>(free.size());
    base.W.assign(std::size_t(V) * base.r, 0);
    base.c.assign(V, 0);
    for (std::uint32_t v = 0; v < V; ++v)
        if (pivot_row[v] >= 0) base.c[v] = B(static_cast<std::uint32_t>(pivot_row[v]), V);
    for (std::uint32_t j = 0; j < base.r; ++j) {
        std::uint32_t* col = base.W.data() + std::size_t(j) * V;
        col[free[j]] = 1;
        for (std::uint32_t v = 0; v < V; ++v)
            if (pivot_row[v] >= 0) {
                const std::uint32_t e = B(static_cast<std::uint32_t>(pivot_row[v]), free[j]);
                col[v] = e ? kModP - e : 0;
            }
    }
    return base;
}

class Linear {
public:
    void init(const LinearBase& b) {
        V_ = b.V;
        r_ = b.r;
        W_ = b.W;
        c_ = b.c;
        top_ = 0;
        pending_ = false;
        g_.assign(V_, 0);
    }

    std::size_t begin_node() {
        pending_ = true;
        return top_;
    }

    void undo(std::size_t token) {
        if (top_ > token) {
            const Snap& s = pool_[token];
            r_ = s.r;
            std::copy(s.W.begin(), s.W.begin() + std::ptrdiff_t(std::size_t(V_) * r_), W_.begin());
            c_ = s.c;
            top_ = token;
        }
        pending_ = false;
    }

    std::uint32_t rank() const { return r_; }

    // Adds x_v = val. Newly determined variables are appended to det.
    bool fix(std::uint32_t v, std::uint32_t val, std::vector<std::pair<std::uint32_t, std::uint32_t>>& det,
             std::uint64_t& eliminations) {
        std::uint32_t k = r_;
        for (std::uint32_t j = 0; j < r_; ++j)
            if (col(j)[v]) {
                k = j;
                break;
            }
        if (k == r_) return c_[v] == val;
        if (pending_) {
            save();
            pending_ = false;
        }
        ++eliminations;
        const std::uint32_t inv = mod_inv(col(k)[v]);
        const std::uint32_t delta = mod_sub(val, c_[v]);
        const std::uint32_t* ck = col(k);
        rows_.clear();
        for (std::uint32_t q = 0; q < V_; ++q) {
            if (ck[q]) {
                g_[q] = mod_mul(ck[q], inv);
                rows_.push_back(q);
                c_[q] = mod_add(c_[q], mod_mul(g_[q], delta));
            }
        }
        for (std::uint32_t j = 0; j < r_; ++j) {
            if (j == k) continue;
            std::uint32_t* cj = col(j);
            const std::uint32_t a = cj[v];
            if (!a) continue;
            for (auto q : rows_) cj[q] = mod_sub(cj[q], mod_mul(g_[q], a));
        }
        if (k != r_ - 1) std::copy(col(r_ - 1), col(r_ - 1) + V_, col(k));
        --r_;
        for (auto q : rows_) {
            g_[q] = 0;
            if (q == v) continue;
            bool zero = true;
            for (std::uint32_t j = 0; j < r_ && zero; ++j) zero = col(j)[q] == 0;
            if (!zero) continue;
            if (c_[q] > 1) return false;
            det.emplace_back(q, c_[q]);
        }
        return true;
    }

    // Variables already determined at the base (zero rows).
    void determined(std::vector<std::pair<std::uint32_t, std::uint32_t>>& det, bool& ok) const {
        for (std::uint32_t q = 0; q < V_; ++q) {
            bool zero = true;
            for (std::uint32_t j = 0; j < r_ && zero; ++j) zero = W_[std::size_t(j) * V_ + q] == 0;
            if (!zero) continue;
            if (c_[q] > 1) ok = false;
            det.emplace_back(q, c_[q]);
        }
    }

private:
    struct Snap {
        std::uint32_t r = 0;
        std::vector<std::uint32_t> W, c;
    };

    std::uint32_t* col(std::uint32_t j) { return W_.data() + std::size_t(j) * V_; }

    void save() {
        if (pool_.size() <= top_) pool_.emplace_back();
        Snap& s = pool_[top_++];
        s.r = r_;
        s.W.assign(W_.begin(), W_.begin() + std::ptrdiff_t(std::size_t(V_) * r_));
        s.c = c_;
    }

    std::uint32_t V_ = 0, r_ = 0;
    std::vector<std::uint32_t> W_, c_, g_, rows_;
    std::vector<Snap> pool_;
    std::size_t top_ = 0;
    bool pending_ = false;
};

struct Shared {
    std::atomic<std::uint64_t> nodes{0};
    std::atomic<bool> stop{false};
    std::atomic<bool> budget_hit{false};
    std::uint64_t budget = 0;
    bool first = false;
};

class Solver {
public:
    Solver(const Problem& P, Shared& sh) : P_(P), G_(*P.G), sh_(sh) {
        val_.assign(P.V, -1);
        in_.assign(G_.num_lines(), 0);
        out_.assign(G_.num_lines(), 0);
    }

    void reset() {
        std::fill(val_.begin(), val_.end(), -1);
        std::fill(in_.begin(), in_.end(), 0);
        std::fill(out_.begin(), out_.end(), 0);
        trail_.clear();
        queue_.clear();
        lin_pos_ = 0;
        if (P_.linear) lin_.init(*P_.linear);
    }

    // Initial propagation: every line, plus base-determined variables.
    bool start() {
        for (std::uint32_t l = 0; l < G_.num_lines(); ++l) queue_.push_back(l);
        if (P_.linear) {
            std::vector<std::pair<std::uint32_t, std::uint32_t>> det;
            bool ok = true;
            lin_.determined(det, ok);
            if (!ok) return false;
            for (auto [q, x] : det)
                if (!assign(q, static_cast<std::int8_t>(x))) return false;
        }
        return propagate();
    }

    bool assign(std::uint32_t v, std::int8_t x) {
        if (val_[v] == x) return true;
        if (val_[v] != -1) return false;
        val_[v] = x;
        trail_.push_back(v);
        const std::uint32_t m = P_.m, L = P_.line_size;
        bool ok = true;
        for (auto p : P_.var_points.row(v))
            for (auto l : G_.lines_on(p)) {
                if (x) ++in_[l];
                else ++out_[l];
                if (in_[l] > m || L - out_[l] < m) ok = false;
                else if (in_[l] + out_[l] < L && (in_[l] == m || L - out_[l] == m)) queue_.push_back(l);
            }
        return ok;
    }

    bool csp_fixpoint() {
        while (!queue_.empty()) {
            const std::uint32_t l = queue_.back();
            queue_.pop_back();
            if (in_[l] + out_[l] == P_.line_size) continue;
            std::int8_t x;
            if (in_[l] == P_.m) x = 0;
            else if (P_.line_size - out_[l] == P_.m) x = 1;
            else continue;
            for (auto p : G_.line(l)) {
                const auto v = P_.point_var[p];
                if (val_[v] == -1) {
                    ++propagations;
                    if (!assign(v, x)) {
                        queue_.clear();
                        return false;
                    }
                }
            }
        }
        return true;
    }

    bool propagate() {
        while (true) {
            if (!csp_fixpoint()) return false;
            if (!P_.linear || lin_pos_ == trail_.size()) return true;
            while (lin_pos_ < trail_.size()) {
                const auto v = trail_[lin_pos_++];
                det_.clear();
                if (!lin_.fix(v, static_cast<std::uint32_t>(val_[v]), det_, eliminations)) return false;
                for (auto [q, x] : det_)
                    if (val_[q] == -1) {
                        ++propagations;
                        if (!assign(q, static_cast<std::int8_t>(x))) return false;
                    }
            }
        }
    }

    struct Mark {
        std::size_t trail, lin;
    };
    Mark mark() { return {trail_.size(), P_.linear ? lin_.begin_node() : 0}; }

    void undo(const Mark& mk) {
        while (trail_.size() > mk.trail) {
            const auto v = trail_.back();
            trail_.pop_back();
            const bool x = val_[v] == 1;
            for (auto p : P_.var_points.row(v))
                for (auto l : G_.lines_on(p)) {
                    if (x) --in_[l];
                    else --out_[l];
                }
            val_[v] = -1;
        }
        queue_.clear();
        lin_pos_ = mk.trail;
        if (P_.linear) lin_.undo(mk.lin);
    }

    // Undecided variable on the line with the fewest completions.
    std::optional<std::uint32_t> choose() const {
        std::uint64_t best = UINT64_MAX;
        std::uint32_t best_line = 0;
        const std::uint32_t L = P_.line_size;
        for (std::uint32_t l = 0; l < in_.size(); ++l) {
            const std::uint32_t u = L - in_[l] - out_[l];
            if (!u) continue;
            const std::uint64_t ways = binom(u, P_.m - in_[l]);
            if (ways < best) {
                best = ways;
                best_line = l;
                if (ways <= 2) break;
            }
        }
        if (best == UINT64_MAX) return std::nullopt;
        for (auto p : G_.line(best_line))
            if (val_[P_.point_var[p]] == -1) return P_.point_var[p];
        return std::nullopt;
    }

    bool tick() {
        if (sh_.stop.load(std::memory_order_relaxed)) return false;
        ++nodes;
        const auto total = sh_.nodes.fetch_add(1, std::memory_order_relaxed) + 1;
        if (sh_.budget && total > sh_.budget) {
            sh_.budget_hit = true;
            sh_.stop = true;
            return false;
        }
        return true;
    }

    void dfs(std::uint32_t depth, bool sym) {
        if (!tick()) return;
        max_depth = std::max(max_depth, depth);
        const auto v = choose();
        if (!v) {
            record();
            return;
        }
        std::vector<std::uint32_t> orbit{*v};
        bool child_sym = false;
        if (sym) {
            const auto gens = stabilizer_generators();
            if (!gens.empty()) {
                child_sym = true;
                orbit = orbit_of(*v, gens);
            }
        }
        {
            const Mark mk = mark();
            if (assign(*v, 1) && propagate()) dfs(depth + 1, child_sym);
            undo(mk);
            if (sh_.stop.load(std::memory_order_relaxed)) return;
        }
        const Mark mk = mark();
        bool ok = true;
        for (std::size_t i = 0; ok && i < orbit.size(); ++i) ok = assign(orbit[i], 0);
        if (ok && propagate()) dfs(depth + 1, child_sym);
        undo(mk);
    }

    // Automorphisms of the geometry fixing the current in/out/undecided
    // coloring (point variables only).
    std::vector<std::vector<std::uint32_t>> stabilizer_generators() {
        ++symmetry_calls;
        std::vector<std::uint8_t> color(P_.V);
        for (std::uint32_t p = 0; p < P_.V; ++p) color[p] = val_[p] == 1 ? 0 : val_[p] == 0 ? 1 : 2;
        return canonical_labeling(G_, color).generators;
    }

    static std::vector<std::uint32_t> orbit_of(std::uint32_t v, const std::vector<std::vector<std::uint32_t>>& gens) {
        std::vector<std::uint32_t> orbit{v};
        std::set<std::uint32_t> seen{v};
        for (std::size_t i = 0; i < orbit.size(); ++i)
            for (const auto& g : gens)
                if (seen.insert(g[orbit[i]]).second) orbit.push_back(g[orbit[i]]);
        std::sort(orbit.begin(), orbit.end());
        return orbit;
    }

    void record() {
        std::vector<std::uint32_t> members;
        for (std::uint32_t v = 0; v < P_.V; ++v)
            if (val_[v] == 1)
                for (auto p : P_.var_points.row(v)) members.push_back(p);
        std::sort(members.begin(), members.end());
        solutions.push_back(std::move(members));
        if (sh_.first) sh_.stop = true;
    }

    // Root subproblem: `outs` excluded, `in` (if any) included.
    void run(std::span<const std::uint32_t> outs, std::optional<std::uint32_t> in, bool sym) {
        reset();
        if (!tick()) return;
        const Mark mk = mark();
        bool ok = start();
        for (std::size_t i = 0; ok && i < outs.size(); ++i) ok = assign(outs[i], 0) && propagate();
        if (ok && in) ok = assign(*in, 1) && propagate();
        if (ok) dfs(1, sym);
        undo(mk);
    }

    std::vector<std::int8_t>& values() { return val_; }

    std::uint64_t nodes = 0, propagations = 0, eliminations = 0, symmetry_calls = 0;
    std::uint32_t max_depth = 0;
    std::vector<std::vector<std::uint32_t>> solutions;

private:
    static std::uint64_t binom(std::uint32_t n, std::uint32_t k) {
        if (k > n) return 0;
        std::uint64_t r = 1;
        for (std::uint32_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
        return r;
    }

    const Problem& P_;
    const Geometry& G_;
    Shared& sh_;
    std::vector<std::int8_t> val_;
    std::vector<std::uint16_t> in_, out_;
    std::vector<std::uint32_t> trail_, queue_;
    std::size_t lin_pos_ = 0;
    Linear lin_;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> det_;
};

Problem make_problem(const Geometry& G, std::uint32_t m, const PrescribedGroup* group) {
    Problem P;
    P.G = &G;
    P.m = m;
    P.line_size = G.s() + 1;
    if (group) {
        if (group->orbit_of.size() != G.n()) throw SearchError("prescribed group acts on a different point count");
        P.V = static_cast<std::uint32_t>(group->num_orbits());
        P.point_var = group->orbit_of;
        P.var_points = kernels::Csr::from_lists(group->orbits);
    } else {
        P.V = G.n();
        P.point_var.resize(G.n());
        std::vector<std::vector<std::uint32_t>> singles(G.n());
        for (std::uint32_t p = 0; p < G.n(); ++p) {
            P.point_var[p] = p;
            singles[p] = {p};
        }
        P.var_points = kernels::Csr::from_lists(singles);
    }
    return P;
}

// Root subproblems: orbit k of the symmetry group on variables (ordered by
// smallest variable) contributes "earlier orbits out, representative in";
// the last subproblem has every variable out.
struct RootPlan {
    std::vector<std::vector<std::uint32_t>> orbits;
};

RootPlan root_plan(std::uint32_t V, const PrescribedGroup* sym) {
    RootPlan plan;
    if (sym) {
        plan.orbits = sym->orbits;
    } else {
        plan.orbits.resize(V);
        for (std::uint32_t v = 0; v < V; ++v) plan.orbits[v] = {v};
    }
    return plan;
}

struct Journal {
    std::map<std::uint32_t, std::uint64_t> done;  // subproblem -> nodes
    std::map<std::uint32_t, std::vector<std::vector<std::uint32_t>>> sols;
};

std::string options_digest(const SearchOptions& o) {
    std::ostringstream os;
    os << "mode " << (o.mode == SearchMode::all ? "all" : "first") << "\n"
       << "group " << (o.group ? o.group->digest : "none") << "\n"
       << "symmetry " << (o.symmetry ? "aut" : "none") << "\n";
    return sha256_hex(os.str());
}

Journal open_journal(const std::filesystem::path& path, const Geometry& G, const SearchOptions& o) {
    Journal j;
    const std::string digest = options_digest(o);
    if (!std::filesystem::exists(path)) {
        std::ofstream out(path);
        if (!out) throw SearchError("cannot create checkpoint " + path.string());
        out << "CKP 1\ngeom " << G.hash() << "\nm " << o.m << "\noptions " << digest << "\n";
        return j;
    }
    std::istringstream in(read_file(path));
    std::string line, key, value;
    auto header = [&](const char* want) {
        if (!std::getline(in, line)) throw SearchError("truncated checkpoint header");
        std::istringstream ls(line);
        ls >> key >> value;
        if (key != want) throw SearchError("malformed checkpoint header line '" + line + "'");
        return value;
    };
    if (!std::getline(in, line) || line != "CKP 1") throw SearchError("not a checkpoint file: " + path.string());
    if (header("geom") != G.hash()) throw SearchError("checkpoint/geometry hash mismatch: checkpoint belongs to " + value);
    if (header("m") != std::to_string(o.m)) throw SearchError("checkpoint was written for m = " + value);
    if (header("options") != digest) throw SearchError("checkpoint was written with different search options");
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string kind;
        std::uint32_t k;
        if (!(ls >> kind >> k)) continue;  // tolerate a torn final line
        if (kind == "done") {
            std::string w;
            std::uint64_t nodes = 0;
            ls >> w >> nodes;
            j.done[k] = nodes;
        } else if (kind == "sol") {
            std::vector<std::uint32_t> s;
            std::uint32_t x;
            while (ls >> x) s.push_back(x);
            j.sols[k].push_back(std::move(s));
        }
    }
    // Solutions of unfinished subproblems are recomputed.
    for (auto it = j.sols.begin(); it != j.sols.end();)
        it = j.done.count(it->first) ? std::next(it) : j.sols.erase(it);
    return j;
}

}  // namespace

PrescribedGroup symmetry_on_variables(const PrescribedGroup& symmetry, const PrescribedGroup* group) {
    if (!group) return symmetry;
    const auto& H = *group;
    std::vector<std::vector<std::uint32_t>> perms;
    for (const auto& g : symmetry.perms) {
        std::vector<std::uint32_t> img(H.num_orbits());
        bool ok = true;
        for (std::size_t o = 0; o < H.num_orbits() && ok; ++o) {
            const auto target = H.orbit_of[g[H.orbits[o][0]]];
            for (auto p : H.orbits[o])
                if (H.orbit_of[g[p]] != target) ok = false;
            img[o] = target;
        }
        if (ok) perms.push_back(std::move(img));
    }
    auto S = group_from_permutations(static_cast<std::uint32_t>(H.num_orbits()), std::move(perms));
    S.digest = sha256_hex(symmetry.digest + "/" + H.digest);
    return S;
}

Propagation propagate(const Geometry& G, std::uint32_t m, std::vector<std::int8_t>& state) {
    if (state.size() != G.n()) throw SearchError("state length does not match the number of points");
    Problem P = make_problem(G, m, nullptr);
    Shared sh;
    Solver S(P, sh);
    S.reset();
    bool ok = true;
    for (std::uint32_t p = 0; p < G.n() && ok; ++p)
        if (state[p] != -1) ok = S.assign(p, state[p]);
    if (ok) ok = S.start();
    if (!ok) return Propagation::conflict;
    state = S.values();
    return Propagation::fixpoint;
}

SearchResult search(const Geometry& G, const SearchOptions& opts) {
    if (opts.m > G.s() + 1) throw SearchError("m must lie in 0.." + std::to_string(G.s() + 1));
    Problem P = make_problem(G, opts.m, opts.group);
    SearchResult res;
    res.stats.variables = P.V;

    if (opts.linear && P.V <= kLinearMaxVariables) {
        auto base = linear_base(P);
        if (base.inconsistent || double(P.V) * base.r * base.r <= double(opts.linear_cap)) {
            res.stats.linear_used = true;
            res.stats.linear_rank = base.r;
            P.linear = std::move(base);
        }
    }

    PrescribedGroup sym_vars;
    const PrescribedGroup* sym = nullptr;
    if (opts.symmetry) {
        const std::vector<std::uint8_t> plain(G.n(), 0);
        auto aut = group_from_permutations(G.n(), canonical_labeling(G, plain).generators);
        sym_vars = symmetry_on_variables(aut, opts.group);
        sym = &sym_vars;
    }
    // orbital branching needs point variables
    const bool orbital = opts.symmetry && !opts.group;
    const RootPlan plan = root_plan(P.V, sym);
    const auto K = static_cast<std::uint32_t>(plan.orbits.size() + 1);
    res.stats.subproblems = K;

    Journal journal;
    std::ofstream jout;
    if (opts.checkpoint) {
        journal = open_journal(*opts.checkpoint, G, opts);
        jout.open(*opts.checkpoint, std::ios::app);
        if (!jout) throw SearchError("cannot append to checkpoint " + opts.checkpoint->string());
    }

    Shared sh;
    sh.budget = opts.node_budget;
    sh.first = opts.mode == SearchMode::first;
    std::vector<std::vector<std::uint32_t>> found;
    for (auto& [k, nodes] : journal.done) {
        sh.nodes += nodes;
        ++res.stats.resumed;
        ++res.stats.subproblems_done;
        for (auto& s : journal.sols[k]) found.push_back(s);
    }
    if (sh.first && !found.empty()) sh.stop = true;

    std::vector<std::uint32_t> todo;
    for (std::uint32_t k = 0; k < K; ++k)
        if (!journal.done.count(k)) todo.push_back(k);

    if (P.linear && P.linear->inconsistent) {
        // No solution even over GF(p): every subproblem is empty.
        for (auto k : todo) {
            if (jout) jout << "done " << k << " nodes 0\n";
            ++res.stats.subproblems_done;
        }
        todo.clear();
    }

    std::mutex mu;
    const int threads = static_cast<int>(std::max(1u, opts.threads));
    std::uint64_t props = 0, elims = 0, sym_calls = 0;
    std::uint32_t depth = 0;
#pragma omp parallel num_threads(threads)
    {
        Solver S(P, sh);
#pragma omp for schedule(dynamic, 1)
        for (std::int64_t ti = 0; ti < static_cast<std::int64_t>(todo.size()); ++ti) {
            if (sh.stop) continue;
            const std::uint32_t k = todo[ti];
            std::vector<std::uint32_t> outs;
            for (std::uint32_t j = 0; j < k && j < plan.orbits.size(); ++j)
                outs.insert(outs.end(), plan.orbits[j].begin(), plan.orbits[j].end());
            if (k == plan.orbits.size())
                for (std::uint32_t v = 0; v < P.V; ++v) outs.push_back(v);
            std::optional<std::uint32_t> in;
            if (k < plan.orbits.size()) in = plan.orbits[k][0];
            const auto before_nodes = S.nodes;
            S.solutions.clear();
            S.run(outs, in, orbital);
            const bool complete = !sh.budget_hit && (!sh.stop || !S.solutions.empty() || !sh.first);
            std::lock_guard<std::mutex> lock(mu);
            for (auto& s : S.solutions) found.push_back(s);
            // a subproblem interrupted by another worker's first solution is not complete
            const bool finished = complete && !(sh.first && sh.stop && S.solutions.empty());
            if (finished) {
                ++res.stats.subproblems_done;
                if (jout) {
                    for (auto& s : S.solutions) {
                        jout << "sol " << k;
                        for (auto x : s) jout << " " << x;
                        jout << "\n";
                    }
                    jout << "done " << k << " nodes " << (S.nodes - before_nodes) << "\n";
                    jout.flush();
                }
                if (opts.progress) opts.progress(k, K);
            } else if (jout) {
                for (auto& s : S.solutions) {
                    jout << "sol " << k;
                    for (auto x : s) jout << " " << x;
                    jout << "\n";
                }
                jout.flush();
            }
        }
#pragma omp critical(search_stats)
        {
            props += S.propagations;
            elims += S.eliminations;
            sym_calls += S.symmetry_calls;
            depth = std::max(depth, S.max_depth);
        }
    }

    res.stats.nodes = sh.nodes.load();
    if (sh.budget && res.stats.nodes > sh.budget) res.stats.nodes = sh.budget;
    res.stats.propagations = props;
    res.stats.eliminations = elims;
    res.stats.symmetry_calls = sym_calls;
    res.stats.max_depth = depth;

    std::sort(found.begin(), found.end());
    found.erase(std::unique(found.begin(), found.end()), found.end());
    if (sh.first && found.size() > 1) found.resize(1);
    for (auto& s : found) {
        auto cert = certify(G, s);
        if (cert.m != opts.m) throw std::logic_error("search produced a set with the wrong m");
        if (opts.group && !opts.group->is_union_of_orbits(cert.members))
            throw std::logic_error("search produced a set that is not a union of orbits");
        res.certificates.push_back(std::move(cert));
    }

    if (sh.budget_hit) res.status = SearchStatus::budget;
    else if (sh.first && !res.certificates.empty()) res.status = SearchStatus::found;
    else res.status = SearchStatus::exhausted;
    return res;
}

}  // namespace dualpolar
