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

#include "dualpolar/canon.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "dualpolar/kernels.hpp"

namespace dualpolar {

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t x) {
    h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdULL;
    return h ^ (h >> 33);
}

// Ordered partition: cells are position ranges of lab.
struct Partition {
    std::vector<std::uint32_t> lab, pos, cell, end;
    std::uint32_t ncells = 0;

    std::uint32_t size() const { return static_cast<std::uint32_t>(lab.size()); }
    bool discrete() const { return ncells == size(); }
};

class Refiner {
public:
    explicit Refiner(const kernels::Csr& adj) : adj_(adj) {
        const auto N = adj.rows();
        cnt_.assign(N, 0);
        moved_.assign(N, 0);
        inq_.assign(N, 0);
        mark_.assign(N, 0);
    }

    // Refines to the coarsest equitable refinement, splitting with the cells
    // starting at `queue`. Returns the trace hash of the splits.
    std::uint64_t refine(Partition& P, std::vector<std::uint32_t> queue) {
        std::uint64_t h = 0x2545f4914f6cdd1dULL;
        for (auto c : queue) inq_[c] = 1;
        for (std::size_t head = 0; head < queue.size() && !P.discrete(); ++head) {
            const std::uint32_t W = queue[head];
            inq_[W] = 0;
            touched_.clear();
            tcells_.clear();
            for (std::uint32_t i = W; i < P.end[W]; ++i)
                for (auto u : adj_.row(P.lab[i]))
                    if (cnt_[u]++ == 0) touched_.push_back(u);
            for (auto u : touched_) {
                const std::uint32_t c = P.cell[P.pos[u]];
                if (!mark_[c]) {
                    mark_[c] = 1;
                    tcells_.push_back(c);
                }
                // move u into the touched tail of its cell
                const std::uint32_t dst = P.end[c] - 1 - moved_[c]++;
                const std::uint32_t src = P.pos[u];
                const std::uint32_t w = P.lab[dst];
                P.lab[dst] = u;
                P.pos[u] = dst;
                P.lab[src] = w;
                P.pos[w] = src;
            }
            std::sort(tcells_.begin(), tcells_.end());
            for (auto c : tcells_) {
                mark_[c] = 0;
                const std::uint32_t b = P.end[c], t = moved_[c];
                moved_[c] = 0;
                if (b - c == 1) continue;
                const std::uint32_t z = b - t;  // [c, z) untouched
                std::sort(P.lab.begin() + z, P.lab.begin() + b,
                          [&](std::uint32_t x, std::uint32_t y) { return cnt_[x] < cnt_[y]; });
                for (std::uint32_t i = z; i < b; ++i) P.pos[P.lab[i]] = i;
                frags_.clear();
                if (z > c) frags_.push_back(c);
                for (std::uint32_t i = z; i < b; ++i)
                    if (i == z || cnt_[P.lab[i]] != cnt_[P.lab[i - 1]]) frags_.push_back(i);
                if (frags_.size() == 1) continue;
                h = mix(h, W);
                h = mix(h, c);
                std::uint32_t largest = 0, largest_size = 0;
                for (std::size_t f = 0; f < frags_.size(); ++f) {
                    const std::uint32_t fs = frags_[f];
                    const std::uint32_t fe = f + 1 < frags_.size() ? frags_[f + 1] : b;
                    h = mix(h, fs >= z ? cnt_[P.lab[fs]] : 0);
                    h = mix(h, fe - fs);
                    if (fe - fs > largest_size) {
                        largest_size = fe - fs;
                        largest = fs;
                    }
                    P.end[fs] = fe;
                    if (fs != c)
                        for (std::uint32_t i = fs; i < fe; ++i) P.cell[i] = fs;
                }
                P.ncells += static_cast<std::uint32_t>(frags_.size() - 1);
                const bool was_queued = inq_[c];
                for (auto fs : frags_) {
                    if (was_queued ? fs == c : fs == largest) continue;
                    if (!inq_[fs]) {
                        inq_[fs] = 1;
                        queue.push_back(fs);
                    }
                }
            }
            for (auto u : touched_) cnt_[u] = 0;
        }
        for (auto c : queue) inq_[c] = 0;
        return mix(h, P.ncells);
    }

private:
    const kernels::Csr& adj_;
    std::vector<std::uint32_t> cnt_, moved_, touched_, tcells_, frags_;
    std::vector<std::uint8_t> inq_, mark_;
};

struct Leaf {
    std::vector<std::uint64_t> trace;
    std::vector<std::uint32_t> graph;
    std::vector<std::uint32_t> lab;
    std::vector<std::uint32_t> path;
};

class Canonizer {
public:
    Canonizer(const Geometry& G, std::span<const std::uint8_t> color, const CanonOptions& opts)
        : G_(G), n_(G.n()), opts_(opts) {
        if (color.size() != n_) throw CanonError("point coloring has the wrong length");
        const auto L = static_cast<std::uint32_t>(G.num_lines());
        std::vector<std::vector<std::uint32_t>> lists(n_ + L);
        for (std::uint32_t l = 0; l < L; ++l)
            for (auto p : G.line(l)) {
                lists[p].push_back(n_ + l);
                lists[n_ + l].push_back(p);
            }
        adj_ = kernels::Csr::from_lists(lists);
        N_ = n_ + L;
        refiner_.emplace(adj_);

        // cells: one per point color (ascending), then the lines
        const std::uint32_t ncolors = color.empty() ? 0 : *std::max_element(color.begin(), color.end()) + 1u;
        Partition P;
        P.lab.reserve(N_);
        std::vector<std::uint32_t> bounds{0};
        for (std::uint32_t c = 0; c < ncolors; ++c) {
            for (std::uint32_t p = 0; p < n_; ++p)
                if (color[p] == c) P.lab.push_back(p);
            bounds.push_back(static_cast<std::uint32_t>(P.lab.size()));
            header_.push_back(bounds.back() - bounds[bounds.size() - 2]);
        }
        for (std::uint32_t l = 0; l < L; ++l) P.lab.push_back(n_ + l);
        bounds.push_back(N_);
        P.pos.assign(N_, 0);
        for (std::uint32_t i = 0; i < N_; ++i) P.pos[P.lab[i]] = i;
        P.cell.assign(N_, 0);
        P.end.assign(N_, 0);
        std::vector<std::uint32_t> starts;
        for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
            const std::uint32_t s = bounds[k], e = bounds[k + 1];
            if (e == s) continue;
            starts.push_back(s);
            P.end[s] = e;
            for (std::uint32_t i = s; i < e; ++i) P.cell[i] = s;
            ++P.ncells;
        }
        root_ = std::move(P);
        root_trace_ = refiner_->refine(root_, starts);
    }

    Labeling run() {
        std::vector<std::uint64_t> trace{root_trace_};
        std::vector<std::uint32_t> path;
        search(root_, trace, path);
        Labeling out;
        out.order = best_->lab;
        out.nodes = nodes_;
        out.bytes = bytes(*best_);
        for (const auto& g : gens_) out.generators.emplace_back(g.begin(), g.begin() + n_);
        return out;
    }

private:
    std::vector<std::uint32_t> graph_of(const Partition& P) const {
        // per line position (ascending): sorted positions of its points
        std::vector<std::uint32_t> g;
        g.reserve(adj_.target.size() / 2);
        std::vector<std::uint32_t> row;
        for (std::uint32_t i = n_; i < N_; ++i) {
            row.clear();
            for (auto u : adj_.row(P.lab[i])) row.push_back(P.pos[u]);
            std::sort(row.begin(), row.end());
            g.insert(g.end(), row.begin(), row.end());
        }
        return g;
    }

    std::string bytes(const Leaf& leaf) const {
        std::string out = "dpcf1";
        auto put = [&](std::uint32_t x) {
            for (int k = 0; k < 4; ++k) out.push_back(static_cast<char>((x >> (8 * k)) & 0xff));
        };
        put(n_);
        put(N_ - n_);
        put(static_cast<std::uint32_t>(header_.size()));
        for (auto h : header_) put(h);
        for (auto x : leaf.graph) put(x);
        return out;
    }

    static bool prefix_equal(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
        return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
    }

    // < 0 if the prefix is smaller than b's prefix of the same length, etc.
    static int prefix_compare(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
        const std::size_t k = std::min(a.size(), b.size());
        for (std::size_t i = 0; i < k; ++i)
            if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
        return 0;
    }

    void add_generator(const Leaf& target, const Partition& P) {
        std::vector<std::uint32_t> g(N_);
        for (std::uint32_t v = 0; v < N_; ++v) g[v] = target.lab[P.pos[v]];
        bool identity = true;
        for (std::uint32_t v = 0; v < N_ && identity; ++v) identity = g[v] == v;
        if (!identity) gens_.push_back(std::move(g));
    }

    // Returns the level to jump back to, or -1.
    int search(const Partition& P, std::vector<std::uint64_t>& trace, std::vector<std::uint32_t>& path) {
        if (++nodes_ > opts_.node_cap)
            throw CanonError("canonical labeling exceeded the node cap of " + std::to_string(opts_.node_cap));
        const bool on_first = first_ && prefix_equal(trace, first_->trace);
        if (best_ && !on_first && prefix_compare(trace, best_->trace) > 0) return -1;

        if (P.discrete()) {
            Leaf leaf{trace, graph_of(P), P.lab, path};
            if (!first_) {
                first_ = leaf;
                best_ = std::move(leaf);
                return -1;
            }
            if (leaf.trace == first_->trace && leaf.graph == first_->graph) {
                add_generator(*first_, P);
                std::size_t j = 0;
                while (j < path.size() && j < first_->path.size() && path[j] == first_->path[j]) ++j;
                return static_cast<int>(j);
            }
            const int c = leaf.trace != best_->trace ? (leaf.trace < best_->trace ? -1 : 1)
                                                       : (leaf.graph < best_->graph ? -1 : leaf.graph == best_->graph ? 0 : 1);
            if (c < 0) best_ = std::move(leaf);
            else if (c == 0) add_generator(*best_, P);
            return -1;
        }

        // first smallest non-singleton cell
        std::uint32_t target = 0, tsize = UINT32_MAX;
        for (std::uint32_t c = 0; c < N_; c = P.end[c]) {
            const std::uint32_t sz = P.end[c] - c;
            if (sz > 1 && sz < tsize) {
                tsize = sz;
                target = c;
            }
        }
        std::vector<std::uint32_t> children(P.lab.begin() + target, P.lab.begin() + P.end[target]);
        std::sort(children.begin(), children.end());

        const int level = static_cast<int>(path.size());
        std::vector<std::uint32_t> explored;
        std::size_t gens_seen = SIZE_MAX;
        std::vector<std::uint32_t> orbit;  // union-find over vertices, lazily built
        auto find = [&](std::uint32_t x) {
            while (orbit[x] != x) x = orbit[x] = orbit[orbit[x]];
            return x;
        };
        for (auto w : children) {
            if (gens_.size() != gens_seen && !gens_.empty()) {
                gens_seen = gens_.size();
                orbit.resize(N_);
                std::iota(orbit.begin(), orbit.end(), 0u);
                for (const auto& g : gens_) {
                    bool fixes = true;
                    for (auto v : path)
                        if (g[v] != v) {
                            fixes = false;
                            break;
                        }
                    if (!fixes) continue;
                    for (auto v : children) {
                        const auto a = find(v), b = find(g[v]);
                        if (a != b) orbit[std::max(a, b)] = std::min(a, b);
                    }
                }
            }
            if (!orbit.empty()) {
                bool seen = false;
                for (auto u : explored)
                    if (find(u) == find(w)) {
                        seen = true;
                        break;
                    }
                if (seen) continue;
            }
            Partition C = P;
            const std::uint32_t i = C.pos[w];
            const std::uint32_t x = C.lab[target];
            C.lab[target] = w;
            C.pos[w] = target;
            C.lab[i] = x;
            C.pos[x] = i;
            C.end[target + 1] = C.end[target];
            C.end[target] = target + 1;
            for (std::uint32_t k = target + 1; k < C.end[target + 1]; ++k) C.cell[k] = target + 1;
            ++C.ncells;
            trace.push_back(refiner_->refine(C, {target}));
            path.push_back(w);
            const int r = search(C, trace, path);
            trace.pop_back();
            path.pop_back();
            explored.push_back(w);
            if (r >= 0 && r < level) return r;
        }
        return -1;
    }

    const Geometry& G_;
    std::uint32_t n_ = 0, N_ = 0;
    std::vector<std::uint32_t> header_;  // points per color
    CanonOptions opts_;
    kernels::Csr adj_;
    std::optional<Refiner> refiner_;
    Partition root_;
    std::uint64_t root_trace_ = 0;
    std::optional<Leaf> first_, best_;
    std::vector<std::vector<std::uint32_t>> gens_;
    std::uint64_t nodes_ = 0;
};

}  // namespace

Labeling canonical_labeling(const Geometry& G, std::span<const std::uint8_t> point_color, const CanonOptions& opts) {
    Canonizer c(G, point_color, opts);
    return c.run();
}

Labeling canonical_labeling(const Geometry& G, std::span<const std::uint32_t> marked, const CanonOptions& opts) {
    std::vector<std::uint8_t> color(G.n(), 1);
    for (auto p : marked) {
        if (p >= G.n()) throw CanonError("marked point out of range");
        color[p] = 0;
    }
    return canonical_labeling(G, color, opts);
}

std::string canonical_form(const Geometry& G, const OvoidCertificate& cert, const CanonOptions& opts) {
    if (cert.geom_hash != G.hash()) throw CanonError("certificate belongs to a different geometry");
    return canonical_labeling(G, cert.members, opts).bytes;
}

Classes classify(const Geometry& G, std::span<const OvoidCertificate> certs, const CanonOptions& opts) {
    std::vector<std::string> forms(certs.size());
    std::string error;
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(certs.size()); ++i) {
        try {
            forms[i] = canonical_form(G, certs[i], opts);
        } catch (const std::exception& e) {
#pragma omp critical(classify_error)
            error = e.what();
        }
    }
    if (!error.empty()) throw CanonError(error);
    Classes out;
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < forms.size(); ++i) {
        auto [it, fresh] = index.emplace(forms[i], out.members.size());
        if (fresh) out.members.emplace_back();
        out.members[it->second].push_back(i);
    }
    return out;
}

StabilizerReport stabilizer_in_group(const Geometry& G, const OvoidCertificate& cert, const PrescribedGroup& group,
                                     std::size_t cap) {
    StabilizerReport rep;
    std::vector<std::uint8_t> in(G.n(), 0);
    for (auto p : cert.members) in[p] = 1;
    if (!group.gens.empty()) {
        const FormSpace& S = G.form();
        const auto elems = enumerate_elements(S, group.gens, cap);
        rep.group_order = elems.size();
        std::vector<std::uint8_t> keep(elems.size(), 0);
#pragma omp parallel for schedule(dynamic, 16)
        for (std::int64_t e = 0; e < static_cast<std::int64_t>(elems.size()); ++e) {
            bool ok = true;
            for (auto p : cert.members) {
                const auto img = G.index_of(apply(S, G.points()[p], elems[e].m, elems[e].frob));
                if (!img || !in[*img]) {
                    ok = false;
                    break;
                }
            }
            keep[e] = ok;
        }
        for (std::size_t e = 0; e < elems.size(); ++e)
            if (keep[e]) {
                ++rep.order;
                ++rep.element_orders[element_order(S, elems[e])];
            }
        return rep;
    }
    // permutation enumeration
    using Perm = std::vector<std::uint32_t>;
    std::vector<Perm> elems;
    std::set<Perm> seen;
    Perm id(G.n());
    std::iota(id.begin(), id.end(), 0u);
    elems.push_back(id);
    seen.insert(id);
    for (std::size_t h = 0; h < elems.size(); ++h)
        for (const auto& g : group.perms) {
            Perm e(G.n());
            for (std::uint32_t x = 0; x < G.n(); ++x) e[x] = g[elems[h][x]];
            if (seen.insert(e).second) {
                if (elems.size() >= cap) throw GroupError("group has more than " + std::to_string(cap) + " elements");
                elems.push_back(std::move(e));
            }
        }
    rep.group_order = elems.size();
    for (const auto& e : elems) {
        bool ok = true;
        for (auto p : cert.members)
            if (!in[e[p]]) {
                ok = false;
                break;
            }
        if (!ok) continue;
        ++rep.order;
        std::uint64_t k = 1;
        Perm x = e;
        while (x != id) {
            Perm y(G.n());
            for (std::uint32_t i = 0; i < G.n(); ++i) y[i] = e[x[i]];
            x = std::move(y);
            ++k;
        }
        ++rep.element_orders[k];
    }
    return rep;
}

}  // namespace dualpolar
