#pragma once

// Directed-graph presentations of shifts of finite type: vertex shifts,
// block enumeration, higher-block recoding, irreducibility, and return-length
// analysis between distinguished vertex sets.
//
// Graphs have no multiple edges.  Vertices are opaque integer ids; generated
// graphs carry a human-readable name map for output.  All values are
// immutable once built and every operation is a pure function.

#include <algorithm>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gapcode/errors.hpp"
#include "gapcode/eventually_periodic_set.hpp"

namespace gapcode {

using VertexId = int;
using Word = std::string;  // finite symbol sequence over a small alphabet

struct LabeledGraph {
    std::vector<VertexId> vertices;               // sorted, unique
    std::set<std::pair<VertexId, VertexId>> edges;
    std::map<VertexId, char> label;
    std::map<VertexId, std::string> name;         // optional, for output only

    bool has_vertex(VertexId v) const {
        return std::binary_search(vertices.begin(), vertices.end(), v);
    }
    bool has_edge(VertexId u, VertexId v) const { return edges.count({u, v}) > 0; }

    void add_vertex(VertexId v, char lab, std::string nm = "") {
        auto it = std::lower_bound(vertices.begin(), vertices.end(), v);
        if (it == vertices.end() || *it != v) vertices.insert(it, v);
        label[v] = lab;
        if (!nm.empty()) name[v] = std::move(nm);
    }
    void add_edge(VertexId u, VertexId v) {
        if (!has_vertex(u) || !has_vertex(v))
            throw std::invalid_argument("edge endpoint is not a vertex");
        edges.insert({u, v});
    }

    std::map<VertexId, std::vector<VertexId>> successors() const {
        std::map<VertexId, std::vector<VertexId>> out;
        for (VertexId v : vertices) out[v];
        for (auto& [u, v] : edges) out[u].push_back(v);
        return out;
    }
    std::map<VertexId, std::vector<VertexId>> predecessors() const {
        std::map<VertexId, std::vector<VertexId>> out;
        for (VertexId v : vertices) out[v];
        for (auto& [u, v] : edges) out[v].push_back(u);
        return out;
    }

    std::string display(VertexId v) const {
        auto it = name.find(v);
        return it != name.end() ? it->second : std::to_string(v);
    }

    bool operator==(const LabeledGraph& o) const {
        return vertices == o.vertices && edges == o.edges && label == o.label;
    }
};

// Drop vertices with no incoming or no outgoing edge until none remain.
// The vertex shift only sees the essential part of the graph.
inline LabeledGraph trim_stranded(const LabeledGraph& g) {
    std::set<VertexId> alive(g.vertices.begin(), g.vertices.end());
    bool changed = true;
    while (changed) {
        changed = false;
        std::map<VertexId, int> outdeg, indeg;
        for (auto& [u, v] : g.edges)
            if (alive.count(u) && alive.count(v)) { outdeg[u]++; indeg[v]++; }
        for (VertexId v : std::vector<VertexId>(alive.begin(), alive.end())) {
            if (outdeg[v] == 0 || indeg[v] == 0) { alive.erase(v); changed = true; }
        }
    }
    LabeledGraph out;
    for (VertexId v : g.vertices)
        if (alive.count(v)) {
            auto nm = g.name.find(v);
            out.add_vertex(v, g.label.at(v), nm != g.name.end() ? nm->second : "");
        }
    for (auto& [u, v] : g.edges)
        if (alive.count(u) && alive.count(v)) out.add_edge(u, v);
    return out;
}

inline LabeledGraph induced_subgraph(const LabeledGraph& g, const std::set<VertexId>& sub) {
    LabeledGraph out;
    for (VertexId v : g.vertices)
        if (sub.count(v)) {
            auto nm = g.name.find(v);
            out.add_vertex(v, g.label.at(v), nm != g.name.end() ? nm->second : "");
        }
    for (auto& [u, v] : g.edges)
        if (sub.count(u) && sub.count(v)) out.add_edge(u, v);
    return out;
}

// Strong connectivity of the essential part.
inline bool is_irreducible(const LabeledGraph& g) {
    LabeledGraph t = trim_stranded(g);
    if (t.vertices.empty()) return false;
    auto reach = [&](const std::map<VertexId, std::vector<VertexId>>& adj, VertexId s) {
        std::set<VertexId> seen{s};
        std::queue<VertexId> q;
        q.push(s);
        while (!q.empty()) {
            VertexId u = q.front();
            q.pop();
            auto it = adj.find(u);
            if (it == adj.end()) continue;
            for (VertexId w : it->second)
                if (seen.insert(w).second) q.push(w);
        }
        return seen;
    };
    VertexId root = t.vertices.front();
    return reach(t.successors(), root).size() == t.vertices.size() &&
           reach(t.predecessors(), root).size() == t.vertices.size();
}

// ---------------------------------------------------------------------------
// Shifts of finite type given by a finite forbidden set.

struct ForbiddenSft {
    std::string alphabet;          // sorted distinct symbols
    std::set<Word> forbidden;      // nonempty words

    ForbiddenSft() = default;
    ForbiddenSft(std::string alpha, std::set<Word> forb)
        : alphabet(std::move(alpha)), forbidden(std::move(forb)) {
        std::sort(alphabet.begin(), alphabet.end());
        alphabet.erase(std::unique(alphabet.begin(), alphabet.end()), alphabet.end());
        for (const Word& w : forbidden) {
            if (w.empty()) throw std::invalid_argument("forbidden word must be nonempty");
            for (char c : w)
                if (alphabet.find(c) == std::string::npos)
                    throw std::invalid_argument("forbidden word uses symbol outside alphabet");
        }
    }

    // M-step memory: longest forbidden word minus one.
    int memory() const {
        size_t m = 1;
        for (const Word& w : forbidden) m = std::max(m, w.size());
        return static_cast<int>(m) - 1;
    }

    bool word_avoids_forbidden(const Word& w) const {
        for (const Word& f : forbidden)
            if (w.find(f) != std::string::npos) return false;
        return true;
    }

    bool operator==(const ForbiddenSft&) const = default;
};

// Vertex-shift presentation on the allowed N-blocks, N = max(1, memory).
// Labels project each block to its first symbol.  An empty result graph
// presents the empty shift.
inline LabeledGraph to_vertex_shift(const ForbiddenSft& sft, int block_len = 0) {
    int n = std::max({1, sft.memory(), block_len});
    // Candidate N-blocks avoiding forbidden words.
    std::vector<Word> blocks;
    {
        std::vector<Word> frontier{""};
        for (int i = 0; i < n; ++i) {
            std::vector<Word> next;
            for (const Word& w : frontier)
                for (char c : sft.alphabet) {
                    Word x = w + c;
                    if (sft.word_avoids_forbidden(x)) next.push_back(std::move(x));
                }
            frontier = std::move(next);
        }
        blocks = std::move(frontier);
    }
    std::sort(blocks.begin(), blocks.end());
    LabeledGraph g;
    for (size_t i = 0; i < blocks.size(); ++i)
        g.add_vertex(static_cast<VertexId>(i), blocks[i].front(), blocks[i]);
    for (size_t i = 0; i < blocks.size(); ++i)
        for (size_t j = 0; j < blocks.size(); ++j) {
            if (blocks[i].substr(1) != blocks[j].substr(0, n - 1)) continue;
            Word joint = blocks[i] + blocks[j].back();
            if (sft.word_avoids_forbidden(joint)) g.add_edge((VertexId)i, (VertexId)j);
        }
    return trim_stranded(g);
}

// All label words of paths of n vertices, deduplicated.
inline std::set<Word> enumerate_blocks(const LabeledGraph& g, int n) {
    if (n < 1) throw std::invalid_argument("block length must be >= 1");
    // Level-by-level subset tracking: word -> set of possible end vertices.
    std::map<Word, std::vector<VertexId>> frontier;
    for (VertexId v : g.vertices) frontier[Word(1, g.label.at(v))].push_back(v);
    auto succ = g.successors();
    for (int len = 1; len < n; ++len) {
        std::map<Word, std::vector<VertexId>> next;
        for (auto& [w, ends] : frontier) {
            std::map<char, std::set<VertexId>> by_symbol;
            for (VertexId u : ends)
                for (VertexId v : succ.at(u)) by_symbol[g.label.at(v)].insert(v);
            for (auto& [c, vs] : by_symbol)
                next[w + c] = std::vector<VertexId>(vs.begin(), vs.end());
        }
        frontier = std::move(next);
    }
    std::set<Word> out;
    for (auto& [w, ends] : frontier) out.insert(w);
    return out;
}

// N-th higher block recoding.  Vertices are the N-vertex paths of g (so
// vertices stay distinct when label blocks collide); edges follow overlap;
// the new label projects to the first symbol.  Conjugate to the input shift.
inline LabeledGraph higher_block(const LabeledGraph& g, int n) {
    if (n < 1) throw std::invalid_argument("higher block order must be >= 1");
    std::vector<std::vector<VertexId>> paths;
    for (VertexId v : g.vertices) paths.push_back({v});
    auto succ = g.successors();
    for (int len = 1; len < n; ++len) {
        std::vector<std::vector<VertexId>> next;
        for (auto& p : paths)
            for (VertexId v : succ.at(p.back())) {
                auto q = p;
                q.push_back(v);
                next.push_back(std::move(q));
            }
        paths = std::move(next);
    }
    std::sort(paths.begin(), paths.end());
    LabeledGraph out;
    std::map<std::vector<VertexId>, VertexId> index;
    for (size_t i = 0; i < paths.size(); ++i) {
        index[paths[i]] = (VertexId)i;
        std::string block, ids;
        for (VertexId v : paths[i]) {
            block += g.label.at(v);
            ids += (ids.empty() ? "" : ".") + std::to_string(v);
        }
        out.add_vertex((VertexId)i, g.label.at(paths[i].front()), block + "|" + ids);
    }
    for (auto& p : paths)
        for (VertexId v : succ.at(p.back())) {
            std::vector<VertexId> q(p.begin() + 1, p.end());
            q.push_back(v);
            out.add_edge(index.at(p), index.at(q));
        }
    return out;
}

// ---------------------------------------------------------------------------
// Return lengths between vertex sets.
//
// return_length_set computes { l : there is a path of l edges from a source
// to a target whose interior avoids `blocked` }, certified eventually
// periodic.  The layer sets S_k (vertices reachable in k steps outside
// `blocked`) evolve under a deterministic map, so the first repeat S_i = S_j
// proves onset i+1 and period j-i for the membership sequence.  On top of
// that proof the conservative window certificate is enforced: membership at
// l and l+p must agree for all T <= l <= bound-p and bound >= T + 2p|V|,
// otherwise "bound too small" is reported.

inline EventuallyPeriodicSet return_length_set(const LabeledGraph& g,
                                               const std::set<VertexId>& sources,
                                               const std::set<VertexId>& targets,
                                               const std::set<VertexId>& blocked,
                                               long long bound) {
    const long long nverts = (long long)g.vertices.size();
    auto succ = g.successors();

    std::vector<bool> member(bound + 1, false);
    // length 1: direct source -> target edges
    for (VertexId s : sources)
        for (VertexId t : succ.at(s))
            if (targets.count(t)) member[1] = true;

    std::set<VertexId> layer;
    for (VertexId s : sources)
        for (VertexId v : succ.at(s))
            if (!blocked.count(v)) layer.insert(v);

    std::map<std::set<VertexId>, long long> seen;  // layer set -> first index k
    long long onset = -1, period = -1;
    seen[layer] = 1;
    for (long long k = 2; k <= bound; ++k) {
        // member[k]: some vertex in layer (k-1 steps out) has an edge to a target
        bool hit = false;
        for (VertexId u : layer) {
            for (VertexId t : succ.at(u))
                if (targets.count(t)) { hit = true; break; }
            if (hit) break;
        }
        member[k] = hit;
        std::set<VertexId> next;
        for (VertexId u : layer)
            for (VertexId v : succ.at(u))
                if (!blocked.count(v)) next.insert(v);
        layer = std::move(next);
        auto [it, inserted] = seen.emplace(layer, k);
        if (!inserted && onset < 0) {
            // S_{it->second} == S_k: membership at l >= it->second + 1 repeats
            // with period k - it->second.
            onset = it->second + 1;
            period = k - it->second;
            // membership beyond k follows the proven period
            for (long long l = k + 1; l <= bound; ++l)
                member[l] = member[l - period];
            break;
        }
    }
    if (onset < 0) throw budget_error("bound too small: no layer repeat within bound");

    long long t0 = std::max<long long>(onset, 2);
    // Window certificate from the module contract.
    if (bound < t0 + 2 * period * std::max<long long>(nverts, 1))
        throw budget_error("bound too small for the periodicity certificate");
    for (long long l = t0; l + period <= bound; ++l)
        if (member[l] != member[l + period])
            throw budget_error("bound too small: period not stable over the window");

    std::set<long long> exc, res;
    for (long long l = 1; l < t0; ++l)
        if (member[l]) exc.insert(l);
    for (long long l = t0; l < t0 + period; ++l)
        if (member[l]) res.insert(l % period);
    return EventuallyPeriodicSet::from_parts(t0, exc, period, res);
}

inline long long default_return_bound(const LabeledGraph& g) {
    long long n = (long long)g.vertices.size();
    return std::max<long long>(2 * n * n + 8 * n + 16, 64);
}

// Convenience wrapper: the certificate needs bound >= onset + 2*period*|V|,
// and the period is only known once the layers repeat, so grow the horizon
// until the certificate fits.
template <typename Compute>
EventuallyPeriodicSet certified_with_growing_bound(long long bound, Compute compute) {
    for (int attempt = 0;; ++attempt) {
        try {
            return compute(bound);
        } catch (const budget_error&) {
            if (attempt >= 8) throw;
            bound *= 4;
        }
    }
}

// First-return lengths of cycles at v with no interior visit to v.
inline EventuallyPeriodicSet first_return_lengths(const LabeledGraph& g, VertexId v,
                                                  long long bound) {
    if (!g.has_vertex(v)) throw std::invalid_argument("vertex not in graph");
    return return_length_set(g, {v}, {v}, {v}, bound);
}

inline EventuallyPeriodicSet first_return_lengths(const LabeledGraph& g, VertexId v) {
    return certified_with_growing_bound(
        default_return_bound(g), [&](long long b) { return first_return_lengths(g, v, b); });
}

// ---------------------------------------------------------------------------
// Deterministic path choosers.  Both return full vertex sequences including
// the endpoints; interior vertices must avoid `blocked` (the endpoints may be
// blocked).  Ties are broken toward the lexicographically least vertex-id
// sequence, so constructions built on these choices are reproducible.

inline std::optional<std::vector<VertexId>> least_path_exact(const LabeledGraph& g, VertexId src,
                                                             VertexId dst,
                                                             const std::set<VertexId>& blocked,
                                                             long long len) {
    if (len < 1) return std::nullopt;
    auto succ = g.successors();
    // feasible[t]: vertices outside `blocked` that reach dst in exactly t steps
    // through unblocked interiors.
    std::vector<std::set<VertexId>> feasible(len + 1);
    for (auto& [u, v] : g.edges)
        if (v == dst && !blocked.count(u)) feasible[1].insert(u);
    for (long long t = 2; t <= len; ++t)
        for (VertexId u : g.vertices) {
            if (blocked.count(u)) continue;
            for (VertexId w : succ.at(u))
                if (feasible[t - 1].count(w)) { feasible[t].insert(u); break; }
        }
    std::vector<VertexId> path{src};
    VertexId cur = src;
    for (long long remaining = len; remaining >= 1; --remaining) {
        if (remaining == 1) {
            if (!g.has_edge(cur, dst)) return std::nullopt;
            path.push_back(dst);
            cur = dst;
            continue;
        }
        std::optional<VertexId> pick;
        for (VertexId w : succ.at(cur))
            if (!blocked.count(w) && feasible[remaining - 1].count(w) && (!pick || w < *pick))
                pick = w;
        if (!pick) return std::nullopt;
        path.push_back(*pick);
        cur = *pick;
    }
    return path;
}

inline std::optional<std::vector<VertexId>> shortest_least_path(const LabeledGraph& g, VertexId src,
                                                                VertexId dst,
                                                                const std::set<VertexId>& blocked,
                                                                long long maxlen) {
    for (long long len = 1; len <= maxlen; ++len)
        if (auto p = least_path_exact(g, src, dst, blocked, len)) return p;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Graph text format: one declaration per line, order-insensitive.
//   vertex <id> label=<symbol>
//   edge <id> <id>
//   # comment         (also used to carry optional vertex names: # name <id> <text>)

inline std::string write_graph(const LabeledGraph& g) {
    std::ostringstream os;
    for (auto& [v, nm] : g.name) os << "# name " << v << " " << nm << "\n";
    for (VertexId v : g.vertices) os << "vertex " << v << " label=" << g.label.at(v) << "\n";
    for (auto& [u, v] : g.edges) os << "edge " << u << " " << v << "\n";
    return os.str();
}

inline LabeledGraph parse_graph(const std::string& text) {
    LabeledGraph g;
    std::vector<std::pair<VertexId, VertexId>> pending_edges;
    std::map<VertexId, std::string> names;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok == "#") {
            std::string kind;
            if (ls >> kind && kind == "name") {
                VertexId v;
                std::string nm;
                if (ls >> v && ls >> nm) names[v] = nm;
            }
            continue;
        }
        if (tok == "vertex") {
            VertexId v;
            std::string lab;
            if (!(ls >> v >> lab) || lab.rfind("label=", 0) != 0 || lab.size() != 7)
                throw parse_error("line " + std::to_string(lineno) +
                                  ": expected 'vertex <id> label=<symbol>'");
            g.add_vertex(v, lab[6]);
        } else if (tok == "edge") {
            VertexId u, v;
            if (!(ls >> u >> v))
                throw parse_error("line " + std::to_string(lineno) + ": expected 'edge <id> <id>'");
            pending_edges.push_back({u, v});
        } else {
            throw parse_error("line " + std::to_string(lineno) + ": unknown declaration '" + tok + "'");
        }
    }
    for (auto& [u, v] : pending_edges) {
        if (!g.has_vertex(u) || !g.has_vertex(v))
            throw parse_error("edge references unknown vertex");
        g.add_edge(u, v);
    }
    for (auto& [v, nm] : names)
        if (g.has_vertex(v)) g.name[v] = nm;
    return g;
}

}  // namespace gapcode
