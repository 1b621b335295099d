#pragma once

// Factor codes with an unambiguous symbol.  The domain is an irreducible SFT
// (given by a forbidden set or by a 1-step vertex-shift graph); a single
// distinguished word D of length k maps to output 1 and every other k-block
// maps to 0.  After higher-block recoding the code becomes the 1-block map
// that sends a marked vertex set to 1, and image computation, diamond
// detection, degree and preimage counts all run on that marked graph.

#include <algorithm>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "gapcode/errors.hpp"
#include "gapcode/eventually_periodic_set.hpp"
#include "gapcode/graph.hpp"

namespace gapcode {

struct UnambiguousCode {
    std::variant<ForbiddenSft, LabeledGraph> domain;
    Word marker;  // the word D, |D| = k >= 1

    UnambiguousCode(ForbiddenSft sft, Word d) : domain(std::move(sft)), marker(std::move(d)) {
        if (marker.empty()) throw std::invalid_argument("marker word must be nonempty");
    }
    UnambiguousCode(LabeledGraph g, Word d) : domain(std::move(g)), marker(std::move(d)) {
        if (marker.empty()) throw std::invalid_argument("marker word must be nonempty");
    }
};

struct MarkedGraph {
    LabeledGraph graph;          // labels are exactly '1' on marked, '0' elsewhere
    std::set<VertexId> marked;

    MarkedGraph() = default;
    MarkedGraph(LabeledGraph g, std::set<VertexId> m) : graph(std::move(g)), marked(std::move(m)) {
        for (VertexId v : graph.vertices)
            graph.label[v] = marked.count(v) ? '1' : '0';
        for (VertexId v : marked)
            if (!graph.has_vertex(v)) throw std::invalid_argument("marked vertex not in graph");
    }

    static MarkedGraph from_labels(LabeledGraph g) {
        std::set<VertexId> m;
        for (VertexId v : g.vertices) {
            char c = g.label.at(v);
            if (c == '1') m.insert(v);
            else if (c != '0')
                throw std::invalid_argument("marked graph labels must be 0/1");
        }
        return MarkedGraph(std::move(g), std::move(m));
    }
};

// Higher-block recoding of the code to a 1-step vertex shift in which the
// preimage word D becomes a set of marked vertices.  For an SFT domain with
// memory M the presentation uses N-blocks, N = max(k, M, 1), and a vertex is
// marked when its block starts with D (when k >= M this is the single block
// equal to D).  For a graph domain the k-th higher block recoding is used and
// a vertex is marked when its label block equals D.
inline MarkedGraph recode_to_marked(const UnambiguousCode& code) {
    const Word& d = code.marker;
    const int k = (int)d.size();
    LabeledGraph g;
    std::set<VertexId> marked;
    if (std::holds_alternative<ForbiddenSft>(code.domain)) {
        const auto& sft = std::get<ForbiddenSft>(code.domain);
        g = to_vertex_shift(sft, std::max(k, sft.memory()));
        for (VertexId v : g.vertices)
            if (g.name.at(v).rfind(d, 0) == 0) marked.insert(v);
    } else {
        const auto& dom = std::get<LabeledGraph>(code.domain);
        g = higher_block(trim_stranded(dom), k);
        for (VertexId v : g.vertices) {
            const std::string& nm = g.name.at(v);  // "<labelblock>|<ids>"
            if (nm.substr(0, nm.find('|')) == d) marked.insert(v);
        }
    }
    if (marked.empty()) throw std::invalid_argument("marker word is not allowed in the domain");
    return MarkedGraph(std::move(g), std::move(marked));
}

inline long long default_return_bound(const MarkedGraph& mg) {
    return default_return_bound(mg.graph);
}

// Gap set of the image: a gap of s zeros corresponds to a path of s+1 edges
// from a marked vertex to a marked vertex with no marked interior vertex.
inline EventuallyPeriodicSet image_gap_set(const MarkedGraph& mg, long long bound) {
    EventuallyPeriodicSet lengths =
        return_length_set(mg.graph, mg.marked, mg.marked, mg.marked, bound);
    if (lengths.empty()) return lengths;
    return lengths.shifted_down();
}

inline EventuallyPeriodicSet image_gap_set(const MarkedGraph& mg) {
    return certified_with_growing_bound(default_return_bound(mg),
                                        [&](long long b) { return image_gap_set(mg, b); });
}

// Facts about the image when the domain is the full 2-shift.  10^{k-1}1 is
// allowed exactly when D is not purely periodic, and 10^j1 is allowed for
// every j >= k.
struct FullShiftImageFacts {
    bool purely_periodic;
    bool k_minus_1_allowed;
    long long tail_onset;
};

inline bool is_purely_periodic(const Word& d) {
    const size_t k = d.size();
    for (size_t e = 1; e < k; ++e) {
        if (k % e != 0) continue;
        bool ok = true;
        for (size_t i = e; ok && i < k; ++i) ok = d[i] == d[i - e];
        if (ok) return true;
    }
    return false;
}

inline FullShiftImageFacts full_shift_image_facts(const Word& d) {
    bool pp = is_purely_periodic(d);
    return FullShiftImageFacts{pp, !pp, (long long)d.size()};
}

// ---------------------------------------------------------------------------
// Diamonds, degree, preimage counts for the 1-block code on a marked graph.

namespace detail {

// Label-synchronized pair graph walk.  Returns the set of label-equal pairs
// (u, v) reachable from `start` by synchronized steps.
inline std::set<std::pair<VertexId, VertexId>> pair_reach(
    const LabeledGraph& g, const std::set<std::pair<VertexId, VertexId>>& start, bool forward) {
    auto adj = forward ? g.successors() : g.predecessors();
    std::set<std::pair<VertexId, VertexId>> seen = start;
    std::queue<std::pair<VertexId, VertexId>> q;
    for (auto& p : start) q.push(p);
    while (!q.empty()) {
        auto [u, v] = q.front();
        q.pop();
        for (VertexId nu : adj.at(u))
            for (VertexId nv : adj.at(v))
                if (g.label.at(nu) == g.label.at(nv) && seen.insert({nu, nv}).second)
                    q.push({nu, nv});
    }
    return seen;
}

}  // namespace detail

// A graph diamond is a pair of distinct paths with the same start vertex, end
// vertex and label word.  Decided exactly on the label-synchronized pair
// graph: a diamond exists iff some off-diagonal pair is reachable from a
// diagonal split and reaches a diagonal merge.
inline bool has_graph_diamond(const LabeledGraph& graph) {
    const LabeledGraph g = trim_stranded(graph);
    auto succ = g.successors();
    auto pred = g.predecessors();
    std::set<std::pair<VertexId, VertexId>> splits, merges;
    for (VertexId d : g.vertices) {
        const auto& outs = succ.at(d);
        for (VertexId a : outs)
            for (VertexId b : outs)
                if (a != b && g.label.at(a) == g.label.at(b)) splits.insert({a, b});
        const auto& ins = pred.at(d);
        for (VertexId a : ins)
            for (VertexId b : ins)
                if (a != b && g.label.at(a) == g.label.at(b)) merges.insert({a, b});
    }
    auto fwd = detail::pair_reach(g, splits, true);
    auto bwd = detail::pair_reach(g, merges, false);
    for (auto& p : fwd)
        if (p.first != p.second && bwd.count(p)) return true;
    return false;
}

inline bool has_graph_diamond(const MarkedGraph& mg) { return has_graph_diamond(mg.graph); }

// Number of paths in mg whose label sequence is w.
inline unsigned long long preimage_count(const LabeledGraph& g, const Word& w) {
    if (w.empty()) return 0;
    auto succ = g.successors();
    std::map<VertexId, unsigned long long> cnt;
    for (VertexId v : g.vertices)
        if (g.label.at(v) == w[0]) cnt[v] = 1;
    for (size_t i = 1; i < w.size(); ++i) {
        std::map<VertexId, unsigned long long> next;
        for (auto& [u, c] : cnt)
            for (VertexId v : succ.at(u))
                if (g.label.at(v) == w[i]) next[v] += c;
        cnt = std::move(next);
    }
    unsigned long long total = 0;
    for (auto& [v, c] : cnt) total += c;
    return total;
}

inline unsigned long long preimage_count(const MarkedGraph& mg, const Word& w) {
    return preimage_count(mg.graph, w);
}

// Degree of the 1-block code, computed only on 1-step/1-block presentations.
// Along any output word, the set of vertices a preimage can occupy at a fixed
// coordinate is tracked as a set of (current vertex, coordinate-i vertex)
// pairs; the degree is the minimum achievable count of distinct coordinate-i
// vertices over all reachable configurations, and a shortest, lexicographically
// least witness word is reported.
struct DegreeResult {
    int degree;
    Word magic_word;
    int magic_coordinate;  // 1-based position within magic_word
    char magic_block;
};

inline DegreeResult degree(const LabeledGraph& graph, size_t max_states = 2000000) {
    const LabeledGraph g = trim_stranded(graph);
    if (!is_irreducible(g)) throw std::invalid_argument("degree requires an irreducible graph");
    if (has_graph_diamond(g)) throw std::invalid_argument("not finite-to-one: graph diamond");
    auto succ = g.successors();
    std::string alphabet;
    {
        std::set<char> cs;
        for (VertexId v : g.vertices) cs.insert(g.label.at(v));
        alphabet.assign(cs.begin(), cs.end());
    }

    // Forward subset automaton with shortest lex-least generating words.
    using Subset = std::vector<VertexId>;
    std::map<Subset, Word> subset_word;
    {
        std::queue<Subset> q;
        for (char c : alphabet) {
            Subset s;
            for (VertexId v : g.vertices)
                if (g.label.at(v) == c) s.push_back(v);
            if (!s.empty() && subset_word.emplace(s, Word(1, c)).second) q.push(s);
        }
        while (!q.empty()) {
            Subset s = q.front();
            q.pop();
            const Word& w = subset_word.at(s);
            for (char c : alphabet) {
                std::set<VertexId> nx;
                for (VertexId u : s)
                    for (VertexId v : succ.at(u))
                        if (g.label.at(v) == c) nx.insert(v);
                if (nx.empty()) continue;
                Subset ns(nx.begin(), nx.end());
                if (subset_word.emplace(ns, w + c).second) q.push(ns);
            }
            if (subset_word.size() > max_states) throw budget_error("degree: subset budget exceeded");
        }
    }

    // Configurations: sets of (current, origin) pairs, explored best-first by
    // (word length, word), so each configuration is first seen with its
    // shortest lex-least word.
    using Config = std::vector<std::pair<VertexId, VertexId>>;
    struct Item {
        Word word;
        int coord;
        Config config;
        bool operator>(const Item& o) const {
            if (word.size() != o.word.size()) return word.size() > o.word.size();
            if (word != o.word) return word > o.word;
            return config > o.config;
        }
    };
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    for (auto& [s, w] : subset_word) {
        Config c;
        for (VertexId v : s) c.push_back({v, v});
        pq.push(Item{w, (int)w.size(), std::move(c)});
    }
    std::set<Config> visited;
    int best = (int)g.vertices.size() + 1;
    Word best_word;
    int best_coord = 0;
    auto origin_count = [](const Config& c) {
        std::set<VertexId> o;
        for (auto& [cur, org] : c) o.insert(org);
        return (int)o.size();
    };
    while (!pq.empty()) {
        Item it = pq.top();
        pq.pop();
        if (!visited.insert(it.config).second) continue;
        if (visited.size() > max_states) throw budget_error("degree: configuration budget exceeded");
        int cnt = origin_count(it.config);
        if (cnt < best) {
            best = cnt;
            best_word = it.word;
            best_coord = it.coord;
        }
        for (char c : alphabet) {
            std::set<std::pair<VertexId, VertexId>> nx;
            for (auto& [cur, org] : it.config)
                for (VertexId v : succ.at(cur))
                    if (g.label.at(v) == c) nx.insert({v, org});
            if (nx.empty()) continue;
            Config ncfg(nx.begin(), nx.end());
            if (!visited.count(ncfg)) pq.push(Item{it.word + c, it.coord, std::move(ncfg)});
        }
    }
    return DegreeResult{best, best_word, best_coord,
                        best_word.empty() ? '0' : best_word[best_coord - 1]};
}

inline DegreeResult degree(const MarkedGraph& mg, size_t max_states = 2000000) {
    return degree(mg.graph, max_states);
}

}  // namespace gapcode
