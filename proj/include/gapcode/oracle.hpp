#pragma once

// Independent brute-force verification layer.  Everything here is
// finite-horizon and exact: languages are enumerated level by level, path
// counts use big integers, and injectivity checks are synchronized-pair
// dynamic programs.  Budgets are explicit; operations refuse (rather than
// silently truncate) beyond them.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "gapcode/errors.hpp"
#include "gapcode/factor_code.hpp"
#include "gapcode/gap_shift.hpp"
#include "gapcode/graph.hpp"

namespace gapcode {

struct OracleBudget {
    int max_block_len = 30;
    int max_path_len = 60;
    size_t max_states = 4000000;
};

namespace detail {

// Level-by-level language enumeration for the label language of a graph.
class GraphLanguage {
  public:
    explicit GraphLanguage(const LabeledGraph& g) : g_(trim_stranded(g)), succ_(g_.successors()) {
        for (VertexId v : g_.vertices) frontier_[Word(1, g_.label.at(v))].push_back(v);
    }

    std::vector<Word> words() const {
        std::vector<Word> out;
        out.reserve(frontier_.size());
        for (auto& [w, ends] : frontier_) out.push_back(w);
        return out;
    }

    void advance() {
        std::map<Word, std::vector<VertexId>> next;
        for (auto& [w, ends] : frontier_) {
            std::map<char, std::set<VertexId>> by;
            for (VertexId u : ends)
                for (VertexId v : succ_.at(u)) by[g_.label.at(v)].insert(v);
            for (auto& [c, vs] : by) next[w + c] = std::vector<VertexId>(vs.begin(), vs.end());
        }
        frontier_ = std::move(next);
    }

    size_t frontier_size() const { return frontier_.size(); }

  private:
    LabeledGraph g_;
    std::map<VertexId, std::vector<VertexId>> succ_;
    std::map<Word, std::vector<VertexId>> frontier_;
};

// Level-by-level enumeration of the language of an S-gap shift, driven by the
// gap grammar: interior gaps must lie in S, boundary runs of zeros only need
// to extend to some gap.
class GapLanguage {
  public:
    explicit GapLanguage(EventuallyPeriodicSet s) : s_(std::move(s)) {
        if (run_viable(1)) frontier_["0"] = State{false, 1};
        frontier_["1"] = State{true, 0};
    }

    std::vector<Word> words() const {
        std::vector<Word> out;
        out.reserve(frontier_.size());
        for (auto& [w, st] : frontier_) out.push_back(w);
        return out;
    }

    void advance() {
        std::map<Word, State> next;
        for (auto& [w, st] : frontier_) {
            if (run_viable(st.zeros + 1)) next[w + '0'] = State{st.seen_one, st.zeros + 1};
            if (!st.seen_one || s_.contains(st.zeros)) next[w + '1'] = State{true, 0};
        }
        frontier_ = std::move(next);
    }

  private:
    struct State {
        bool seen_one;
        long long zeros;  // length of the current boundary/interior run
    };

    bool run_viable(long long n) const {
        if (!s_.is_finite()) return true;
        auto mx = s_.max_element();
        return mx && *mx >= n;
    }

    EventuallyPeriodicSet s_;
    std::map<Word, State> frontier_;
};

}  // namespace detail

struct LanguageComparison {
    bool equal = true;
    std::optional<Word> divergent;  // lex-least word at the first diverging length
};

namespace detail {

template <typename LangA, typename LangB>
LanguageComparison compare_languages(LangA& a, LangB& b, int max_len, size_t max_states) {
    for (int len = 1; len <= max_len; ++len) {
        if (len > 1) {
            a.advance();
            b.advance();
        }
        std::vector<Word> wa = a.words(), wb = b.words();
        if (wa.size() + wb.size() > max_states)
            throw budget_error("language comparison exceeded state budget");
        if (wa != wb) {
            std::vector<Word> diff;
            std::set_symmetric_difference(wa.begin(), wa.end(), wb.begin(), wb.end(),
                                          std::back_inserter(diff));
            return LanguageComparison{false, diff.front()};
        }
    }
    return LanguageComparison{};
}

}  // namespace detail

inline LanguageComparison language_equal_upto(const LabeledGraph& a, const LabeledGraph& b,
                                              int max_len, const OracleBudget& budget = {}) {
    if (max_len > budget.max_block_len) throw budget_error("length exceeds block budget");
    detail::GraphLanguage la(a), lb(b);
    return detail::compare_languages(la, lb, max_len, budget.max_states);
}

inline LanguageComparison language_equal_upto(const LabeledGraph& a, const GapShift& y,
                                              int max_len, const OracleBudget& budget = {}) {
    if (max_len > budget.max_block_len) throw budget_error("length exceeds block budget");
    detail::GraphLanguage la(a);
    detail::GapLanguage ly(y.gaps);
    return detail::compare_languages(la, ly, max_len, budget.max_states);
}

// Membership of a single word in the language of an S-gap shift.
inline bool gap_language_contains(const EventuallyPeriodicSet& s, const Word& w) {
    auto run_viable = [&](long long n) {
        if (!s.is_finite()) return true;
        auto mx = s.max_element();
        return mx.has_value() && *mx >= n;
    };
    long long zeros = 0;
    bool seen_one = false;
    for (char c : w) {
        if (c == '0') {
            ++zeros;
            if (!run_viable(zeros)) return false;
        } else if (c == '1') {
            if (seen_one && !s.contains(zeros)) return false;
            seen_one = true;
            zeros = 0;
        } else {
            return false;
        }
    }
    return true;
}

// Bounded search for a graph diamond, with an explicit witness: two distinct
// equal-label paths sharing both endpoints.
struct DiamondWitness {
    std::vector<VertexId> first, second;
};

inline std::optional<DiamondWitness> point_diamond_search(const MarkedGraph& mg, int max_len,
                                                          const OracleBudget& budget = {}) {
    if (max_len > budget.max_path_len) throw budget_error("length exceeds path budget");
    const LabeledGraph g = trim_stranded(mg.graph);
    auto succ = g.successors();
    using Pair = std::pair<VertexId, VertexId>;  // ordered: (path-1 vertex, path-2 vertex)
    std::map<Pair, std::pair<Pair, VertexId>> parent;  // pair -> (previous pair, split vertex)
    std::queue<std::pair<Pair, int>> q;
    for (VertexId d : g.vertices)
        for (VertexId a : succ.at(d))
            for (VertexId b : succ.at(d))
                if (a != b && g.label.at(a) == g.label.at(b)) {
                    Pair p{a, b};
                    if (!parent.count(p)) {
                        parent[p] = {p, d};
                        q.push({p, 1});
                    }
                }
    auto reconstruct = [&](Pair end, VertexId merge) {
        std::vector<VertexId> x{merge}, y{merge};
        Pair cur = end;
        while (true) {
            x.push_back(cur.first);
            y.push_back(cur.second);
            auto [prev, split] = parent.at(cur);
            if (prev == cur) {
                x.push_back(split);
                y.push_back(split);
                break;
            }
            cur = prev;
        }
        std::reverse(x.begin(), x.end());
        std::reverse(y.begin(), y.end());
        return DiamondWitness{x, y};
    };
    while (!q.empty()) {
        auto [p, len] = q.front();
        q.pop();
        if (len + 1 > max_len) continue;
        auto [u, v] = p;
        for (VertexId nu : succ.at(u))
            for (VertexId nv : succ.at(v)) {
                if (nu == nv) return reconstruct(p, nu);
                if (g.label.at(nu) != g.label.at(nv)) continue;
                Pair np{nu, nv};
                if (parent.count(np)) continue;
                parent[np] = {p, -1};
                q.push({np, len + 1});
            }
        if (parent.size() > budget.max_states) throw budget_error("diamond search budget");
    }
    return std::nullopt;
}

// (1/m) log |B_m| with exact big-integer word counting over the determinized
// subset automaton (distinct words, not paths).
inline double entropy_estimate(const LabeledGraph& graph, int m, const OracleBudget& budget = {}) {
    if (m < 1) throw std::invalid_argument("block length must be >= 1");
    if (m > budget.max_block_len) throw budget_error("length exceeds block budget");
    const LabeledGraph g = trim_stranded(graph);
    if (g.vertices.empty()) throw std::invalid_argument("empty shift has no blocks");
    auto succ = g.successors();
    std::set<char> alphabet;
    for (VertexId v : g.vertices) alphabet.insert(g.label.at(v));

    using Subset = std::vector<VertexId>;
    std::map<Subset, int> index;
    std::vector<Subset> states;
    std::vector<std::vector<int>> trans;  // state -> successor states (one per defined symbol)
    std::vector<int> initial;
    auto intern = [&](const Subset& s) {
        auto [it, fresh] = index.emplace(s, (int)states.size());
        if (fresh) {
            states.push_back(s);
            trans.emplace_back();
        }
        return it->second;
    };
    for (char c : alphabet) {
        Subset s;
        for (VertexId v : g.vertices)
            if (g.label.at(v) == c) s.push_back(v);
        if (!s.empty()) initial.push_back(intern(s));
    }
    for (size_t i = 0; i < states.size(); ++i) {
        if (states.size() > budget.max_states) throw budget_error("subset automaton budget");
        const Subset cur = states[i];  // intern() may reallocate the state table
        for (char c : alphabet) {
            std::set<VertexId> nx;
            for (VertexId u : cur)
                for (VertexId v : succ.at(u))
                    if (g.label.at(v) == c) nx.insert(v);
            if (nx.empty()) continue;
            int j = intern(Subset(nx.begin(), nx.end()));
            trans[i].push_back(j);
        }
    }

    using boost::multiprecision::cpp_int;
    std::vector<cpp_int> count(states.size(), 0);
    for (int s : initial) count[s] += 1;
    for (int step = 1; step < m; ++step) {
        std::vector<cpp_int> next(states.size(), 0);
        for (size_t i = 0; i < states.size(); ++i) {
            if (count[i] == 0) continue;
            for (int j : trans[i]) next[j] += count[i];
        }
        count = std::move(next);
    }
    cpp_int total = 0;
    for (auto& c : count) total += c;
    if (total == 0) throw numeric_error("no blocks of the requested length");
    return std::log(total.convert_to<double>()) / m;
}

// Central-coordinate injectivity: false iff two distinct length-L paths carry
// the same labeling and differ at the central coordinate.  This is the block
// surrogate for injectivity of the induced sliding block code.
inline bool central_injective_upto(const LabeledGraph& graph,
                                   const std::map<VertexId, int>& labels, int path_len) {
    if (path_len < 1) throw std::invalid_argument("path length must be >= 1");
    const LabeledGraph g = trim_stranded(graph);
    auto succ = g.successors();
    auto pred = g.predecessors();
    using Pair = std::pair<VertexId, VertexId>;
    std::set<Pair> pairs;
    for (VertexId u : g.vertices)
        for (VertexId v : g.vertices)
            if (labels.at(u) == labels.at(v)) pairs.insert({u, v});
    int center = (path_len - 1) / 2;
    int need_back = center, need_fwd = path_len - 1 - center;
    auto walkable = [&](const std::map<VertexId, std::vector<VertexId>>& adj, int steps) {
        std::set<Pair> alive = pairs;
        for (int t = 0; t < steps; ++t) {
            std::set<Pair> next;
            for (auto& [u, v] : alive) {
                bool ok = false;
                for (VertexId nu : adj.at(u)) {
                    for (VertexId nv : adj.at(v))
                        if (labels.at(nu) == labels.at(nv) && alive.count({nu, nv})) {
                            ok = true;
                            break;
                        }
                    if (ok) break;
                }
                if (ok) next.insert({u, v});
            }
            if (next == alive) break;  // fixpoint: longer walks change nothing
            alive = std::move(next);
        }
        return alive;
    };
    std::set<Pair> fwd = walkable(succ, need_fwd);
    std::set<Pair> bwd = walkable(pred, need_back);
    for (auto& p : fwd)
        if (p.first != p.second && bwd.count(p)) return false;
    return true;
}

// Injectivity surrogate for the code restricted to an induced subgraph.
inline bool restriction_injective_upto(const MarkedGraph& mg, const std::set<VertexId>& sub,
                                       int path_len, const OracleBudget& budget = {}) {
    if (path_len > budget.max_path_len) throw budget_error("length exceeds path budget");
    LabeledGraph g = induced_subgraph(mg.graph, sub);
    std::map<VertexId, int> labels;
    for (VertexId v : g.vertices) labels[v] = g.label.at(v);
    return central_injective_upto(g, labels, path_len);
}

// Injectivity surrogate for a vertex map (e.g. the projection of a
// constructed cover back into the ambient graph).
inline bool map_injective_upto(const LabeledGraph& g, const std::map<VertexId, VertexId>& image,
                               int path_len) {
    std::map<VertexId, int> labels;
    for (VertexId v : g.vertices) labels[v] = image.at(v);
    return central_injective_upto(g, labels, path_len);
}

}  // namespace gapcode
