#pragma once

// Spoke graphs and their standard factor codes.  A spoke graph is a central
// vertex B with disjoint spokes: a regular spoke is a path pair gamma+/gamma-
// through B' plus a cycle at B', a degenerate spoke is just a cycle at B.
// Only B maps to output 1.  The combinatorial core is the family of residue
// classes K_i mod D = lcm{d_i}: the code admits a finite-to-one onto
// restriction exactly when some W covers the union of the K_i with pairwise
// disjoint members, and the witnessing sub-SFT is assembled explicitly.

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "gapcode/errors.hpp"
#include "gapcode/eventually_periodic_set.hpp"
#include "gapcode/factor_code.hpp"
#include "gapcode/graph.hpp"
#include "gapcode/oracle.hpp"

namespace gapcode {

struct RegularSpoke {
    long long m;  // |gamma+| + |gamma-| - 1
    long long d;  // cycle length |C|
};

struct SpokeGraph {
    std::vector<RegularSpoke> regular;   // indices 1..R (the set T1)
    std::vector<long long> degenerate;   // cycle lengths, indices R+1.. (the set T0)

    SpokeGraph() = default;
    SpokeGraph(std::vector<RegularSpoke> reg, std::vector<long long> deg)
        : regular(std::move(reg)), degenerate(std::move(deg)) {
        if (regular.empty() && degenerate.empty())
            throw std::invalid_argument("spoke graph needs at least one spoke");
        for (auto& s : regular)
            if (s.m < 1 || s.d < 1) throw std::invalid_argument("regular spoke needs m,d >= 1");
        for (long long d : degenerate)
            if (d < 1) throw std::invalid_argument("degenerate spoke needs d >= 1");
    }
};

struct SpokeInvariants {
    long long bigD = 1;                                   // lcm{d_i : i in T1}
    std::map<int, long long> a;                           // a_i = m_i mod d_i
    std::map<int, std::set<long long>> K;                 // K_i inside [0, bigD)
    std::map<int, EventuallyPeriodicSet> per_spoke;       // S_i for every spoke index
    EventuallyPeriodicSet S;                              // the image gap set
};

inline EventuallyPeriodicSet regular_spoke_gaps(const RegularSpoke& s) {
    return EventuallyPeriodicSet::from_parts(s.m, {}, s.d, {s.m % s.d});
}

inline SpokeInvariants spoke_invariants(const SpokeGraph& sg) {
    SpokeInvariants inv;
    for (const auto& s : sg.regular) inv.bigD = std::lcm(inv.bigD, s.d);
    EventuallyPeriodicSet total;
    for (size_t i = 0; i < sg.regular.size(); ++i) {
        int idx = (int)i + 1;
        const auto& s = sg.regular[i];
        inv.a[idx] = s.m % s.d;
        std::set<long long> k;
        for (long long j = 0; j < inv.bigD / s.d; ++j) k.insert((inv.a[idx] + j * s.d) % inv.bigD);
        inv.K[idx] = std::move(k);
        inv.per_spoke[idx] = regular_spoke_gaps(s);
        total = total.set_union(inv.per_spoke[idx]);
    }
    for (size_t i = 0; i < sg.degenerate.size(); ++i) {
        int idx = (int)(sg.regular.size() + i) + 1;
        inv.per_spoke[idx] = EventuallyPeriodicSet::finite({sg.degenerate[i] - 1});
        total = total.set_union(inv.per_spoke[idx]);
    }
    inv.S = std::move(total);
    return inv;
}

// ---------------------------------------------------------------------------
// Explicit realization.  Vertex ids are assigned in declaration order with
// human-readable names; |gamma+| and |gamma-| take the balanced split of
// m+1, which only fixes a representative: every invariant depends on m alone.

struct RealizedSpokeGraph {
    MarkedGraph mg;
    VertexId b = 0;
    struct Part {
        std::vector<VertexId> gamma_plus;   // B .. B'
        std::vector<VertexId> gamma_minus;  // B' .. B
        std::vector<VertexId> cycle;        // B', c1, .., c_{d-1}
        std::set<VertexId> all;             // every vertex of the spoke except B
    };
    std::vector<Part> regular;                       // aligned with SpokeGraph::regular
    std::vector<std::vector<VertexId>> degenerate;   // B, c1, .., c_{d-1}
};

inline RealizedSpokeGraph realize_graph(const SpokeGraph& sg) {
    RealizedSpokeGraph out;
    LabeledGraph g;
    VertexId next = 0;
    VertexId b = next++;
    g.add_vertex(b, '1', "B");
    out.b = b;
    for (size_t i = 0; i < sg.regular.size(); ++i) {
        const auto& s = sg.regular[i];
        std::string tag = std::to_string(i + 1);
        long long plus_len = (s.m + 2) / 2, minus_len = (s.m + 1) - plus_len;
        RealizedSpokeGraph::Part part;
        part.gamma_plus.push_back(b);
        for (long long t = 1; t < plus_len; ++t) {
            VertexId v = next++;
            g.add_vertex(v, '0', "g+" + tag + "." + std::to_string(t));
            part.gamma_plus.push_back(v);
        }
        VertexId bp = next++;
        g.add_vertex(bp, '0', "B'" + tag);
        part.gamma_plus.push_back(bp);
        part.gamma_minus.push_back(bp);
        for (long long t = 1; t < minus_len; ++t) {
            VertexId v = next++;
            g.add_vertex(v, '0', "g-" + tag + "." + std::to_string(t));
            part.gamma_minus.push_back(v);
        }
        part.gamma_minus.push_back(b);
        part.cycle.push_back(bp);
        for (long long t = 1; t < s.d; ++t) {
            VertexId v = next++;
            g.add_vertex(v, '0', "c" + tag + "." + std::to_string(t));
            part.cycle.push_back(v);
        }
        for (size_t t = 0; t + 1 < part.gamma_plus.size(); ++t)
            g.add_edge(part.gamma_plus[t], part.gamma_plus[t + 1]);
        for (size_t t = 0; t + 1 < part.gamma_minus.size(); ++t)
            g.add_edge(part.gamma_minus[t], part.gamma_minus[t + 1]);
        for (size_t t = 0; t < part.cycle.size(); ++t)
            g.add_edge(part.cycle[t], part.cycle[(t + 1) % part.cycle.size()]);
        for (VertexId v : part.gamma_plus)
            if (v != b) part.all.insert(v);
        for (VertexId v : part.gamma_minus)
            if (v != b) part.all.insert(v);
        for (VertexId v : part.cycle) part.all.insert(v);
        out.regular.push_back(std::move(part));
    }
    for (size_t i = 0; i < sg.degenerate.size(); ++i) {
        long long d = sg.degenerate[i];
        std::string tag = std::to_string(sg.regular.size() + i + 1);
        std::vector<VertexId> cyc{b};
        for (long long t = 1; t < d; ++t) {
            VertexId v = next++;
            g.add_vertex(v, '0', "c" + tag + "." + std::to_string(t));
            cyc.push_back(v);
        }
        for (size_t t = 0; t < cyc.size(); ++t)
            g.add_edge(cyc[t], cyc[(t + 1) % cyc.size()]);
        out.degenerate.push_back(std::move(cyc));
    }
    out.mg = MarkedGraph(std::move(g), {b});
    return out;
}

// ---------------------------------------------------------------------------
// The W-search.  Exhaustive after deduplicating equal K_i, subsets visited in
// order of cardinality then lexicographically, so the reported W is the least
// valid choice.

inline std::optional<std::set<int>> find_W(const SpokeInvariants& inv) {
    std::vector<int> reps;  // least index per distinct K_i
    {
        std::set<std::set<long long>> seen;
        for (auto& [i, k] : inv.K)
            if (seen.insert(k).second) reps.push_back(i);
    }
    std::set<long long> target;
    for (auto& [i, k] : inv.K) target.insert(k.begin(), k.end());

    const int n = (int)reps.size();
    for (int size = 0; size <= n; ++size) {
        std::vector<int> pick(size);
        // lexicographic combinations of `reps` indices
        std::function<std::optional<std::set<int>>(int, int)> rec =
            [&](int start, int depth) -> std::optional<std::set<int>> {
            if (depth == size) {
                std::set<long long> covered;
                for (int t = 0; t < size; ++t) {
                    const auto& k = inv.K.at(pick[t]);
                    for (long long r : k)
                        if (!covered.insert(r).second) return std::nullopt;  // overlap
                }
                if (covered == target) return std::set<int>(pick.begin(), pick.end());
                return std::nullopt;
            }
            for (int i = start; i < n; ++i) {
                pick[depth] = reps[i];
                if (auto w = rec(i + 1, depth + 1)) return w;
            }
            return std::nullopt;
        };
        if (auto w = rec(0, 0)) return w;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Construction of H and Psi.  H keeps the W-spokes and the needed degenerate
// spokes of G verbatim (Psi is the identity there) and adds one fresh simple
// cycle C(r) at B for every gap r the kept spokes miss; Psi maps C(r) onto a
// chosen first-return cycle of G of the same length.

struct HConstruction {
    MarkedGraph h;
    std::map<VertexId, VertexId> psi;           // H vertex -> G vertex
    std::vector<long long> added_cycle_gaps;    // r for each C(r), ascending
    std::vector<int> kept_degenerate;           // spoke indices kept in step (C)
    EventuallyPeriodicSet s0, s1, s2;
};

inline HConstruction construct_H(const SpokeGraph& sg, const RealizedSpokeGraph& rg,
                                 const SpokeInvariants& inv, const std::set<int>& w) {
    const int regular_count = (int)sg.regular.size();
    for (int i : w)
        if (i < 1 || i > regular_count) throw std::invalid_argument("W must index regular spokes");
    {
        std::set<long long> covered, target;
        for (int i : w)
            for (long long r : inv.K.at(i))
                if (!covered.insert(r).second)
                    throw std::invalid_argument("W is not pairwise disjoint");
        for (auto& [i, k] : inv.K) target.insert(k.begin(), k.end());
        if (covered != target) throw std::invalid_argument("W does not cover the residue classes");
    }

    HConstruction out;
    for (int i : w) out.s0 = out.s0.set_union(inv.per_spoke.at(i));
    for (int i = 1; i <= regular_count; ++i) out.s1 = out.s1.set_union(inv.per_spoke.at(i));
    for (size_t i = 0; i < sg.degenerate.size(); ++i)
        out.s2 = out.s2.set_union(inv.per_spoke.at(regular_count + (int)i + 1));

    EventuallyPeriodicSet missing_regular = out.s1.set_difference(out.s0);
    if (!missing_regular.is_finite())
        throw std::runtime_error("internal consistency error: S(1) \\ S(0) must be finite");
    EventuallyPeriodicSet missing_degenerate = out.s2.set_difference(out.s1);

    const LabeledGraph& g = rg.mg.graph;
    LabeledGraph h;
    std::set<VertexId> keep{rg.b};
    for (int i : w)
        keep.insert(rg.regular[i - 1].all.begin(), rg.regular[i - 1].all.end());
    if (!missing_degenerate.empty()) {
        for (long long s : missing_degenerate.members_upto(*missing_degenerate.max_element())) {
            // choose the least-index degenerate spoke of cycle length s+1
            for (size_t i = 0; i < sg.degenerate.size(); ++i)
                if (sg.degenerate[i] == s + 1) {
                    keep.insert(rg.degenerate[i].begin() + 1, rg.degenerate[i].end());
                    out.kept_degenerate.push_back(regular_count + (int)i + 1);
                    break;
                }
        }
    }
    h = induced_subgraph(g, keep);
    for (VertexId v : h.vertices) out.psi[v] = v;

    VertexId next = g.vertices.empty() ? 1 : g.vertices.back() + 1;
    if (!missing_regular.empty()) {
        for (long long r : missing_regular.members_upto(*missing_regular.max_element())) {
            auto target_cycle = least_path_exact(g, rg.b, rg.b, {rg.b}, r + 1);
            if (!target_cycle)
                throw std::runtime_error("internal consistency error: no first-return cycle of length " +
                                         std::to_string(r + 1));
            out.added_cycle_gaps.push_back(r);
            VertexId prev = rg.b;
            for (long long t = 1; t <= r; ++t) {
                VertexId v = next++;
                h.add_vertex(v, '0', "C" + std::to_string(r) + "." + std::to_string(t));
                out.psi[v] = (*target_cycle)[t];
                h.add_edge(prev, v);
                prev = v;
            }
            h.add_edge(prev, rg.b);
        }
    }
    out.h = MarkedGraph(std::move(h), {rg.b});
    return out;
}

// ---------------------------------------------------------------------------
// P2 decision with machine-checkable certificates.

struct P2Certificates {
    bool no_diamond = false;
    int degree_value = 0;
    Word magic_word;
    char magic_block = '0';
    bool gap_sets_equal = false;
    bool psi_injective = false;
    int psi_injectivity_len = 0;
    bool all() const { return no_diamond && degree_value == 1 && gap_sets_equal && psi_injective; }
};

struct P2Result {
    bool holds = false;
    SpokeInvariants inv;
    std::optional<std::set<int>> w;
    std::optional<HConstruction> h;
    std::optional<P2Certificates> certificates;
};

inline P2Certificates certify_H(const HConstruction& hc, const EventuallyPeriodicSet& expected_gaps) {
    P2Certificates c;
    c.no_diamond = !has_graph_diamond(hc.h);
    if (c.no_diamond) {
        DegreeResult dr = degree(hc.h);
        c.degree_value = dr.degree;
        c.magic_word = dr.magic_word;
        c.magic_block = dr.magic_block;
    }
    c.gap_sets_equal = image_gap_set(hc.h) == expected_gaps;
    c.psi_injectivity_len = 2 * (int)hc.h.graph.vertices.size() + 1;
    c.psi_injective = map_injective_upto(hc.h.graph, hc.psi, c.psi_injectivity_len);
    return c;
}

inline P2Result check_p2(const SpokeGraph& sg) {
    P2Result out;
    out.inv = spoke_invariants(sg);
    out.w = find_W(out.inv);
    if (!out.w) return out;
    RealizedSpokeGraph rg = realize_graph(sg);
    out.h = construct_H(sg, rg, out.inv, *out.w);
    out.certificates = certify_H(*out.h, out.inv.S);
    out.holds = out.certificates->all();
    return out;
}

// ---------------------------------------------------------------------------
// The two-cycle graph: one path pair B -> B' -> B plus two cycles C1, C2 at
// B'.  The standard code always admits a finite-to-one onto restriction; the
// witness deletes C2 and adds a long path that re-enters B' after every
// residue y*d2 (0 < y < u) of turns around the deleted cycle.

struct TwoCycleGraph {
    long long m, d1, d2;

    TwoCycleGraph(long long m_, long long d1_, long long d2_) : m(m_), d1(d1_), d2(d2_) {
        if (m < 1 || d1 < 1 || d2 < 1) throw std::invalid_argument("two-cycle graph needs m,d1,d2 >= 1");
    }
};

inline EventuallyPeriodicSet two_cycle_gap_set(const TwoCycleGraph& g) {
    long long gc = std::gcd(g.d1, g.d2);
    long long t = g.m + g.d1 * g.d2 + 1;
    std::set<long long> exc;
    for (long long n = 0; n < t; ++n) {
        long long r = n - g.m;
        if (r < 0) continue;
        for (long long s = 0; s * g.d1 <= r; ++s)
            if ((r - s * g.d1) % g.d2 == 0) {
                exc.insert(n);
                break;
            }
    }
    return EventuallyPeriodicSet::from_parts(t, exc, gc, {((g.m % gc) + gc) % gc});
}

// Unique representation n = x*d1 + y*d2 with x >= 0 and 0 <= y < u,
// u = lcm(d1,d2)/d2; none when n is not a nonnegative combination.
inline std::optional<std::pair<long long, long long>> two_cycle_unique_rep(long long n,
                                                                           const TwoCycleGraph& g) {
    if (n < 0) return std::nullopt;
    long long u = std::lcm(g.d1, g.d2) / g.d2;
    std::optional<std::pair<long long, long long>> found;
    for (long long y = 0; y < u; ++y) {
        long long rest = n - y * g.d2;
        if (rest < 0 || rest % g.d1 != 0) continue;
        if (found) throw std::logic_error("representation is not unique");
        found = {rest / g.d1, y};
    }
    return found;
}

struct RealizedTwoCycle {
    MarkedGraph mg;
    VertexId b = 0, bprime = 0;
    std::vector<VertexId> gamma_plus;   // B .. B'
    std::vector<VertexId> gamma_minus;  // B' .. B
    std::vector<VertexId> cycle1;       // B', a1, ..
    std::vector<VertexId> cycle2;       // B' = f1, f2, ..
};

inline RealizedTwoCycle realize_two_cycle(const TwoCycleGraph& tc) {
    RealizedTwoCycle out;
    LabeledGraph g;
    VertexId next = 0;
    out.b = next++;
    g.add_vertex(out.b, '1', "B");
    long long plus_len = (tc.m + 2) / 2, minus_len = (tc.m + 1) - plus_len;
    out.gamma_plus.push_back(out.b);
    for (long long t = 1; t < plus_len; ++t) {
        VertexId v = next++;
        g.add_vertex(v, '0', "g" + std::to_string(t));
        out.gamma_plus.push_back(v);
    }
    out.bprime = next++;
    g.add_vertex(out.bprime, '0', "B'");
    out.gamma_plus.push_back(out.bprime);
    out.gamma_minus.push_back(out.bprime);
    for (long long t = 1; t < minus_len; ++t) {
        VertexId v = next++;
        g.add_vertex(v, '0', "h" + std::to_string(t));
        out.gamma_minus.push_back(v);
    }
    out.gamma_minus.push_back(out.b);
    out.cycle1.push_back(out.bprime);
    for (long long t = 1; t < tc.d1; ++t) {
        VertexId v = next++;
        g.add_vertex(v, '0', "a" + std::to_string(t));
        out.cycle1.push_back(v);
    }
    out.cycle2.push_back(out.bprime);
    for (long long t = 1; t < tc.d2; ++t) {
        VertexId v = next++;
        g.add_vertex(v, '0', "f" + std::to_string(t + 1));
        out.cycle2.push_back(v);
    }
    for (size_t t = 0; t + 1 < out.gamma_plus.size(); ++t)
        g.add_edge(out.gamma_plus[t], out.gamma_plus[t + 1]);
    for (size_t t = 0; t + 1 < out.gamma_minus.size(); ++t)
        g.add_edge(out.gamma_minus[t], out.gamma_minus[t + 1]);
    for (size_t t = 0; t < out.cycle1.size(); ++t)
        g.add_edge(out.cycle1[t], out.cycle1[(t + 1) % out.cycle1.size()]);
    for (size_t t = 0; t < out.cycle2.size(); ++t)
        g.add_edge(out.cycle2[t], out.cycle2[(t + 1) % out.cycle2.size()]);
    out.mg = MarkedGraph(std::move(g), {out.b});
    return out;
}

struct TwoCycleConstruction {
    MarkedGraph h;
    std::map<VertexId, VertexId> psi;  // H vertex -> G vertex
    RealizedTwoCycle base;             // the realized G
    long long u = 1;
};

// Steps: (A) delete C2; (B) if u > 1 add a path beta from B to B' of length
// |gamma+| + (u-1) d2 tracing gamma+ then u-1 copies of C2; (C) shortcut
// edges from the end of each of the first u-2 copies back to B'.  Psi sends
// the copies back onto gamma+ and C2.
inline TwoCycleConstruction construct_H_two_cycle(const TwoCycleGraph& tc_in, bool swap_cycles = false) {
    TwoCycleGraph tc = swap_cycles ? TwoCycleGraph(tc_in.m, tc_in.d2, tc_in.d1) : tc_in;
    TwoCycleConstruction out;
    out.base = realize_two_cycle(tc);
    const RealizedTwoCycle& rg = out.base;
    out.u = std::lcm(tc.d1, tc.d2) / tc.d2;

    std::set<VertexId> keep;
    for (VertexId v : rg.mg.graph.vertices) keep.insert(v);
    for (size_t t = 1; t < rg.cycle2.size(); ++t) keep.erase(rg.cycle2[t]);
    LabeledGraph h = induced_subgraph(rg.mg.graph, keep);
    if (tc.d2 == 1) h.edges.erase({rg.bprime, rg.bprime});  // C2 was a self-loop at B'
    for (VertexId v : h.vertices) out.psi[v] = v;

    if (out.u > 1) {
        VertexId next = rg.mg.graph.vertices.back() + 1;
        VertexId prev = rg.b;
        // beta: primed copies of the gamma+ interior, then u-1 copies of C2
        for (size_t t = 1; t + 1 < rg.gamma_plus.size(); ++t) {
            VertexId v = next++;
            h.add_vertex(v, '0', "g'" + std::to_string(t));
            out.psi[v] = rg.gamma_plus[t];
            h.add_edge(prev, v);
            prev = v;
        }
        std::vector<VertexId> copy_end(out.u, -1);  // f_{d2}^{(k)} per copy
        for (long long k = 1; k <= out.u - 1; ++k) {
            for (long long j = 1; j <= tc.d2; ++j) {
                VertexId v = next++;
                h.add_vertex(v, '0',
                             "f" + std::to_string(j) + "_" + std::to_string(k));
                out.psi[v] = rg.cycle2[(size_t)(j - 1)];
                h.add_edge(prev, v);
                prev = v;
            }
            copy_end[k] = prev;
        }
        h.add_edge(prev, rg.bprime);
        for (long long j = 1; j <= out.u - 2; ++j) h.add_edge(copy_end[j], rg.bprime);
    }
    out.h = MarkedGraph(std::move(h), {rg.b});
    return out;
}

// ---------------------------------------------------------------------------
// Spec files: lines `regular m=<int> d=<int>`, `degenerate d=<int>`, or a
// single `twocycle m=<int> d1=<int> d2=<int>`.

using SpokeSpec = std::variant<SpokeGraph, TwoCycleGraph>;

inline SpokeSpec parse_spoke_spec(const std::string& text) {
    std::vector<RegularSpoke> regular;
    std::vector<long long> degenerate;
    std::optional<TwoCycleGraph> twocycle;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    auto field = [&](std::istringstream& ls, const std::string& key) {
        std::string tok;
        if (!(ls >> tok) || tok.rfind(key + "=", 0) != 0)
            throw parse_error("line " + std::to_string(lineno) + ": expected " + key + "=<int>");
        try {
            return std::stoll(tok.substr(key.size() + 1));
        } catch (const std::exception&) {
            throw parse_error("line " + std::to_string(lineno) + ": bad integer in " + tok);
        }
    };
    while (std::getline(is, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string kind;
        if (!(ls >> kind) || kind[0] == '#') continue;
        if (kind == "regular") {
            long long m = field(ls, "m"), d = field(ls, "d");
            regular.push_back({m, d});
        } else if (kind == "degenerate") {
            degenerate.push_back(field(ls, "d"));
        } else if (kind == "twocycle") {
            long long m = field(ls, "m"), d1 = field(ls, "d1"), d2 = field(ls, "d2");
            twocycle = TwoCycleGraph(m, d1, d2);
        } else {
            throw parse_error("line " + std::to_string(lineno) + ": unknown spoke kind '" + kind + "'");
        }
    }
    if (twocycle) {
        if (!regular.empty() || !degenerate.empty())
            throw parse_error("twocycle specs cannot mix with spoke lines");
        return *twocycle;
    }
    if (regular.empty() && degenerate.empty()) throw parse_error("spec declares no spokes");
    return SpokeGraph(std::move(regular), std::move(degenerate));
}

inline std::string write_spoke_spec(const SpokeGraph& sg) {
    std::ostringstream os;
    for (auto& s : sg.regular) os << "regular m=" << s.m << " d=" << s.d << "\n";
    for (long long d : sg.degenerate) os << "degenerate d=" << d << "\n";
    return os.str();
}

}  // namespace gapcode
