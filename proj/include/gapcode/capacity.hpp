#pragma once

// The channel view of a factor code and the capacity-achievability necessary
// conditions.  The deterministic channel defined by the code has capacity
// h_top(Y); a stationary Markov input achieves it iff it pushes forward to
// the maximal-entropy measure on Y.  For standard codes on spoke graphs the
// existence of such an input forces combinatorial conditions on the residue
// classes K_i and an exact linear feasibility over the support; both are
// checked here, together with orbit-weight and pushforward validators for
// explicit witnesses.

#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <vector>

#include "gapcode/errors.hpp"
#include "gapcode/eventually_periodic_set.hpp"
#include "gapcode/factor_code.hpp"
#include "gapcode/gap_shift.hpp"
#include "gapcode/graph.hpp"
#include "gapcode/linear_feasibility.hpp"
#include "gapcode/spoke.hpp"

namespace gapcode {

// Order-1 stochastic transition assignment supported on a subgraph.
struct MarkovMeasure {
    LabeledGraph graph;
    std::map<std::pair<VertexId, VertexId>, double> transition;
    std::map<VertexId, double> stationary;

    std::set<VertexId> support() const {
        std::set<VertexId> s;
        for (auto& [v, p] : stationary)
            if (p > 0) s.insert(v);
        return s;
    }

    // Row sums over the support, stationarity, and support containment.
    bool valid(double tol = 1e-9) const {
        for (auto& [e, p] : transition) {
            if (p < -tol) return false;
            if (p > 0 && !graph.has_edge(e.first, e.second)) return false;
        }
        for (VertexId v : support()) {
            double row = 0;
            for (auto& [e, p] : transition)
                if (e.first == v) row += p;
            if (std::abs(row - 1.0) > tol) return false;
        }
        for (VertexId v : graph.vertices) {
            double in = 0;
            for (auto& [e, p] : transition) {
                auto it = stationary.find(e.first);
                if (e.second == v && it != stationary.end()) in += it->second * p;
            }
            double here = stationary.count(v) ? stationary.at(v) : 0.0;
            if (std::abs(in - here) > tol) return false;
        }
        return true;
    }
};

// Markov measure of maximal entropy of an irreducible graph: transition
// probabilities proportional to the right Perron vector, stationary law
// proportional to the product of left and right vectors.  Power iteration on
// A + I (primitive for irreducible A, so periodic graphs converge too).
inline MarkovMeasure parry_measure(const LabeledGraph& graph) {
    LabeledGraph g = trim_stranded(graph);
    if (!is_irreducible(g)) throw std::invalid_argument("Parry measure needs an irreducible graph");
    const size_t n = g.vertices.size();
    std::map<VertexId, size_t> idx;
    for (size_t i = 0; i < n; ++i) idx[g.vertices[i]] = i;
    std::vector<std::vector<size_t>> succ(n), pred(n);
    for (auto& [u, v] : g.edges) {
        succ[idx[u]].push_back(idx[v]);
        pred[idx[v]].push_back(idx[u]);
    }
    auto iterate = [&](const std::vector<std::vector<size_t>>& adj) {
        std::vector<double> v(n, 1.0 / n), next(n);
        double lambda = 1.0;
        for (int it = 0; it < 100000; ++it) {
            double norm = 0;
            for (size_t i = 0; i < n; ++i) {
                next[i] = v[i];  // the +I part
                for (size_t j : adj[i]) next[i] += v[j];
                norm += next[i];
            }
            double delta = 0;
            for (size_t i = 0; i < n; ++i) {
                next[i] /= norm;
                delta = std::max(delta, std::abs(next[i] - v[i]));
            }
            v.swap(next);
            lambda = norm - 1.0;
            if (delta < 1e-16 && it > 10) break;
        }
        return std::make_pair(v, lambda);
    };
    auto [right, lambda] = iterate(succ);
    auto [left, lambda2] = iterate(pred);
    (void)lambda2;

    MarkovMeasure nu;
    nu.graph = g;
    for (auto& [u, v] : g.edges)
        nu.transition[{u, v}] = right[idx[v]] / (lambda * right[idx[u]]);
    double z = 0;
    for (size_t i = 0; i < n; ++i) z += left[i] * right[i];
    for (size_t i = 0; i < n; ++i) nu.stationary[g.vertices[i]] = left[i] * right[i] / z;
    return nu;
}

// Capacity of the deterministic channel: h_top(Y) = log lambda.
inline double channel_capacity(const GapShift& y, double tol = 1e-12) {
    return gap_entropy(y, tol);
}
inline double channel_capacity(const EventuallyPeriodicSet& gaps, double tol = 1e-12) {
    return gap_entropy(GapShift(gaps), tol);
}
inline double channel_capacity(const SpokeGraph& sg, double tol = 1e-12) {
    return channel_capacity(spoke_invariants(sg).S, tol);
}
inline double channel_capacity(const MarkedGraph& mg, double tol = 1e-12) {
    return channel_capacity(image_gap_set(mg), tol);
}

// Least common solution of x = a_i (mod d_i).  Pairwise compatibility
// (gcd(d_i,d_j) divides a_i - a_j) is exactly joint solvability, so the
// congruences are merged two at a time.
inline std::optional<long long> crt_common_solution(
    const std::vector<std::pair<long long, long long>>& congruences) {
    long long a = 0, d = 1;
    for (auto& [ai, di] : congruences) {
        if (di < 1) throw std::invalid_argument("modulus must be >= 1");
        long long ai_n = ((ai % di) + di) % di;
        long long g = std::gcd(d, di);
        if ((ai_n - a) % g != 0) return std::nullopt;
        long long lcm = d / g * di;
        if (lcm > (long long)4e15) throw std::invalid_argument("combined modulus too large");
        // a' = a + d * t where t solves  a + d t = ai (mod di)
        long long step = di / g;
        long long rhs = (((ai_n - a) / g) % step + step) % step;
        long long dg = (d / g) % step;
        // modular inverse of dg mod step by extended gcd
        long long t0 = 0, t1 = 1, r0 = step, r1 = dg % step;
        while (r1 != 0) {
            long long q = r0 / r1;
            r0 -= q * r1;
            std::swap(r0, r1);
            t0 -= q * t1;
            std::swap(t0, t1);
        }
        long long inv = ((t0 % step) + step) % step;
        long long t = (__int128)rhs * inv % step;
        a = a + d * (((t % step) + step) % step);
        d = lcm;
        a %= d;
    }
    return a;
}

// ---------------------------------------------------------------------------
// Necessary conditions for capacity-achieving Markov inputs on spoke graphs.
//
// For a support P of regular spokes, three conditions must hold:
//   (b) the classes of the spokes outside P are covered by those inside,
//   (c) the sets R_j = {i in P : j in K_i} form an antichain over the
//       realized residues j, and
//   (a) there are c_i > 0 whose sums over each R_j agree (the exact linear
//       face of the weight identity; Q and the Markov order cancel out).

struct P3Report {
    double q = 1.0;  // e^{h_top(Y)}
    std::vector<std::set<int>> feasible_supports;
    std::map<std::set<int>, std::set<char>> side_conditions;  // which of (a)(b)(c)(d) hold
};

namespace detail {

inline std::set<long long> union_classes(const SpokeInvariants& inv, const std::set<int>& idxs) {
    std::set<long long> u;
    for (int i : idxs) {
        const auto& k = inv.K.at(i);
        u.insert(k.begin(), k.end());
    }
    return u;
}

inline std::set<int> regular_indices(const SpokeInvariants& inv) {
    std::set<int> t1;
    for (auto& [i, k] : inv.K) t1.insert(i);
    return t1;
}

}  // namespace detail

// Condition (b): classes outside P covered inside P.
inline bool p3_condition_b(const SpokeInvariants& inv, const std::set<int>& p) {
    return detail::union_classes(inv, detail::regular_indices(inv)) ==
           detail::union_classes(inv, p);
}

// Condition (c): R_{j'} cap P contained in R_j cap P forces equality.
inline bool p3_condition_c(const SpokeInvariants& inv, const std::set<int>& p) {
    std::set<long long> u = detail::union_classes(inv, detail::regular_indices(inv));
    std::vector<std::set<int>> rj;
    for (long long j : u) {
        std::set<int> r;
        for (int i : p)
            if (inv.K.at(i).count(j)) r.insert(i);
        rj.push_back(std::move(r));
    }
    for (auto& x : rj)
        for (auto& y : rj)
            if (x != y && std::includes(y.begin(), y.end(), x.begin(), x.end())) return false;
    return true;
}

// Condition (a) as exact linear feasibility in the c_i variables.
inline bool p3_condition_a(const SpokeInvariants& inv, const std::set<int>& p) {
    std::set<long long> u = detail::union_classes(inv, detail::regular_indices(inv));
    std::vector<int> order(p.begin(), p.end());
    std::map<int, int> var;
    for (size_t i = 0; i < order.size(); ++i) var[order[i]] = (int)i;
    std::vector<std::set<int>> groups;
    for (long long j : u) {
        std::set<int> g;
        for (int i : p)
            if (inv.K.at(i).count(j)) g.insert(var[i]);
        groups.push_back(std::move(g));
    }
    return equal_sum_positive_feasible(groups, (int)order.size());
}

inline P3Report p3_necessary(const SpokeInvariants& inv, double q) {
    P3Report out;
    out.q = q;
    std::set<int> t1 = detail::regular_indices(inv);
    if (t1.size() > 16) throw std::invalid_argument("support enumeration capped at 16 regular spokes");
    if (t1.empty()) {
        out.feasible_supports.push_back({});  // no regular spokes: vacuously feasible
        return out;
    }
    std::vector<int> order(t1.begin(), t1.end());
    for (unsigned long long mask = 1; mask < (1ull << order.size()); ++mask) {
        std::set<int> p;
        for (size_t i = 0; i < order.size(); ++i)
            if (mask & (1ull << i)) p.insert(order[i]);
        if (!p3_condition_b(inv, p)) continue;
        if (!p3_condition_c(inv, p)) continue;
        if (!p3_condition_a(inv, p)) continue;
        out.feasible_supports.push_back(p);
    }
    return out;
}

// The four sufficient side conditions under which capacity-achievability is
// known to force a valid W: (a) common residue, (b) pairwise intersection,
// (c) two disjoint families covering everything, (d) small support.
inline std::set<char> side_conditions_check(const SpokeInvariants& inv, const std::set<int>& p) {
    if (p.empty()) throw std::invalid_argument("support must be nonempty");
    if (p.size() > 14) throw std::invalid_argument("side-condition enumeration capped at 14");
    std::set<char> out;
    // (a) nonempty common intersection
    std::set<long long> inter = inv.K.at(*p.begin());
    for (int i : p) {
        std::set<long long> next;
        for (long long r : inv.K.at(i))
            if (inter.count(r)) next.insert(r);
        inter = std::move(next);
    }
    if (!inter.empty()) out.insert('a');
    // (b) all pairwise intersections nonempty
    bool pairwise = true;
    for (int i : p)
        for (int j : p) {
            if (i >= j) continue;
            bool hit = false;
            for (long long r : inv.K.at(i))
                if (inv.K.at(j).count(r)) { hit = true; break; }
            if (!hit) pairwise = false;
        }
    if (pairwise) out.insert('b');
    // (c) two pairwise-disjoint families within P covering every class
    {
        std::set<long long> target = detail::union_classes(inv, detail::regular_indices(inv));
        std::vector<int> order(p.begin(), p.end());
        std::vector<unsigned> disjoint_masks;
        for (unsigned mask = 0; mask < (1u << order.size()); ++mask) {
            std::set<long long> seen;
            bool ok = true;
            for (size_t i = 0; ok && i < order.size(); ++i) {
                if (!(mask & (1u << i))) continue;
                for (long long r : inv.K.at(order[i]))
                    if (!seen.insert(r).second) { ok = false; break; }
            }
            if (ok) disjoint_masks.push_back(mask);
        }
        bool found = false;
        for (size_t x = 0; !found && x < disjoint_masks.size(); ++x)
            for (size_t y = x; !found && y < disjoint_masks.size(); ++y) {
                std::set<long long> covered;
                unsigned both = disjoint_masks[x] | disjoint_masks[y];
                for (size_t i = 0; i < order.size(); ++i)
                    if (both & (1u << i)) {
                        const auto& k = inv.K.at(order[i]);
                        covered.insert(k.begin(), k.end());
                    }
                if (covered == target) found = true;
            }
        if (found) out.insert('c');
    }
    if (p.size() <= 5) out.insert('d');
    return out;
}

inline P3Report p3_necessary_with_side_conditions(const SpokeInvariants& inv, double q) {
    P3Report out = p3_necessary(inv, q);
    for (auto& p : out.feasible_supports)
        if (!p.empty()) out.side_conditions[p] = side_conditions_check(inv, p);
    return out;
}

// ---------------------------------------------------------------------------
// Witness validation.

// Every periodic orbit of length <= maxlen in the support must have
// per-symbol weight within tol of e^{-h}.
inline bool weight_per_symbol_check(const MarkovMeasure& nu, double h, int maxlen, double tol) {
    double target = std::exp(-h);
    std::set<VertexId> supp = nu.support();
    std::map<VertexId, std::vector<std::pair<VertexId, double>>> succ;
    for (auto& [e, p] : nu.transition)
        if (p > 0 && supp.count(e.first) && supp.count(e.second))
            succ[e.first].push_back({e.second, p});
    for (VertexId start : supp) {
        // DFS over weighted walks from `start`, checking every closure.
        std::function<bool(VertexId, int, double)> dfs = [&](VertexId v, int len, double w) {
            if (len > 0 && v == start) {
                if (std::abs(std::pow(w, 1.0 / len) - target) > tol) return false;
            }
            if (len == maxlen) return true;
            auto it = succ.find(v);
            if (it == succ.end()) return true;
            for (auto& [nv, p] : it->second)
                if (!dfs(nv, len + 1, w * p)) return false;
            return true;
        };
        if (!dfs(start, 0, 1.0)) return false;
    }
    return true;
}

// Pushforward gap law versus the maximal-entropy law of Y: the measure of
// seeing i unmarked steps between marked visits must equal lambda^{-i-1} for
// i in S and vanish otherwise.
inline bool validate_capacity_witness(const MarkovMeasure& nu, const MarkedGraph& code,
                                      const GapShift& y, long long max_gap, double tol) {
    double lambda = gap_entropy_root(y);
    double marked_mass = 0;
    std::map<VertexId, double> w;
    for (VertexId v : code.marked) {
        double p = nu.stationary.count(v) ? nu.stationary.at(v) : 0.0;
        if (p > 0) w[v] = p;
        marked_mass += p;
    }
    if (marked_mass <= 0) return false;
    for (long long gap = 0; gap <= max_gap; ++gap) {
        // one transition step from w, split into marked (gap closes) and not
        std::map<VertexId, double> next;
        double closed = 0;
        for (auto& [u, mass] : w)
            for (auto& [e, p] : nu.transition) {
                if (e.first != u || p <= 0) continue;
                if (code.marked.count(e.second)) closed += mass * p;
                else next[e.second] += mass * p;
            }
        double expected = y.gaps.contains(gap) ? std::pow(lambda, -(double)(gap + 1)) : 0.0;
        if (std::abs(closed / marked_mass - expected) > tol) return false;
        w = std::move(next);
    }
    return true;
}

}  // namespace gapcode
