#pragma once

// The one-to-one restriction problem (P1).  A factor code with an
// unambiguous symbol admits a sub-SFT Z on which it restricts to a conjugacy
// onto Y exactly when the image gap set is finite (C1) or the domain has a
// fixed point other than the marker orbit (C2).  The witnessing Z is built
// explicitly: one cycle through the marked vertex per exceptional gap, and
// under C2 a spoke through a self-loop that realizes every large gap.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gapcode/errors.hpp"
#include "gapcode/factor_code.hpp"
#include "gapcode/gap_shift.hpp"
#include "gapcode/graph.hpp"

namespace gapcode {

enum class P1Witness { none, C1, C2 };

struct P1Verdict {
    bool holds = false;
    P1Witness witness = P1Witness::none;
    std::optional<VertexId> fixed_vertex;  // the unmarked self-loop vertex A under C2
    EventuallyPeriodicSet gap_set;         // S of the image Y
};

// After recoding, a fixed point of the domain other than the marker orbit is
// exactly a self-loop at an unmarked vertex (a self-loop at a marked vertex
// is the marker orbit itself and is excluded).
namespace detail {

inline P1Verdict p1_verdict_for(const MarkedGraph& mg, EventuallyPeriodicSet gap_set) {
    P1Verdict v;
    v.gap_set = std::move(gap_set);
    if (v.gap_set.is_finite()) {
        v.holds = true;
        v.witness = P1Witness::C1;
        return v;
    }
    for (VertexId u : mg.graph.vertices)
        if (!mg.marked.count(u) && mg.graph.has_edge(u, u)) {
            v.holds = true;
            v.witness = P1Witness::C2;
            v.fixed_vertex = u;
            return v;
        }
    return v;
}

}  // namespace detail

inline P1Verdict check_p1(const MarkedGraph& mg, long long bound) {
    return detail::p1_verdict_for(mg, image_gap_set(mg, bound));
}

inline P1Verdict check_p1(const MarkedGraph& mg) {
    return detail::p1_verdict_for(mg, image_gap_set(mg));
}

inline P1Verdict check_p1(const UnambiguousCode& code) {
    return check_p1(recode_to_marked(code));
}

// The explicit conjugacy witness.  `z` presents Z as a vertex shift; `psi`
// projects it into the domain graph; `cycle_for_gap` records the chosen
// first-return cycle (as a domain vertex sequence) for every exceptional gap.
struct EtaConstruction {
    MarkedGraph z;
    std::map<VertexId, VertexId> psi;
    std::map<long long, std::vector<VertexId>> cycle_for_gap;
    std::vector<VertexId> beta_plus;   // marked vertex -> A, domain ids (C2 only)
    std::vector<VertexId> beta_minus;  // A -> marked vertex, domain ids (C2 only)
    std::optional<VertexId> tau_vertex;
    long long radius = 0;  // N: the code eta has sliding-block radius N
    EventuallyPeriodicSet gap_set;
};

inline EtaConstruction construct_eta(const MarkedGraph& mg, const P1Verdict& verdict) {
    if (!verdict.holds) throw std::invalid_argument("construct_eta requires a holding verdict");
    const LabeledGraph& g = mg.graph;
    const EventuallyPeriodicSet& s = verdict.gap_set;
    VertexId base = *mg.marked.begin();  // least marked vertex

    EtaConstruction out;
    out.gap_set = s;

    std::vector<long long> small_gaps;
    if (verdict.witness == P1Witness::C2) {
        VertexId a = *verdict.fixed_vertex;
        long long maxlen = (long long)g.vertices.size() + 1;
        auto bp = shortest_least_path(g, base, a, mg.marked, maxlen);
        auto bm = shortest_least_path(g, a, base, mg.marked, maxlen);
        if (!bp || !bm)
            throw std::runtime_error(
                "internal consistency error: no marked-free path between marker and fixed point");
        out.beta_plus = *bp;
        out.beta_minus = *bm;
        out.tau_vertex = a;
        out.radius = (long long)(bp->size() - 1) + (long long)(bm->size() - 1) - 1;
        if (!EventuallyPeriodicSet::arithmetic_from(out.radius, 1).is_subset_of(s))
            throw std::runtime_error("internal consistency error: gaps >= N must all occur");
        for (long long gap : s.members_upto(out.radius - 1)) small_gaps.push_back(gap);
    } else {
        for (long long gap : s.members_upto(*s.max_element())) small_gaps.push_back(gap);
    }

    for (long long gap : small_gaps) {
        auto cyc = least_path_exact(g, base, base, mg.marked, gap + 1);
        if (!cyc)
            throw std::runtime_error("internal consistency error: gap " + std::to_string(gap) +
                                     " has no first-return cycle through the marked vertex");
        out.cycle_for_gap[gap] = *cyc;
    }

    // Assemble the presentation of Z: a central copy of the marked vertex, one
    // simple cycle per exceptional gap, and under C2 a spoke through a copy
    // of A carrying its self-loop.
    LabeledGraph z;
    VertexId next_id = 0;
    VertexId zb = next_id++;
    z.add_vertex(zb, '1', "B");
    out.psi[zb] = base;
    for (long long gap : small_gaps) {
        const auto& cyc = out.cycle_for_gap.at(gap);
        VertexId prev = zb;
        for (size_t t = 1; t + 1 < cyc.size(); ++t) {
            VertexId id = next_id++;
            z.add_vertex(id, '0', "z" + std::to_string(gap) + "." + std::to_string(t));
            out.psi[id] = cyc[t];
            z.add_edge(prev, id);
            prev = id;
        }
        z.add_edge(prev, zb);
    }
    if (verdict.witness == P1Witness::C2) {
        VertexId prev = zb;
        for (size_t t = 1; t + 1 < out.beta_plus.size(); ++t) {
            VertexId id = next_id++;
            z.add_vertex(id, '0', "p+" + std::to_string(t));
            out.psi[id] = out.beta_plus[t];
            z.add_edge(prev, id);
            prev = id;
        }
        VertexId za = next_id++;
        z.add_vertex(za, '0', "A");
        out.psi[za] = *verdict.fixed_vertex;
        z.add_edge(prev, za);
        z.add_edge(za, za);
        prev = za;
        for (size_t t = 1; t + 1 < out.beta_minus.size(); ++t) {
            VertexId id = next_id++;
            z.add_vertex(id, '0', "p-" + std::to_string(t));
            out.psi[id] = out.beta_minus[t];
            z.add_edge(prev, id);
            prev = id;
        }
        z.add_edge(prev, zb);
    }
    out.z = MarkedGraph(std::move(z), {zb});
    return out;
}

// Applies the block map eta to an output word that starts and ends with 1,
// returning the domain vertex sequence it decodes to.  Used to exercise the
// defining identity phi(eta(y)) = y at block level.
inline std::optional<std::vector<VertexId>> apply_eta(const EtaConstruction& eta, const Word& y) {
    if (y.empty() || y.front() != '1' || y.back() != '1') return std::nullopt;
    std::vector<VertexId> out;
    size_t last_one = 0;
    for (size_t i = 1; i < y.size(); ++i) {
        if (y[i] != '1') continue;
        long long gap = (long long)(i - last_one - 1);
        std::vector<VertexId> seg;
        if (eta.cycle_for_gap.count(gap)) {
            seg = eta.cycle_for_gap.at(gap);
        } else if (eta.tau_vertex && gap >= eta.radius) {
            seg = eta.beta_plus;
            for (long long t = 0; t < gap - eta.radius; ++t) seg.push_back(*eta.tau_vertex);
            seg.insert(seg.end(), eta.beta_minus.begin() + 1, eta.beta_minus.end());
        } else {
            return std::nullopt;  // gap not in S
        }
        if (out.empty()) out.push_back(seg.front());
        out.insert(out.end(), seg.begin() + 1, seg.end());
        last_one = i;
    }
    if (out.empty()) out.push_back(eta.psi.at(0));  // y == "1": just the marked vertex
    return out;
}

// ---------------------------------------------------------------------------
// The full 2-shift refinement: with F the standard forbidden set of Y and
// F-bar its bitwise complement, the restriction of the code to X_F or to
// X_Fbar is onto exactly when one of the two symbols occurs at most once in
// the marker word.

enum class FullShiftChoice { F, complementF, neither };

struct FullShiftP1 {
    bool condition1;  // some symbol occurs at most once in D
    FullShiftChoice which = FullShiftChoice::neither;
    bool onto_F = false;
    bool onto_complementF = false;
    EventuallyPeriodicSet gap_set;          // S of Y
    ForbiddenSft forbidden;                 // standard forbidden set F of Y
    ForbiddenSft forbidden_complement;      // bitwise complement of F
};

inline ForbiddenSft bitwise_complement(const ForbiddenSft& f) {
    std::set<Word> words;
    for (const Word& w : f.forbidden) {
        Word c = w;
        for (char& ch : c) ch = (ch == '0') ? '1' : '0';
        words.insert(c);
    }
    return ForbiddenSft(f.alphabet, words);
}

// Gap set of the code with marker d restricted to the subshift with the given
// forbidden set; empty when the marker never occurs there.
inline EventuallyPeriodicSet restricted_image_gap_set(const ForbiddenSft& domain, const Word& d) {
    try {
        MarkedGraph mg = recode_to_marked(UnambiguousCode(domain, d));
        return image_gap_set(mg);
    } catch (const std::invalid_argument&) {
        return EventuallyPeriodicSet();  // marker not allowed: image has no 1s
    }
}

inline FullShiftP1 full_shift_p1(const Word& d) {
    for (char c : d)
        if (c != '0' && c != '1') throw std::invalid_argument("marker must be binary");
    FullShiftP1 out;
    long long zeros = std::count(d.begin(), d.end(), '0');
    long long ones = (long long)d.size() - zeros;
    out.condition1 = zeros <= 1 || ones <= 1;

    MarkedGraph full = recode_to_marked(UnambiguousCode(ForbiddenSft("01", {}), d));
    out.gap_set = image_gap_set(full);
    GapShift y(out.gap_set);
    auto f = standard_forbidden_set(y);
    if (!f) throw std::runtime_error("image of a full-shift code must be an SFT");
    out.forbidden = *f;
    out.forbidden_complement = bitwise_complement(*f);

    out.onto_F = restricted_image_gap_set(out.forbidden, d) == out.gap_set;
    out.onto_complementF = restricted_image_gap_set(out.forbidden_complement, d) == out.gap_set;
    out.which = out.onto_F ? FullShiftChoice::F
                           : out.onto_complementF ? FullShiftChoice::complementF
                                                  : FullShiftChoice::neither;
    return out;
}

}  // namespace gapcode
