#pragma once

// S-gap shifts: the standard forbidden set, topological entropy, and the
// gap distribution of the measure of maximal entropy.
//
// X(S) is the binary shift whose points are concatenations of blocks 10^s,
// s in S (with unbounded runs of 0 allowed when S is infinite).  It is an
// SFT exactly when S is finite or cofinite.

#include <cmath>
#include <map>
#include <optional>
#include <variant>

#include "gapcode/errors.hpp"
#include "gapcode/eventually_periodic_set.hpp"
#include "gapcode/graph.hpp"

namespace gapcode {

struct GapShift {
    EventuallyPeriodicSet gaps;

    explicit GapShift(EventuallyPeriodicSet s) : gaps(std::move(s)) {
        if (gaps.empty())
            throw std::invalid_argument("gap set must be nonempty (the shift would have no 1s)");
    }

    bool operator==(const GapShift&) const = default;
};

// Standard forbidden set: for finite S forbid the gaps missing below max S
// plus any run of more than max S zeros; for cofinite S forbid exactly the
// missing gaps.  Not an SFT otherwise.
inline std::optional<ForbiddenSft> standard_forbidden_set(const GapShift& y) {
    const auto& s = y.gaps;
    std::set<Word> forb;
    auto gap_word = [](long long m) {
        return "1" + std::string((size_t)m, '0') + "1";
    };
    if (s.is_finite()) {
        long long mx = *s.max_element();
        for (long long m = 0; m <= mx; ++m)
            if (!s.contains(m)) forb.insert(gap_word(m));
        forb.insert(std::string((size_t)mx + 1, '0'));
        return ForbiddenSft("01", forb);
    }
    if (s.is_cofinite()) {
        auto missing = s.complement();
        for (long long m : missing.members_upto(missing.max_element().value_or(-1)))
            forb.insert(gap_word(m));
        return ForbiddenSft("01", forb);
    }
    return std::nullopt;  // not an SFT
}

namespace detail {

// f(x) = sum_{m in S} x^{-m-1} - 1, in closed form: explicit powers for the
// finitely many members below the threshold, one geometric series per
// residue class beyond it.  Strictly decreasing on (1, inf).
inline double gap_entropy_equation(const EventuallyPeriodicSet& s, double x) {
    double total = -1.0;
    for (long long e : s.exceptions()) total += std::pow(x, -(double)(e + 1));
    long long t = s.threshold(), d = s.period();
    for (long long r : s.residues()) {
        long long first = t + (((r - t) % d) + d) % d;
        total += std::pow(x, -(double)(first + 1)) / (1.0 - std::pow(x, -(double)d));
    }
    return total;
}

}  // namespace detail

// The unique lambda >= 1 with sum_{m in S} lambda^{-m-1} = 1; h_top = log lambda.
// Bisection: f is strictly decreasing on (1, inf), f(1+) > 0 for |S| >= 2 and
// f(2.5) < 0 always, so the root is bracketed.  A singleton gap set carries a
// single periodic orbit and has lambda = 1 exactly.
inline double gap_entropy_root(const GapShift& y, double tol = 1e-12) {
    if (tol <= 0) throw std::invalid_argument("tolerance must be positive");
    const auto& s = y.gaps;
    if (s.is_finite() && s.exceptions().size() == 1) return 1.0;
    double lo = 1.0, hi = 2.5;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (detail::gap_entropy_equation(s, mid) > 0) lo = mid;
        else hi = mid;
    }
    double root = 0.5 * (lo + hi);
    if (std::abs(detail::gap_entropy_equation(s, root)) > tol)
        throw numeric_error("entropy root did not meet tolerance");
    return root;
}

inline double gap_entropy(const GapShift& y, double tol = 1e-12) {
    return std::log(gap_entropy_root(y, tol));
}

// Gap law of the measure of maximal entropy: the probability of seeing 10^i 1
// given a 1, which equals lambda^{-i-1} for i in S and 0 otherwise.
inline std::map<long long, double> mme_gap_distribution(const GapShift& y, double lambda,
                                                        long long imax) {
    std::map<long long, double> out;
    for (long long i : y.gaps.members_upto(imax))
        out[i] = std::pow(lambda, -(double)(i + 1));
    return out;
}

}  // namespace gapcode
