#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <random>

#include "gapcode/capacity.hpp"

using namespace gapcode;
using EPS = EventuallyPeriodicSet;

namespace {

MarkovMeasure bernoulli(double p_one) {
    LabeledGraph g;
    g.add_vertex(0, '0');
    g.add_vertex(1, '1');
    for (VertexId u : {0, 1})
        for (VertexId v : {0, 1}) g.add_edge(u, v);
    MarkovMeasure nu;
    nu.graph = g;
    nu.stationary[0] = 1 - p_one;
    nu.stationary[1] = p_one;
    for (VertexId u : {0, 1}) {
        nu.transition[{u, 0}] = 1 - p_one;
        nu.transition[{u, 1}] = p_one;
    }
    return nu;
}

}  // namespace

TEST_CASE("rational feasibility solver") {
    using R = Rational;
    // x1 + x2 = 2, x1 - x2 = 0: feasible at (1,1)
    CHECK(rational_system_feasible({{R(1), R(1)}, {R(1), R(-1)}}, {R(2), R(0)}));
    // x1 + x2 = -1 with x >= 0: infeasible
    CHECK_FALSE(rational_system_feasible({{R(1), R(1)}}, {R(-1)}));
    // x1 - x2 = 3 is feasible with nonnegative x
    CHECK(rational_system_feasible({{R(1), R(-1)}}, {R(3)}));
    // 0 = 1: infeasible
    CHECK_FALSE(rational_system_feasible({{R(0)}}, {R(1)}));
    // empty system
    CHECK(rational_system_feasible({}, {}));

    // equal sums with positivity: {0} vs {1,2} works, {0} vs {} does not
    CHECK(equal_sum_positive_feasible({{0}, {1, 2}}, 3));
    CHECK_FALSE(equal_sum_positive_feasible({{0}, {}}, 1));
    CHECK(equal_sum_positive_feasible({{0, 1}, {0, 2}, {1, 2}}, 3));
}

TEST_CASE("channel capacity is the image entropy") {
    CHECK(std::abs(channel_capacity(EPS::from_parts(1, {}, 1, {0})) -
                   std::log((1 + std::sqrt(5.0)) / 2)) < 1e-12);
    CHECK(channel_capacity(EPS::finite({0})) == 0.0);

    // the three-spoke example: sum over n = 1 mod 3 of x^{-n-1} = 1, i.e.
    // x^{-2}/(1 - x^{-3}) = 1; solve that reduction independently
    double lo = 1.0, hi = 2.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        double f = std::pow(mid, -2.0) / (1.0 - std::pow(mid, -3.0)) - 1.0;
        (f > 0 ? lo : hi) = mid;
    }
    SpokeGraph sg({{1, 6}, {1, 3}, {4, 6}}, {});
    CHECK(std::abs(channel_capacity(sg) - std::log(0.5 * (lo + hi))) < 1e-10);
}

TEST_CASE("chinese remainder combinations") {
    auto r1 = crt_common_solution({{1, 2}, {1, 3}});
    REQUIRE(r1.has_value());
    CHECK(*r1 == 1);
    auto r2 = crt_common_solution({{1, 4}, {3, 6}});
    REQUIRE(r2.has_value());
    CHECK(*r2 == 9);
    CHECK_FALSE(crt_common_solution({{0, 2}, {1, 2}}).has_value());
    auto r3 = crt_common_solution({});
    REQUIRE(r3.has_value());
    CHECK(*r3 == 0);

    // brute-force agreement, and the pairwise-compatibility criterion
    for (long long d1 = 1; d1 <= 6; ++d1)
        for (long long d2 = 1; d2 <= 6; ++d2)
            for (long long d3 = 1; d3 <= 6; ++d3)
                for (long long a1 = 0; a1 < d1; ++a1)
                    for (long long a2 = 0; a2 < d2; ++a2)
                        for (long long a3 = 0; a3 < d3; ++a3) {
                            std::vector<std::pair<long long, long long>> sys{
                                {a1, d1}, {a2, d2}, {a3, d3}};
                            long long lcm = std::lcm(std::lcm(d1, d2), d3);
                            std::optional<long long> brute;
                            for (long long x = 0; x < lcm && !brute; ++x)
                                if (x % d1 == a1 && x % d2 == a2 && x % d3 == a3) brute = x;
                            auto got = crt_common_solution(sys);
                            CAPTURE(a1, d1, a2, d2, a3, d3);
                            REQUIRE(got == brute);
                            // pairwise solvability iff joint solvability
                            bool pairwise = ((a1 - a2) % std::gcd(d1, d2) == 0) &&
                                            ((a1 - a3) % std::gcd(d1, d3) == 0) &&
                                            ((a2 - a3) % std::gcd(d2, d3) == 0);
                            REQUIRE(pairwise == got.has_value());
                        }
}

namespace {

// Independent feasibility oracle: Ax = b with x >= 0 is feasible iff some
// basic solution is, so enumerate column subsets, solve the square subsystem
// by exact Gaussian elimination, and test nonnegativity of the result.
bool basic_solution_feasible(const std::vector<std::vector<Rational>>& a,
                             const std::vector<Rational>& b) {
    const size_t m = a.size(), n = m ? a[0].size() : 0;
    if (m == 0) return true;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        std::vector<size_t> cols;
        for (size_t j = 0; j < n; ++j)
            if (mask & (1u << j)) cols.push_back(j);
        if (cols.size() > m) continue;
        // solve A_S x_S = b by elimination on the m x (|S|+1) tableau
        std::vector<std::vector<Rational>> t(m, std::vector<Rational>(cols.size() + 1, 0));
        for (size_t i = 0; i < m; ++i) {
            for (size_t j = 0; j < cols.size(); ++j) t[i][j] = a[i][cols[j]];
            t[i][cols.size()] = b[i];
        }
        size_t row = 0;
        std::vector<long long> pivot_of_col(cols.size(), -1);
        for (size_t c = 0; c < cols.size() && row < m; ++c) {
            size_t p = row;
            while (p < m && t[p][c] == 0) ++p;
            if (p == m) continue;
            std::swap(t[p], t[row]);
            Rational d = t[row][c];
            for (auto& v : t[row]) v /= d;
            for (size_t i = 0; i < m; ++i) {
                if (i == row || t[i][c] == 0) continue;
                Rational f = t[i][c];
                for (size_t j = 0; j <= cols.size(); ++j) t[i][j] -= f * t[row][j];
            }
            pivot_of_col[c] = (long long)row;
            ++row;
        }
        bool consistent = true;
        for (size_t i = row; i < m; ++i)
            if (t[i][cols.size()] != 0) consistent = false;
        if (!consistent) continue;
        bool nonneg = true;
        std::vector<Rational> x(cols.size(), 0);
        for (size_t c = 0; c < cols.size(); ++c)
            if (pivot_of_col[c] >= 0) x[c] = t[(size_t)pivot_of_col[c]][cols.size()];
        for (size_t c = 0; c < cols.size(); ++c)
            if (x[c] < 0) nonneg = false;
        // free columns sit at zero; verify the candidate actually solves Ax=b
        if (!nonneg) continue;
        bool solves = true;
        for (size_t i = 0; i < m && solves; ++i) {
            Rational lhs = 0;
            for (size_t c = 0; c < cols.size(); ++c) lhs += a[i][cols[c]] * x[c];
            solves = lhs == b[i];
        }
        if (solves) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("simplex feasibility agrees with basic-solution enumeration") {
    std::mt19937 rng(271828);
    std::uniform_int_distribution<int> dm(1, 3), dn(1, 4), entry(-3, 3);
    int feasible_seen = 0, infeasible_seen = 0;
    for (int trial = 0; trial < 400; ++trial) {
        size_t m = (size_t)dm(rng), n = (size_t)dn(rng);
        std::vector<std::vector<Rational>> a(m, std::vector<Rational>(n));
        std::vector<Rational> b(m);
        for (size_t i = 0; i < m; ++i) {
            for (size_t j = 0; j < n; ++j) a[i][j] = entry(rng);
            b[i] = entry(rng);
        }
        bool fast = rational_system_feasible(a, b);
        bool slow = basic_solution_feasible(a, b);
        CAPTURE(trial, m, n);
        REQUIRE(fast == slow);
        (fast ? feasible_seen : infeasible_seen)++;
    }
    CHECK(feasible_seen > 50);
    CHECK(infeasible_seen > 50);
}

TEST_CASE("chinese remainder agrees with brute force up to lcm 10^4") {
    std::mt19937 rng(314159);
    std::uniform_int_distribution<long long> dmod(1, 25), dcount(2, 4);
    for (int trial = 0; trial < 1500; ++trial) {
        int k = (int)dcount(rng);
        std::vector<std::pair<long long, long long>> sys;
        long long lcm = 1;
        for (int i = 0; i < k; ++i) {
            long long d = dmod(rng);
            lcm = std::lcm(lcm, d);
            long long a = std::uniform_int_distribution<long long>(0, d - 1)(rng);
            sys.push_back({a, d});
        }
        if (lcm > 10000) continue;
        std::optional<long long> brute;
        for (long long x = 0; x < lcm && !brute; ++x) {
            bool ok = true;
            for (auto& [a, d] : sys)
                if (x % d != a) { ok = false; break; }
            if (ok) brute = x;
        }
        CAPTURE(trial);
        REQUIRE(crt_common_solution(sys) == brute);
    }
}

TEST_CASE("p3 necessary conditions on the worked examples") {
    SpokeGraph three({{1, 6}, {1, 3}, {4, 6}}, {});
    SpokeInvariants inv = spoke_invariants(three);
    double q = std::exp(channel_capacity(three));
    P3Report r = p3_necessary_with_side_conditions(inv, q);
    bool has_p2 = false;
    for (auto& p : r.feasible_supports)
        if (p == std::set<int>{2}) has_p2 = true;
    CHECK(has_p2);
    CHECK(r.side_conditions.at({2}) == std::set<char>{'a', 'b', 'c', 'd'});

    SpokeGraph blocked({{1, 2}, {1, 3}, {2, 6}, {6, 6}}, {});
    P3Report rb = p3_necessary(spoke_invariants(blocked), 1.5);
    CHECK(rb.feasible_supports.empty());

    SpokeGraph single({{2, 3}}, {});
    P3Report rs = p3_necessary(spoke_invariants(single), 1.5);
    REQUIRE(rs.feasible_supports.size() == 1);
    CHECK(rs.feasible_supports[0] == std::set<int>{1});

    // feasibility does not depend on the reported Q
    SpokeGraph four({{1, 2}, {1, 3}, {1, 4}, {10, 6}}, {});
    SpokeInvariants inv4 = spoke_invariants(four);
    CHECK(p3_necessary(inv4, 1.1).feasible_supports ==
          p3_necessary(inv4, 2.7).feasible_supports);
}

TEST_CASE("partial-converse side conditions") {
    SpokeGraph four({{1, 2}, {1, 3}, {1, 4}, {10, 6}}, {});
    SpokeInvariants inv = spoke_invariants(four);
    std::set<char> conds = side_conditions_check(inv, {1, 2, 3, 4});
    CHECK(conds.count('d') == 1);  // |P| = 4
    CHECK(conds.count('a') == 0);  // K4 misses the common residue 1
    CHECK(conds.count('b') == 0);  // K1 and K4 are disjoint
    CHECK(conds.count('c') == 1);  // E1 = {1,4} covers everything

    // two spokes with coprime cycle lengths and equal m: common residue by CRT
    SpokeGraph co({{1, 2}, {1, 3}}, {});
    SpokeInvariants invco = spoke_invariants(co);
    CHECK(side_conditions_check(invco, {1, 2}).count('a') == 1);
    CHECK(crt_common_solution({{1 % 2, 2}, {1 % 3, 3}}).has_value());

    CHECK_THROWS_AS(side_conditions_check(inv, {}), std::invalid_argument);
}

TEST_CASE("weight per symbol") {
    LabeledGraph gm = to_vertex_shift(ForbiddenSft("01", {"11"}));
    MarkovMeasure parry = parry_measure(gm);
    CHECK(parry.valid());
    double h = std::log((1 + std::sqrt(5.0)) / 2);
    CHECK(weight_per_symbol_check(parry, h, 8, 1e-9));

    CHECK(weight_per_symbol_check(bernoulli(0.5), std::log(2.0), 6, 1e-9));
    CHECK_FALSE(weight_per_symbol_check(bernoulli(0.6), std::log(2.0), 6, 1e-9));
}

TEST_CASE("capacity witnesses") {
    // Parry measure on a single spoke maps to the maximal-entropy gap law
    SpokeGraph single({{1, 2}}, {});
    RealizedSpokeGraph rg = realize_graph(single);
    MarkovMeasure nu = parry_measure(rg.mg.graph);
    GapShift y(spoke_invariants(single).S);
    CHECK(nu.valid());
    CHECK(validate_capacity_witness(nu, rg.mg, y, 30, 1e-9));
    CHECK(weight_per_symbol_check(nu, gap_entropy(y), 10, 1e-9));

    // a measure stuck on one degenerate cycle misses almost every gap
    SpokeGraph mixed({{1, 2}}, {3});
    RealizedSpokeGraph rgm = realize_graph(mixed);
    MarkovMeasure cyc;
    cyc.graph = rgm.mg.graph;
    std::vector<VertexId> loop = rgm.degenerate[0];
    for (size_t i = 0; i < loop.size(); ++i) {
        cyc.stationary[loop[i]] = 1.0 / loop.size();
        cyc.transition[{loop[i], loop[(i + 1) % loop.size()]}] = 1.0;
    }
    CHECK(cyc.valid());
    CHECK_FALSE(validate_capacity_witness(cyc, rgm.mg, GapShift(spoke_invariants(mixed).S), 20,
                                          1e-9));

    // the maximal-entropy measure on a constructed P2 witness pushes to the
    // gap law of Y
    SpokeGraph three({{1, 6}, {1, 3}, {4, 6}}, {});
    P2Result p2 = check_p2(three);
    REQUIRE(p2.holds);
    MarkovMeasure mme = parry_measure(p2.h->h.graph);
    CHECK(validate_capacity_witness(mme, p2.h->h, GapShift(p2.inv.S), 30, 1e-9));
    CHECK(weight_per_symbol_check(mme, channel_capacity(three), 10, 1e-9));
}

TEST_CASE("markov measure validation catches broken inputs") {
    MarkovMeasure nu = bernoulli(0.5);
    CHECK(nu.valid());
    nu.transition[{0, 1}] = 0.7;  // row sum broken
    CHECK_FALSE(nu.valid());

    MarkovMeasure bad = bernoulli(0.3);
    bad.stationary[0] = 0.5;  // not stationary
    bad.stationary[1] = 0.5;
    CHECK_FALSE(bad.valid());
}
