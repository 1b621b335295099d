#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "gapcode/conjugacy.hpp"
#include "gapcode/oracle.hpp"
#include "gapcode/spoke.hpp"

using namespace gapcode;
using EPS = EventuallyPeriodicSet;

namespace {

LabeledGraph twin_spokes() {  // two identical spokes of length 3 at B
    LabeledGraph g;
    g.add_vertex(0, '1', "B");
    for (int v = 1; v <= 4; ++v) g.add_vertex(v, '0');
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    g.add_edge(2, 0);
    g.add_edge(0, 3);
    g.add_edge(3, 4);
    g.add_edge(4, 0);
    return g;
}

LabeledGraph single_cycle(int d) {
    LabeledGraph g;
    g.add_vertex(0, '1');
    for (int v = 1; v < d; ++v) g.add_vertex(v, '0');
    for (int v = 0; v < d; ++v) g.add_edge(v, (v + 1) % d);
    return g;
}

}  // namespace

TEST_CASE("language comparison: graph against gap shift") {
    // a graph equals itself
    LabeledGraph gm = to_vertex_shift(ForbiddenSft("01", {"11"}));
    CHECK(language_equal_upto(gm, gm, 12).equal);

    // the constructed P2 witness of the three-spoke example presents Y
    SpokeGraph three({{1, 6}, {1, 3}, {4, 6}}, {});
    P2Result p2 = check_p2(three);
    REQUIRE(p2.holds);
    CHECK(language_equal_upto(p2.h->h.graph, GapShift(p2.inv.S), 20).equal);

    // the complement restriction for marker 0000 misses 100001
    FullShiftP1 r = full_shift_p1("0000");
    MarkedGraph bar = recode_to_marked(UnambiguousCode(r.forbidden_complement, "0000"));
    LanguageComparison cmp = language_equal_upto(bar.graph, GapShift(r.gap_set), 10);
    CHECK_FALSE(cmp.equal);
    REQUIRE(cmp.divergent.has_value());
    CHECK(*cmp.divergent == "100001");

    CHECK_THROWS_AS(language_equal_upto(gm, gm, 80), budget_error);
}

TEST_CASE("gap language membership") {
    EPS s = EPS::from_parts(4, {1}, 1, {0});  // {1} u {n >= 4}
    CHECK(gap_language_contains(s, "101"));
    CHECK(gap_language_contains(s, "100001"));
    CHECK_FALSE(gap_language_contains(s, "11"));
    CHECK_FALSE(gap_language_contains(s, "1001"));
    CHECK(gap_language_contains(s, "0000000"));  // inside a long gap
    CHECK(gap_language_contains(s, ""));

    EPS fin = EPS::finite({2});
    CHECK(gap_language_contains(fin, "00"));
    CHECK_FALSE(gap_language_contains(fin, "000"));
    CHECK(gap_language_contains(fin, "001001"));
    CHECK_FALSE(gap_language_contains(fin, "0110"));
}

TEST_CASE("point diamond search") {
    CHECK_FALSE(point_diamond_search(MarkedGraph::from_labels(single_cycle(4)), 12).has_value());

    LabeledGraph fig;  // B <-> V1 <-> V2: right-resolving, no diamond
    fig.add_vertex(0, '1');
    fig.add_vertex(1, '0');
    fig.add_vertex(2, '0');
    fig.add_edge(0, 1);
    fig.add_edge(1, 0);
    fig.add_edge(1, 2);
    fig.add_edge(2, 1);
    CHECK_FALSE(point_diamond_search(MarkedGraph::from_labels(fig), 12).has_value());

    auto witness = point_diamond_search(MarkedGraph::from_labels(twin_spokes()), 12);
    REQUIRE(witness.has_value());
    const auto& [p, q] = *witness;
    REQUIRE(p.size() == q.size());
    CHECK(p != q);
    CHECK(p.front() == q.front());
    CHECK(p.back() == q.back());
    LabeledGraph tw = twin_spokes();
    for (size_t i = 0; i < p.size(); ++i) CHECK(tw.label.at(p[i]) == tw.label.at(q[i]));
    for (size_t i = 0; i + 1 < p.size(); ++i) {
        CHECK(tw.has_edge(p[i], p[i + 1]));
        CHECK(tw.has_edge(q[i], q[i + 1]));
    }
    // witness length m + d + 1 = 3 edges either way around the twin spokes
    CHECK(p.size() == 4);

    // diamond decision agrees with the exact pair-graph test
    CHECK(has_graph_diamond(MarkedGraph::from_labels(twin_spokes())));
    CHECK_FALSE(has_graph_diamond(MarkedGraph::from_labels(fig)));
}

TEST_CASE("entropy estimates") {
    LabeledGraph gm = to_vertex_shift(ForbiddenSft("01", {"11"}));
    double phi = (1 + std::sqrt(5.0)) / 2;
    CHECK(std::abs(entropy_estimate(gm, 24) - std::log(phi)) < 0.01);

    LabeledGraph full = to_vertex_shift(ForbiddenSft("01", {}));
    for (int m : {5, 12, 20}) CHECK(std::abs(entropy_estimate(full, m) - std::log(2.0)) < 1e-12);

    // single cycle: |B_m| = d for every m
    CHECK(std::abs(entropy_estimate(single_cycle(5), 20) - std::log(5.0) / 20) < 1e-12);

    // estimates drift down toward the true entropy
    double e12 = entropy_estimate(gm, 12), e18 = entropy_estimate(gm, 18),
           e24 = entropy_estimate(gm, 24);
    CHECK(e12 >= e18 - 0.02);
    CHECK(e18 >= e24 - 0.02);
    CHECK(e24 >= std::log(phi) - 1e-9);

    CHECK_THROWS_AS(entropy_estimate(gm, 64), budget_error);
}

TEST_CASE("central-coordinate injectivity") {
    // a single cycle is injective: the labels pin the position
    {
        MarkedGraph mg = MarkedGraph::from_labels(single_cycle(4));
        std::set<VertexId> all(mg.graph.vertices.begin(), mg.graph.vertices.end());
        CHECK(restriction_injective_upto(mg, all, 9));
    }
    // twin spokes are not: the mirrored paths differ at the center
    {
        MarkedGraph mg = MarkedGraph::from_labels(twin_spokes());
        std::set<VertexId> all(mg.graph.vertices.begin(), mg.graph.vertices.end());
        CHECK_FALSE(restriction_injective_upto(mg, all, 9));
        // restricting to one spoke restores injectivity
        CHECK(restriction_injective_upto(mg, {0, 1, 2}, 9));
    }
    // map-level version: collapsing twin spokes onto one is not injective
    {
        LabeledGraph tw = twin_spokes();
        std::map<VertexId, VertexId> collapse{{0, 0}, {1, 1}, {2, 2}, {3, 1}, {4, 2}};
        CHECK_FALSE(map_injective_upto(tw, collapse, 9));
        std::map<VertexId, VertexId> ident{{0, 0}, {1, 1}, {2, 2}, {3, 3}, {4, 4}};
        CHECK(map_injective_upto(tw, ident, 9));
    }
}
