#include <catch2/catch_amalgamated.hpp>

#include <functional>
#include <set>
#include <string>

#include "gapcode/graph.hpp"

using namespace gapcode;

namespace {

// Brute-force SFT language oracle: w is allowed iff it extends on both
// sides by `margin` symbols without hitting a forbidden word.  Test-only and
// independent of the graph presentation.
std::set<Word> brute_sft_language(const ForbiddenSft& sft, int n, int margin = 6) {
    std::set<Word> out;
    std::vector<Word> all{""};
    for (int i = 0; i < n + 2 * margin; ++i) {
        std::vector<Word> next;
        for (const Word& w : all)
            for (char c : sft.alphabet) {
                Word x = w + c;
                if (sft.word_avoids_forbidden(x)) next.push_back(std::move(x));
            }
        all = std::move(next);
    }
    for (const Word& w : all) out.insert(w.substr(margin, n));
    return out;
}

LabeledGraph golden_mean_graph() {
    return to_vertex_shift(ForbiddenSft("01", {"11"}));
}

// The path-pair graph B <-> V1 <-> V2 with B the only marked vertex.
LabeledGraph single_spoke_path_graph() {
    LabeledGraph g;
    g.add_vertex(0, '1', "B");
    g.add_vertex(1, '0', "V1");
    g.add_vertex(2, '0', "V2");
    g.add_edge(0, 1);
    g.add_edge(1, 0);
    g.add_edge(1, 2);
    g.add_edge(2, 1);
    return g;
}

long long path_count(const LabeledGraph& g, int n) {
    std::map<VertexId, long long> cnt;
    for (VertexId v : g.vertices) cnt[v] = 1;
    auto succ = g.successors();
    for (int i = 1; i < n; ++i) {
        std::map<VertexId, long long> next;
        for (auto& [u, c] : cnt)
            for (VertexId v : succ.at(u)) next[v] += c;
        cnt = std::move(next);
    }
    long long total = 0;
    for (auto& [v, c] : cnt) total += c;
    return total;
}

}  // namespace

TEST_CASE("to_vertex_shift on 1-step and 2-step forbidden sets") {
    LabeledGraph gm = golden_mean_graph();
    REQUIRE(gm.vertices.size() == 2);
    CHECK(gm.edges.size() == 3);
    // names carry the blocks: "0" can follow anything, "1" only follows "0"
    std::map<std::string, VertexId> byname;
    for (VertexId v : gm.vertices) byname[gm.name.at(v)] = v;
    CHECK(gm.has_edge(byname["0"], byname["0"]));
    CHECK(gm.has_edge(byname["0"], byname["1"]));
    CHECK(gm.has_edge(byname["1"], byname["0"]));
    CHECK_FALSE(gm.has_edge(byname["1"], byname["1"]));

    ForbiddenSft no111("01", {"111"});
    LabeledGraph g = to_vertex_shift(no111);
    CHECK(g.vertices.size() == 4);  // all 2-blocks survive
    for (int n = 1; n <= 10; ++n) CHECK(enumerate_blocks(g, n) == brute_sft_language(no111, n));

    LabeledGraph full = to_vertex_shift(ForbiddenSft("01", {}));
    CHECK(full.vertices.size() == 2);
    CHECK(full.edges.size() == 4);
}

TEST_CASE("to_vertex_shift trims to the essential part") {
    // forbidding 00 and 01 kills every word containing 0
    ForbiddenSft sft("01", {"00", "01"});
    LabeledGraph g = to_vertex_shift(sft);
    REQUIRE(g.vertices.size() == 1);
    CHECK(g.label.at(g.vertices[0]) == '1');

    // forbidding both 1-blocks leaves an empty shift, as a value
    LabeledGraph empty = to_vertex_shift(ForbiddenSft("01", {"0", "1"}));
    CHECK(empty.vertices.empty());
}

TEST_CASE("is_irreducible") {
    CHECK(is_irreducible(golden_mean_graph()));
    CHECK(is_irreducible(single_spoke_path_graph()));
    LabeledGraph two_loops;
    two_loops.add_vertex(0, '0');
    two_loops.add_vertex(1, '1');
    two_loops.add_edge(0, 0);
    two_loops.add_edge(1, 1);
    CHECK_FALSE(is_irreducible(two_loops));
}

TEST_CASE("enumerate_blocks") {
    LabeledGraph gm = golden_mean_graph();
    CHECK(enumerate_blocks(gm, 2) == std::set<Word>{"00", "01", "10"});
    CHECK(enumerate_blocks(gm, 4).size() == 8);  // Fibonacci F(6)
    LabeledGraph full = to_vertex_shift(ForbiddenSft("01", {}));
    CHECK(enumerate_blocks(full, 3).size() == 8);
}

TEST_CASE("higher_block recoding") {
    LabeledGraph gm = golden_mean_graph();
    LabeledGraph same = higher_block(gm, 1);
    CHECK(same.vertices.size() == gm.vertices.size());
    CHECK(same.edges.size() == gm.edges.size());

    LabeledGraph hb2 = higher_block(gm, 2);
    CHECK(hb2.vertices.size() == 3);  // 00, 01, 10

    LabeledGraph full = to_vertex_shift(ForbiddenSft("01", {}));
    LabeledGraph debruijn = higher_block(full, 2);
    CHECK(debruijn.vertices.size() == 4);
    CHECK(debruijn.edges.size() == 8);

    // conjugacy preserves language counts: |B_n(beta_N X)| = |B_{n+N-1}(X)|
    for (int n = 1; n <= 6; ++n) {
        CHECK(path_count(hb2, n) == path_count(gm, n + 1));
        CHECK(path_count(higher_block(gm, 3), n) == path_count(gm, n + 2));
    }
    // and the projected label language is the prefix language
    for (int n = 1; n <= 6; ++n) {
        std::set<Word> prefixes;
        for (const Word& w : enumerate_blocks(gm, n + 1)) prefixes.insert(w.substr(0, n));
        CHECK(enumerate_blocks(hb2, n) == prefixes);
    }
}

TEST_CASE("re-deriving the SFT from the graph's forbidden 2-blocks reproduces the language") {
    ForbiddenSft no111("01", {"111"});
    LabeledGraph g = to_vertex_shift(no111);
    // vertex alphabet as characters
    std::string alpha;
    std::map<VertexId, char> as_char;
    for (size_t i = 0; i < g.vertices.size(); ++i) {
        as_char[g.vertices[i]] = char('a' + i);
        alpha += char('a' + i);
    }
    std::set<Word> forb2;
    for (VertexId u : g.vertices)
        for (VertexId v : g.vertices)
            if (!g.has_edge(u, v)) forb2.insert({as_char[u], as_char[v]});
    ForbiddenSft rederived(alpha, forb2);
    LabeledGraph g2 = to_vertex_shift(rederived);
    int window = 2 * no111.memory() + 2;
    // vertex-sequence language of g, as words over the vertex alphabet
    LabeledGraph gv = g;
    for (VertexId v : gv.vertices) gv.label[v] = as_char[v];
    CHECK(enumerate_blocks(g2, window) == enumerate_blocks(gv, window));
}

TEST_CASE("first_return_lengths") {
    LabeledGraph loop3;
    loop3.add_vertex(0, '1');
    loop3.add_vertex(1, '0');
    loop3.add_vertex(2, '0');
    loop3.add_edge(0, 1);
    loop3.add_edge(1, 2);
    loop3.add_edge(2, 0);
    CHECK(first_return_lengths(loop3, 0) == EventuallyPeriodicSet::finite({3}));

    // spoke with m=1, d=2: returns 2, 4, 6, ...
    LabeledGraph sp;
    sp.add_vertex(0, '1', "B");
    sp.add_vertex(1, '0', "B'");
    sp.add_vertex(2, '0', "c");
    sp.add_edge(0, 1);
    sp.add_edge(1, 0);
    sp.add_edge(1, 2);
    sp.add_edge(2, 1);
    EventuallyPeriodicSet expected = EventuallyPeriodicSet::from_parts(2, {}, 2, {0});
    CHECK(first_return_lengths(sp, 0) == expected);
    // brute force cross-check on the same tiny graph
    {
        std::set<long long> brute;
        std::function<void(VertexId, int)> walk = [&](VertexId v, int len) {
            if (len > 14) return;
            for (auto& [a, b] : sp.edges) {
                if (a != v) continue;
                if (b == 0) brute.insert(len + 1);
                else walk(b, len + 1);
            }
        };
        walk(0, 0);
        for (long long l = 1; l <= 14; ++l) CHECK(expected.contains(l) == (brute.count(l) > 0));
    }

    // B <-> V1 <-> V2 is the same spoke shape: the walk through V2 returns
    // at every even length, not just via the direct path pair.
    CHECK(first_return_lengths(single_spoke_path_graph(), 0) == expected);

    CHECK_THROWS_AS(first_return_lengths(sp, 0, 5), budget_error);
}

TEST_CASE("first_return_lengths is invariant under higher-block recoding") {
    LabeledGraph gm = golden_mean_graph();
    EventuallyPeriodicSet base = first_return_lengths(gm, gm.vertices[0]);
    LabeledGraph hb = higher_block(gm, 2);
    // the class of the marked vertex: higher-block vertices whose underlying
    // path starts at it (names are "<labels>|<id>.<id>")
    std::set<VertexId> cls;
    for (VertexId v : hb.vertices) {
        const std::string& nm = hb.name.at(v);
        std::string ids = nm.substr(nm.find('|') + 1);
        if (ids.substr(0, ids.find('.')) == std::to_string(gm.vertices[0])) cls.insert(v);
    }
    EventuallyPeriodicSet lifted = return_length_set(hb, cls, cls, cls, default_return_bound(hb));
    CHECK(lifted == base);
}

TEST_CASE("path choosers are deterministic and honor blocked interiors") {
    LabeledGraph sp = single_spoke_path_graph();
    auto p = least_path_exact(sp, 0, 0, {0}, 2);
    REQUIRE(p.has_value());
    CHECK(*p == std::vector<VertexId>{0, 1, 0});
    CHECK_FALSE(least_path_exact(sp, 0, 0, {0}, 3).has_value());
    auto q = least_path_exact(sp, 0, 0, {0}, 4);
    REQUIRE(q.has_value());
    CHECK(*q == std::vector<VertexId>{0, 1, 2, 1, 0});
    auto s = shortest_least_path(sp, 0, 2, {0}, 10);
    REQUIRE(s.has_value());
    CHECK(*s == std::vector<VertexId>{0, 1, 2});
}

TEST_CASE("graph text format round trip") {
    LabeledGraph g = single_spoke_path_graph();
    std::string text = write_graph(g);
    LabeledGraph back = parse_graph(text);
    CHECK(back == g);
    CHECK(back.name.at(0) == "B");

    CHECK_THROWS_AS(parse_graph("vertex 0"), parse_error);
    CHECK_THROWS_AS(parse_graph("vertex 0 label=ab"), parse_error);
    CHECK_THROWS_AS(parse_graph("edge 0 1"), parse_error);
    CHECK_THROWS_AS(parse_graph("banana 1"), parse_error);
}
