#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "gapcode/eventually_periodic_set.hpp"

using gapcode::EventuallyPeriodicSet;
using EPS = EventuallyPeriodicSet;

TEST_CASE("canonical form minimizes the period, then the threshold") {
    EPS a = EPS::from_parts(0, {}, 6, {1, 4});
    CHECK(a.period() == 3);
    CHECK(a.residues() == std::set<long long>{1});
    CHECK(a.threshold() == 0);

    // {1,4,5,6,...} is already canonical as T=4, exc={1}, D=1, res={0}
    EPS b = EPS::from_parts(4, {1}, 1, {0});
    CHECK(b.threshold() == 4);
    CHECK(b.exceptions() == std::set<long long>{1});
    CHECK(b.period() == 1);
    CHECK(b.residues() == std::set<long long>{0});

    EPS c = EPS::from_parts(4, {0}, 1, {0});
    CHECK(c.threshold() == 4);
    CHECK(c.exceptions() == std::set<long long>{0});
    CHECK(c.contains(0));
    CHECK_FALSE(c.contains(3));
    CHECK(c.contains(4));
    CHECK(c.contains(100));
}

TEST_CASE("threshold walks down into a matching residue pattern") {
    // {n >= 3 : n odd} given with an oversized threshold; 2 is even so the
    // minimal threshold is 2, with no exceptions left.
    EPS a = EPS::from_parts(9, {3, 5, 7}, 2, {1});
    CHECK(a.threshold() == 2);
    CHECK(a.exceptions().empty());
    CHECK(a == EPS::from_parts(2, {}, 2, {1}));
    for (long long n = 0; n < 20; ++n) CHECK(a.contains(n) == (n >= 3 && n % 2 == 1));
}

TEST_CASE("finite sets canonicalize with empty residues") {
    EPS a = EPS::finite({1, 4});
    CHECK(a.is_finite());
    CHECK(a.period() == 1);
    CHECK(a.residues().empty());
    CHECK(a.max_element() == 4);
    CHECK(a.min_element() == 1);

    EPS empty;
    CHECK(empty.empty());
    CHECK(empty.is_finite());
    CHECK_FALSE(empty.is_cofinite());
}

TEST_CASE("set algebra on canonical forms is exact") {
    EPS odd = EPS::from_parts(1, {}, 2, {1});
    EPS one_mod_three = EPS::from_parts(1, {}, 3, {1});
    EPS both = odd.set_intersection(one_mod_three);
    CHECK(both == EPS::from_parts(1, {}, 6, {1}));

    EPS k1 = EPS::finite({1});
    EPS k2 = EPS::finite({1, 4});
    CHECK(k2.set_difference(k1) == EPS::finite({4}));
    CHECK(k2.set_difference(k2).empty());
    CHECK(k1.is_subset_of(k2));
    CHECK_FALSE(k2.is_subset_of(k1));
}

TEST_CASE("cofinite detection and onset") {
    EPS s = EPS::from_parts(4, {1}, 1, {0});  // {1} u {n>=4}
    CHECK(s.is_cofinite());
    CHECK(s.cofinite_onset() == 4);
    CHECK(s.complement() == EPS::finite({0, 2, 3}));

    EPS all = EPS::from_parts(0, {}, 1, {0});
    CHECK(all.is_cofinite());
    CHECK(all.cofinite_onset() == 0);

    EPS odd = EPS::from_parts(1, {}, 2, {1});
    CHECK_FALSE(odd.is_cofinite());
    CHECK_FALSE(odd.is_finite());
}

TEST_CASE("shifted_down maps members n to n-1") {
    EPS s = EPS::from_parts(2, {}, 3, {2});  // {2,5,8,...}
    EPS down = s.shifted_down();
    for (long long n = 0; n <= 40; ++n) CHECK(down.contains(n) == s.contains(n + 1));
}

TEST_CASE("canonical equality is a congruence for the set operations") {
    std::mt19937 rng(20240811);
    auto random_set = [&]() {
        std::uniform_int_distribution<long long> dT(0, 6), dD(1, 8), coin(0, 1);
        long long t = dT(rng), d = dD(rng);
        std::set<long long> exc, res;
        for (long long n = 0; n < t; ++n)
            if (coin(rng)) exc.insert(n);
        for (long long r = 0; r < d; ++r)
            if (coin(rng)) res.insert(r);
        return EPS::from_parts(t, exc, d, res);
    };
    for (int trial = 0; trial < 200; ++trial) {
        EPS a = random_set(), b = random_set();
        EPS u = a.set_union(b), i = a.set_intersection(b), dd = a.set_difference(b);
        long long span = 4 * std::lcm(a.period(), b.period()) + a.threshold() + b.threshold() + 8;
        for (long long n = 0; n <= span; ++n) {
            CAPTURE(trial, n, a.to_string(), b.to_string());
            REQUIRE(u.contains(n) == (a.contains(n) || b.contains(n)));
            REQUIRE(i.contains(n) == (a.contains(n) && b.contains(n)));
            REQUIRE(dd.contains(n) == (a.contains(n) && !b.contains(n)));
        }
        // canonical equality == extensional equality on a long window
        EPS recanon = EPS::from_parts(a.threshold() + 2 * a.period(),
                                      [&] {
                                          std::set<long long> e;
                                          for (long long n = 0; n < a.threshold() + 2 * a.period(); ++n)
                                              if (a.contains(n)) e.insert(n);
                                          return e;
                                      }(),
                                      3 * a.period(), [&] {
                                          std::set<long long> r;
                                          for (long long x = 0; x < 3 * a.period(); ++x) {
                                              long long probe = a.threshold() + 2 * a.period();
                                              probe += ((x - probe) % (3 * a.period()) + 3 * a.period()) %
                                                       (3 * a.period());
                                              if (a.contains(probe)) r.insert(x);
                                          }
                                          return r;
                                      }());
        REQUIRE(recanon == a);
    }
}

TEST_CASE("random sets round-trip through the text form") {
    std::mt19937 rng(5150);
    std::uniform_int_distribution<long long> dT(0, 8), dD(1, 9), coin(0, 1);
    for (int trial = 0; trial < 300; ++trial) {
        long long t = dT(rng), d = dD(rng);
        std::set<long long> exc, res;
        for (long long n = 0; n < t; ++n)
            if (coin(rng)) exc.insert(n);
        for (long long r = 0; r < d; ++r)
            if (coin(rng)) res.insert(r);
        EPS s = EPS::from_parts(t, exc, d, res);
        REQUIRE(EPS::parse(s.to_string()) == s);
    }
}

TEST_CASE("text round trip") {
    EPS a = EPS::from_parts(4, {1}, 1, {0});
    CHECK(EPS::parse(a.to_string()) == a);
    CHECK(EPS::parse("finite:{1,4,5}") == EPS::finite({1, 4, 5}));
    CHECK(EPS::parse("eventual:T=4;exc={1};D=3;res={1}") ==
          EPS::from_parts(4, {1}, 3, {1}));
    CHECK(EPS::parse("finite:{}").empty());
    CHECK_THROWS_AS(EPS::parse("bogus"), gapcode::parse_error);
    CHECK_THROWS_AS(EPS::parse("eventual:T=1"), gapcode::parse_error);
    CHECK_THROWS_AS(EPS::parse("finite:{1,x}"), gapcode::parse_error);
}
