#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "oracle.hpp"
#include "reca/automaton.hpp"
#include "reca/rule.hpp"

using namespace reca;

TEST_CASE("rule table matches the bits of its number") {
    for (int n = 0; n < kRuleCount; ++n) {
        const Rule r(n);
        const auto t = r.table();
        for (int k = 0; k < 8; ++k) CHECK(t[k] == (((n >> k) & 1) != 0));
        CHECK(Rule::from_table(t).number() == n);
    }
    CHECK_THROWS_AS(Rule(256), RangeError);
    CHECK_THROWS_AS(Rule(-1), RangeError);
}

TEST_CASE("rule_output examples") {
    CHECK(rule_output(Rule(45), 0, 0, 0) == 1);
    for (int k = 0; k < 8; ++k) {
        CHECK(rule_output(Rule(0), k & 4, k & 2, k & 1) == 0);
        // 204 keeps the center cell
        CHECK(rule_output(Rule(204), k & 4, k & 2, k & 1) == ((k & 2) != 0));
    }
}

TEST_CASE("step examples under fixed zero edges") {
    const auto fixed = EdgePolicy::fixed();
    CHECK(step(Rule(16), StateVector::from_string("00100"), fixed).to_string() == "00010");
    CHECK(step(Rule(2), StateVector::from_string("00100"), fixed).to_string() == "01000");
    CHECK(step(Rule(16), StateVector::from_string("00001"), fixed).to_string() == "00000");
}

TEST_CASE("step rejects widths below three") {
    CHECK_THROWS_AS(step(Rule(30), StateVector::from_string("01"), EdgePolicy::fixed()), InvalidWidth);
    CHECK_THROWS_AS(evolve(Rule(30), StateVector(0), 3, EdgePolicy::cyclic()), InvalidWidth);
    CHECK_NOTHROW(step(Rule(30), StateVector::from_string("010"), EdgePolicy::cyclic()));
}

TEST_CASE("pattern parsing") {
    CHECK(StateVector::from_string("..#.#").to_string() == "00101");
    CHECK_THROWS_AS(StateVector::from_string("00x"), RangeError);
}

TEST_CASE("evolve examples") {
    SUBCASE("rule 0 clears everything") {
        std::mt19937_64 rng(7);
        const auto init = oracle::random_state(rng, 40);
        const Trace t = evolve(Rule(0), init, 1, EdgePolicy::fixed());
        CHECK(t.rows() == 2);
        CHECK(t.row(1).count() == 0);
        CHECK(t.row(0) == init.view());
    }
    SUBCASE("rule 16 moves a single cell k places right") {
        const std::size_t L = 20;
        for (std::size_t p = 1; p < L - 1; ++p) {
            for (std::size_t k = 0; p + k < L - 1; ++k) {
                StateVector s(L);
                s.set(p, true);
                const Trace t = evolve(Rule(16), s, k, EdgePolicy::fixed());
                StateVector expected(L);
                expected.set(p + k, true);
                CHECK(t.back() == expected.view());
            }
        }
    }
    SUBCASE("rule 110 from a single cell grows only to the left") {
        const std::size_t L = 61, center = 30;
        StateVector s(L);
        s.set(center, true);
        const Trace t = evolve(Rule(110), s, 25, EdgePolicy::fixed());
        const auto rows = oracle::naive_evolve(110, oracle::to_cells(s), 25, false);
        REQUIRE(t.rows() == 26);
        std::size_t prev_leftmost = center;
        for (std::size_t i = 0; i < t.rows(); ++i) {
            CHECK(oracle::to_cells(t.row(i)) == rows[i]);
            std::size_t leftmost = L, rightmost = 0;
            for (std::size_t j = 0; j < L; ++j) {
                if (t.row(i)[j]) {
                    leftmost = std::min(leftmost, j);
                    rightmost = std::max(rightmost, j);
                }
            }
            CHECK(rightmost <= center + 1);
            CHECK(leftmost <= prev_leftmost);
            prev_leftmost = leftmost;
        }
        CHECK(prev_leftmost == center - 25);
    }
}

TEST_CASE("trace shape") {
    const Trace t = evolve(Rule(90), StateVector::from_string("0001000"), 9, EdgePolicy::cyclic());
    CHECK(t.iterations() == 9);
    CHECK(t.rows() == 10);
    for (std::size_t i = 0; i < t.rows(); ++i) CHECK(t.row(i).width() == 7);
}

TEST_CASE("mirror and complement") {
    CHECK(mirror_rule(Rule(2)).number() == 16);
    CHECK(mirror_rule(Rule(204)).number() == 204);
    CHECK(complement_rule(Rule(0)).number() == 255);
    CHECK(complement_rule(Rule(204)).number() == 204);
    for (int n = 0; n < kRuleCount; ++n) {
        const Rule r(n);
        CHECK(mirror_rule(mirror_rule(r)) == r);
        CHECK(complement_rule(complement_rule(r)) == r);
        const auto t = r.table();
        const auto m = mirror_rule(r).table();
        const auto c = complement_rule(r).table();
        for (int l = 0; l < 2; ++l)
            for (int ce = 0; ce < 2; ++ce)
                for (int rr = 0; rr < 2; ++rr) {
                    CHECK(m[4 * rr + 2 * ce + l] == t[4 * l + 2 * ce + rr]);
                }
        for (int k = 0; k < 8; ++k) CHECK(c[k] == !t[7 - k]);
    }
}

TEST_CASE("equivalence classes") {
    const auto classes = equivalence_classes();
    CHECK(classes.size() == 88);

    std::set<int> all;
    for (const auto& cls : classes) {
        for (int n : cls) {
            CHECK(all.insert(n).second);
            CHECK(std::ranges::binary_search(cls, mirror_rule(Rule(n)).number()));
            CHECK(std::ranges::binary_search(cls, complement_rule(Rule(n)).number()));
        }
    }
    CHECK(all.size() == 256);

    const auto find = [&](int n) {
        return *std::ranges::find_if(classes, [n](const auto& c) { return std::ranges::binary_search(c, n); });
    };
    CHECK(find(204) == std::vector<int>{204});
    CHECK(find(2) == find(16));
    CHECK(canonical_rule(Rule(16)) == 2);
}

TEST_CASE("category metadata only for cited rules") {
    CHECK(rule_category(Rule(110)) == Category::IV);
    CHECK(rule_category(Rule(137)) == Category::IV);
    CHECK(rule_category(Rule(250)) == Category::I);
    CHECK(rule_category(Rule(218)) == Category::II);
    CHECK(rule_category(Rule(182)) == Category::III);
    CHECK_FALSE(rule_category(Rule(16)).has_value());
    CHECK(category_name(rule_category(Rule(3))) == "unclassified");
    int labeled = 0;
    for (int n = 0; n < kRuleCount; ++n) labeled += rule_category(Rule(n)).has_value();
    CHECK(labeled == 17);
}

TEST_CASE("property: packed step equals the naive two-buffer update") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> rule_dist(0, 255);
    std::uniform_int_distribution<std::size_t> width_dist(3, 200);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = rule_dist(rng);
        const std::size_t w = width_dist(rng);
        const bool cyclic = trial % 2 == 0;
        const auto cells = oracle::random_cells(rng, w);
        const auto s = oracle::from_cells(cells);
        const auto edges = cyclic ? EdgePolicy::cyclic() : EdgePolicy::fixed();
        const auto packed = step(Rule(n), s, edges);
        REQUIRE(oracle::to_cells(packed) == oracle::naive_step(n, cells, cyclic));
        CHECK(step(Rule(n), s, edges) == packed); // deterministic
    }
}

TEST_CASE("property: fixed edges stay pinned") {
    std::mt19937_64 rng(5);
    for (int n = 0; n < kRuleCount; ++n) {
        const Trace t = evolve(Rule(n), oracle::random_state(rng, 70), 30, EdgePolicy::fixed());
        for (std::size_t i = 1; i < t.rows(); ++i) {
            CHECK_FALSE(t.row(i)[0]);
            CHECK_FALSE(t.row(i)[69]);
        }
        const Trace one = evolve(Rule(n), oracle::random_state(rng, 70), 5, EdgePolicy::fixed(true));
        for (std::size_t i = 1; i < one.rows(); ++i) {
            CHECK(one.row(i)[0]);
            CHECK(one.row(i)[69]);
        }
    }
}

TEST_CASE("property: cyclic step commutes with rotation") {
    std::mt19937_64 rng(11);
    const auto rotate = [](const StateVector& s, std::size_t k) {
        StateVector out(s.width());
        for (std::size_t i = 0; i < s.width(); ++i) out.set((i + k) % s.width(), s[i]);
        return out;
    };
    for (int trial = 0; trial < 200; ++trial) {
        const int n = static_cast<int>(rng() % 256);
        const std::size_t w = 3 + rng() % 140;
        const auto s = oracle::random_state(rng, w);
        const std::size_t k = rng() % w;
        CHECK(step(Rule(n), rotate(s, k), EdgePolicy::cyclic()) == rotate(step(Rule(n), s, EdgePolicy::cyclic()), k));
    }
}

TEST_CASE("property: identity and complement rules on the interior") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t w = 3 + rng() % 150;
        const auto s = oracle::random_state(rng, w);
        const auto id = step(Rule(204), s, EdgePolicy::fixed());
        const auto neg = step(Rule(51), s, EdgePolicy::fixed());
        for (std::size_t i = 1; i + 1 < w; ++i) {
            CHECK(id[i] == s[i]);
            CHECK(neg[i] == !s[i]);
        }
    }
}

TEST_CASE("property: shift rules move isolated cells one place per step") {
    const std::size_t L = 50;
    StateVector s(L);
    for (std::size_t p : {5U, 15U, 30U}) s.set(p, true);
    const Trace right = evolve(Rule(16), s, L, EdgePolicy::fixed());
    const Trace left = evolve(Rule(2), s, L, EdgePolicy::fixed());
    for (std::size_t t = 0; t <= L; ++t) {
        for (std::size_t p : {5U, 15U, 30U}) {
            if (p + t < L - 1) CHECK(right.row(t)[p + t]);
            if (p >= t + 1) CHECK(left.row(t)[p - t]);
        }
        std::size_t alive_r = 0, alive_l = 0;
        for (std::size_t p : {5U, 15U, 30U}) {
            alive_r += p + t < L - 1;
            alive_l += p >= t + 1;
        }
        CHECK(right.row(t).count() == alive_r);
        CHECK(left.row(t).count() == alive_l);
    }
}
