#include <doctest.h>

#include "qcsched/errors.hpp"
#include "qcsched/idle.hpp"
#include "qcsched/rng.hpp"
#include "support/fixtures.hpp"

using namespace qcsched;
using namespace qcsched::testing;

TEST_CASE("pair_idle formula") {
    // two layers, d = [6, 6], common = 3
    BaseGraph bg = parse_base_graph(
        "2 9 1\n0 0 0 0 0 0 -1 -1 -1\n0 0 0 -1 -1 -1 0 0 0\n");
    const LayerStats st = layer_stats(bg);
    CHECK(pair_idle(st, 4, 0, 1) == 1);  // max(4 - (6 - 3), 0)
    CHECK(pair_idle(st, 0, 0, 1) == 0);
    CHECK(pair_idle(st, 3, 0, 1) == 0);
    CHECK_THROWS_AS(pair_idle(st, 4, 0, 0), DataError);
    CHECK_THROWS_AS(pair_idle(st, 4, 0, 2), DataError);
    CHECK_THROWS_AS(pair_idle(st, -1, 0, 1), DataError);

    const LayerStats toy = layer_stats(toy4());
    CHECK(pair_idle(toy, 3, 0, 1) == 1);
    CHECK(pair_idle(toy, 3, 0, 2) == 0);
}

TEST_CASE("cyclic and linear idle counts on toy4") {
    const LayerStats st = layer_stats(toy4());
    CHECK(n_idle_cyclic(st, 3, {0, 1, 2, 3}) == 4);
    CHECK(n_idle_cyclic(st, 3, {0, 2, 1, 3}) == 2);
    CHECK(n_idle_cyclic(st, 0, {0, 1, 2, 3}) == 0);
    CHECK(n_idle_linear(st, 3, {0, 2, 1, 3}) == 1);
    CHECK(n_idle_linear(st, 3, {0, 1, 2, 3}) == 3);
}

TEST_CASE("single-layer schedule") {
    const BaseGraph bg = parse_base_graph("1 2 1\n0 0\n");
    const LayerStats st = layer_stats(bg);
    CHECK(n_idle_linear(st, 3, {0}) == 0);
    // the wrap transition feeds the layer into itself across iterations
    CHECK(n_idle_cyclic(st, 3, {0}) == 3);
}

TEST_CASE("schedule validation") {
    const LayerStats st = layer_stats(toy4());
    CHECK_THROWS_AS(n_idle_cyclic(st, 3, {0, 1, 2}), DataError);
    CHECK_THROWS_AS(n_idle_cyclic(st, 3, {0, 1, 2, 2}), DataError);
    CHECK_THROWS_AS(n_idle_cyclic(st, 3, {0, 1, 2, 4}), DataError);
}

TEST_CASE("cyclic = linear + wrap, monotone in t, bounded") {
    SplitMix64 rng(0x1d1eULL);
    for (int trial = 0; trial < 20; ++trial) {
        const int layers = 2 + static_cast<int>(rng.next_below(9));
        const BaseGraph bg = random_base_graph(rng, layers, 24, 3, 8);
        const LayerStats st = layer_stats(bg);
        Schedule sched(layers);
        for (int i = 0; i < layers; ++i) sched[i] = i;
        for (std::size_t i = sched.size(); i > 1; --i)
            std::swap(sched[i - 1], sched[rng.next_below(i)]);
        long long prev = -1;
        for (int t = 0; t <= 9; ++t) {
            const long long cyc = n_idle_cyclic(st, t, sched);
            CHECK(cyc == n_idle_linear(st, t, sched) + pair_idle(st, t, sched.back(), sched.front()));
            CHECK(cyc >= prev);
            CHECK(cyc >= 0);
            CHECK(cyc <= static_cast<long long>(layers) * t);
            prev = cyc;
        }
    }
}

TEST_CASE("disjoint layers with small t never stall") {
    // all pairwise common degrees zero
    const BaseGraph bg = parse_base_graph(
        "3 9 1\n0 0 0 -1 -1 -1 -1 -1 -1\n-1 -1 -1 0 0 0 -1 -1 -1\n-1 -1 -1 -1 -1 -1 0 0 0\n");
    const LayerStats st = layer_stats(bg);
    for (const Schedule& sched : {Schedule{0, 1, 2}, Schedule{2, 0, 1}, Schedule{1, 2, 0}})
        CHECK(n_idle_cyclic(st, 3, sched) == 0);
}

TEST_CASE("schedule file parsing") {
    const Schedule sched = parse_schedule("0 2 1 3  # optimal for t=3\n");
    CHECK(sched == Schedule{0, 2, 1, 3});
    CHECK(serialize_schedule(sched) == "0 2 1 3\n");
    CHECK_THROWS_AS(parse_schedule("0 1 x"), DataError);
    CHECK_THROWS_AS(validate_schedule(parse_schedule("0 1 1 3"), 4), DataError);
}
