#include <doctest.h>

#include <cmath>

#include "qcsched/errors.hpp"
#include "qcsched/rng.hpp"
#include "qcsched/sim.hpp"
#include "support/fixtures.hpp"

using namespace qcsched;
using namespace qcsched::testing;

TEST_CASE("awgn_llrs basics") {
    const std::vector<std::uint8_t> word{0, 1, 0, 1, 0, 1, 0, 1};
    std::vector<std::uint8_t> tx(8, 1);
    tx[2] = 0;  // punctured position

    SUBCASE("high SNR recovers signs, punctured stays zero") {
        const Eigen::VectorXd llrs = awgn_llrs(word, tx, 40.0, 0.5, 123);
        for (int i = 0; i < 8; ++i) {
            if (i == 2) CHECK(llrs[i] == 0.0);
            else if (word[i] == 0) CHECK(llrs[i] > 0);
            else CHECK(llrs[i] < 0);
        }
    }

    SUBCASE("bit-identical per seed") {
        const Eigen::VectorXd a = awgn_llrs(word, tx, 2.0, 0.5, 99);
        const Eigen::VectorXd b = awgn_llrs(word, tx, 2.0, 0.5, 99);
        CHECK(a == b);
        const Eigen::VectorXd c = awgn_llrs(word, tx, 2.0, 0.5, 100);
        CHECK(a != c);
    }

    SUBCASE("validation") {
        CHECK_THROWS_AS(awgn_llrs(word, std::vector<std::uint8_t>(5, 1), 2.0, 0.5, 1), DataError);
        CHECK_THROWS_AS(awgn_llrs(word, tx, 2.0, 0.0, 1), DataError);
        CHECK_THROWS_AS(awgn_llrs(word, tx, 2.0, 1.5, 1), DataError);
    }
}

TEST_CASE("run_bler on the (8,4) fixture") {
    const LiftedCode code = lift(hamming84());
    const Schedule natural{0, 1, 2, 3};

    SUBCASE("noiseless regime") {
        SimConfig config;
        config.snr_db = {20.0};
        config.max_trials = 1000;
        config.seed = 5;
        const SimResult r = run_bler(code, natural, config);
        REQUIRE(r.points.size() == 1);
        CHECK(r.points[0].block_errors == 0);
        CHECK(r.points[0].bler == 0.0);
        CHECK(r.points[0].trials == 1000);
    }

    SUBCASE("pure noise regime") {
        SimConfig config;
        config.snr_db = {-100.0};
        config.max_trials = 400;
        config.max_errors = 1000000;
        config.seed = 5;
        const SimResult r = run_bler(code, natural, config);
        CHECK(r.points[0].bler > 0.8);
    }

    SUBCASE("early stop respects max_errors at block granularity") {
        SimConfig config;
        config.snr_db = {-10.0};
        config.max_trials = 100000;
        config.max_errors = 50;
        config.trial_block = 64;
        config.seed = 5;
        const SimResult r = run_bler(code, natural, config);
        CHECK(r.points[0].block_errors >= 50);
        CHECK(r.points[0].trials % 64 == 0);
        CHECK(r.points[0].trials < 100000);
    }

    SUBCASE("worker-count invariance") {
        SimConfig config;
        config.snr_db = {2.0, 6.0};
        config.max_trials = 600;
        config.seed = 11;
        config.threads = 1;
        const SimResult a = run_bler(code, natural, config);
        config.threads = 8;
        const SimResult b = run_bler(code, natural, config);
        CHECK(results_csv(a) == results_csv(b));
    }

    SUBCASE("monotone BLER trend across a wide SNR gap") {
        SimConfig config;
        config.snr_db = {0.0, 8.0};
        config.max_trials = 2000;
        config.max_errors = 2000;
        config.seed = 13;
        const SimResult r = run_bler(code, natural, config);
        const auto lo = wilson95(r.points[1].block_errors, r.points[1].trials);
        const auto hi = wilson95(r.points[0].block_errors, r.points[0].trials);
        CHECK(lo.hi < hi.lo);
    }
}

TEST_CASE("all-zero assumption validated against random codewords") {
    const LiftedCode code = lift(hamming84());
    const Schedule natural{0, 1, 2, 3};
    const double snr = 3.0;
    const int trials = 4000;

    long long zero_errors = 0, random_errors = 0;
    for (int trial = 0; trial < trials; ++trial) {
        SplitMix64 rng(mix64(0xc0ffee, trial));
        // all-zero transmission
        {
            const Eigen::VectorXd llrs = awgn_llrs(std::vector<std::uint8_t>(8, 0),
                                                   code.transmitted, snr, 0.5, rng.next());
            const DecodeResult r = decode_layered(code, natural, llrs, 20);
            for (int i = 0; i < 4; ++i)
                if (r.hard_decision[i] != 0) {
                    ++zero_errors;
                    break;
                }
        }
        // random codeword transmission through the fixture generator
        {
            std::vector<std::uint8_t> info(4);
            for (auto& b : info) b = static_cast<std::uint8_t>(rng.next_below(2));
            const std::vector<std::uint8_t> word = hamming84_encode(info);
            const Eigen::VectorXd llrs =
                awgn_llrs(word, code.transmitted, snr, 0.5, rng.next());
            const DecodeResult r = decode_layered(code, natural, llrs, 20);
            for (int i = 0; i < 4; ++i)
                if (r.hard_decision[i] != word[i]) {
                    ++random_errors;
                    break;
                }
        }
    }
    // symmetric channel + symmetric decoder: the two BLER estimates agree
    const auto zi = wilson95(zero_errors, trials);
    const auto ri = wilson95(random_errors, trials);
    CHECK(zi.lo <= ri.hi);
    CHECK(ri.lo <= zi.hi);
}

TEST_CASE("results CSV shape") {
    SimResult r;
    r.points.push_back({2.0, 100, 10, 55, 0.1, 0.1375, 7.25});
    const std::string csv = results_csv(r);
    CHECK(csv == "snr_db,trials,block_errors,bler,ber,mean_iters\n2,100,10,0.1,0.1375,7.25\n");
}

TEST_CASE("sim config validation") {
    const LiftedCode code = lift(hamming84());
    SimConfig config;
    CHECK_THROWS_AS(run_bler(code, {0, 1, 2, 3}, config), DataError);  // empty grid
    config.snr_db = {1.0};
    CHECK_THROWS_AS(run_bler(code, {0, 1}, config), DataError);  // bad schedule
}
