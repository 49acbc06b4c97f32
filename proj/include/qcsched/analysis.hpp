#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace qcsched {

// Two layers whose supports are uniform random column subsets of sizes
// deg_i and deg_j out of n_cols.
struct RandomLayerModel {
    int n_cols = 0;   // N
    int deg_i = 0;    // d_i: predecessor layer degree
    int deg_j = 0;    // d_j: successor layer degree
    int latency = 0;  // t
};

// Exact expected idle count for the transition i -> j:
//   E = sum_k P(overlap = k) * (k + t - d_j)  over k with k + t - d_j > 0,
// overlap ~ Hypergeometric(N, d_i, d_j). Binomials evaluated in log space.
double expected_pair_idle(const RandomLayerModel& model);

struct SampleStats {
    double mean = 0.0;
    double stderr_mean = 0.0;
};

// Monte Carlo estimate of the same expectation; trial k uses an RNG stream
// derived from (seed, k), so the result is split-invariant.
SampleStats sample_pair_idle(const RandomLayerModel& model, long long trials, std::uint64_t seed);

// Least-squares slope of log E vs log N over the grid; approaches
// -(d_j + 1 - t) for large N.
double asymptotic_slope(int deg_i, int deg_j, int latency, std::span<const int> n_grid);

struct Prop1Config {
    std::vector<int> degrees;  // layer degree multiset
    int n_cols = 0;
    int latency = 0;
    long long trials = 100000;
    std::uint64_t seed = 1;
    bool force = false;  // run even when latency > min degree
};

struct OrderStats {
    double mean = 0.0;
    double stderr_mean = 0.0;
};

struct Prop1Report {
    OrderStats ascending;
    OrderStats descending;
    OrderStats random_order;
    double gap_sigmas = 0.0;  // (descending - ascending) / stderr of the difference
    bool ascending_not_worse = false;
    bool hypothesis_holds = false;  // latency <= min degree
};

// Samples random codes with the given degree multiset and compares the mean
// linear idle of ascending / random / descending degree orders.
Prop1Report verify_prop1(const Prop1Config& config);

}  // namespace qcsched
