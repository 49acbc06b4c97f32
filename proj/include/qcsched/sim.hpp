#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "qcsched/base_graph.hpp"
#include "qcsched/decoder.hpp"
#include "qcsched/idle.hpp"

namespace qcsched {

struct SimConfig {
    std::vector<double> snr_db;      // Eb/N0 grid in dB
    long long max_trials = 10000;    // codewords per SNR point
    int max_errors = 100;            // early stop per point
    int max_iters = 20;
    double clip = kDefaultClip;
    std::uint64_t seed = 1;
    int threads = 1;
    bool flooding = false;           // layered otherwise
    // Trials are processed in fixed-size blocks so the early-stop decision
    // (and hence the trial count) does not depend on the worker count.
    long long trial_block = 256;
};

struct SnrPointResult {
    double snr_db = 0.0;
    long long trials = 0;
    long long block_errors = 0;
    long long bit_errors = 0;
    double bler = 0.0;
    double ber = 0.0;
    double mean_iters = 0.0;
};

struct SimResult {
    std::vector<SnrPointResult> points;
};

// BPSK over AWGN: bit b maps to 1-2b, sigma^2 = 1/(2*R*10^(snr/10)),
// LLR = 2y/sigma^2; untransmitted (punctured) positions get LLR 0.
Eigen::VectorXd awgn_llrs(const std::vector<std::uint8_t>& codeword,
                          const std::vector<std::uint8_t>& transmitted, double snr_db,
                          double rate, std::uint64_t stream_seed);

// All-zero-codeword Monte Carlo over the SNR grid. Block errors and bit
// errors are counted on the systematic positions. Trial k at SNR index s
// draws noise from the stream mixed from (seed, s, k), so results are
// identical for any worker count.
SimResult run_bler(const LiftedCode& code, const Schedule& schedule, const SimConfig& config);

// CSV interface consumed by external plotters.
std::string results_csv(const SimResult& result);

}  // namespace qcsched
