#include "qcsched/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "qcsched/errors.hpp"
#include "qcsched/parallel.hpp"
#include "qcsched/rng.hpp"

namespace qcsched {

Eigen::VectorXd awgn_llrs(const std::vector<std::uint8_t>& codeword,
                          const std::vector<std::uint8_t>& transmitted, double snr_db,
                          double rate, std::uint64_t stream_seed) {
    if (codeword.size() != transmitted.size())
        throw DataError("awgn_llrs: codeword/transmitted size mismatch");
    if (rate <= 0.0 || rate > 1.0) throw DataError("awgn_llrs: rate must be in (0, 1]");
    const double sigma_sq = 1.0 / (2.0 * rate * std::pow(10.0, snr_db / 10.0));
    const double scale = 2.0 / sigma_sq;
    const double sigma = std::sqrt(sigma_sq);
    Gaussian noise(stream_seed);
    Eigen::VectorXd llrs(codeword.size());
    for (std::size_t i = 0; i < codeword.size(); ++i) {
        if (!transmitted[i]) {
            llrs[i] = 0.0;
            continue;
        }
        const double symbol = codeword[i] ? -1.0 : 1.0;
        llrs[i] = scale * (symbol + sigma * noise.next());
    }
    return llrs;
}

namespace {

struct TrialOutcome {
    std::uint8_t block_error = 0;
    int bit_errors = 0;
    int iterations = 0;
};

void validate(const SimConfig& config) {
    if (config.snr_db.empty()) throw DataError("sim: SNR grid is empty");
    if (config.max_trials < 1) throw DataError("sim: trials must be >= 1");
    if (config.max_errors < 1) throw DataError("sim: max_errors must be >= 1");
    if (config.trial_block < 1) throw DataError("sim: trial_block must be >= 1");
}

}  // namespace

SimResult run_bler(const LiftedCode& code, const Schedule& schedule, const SimConfig& config) {
    validate(config);
    if (!config.flooding) validate_schedule(schedule, code.base_rows);
    const int info_bits = code.info_cols * code.lift;
    if (info_bits < 1) throw DataError("sim: code has no systematic bits");
    long long transmitted_bits = 0;
    for (auto t : code.transmitted) transmitted_bits += t;
    if (transmitted_bits < 1) throw DataError("sim: code transmits no bits");
    const double rate = static_cast<double>(info_bits) / static_cast<double>(transmitted_bits);
    const std::vector<std::uint8_t> zero_word(code.n, 0);

    SimResult result;
    for (std::size_t s = 0; s < config.snr_db.size(); ++s) {
        SnrPointResult point;
        point.snr_db = config.snr_db[s];
        long long iter_sum = 0;
        std::vector<TrialOutcome> block(config.trial_block);
        while (point.trials < config.max_trials && point.block_errors < config.max_errors) {
            const long long count = std::min(config.trial_block, config.max_trials - point.trials);
            const long long base = point.trials;
            parallel_for(0, count, config.threads, [&](std::int64_t i) {
                const std::uint64_t stream =
                    mix64(config.seed, static_cast<std::uint64_t>(s),
                          static_cast<std::uint64_t>(base + i));
                const Eigen::VectorXd llrs =
                    awgn_llrs(zero_word, code.transmitted, point.snr_db, rate, stream);
                const DecodeResult decoded =
                    config.flooding
                        ? decode_flooding(code, llrs, config.max_iters, config.clip)
                        : decode_layered(code, schedule, llrs, config.max_iters, config.clip);
                TrialOutcome out;
                for (int v = 0; v < info_bits; ++v) out.bit_errors += decoded.hard_decision[v];
                out.block_error = out.bit_errors > 0;
                out.iterations = decoded.iterations_used;
                block[i] = out;
            });
            for (long long i = 0; i < count; ++i) {
                point.block_errors += block[i].block_error;
                point.bit_errors += block[i].bit_errors;
                iter_sum += block[i].iterations;
            }
            point.trials += count;
        }
        point.bler = static_cast<double>(point.block_errors) / static_cast<double>(point.trials);
        point.ber = static_cast<double>(point.bit_errors) /
                    (static_cast<double>(point.trials) * info_bits);
        point.mean_iters = static_cast<double>(iter_sum) / static_cast<double>(point.trials);
        result.points.push_back(point);
    }
    return result;
}

std::string results_csv(const SimResult& result) {
    std::ostringstream out;
    out << "snr_db,trials,block_errors,bler,ber,mean_iters\n";
    char buf[160];
    for (const auto& p : result.points) {
        std::snprintf(buf, sizeof(buf), "%g,%lld,%lld,%.8g,%.8g,%.6g\n", p.snr_db, p.trials,
                      p.block_errors, p.bler, p.ber, p.mean_iters);
        out << buf;
    }
    return out.str();
}

}  // namespace qcsched
