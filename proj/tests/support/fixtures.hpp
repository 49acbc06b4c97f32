#pragma once

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "qcsched/base_graph.hpp"
#include "qcsched/rng.hpp"

namespace qcsched::testing {

inline std::filesystem::path data_dir() { return std::filesystem::path(QCSCHED_DATA_DIR); }
inline std::string cli_path() { return QCSCHED_CLI_PATH; }

inline constexpr const char* kToy4Text =
    "4 8 1 4 punct=none\n"
    "0 0 0 0 -1 -1 -1 -1\n"
    "-1 -1 0 0 0 0 -1 -1\n"
    "-1 -1 -1 -1 0 0 0 0\n"
    "0 0 -1 -1 -1 -1 0 0\n";

inline BaseGraph toy4() { return parse_base_graph(kToy4Text); }

inline BaseGraph toy4_punct() {
    BaseGraph bg = toy4();
    bg.punct_cols = {0, 1};
    return bg;
}

// Extended Hamming (8,4): H = [A | I4], G = [I4 | A] with A = J - I.
inline BaseGraph hamming84() { return load_base_graph(data_dir() / "hamming84.bg"); }

inline std::vector<std::uint8_t> hamming84_encode(const std::vector<std::uint8_t>& info) {
    std::vector<std::uint8_t> word(8, 0);
    for (int i = 0; i < 4; ++i) word[i] = info[i];
    for (int r = 0; r < 4; ++r) {
        std::uint8_t parity = 0;
        for (int c = 0; c < 4; ++c)
            if (c != r) parity ^= info[c];
        word[4 + r] = parity;
    }
    return word;
}

// Random base graph with Z=1, degrees in [deg_lo, deg_hi], every column
// covered; used by the solver-oracle and constraint-compliance suites.
inline BaseGraph random_base_graph(SplitMix64& rng, int layers, int cols, int deg_lo,
                                   int deg_hi) {
    BaseGraph bg;
    bg.rows = layers;
    bg.cols = cols;
    bg.lift = 1;
    bg.info_cols = std::max(cols - layers, 0);
    bg.punct_cols = {0, 1};
    bg.shifts = Eigen::MatrixXi::Constant(layers, cols, kNoEdge);
    // deal every column to a row so none is empty, then top rows up
    std::vector<int> perm(cols);
    for (int c = 0; c < cols; ++c) perm[c] = c;
    for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.next_below(i)]);
    for (int c = 0; c < cols; ++c) bg.shifts(c % layers, perm[c]) = 0;
    for (int r = 0; r < layers; ++r) {
        const int target =
            deg_lo + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(deg_hi - deg_lo + 1)));
        int have = 0;
        for (int c = 0; c < cols; ++c) have += bg.shifts(r, c) != kNoEdge;
        while (have < target) {
            const int c = static_cast<int>(rng.next_below(cols));
            if (bg.shifts(r, c) == kNoEdge) {
                bg.shifts(r, c) = 0;
                ++have;
            }
        }
    }
    validate(bg);
    return bg;
}

struct WilsonInterval {
    double lo = 0.0;
    double hi = 1.0;
};

// 95% Wilson score interval for a binomial proportion.
inline WilsonInterval wilson95(long long successes, long long trials) {
    const double z = 1.959963984540054;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double denom = 1.0 + z * z / n;
    const double center = (p + z * z / (2 * n)) / denom;
    const double half = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom;
    return {center - half, center + half};
}

}  // namespace qcsched::testing
