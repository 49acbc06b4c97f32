#include "qcsched/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qcsched/errors.hpp"
#include "qcsched/rng.hpp"

namespace qcsched {

namespace {

void validate(const RandomLayerModel& m) {
    if (m.n_cols < 1) throw DataError("random layer model: N must be >= 1");
    if (m.deg_i < 1 || m.deg_i > m.n_cols || m.deg_j < 1 || m.deg_j > m.n_cols)
        throw DataError("random layer model: degrees must lie in [1, N]");
    if (m.latency < 0) throw DataError("random layer model: latency must be >= 0");
}

double log_binomial(int n, int k) {
    if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// P(overlap = k) for overlap ~ Hyp(N, d_i, d_j)
double hyp_pmf(int n, int di, int dj, int k) {
    const double lg = log_binomial(di, k) + log_binomial(n - di, dj - k) - log_binomial(n, dj);
    return std::isfinite(lg) ? std::exp(lg) : 0.0;
}

// Draws a uniform random size-k subset of [0, n) into `out` (first k slots
// of a partial Fisher-Yates over `scratch`).
void sample_subset(SplitMix64& rng, int n, int k, std::vector<int>& scratch,
                   std::vector<int>& out) {
    scratch.resize(n);
    std::iota(scratch.begin(), scratch.end(), 0);
    out.resize(k);
    for (int i = 0; i < k; ++i) {
        const std::size_t j = i + rng.next_below(n - i);
        std::swap(scratch[i], scratch[j]);
        out[i] = scratch[i];
    }
}

}  // namespace

double expected_pair_idle(const RandomLayerModel& model) {
    validate(model);
    const int lo = std::max({model.deg_j + 1 - model.latency, 0,
                             model.deg_i + model.deg_j - model.n_cols});
    const int hi = std::min(model.deg_i, model.deg_j);
    double total = 0.0;
    for (int k = lo; k <= hi; ++k)
        total += hyp_pmf(model.n_cols, model.deg_i, model.deg_j, k) *
                 (k + model.latency - model.deg_j);
    return total;
}

SampleStats sample_pair_idle(const RandomLayerModel& model, long long trials, std::uint64_t seed) {
    validate(model);
    if (trials < 1) throw DataError("sample_pair_idle: trials must be >= 1");
    std::vector<int> scratch, a, b;
    std::vector<char> mark(model.n_cols, 0);
    double sum = 0.0, sum_sq = 0.0;
    for (long long trial = 0; trial < trials; ++trial) {
        SplitMix64 rng(mix64(seed, static_cast<std::uint64_t>(trial)));
        sample_subset(rng, model.n_cols, model.deg_i, scratch, a);
        sample_subset(rng, model.n_cols, model.deg_j, scratch, b);
        for (int c : a) mark[c] = 1;
        int overlap = 0;
        for (int c : b) overlap += mark[c];
        for (int c : a) mark[c] = 0;
        const double idle = std::max(model.latency - (model.deg_j - overlap), 0);
        sum += idle;
        sum_sq += idle * idle;
    }
    SampleStats out;
    out.mean = sum / static_cast<double>(trials);
    if (trials > 1) {
        const double var =
            std::max((sum_sq - sum * sum / static_cast<double>(trials)) / (trials - 1.0), 0.0);
        out.stderr_mean = std::sqrt(var / static_cast<double>(trials));
    }
    return out;
}

double asymptotic_slope(int deg_i, int deg_j, int latency, std::span<const int> n_grid) {
    if (n_grid.size() < 2) throw DataError("asymptotic_slope: need at least two grid points");
    if (deg_j + 1 - latency < 1)
        throw DataError("asymptotic_slope: requires d_j + 1 - t >= 1");
    std::vector<double> xs, ys;
    int prev = 0;
    for (int n : n_grid) {
        if (n <= prev) throw DataError("asymptotic_slope: grid must be strictly increasing");
        prev = n;
        RandomLayerModel m{n, deg_i, deg_j, latency};
        const double e = expected_pair_idle(m);
        if (e <= 0.0) throw DataError("asymptotic_slope: expectation vanished on the grid");
        xs.push_back(std::log(static_cast<double>(n)));
        ys.push_back(std::log(e));
    }
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    return sxy / sxx;
}

Prop1Report verify_prop1(const Prop1Config& config) {
    if (config.degrees.size() < 2) throw DataError("verify_prop1: need at least two layers");
    if (config.trials < 1) throw DataError("verify_prop1: trials must be >= 1");
    const int m = static_cast<int>(config.degrees.size());
    const int n = config.n_cols;
    for (int d : config.degrees)
        if (d < 1 || d > n) throw DataError("verify_prop1: degree out of range");
    const int d_min = *std::min_element(config.degrees.begin(), config.degrees.end());
    const bool hypothesis = config.latency <= d_min;
    if (!hypothesis && !config.force)
        throw UsageError("verify_prop1: t > min degree violates the proposition hypothesis "
                         "(pass force to run anyway)");

    std::vector<int> ascending(m), descending(m);
    std::iota(ascending.begin(), ascending.end(), 0);
    std::stable_sort(ascending.begin(), ascending.end(),
                     [&](int a, int b) { return config.degrees[a] < config.degrees[b]; });
    descending.assign(ascending.rbegin(), ascending.rend());

    // accumulators: ascending, descending, random
    double sum[3] = {0, 0, 0}, sum_sq[3] = {0, 0, 0};
    std::vector<int> scratch, subset;
    std::vector<std::vector<char>> support(m, std::vector<char>(n, 0));
    std::vector<int> random_order(m);
    for (long long trial = 0; trial < config.trials; ++trial) {
        SplitMix64 rng(mix64(config.seed, static_cast<std::uint64_t>(trial)));
        for (int layer = 0; layer < m; ++layer) {
            std::fill(support[layer].begin(), support[layer].end(), 0);
            sample_subset(rng, n, config.degrees[layer], scratch, subset);
            for (int c : subset) support[layer][c] = 1;
        }
        std::iota(random_order.begin(), random_order.end(), 0);
        for (std::size_t i = random_order.size(); i > 1; --i)
            std::swap(random_order[i - 1], random_order[rng.next_below(i)]);

        const auto linear_idle = [&](const std::vector<int>& order) {
            long long total = 0;
            for (int i = 1; i < m; ++i) {
                const int from = order[i - 1], to = order[i];
                int overlap = 0;
                for (int c = 0; c < n; ++c) overlap += support[from][c] & support[to][c];
                total += std::max<long long>(
                    config.latency - (config.degrees[to] - overlap), 0);
            }
            return static_cast<double>(total);
        };
        const double vals[3] = {linear_idle(ascending), linear_idle(descending),
                                linear_idle(random_order)};
        for (int k = 0; k < 3; ++k) {
            sum[k] += vals[k];
            sum_sq[k] += vals[k] * vals[k];
        }
    }
    const auto stats = [&](int k) {
        OrderStats s;
        const double tn = static_cast<double>(config.trials);
        s.mean = sum[k] / tn;
        if (config.trials > 1) {
            const double var = std::max((sum_sq[k] - sum[k] * sum[k] / tn) / (tn - 1.0), 0.0);
            s.stderr_mean = std::sqrt(var / tn);
        }
        return s;
    };
    Prop1Report report;
    report.ascending = stats(0);
    report.descending = stats(1);
    report.random_order = stats(2);
    const double se_diff = std::sqrt(report.ascending.stderr_mean * report.ascending.stderr_mean +
                                     report.descending.stderr_mean * report.descending.stderr_mean);
    report.gap_sigmas =
        se_diff > 0 ? (report.descending.mean - report.ascending.mean) / se_diff : 0.0;
    report.ascending_not_worse = report.ascending.mean <= report.descending.mean;
    report.hypothesis_holds = hypothesis;
    return report;
}

}  // namespace qcsched
