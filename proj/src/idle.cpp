#include "qcsched/idle.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "qcsched/errors.hpp"

namespace qcsched {

void validate_schedule(const Schedule& sched, int layer_count) {
    if (static_cast<int>(sched.size()) != layer_count)
        throw DataError("schedule: expected " + std::to_string(layer_count) + " layers, got " +
                        std::to_string(sched.size()));
    std::vector<char> seen(layer_count, 0);
    for (int layer : sched) {
        if (layer < 0 || layer >= layer_count)
            throw DataError("schedule: layer index " + std::to_string(layer) + " out of range");
        if (seen[layer]) throw DataError("schedule: layer " + std::to_string(layer) + " repeated");
        seen[layer] = 1;
    }
}

namespace {

void check_latency(int t) {
    if (t < 0) throw DataError("latency must be >= 0");
}

inline long long raw_pair_idle(const LayerStats& stats, int t, int from, int to) {
    return std::max<long long>(t - (stats.degrees[to] - stats.common(from, to)), 0);
}

}  // namespace

int pair_idle(const LayerStats& stats, int t, int from, int to) {
    check_latency(t);
    const int m = static_cast<int>(stats.degrees.size());
    if (from < 0 || from >= m || to < 0 || to >= m)
        throw DataError("pair_idle: layer index out of range");
    if (from == to) throw DataError("pair_idle: self-transition is undefined");
    return static_cast<int>(raw_pair_idle(stats, t, from, to));
}

long long n_idle_cyclic(const LayerStats& stats, int t, const Schedule& sched) {
    check_latency(t);
    validate_schedule(sched, static_cast<int>(stats.degrees.size()));
    const int m = static_cast<int>(sched.size());
    long long total = raw_pair_idle(stats, t, sched[m - 1], sched[0]);
    for (int i = 1; i < m; ++i) total += raw_pair_idle(stats, t, sched[i - 1], sched[i]);
    return total;
}

long long n_idle_linear(const LayerStats& stats, int t, const Schedule& sched) {
    check_latency(t);
    validate_schedule(sched, static_cast<int>(stats.degrees.size()));
    long long total = 0;
    for (std::size_t i = 1; i < sched.size(); ++i)
        total += raw_pair_idle(stats, t, sched[i - 1], sched[i]);
    return total;
}

Schedule parse_schedule(std::string_view text) {
    Schedule sched;
    std::istringstream stream{std::string(text)};
    std::string line;
    while (std::getline(stream, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream is(line);
        std::string tok;
        while (is >> tok) {
            int v = 0;
            const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (ec != std::errc() || ptr != tok.data() + tok.size())
                throw DataError("schedule: bad token '" + tok + "'");
            sched.push_back(v);
        }
    }
    return sched;
}

Schedule load_schedule(const std::filesystem::path& path, int layer_count) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open schedule file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    Schedule sched = parse_schedule(buf.str());
    validate_schedule(sched, layer_count);
    return sched;
}

std::string serialize_schedule(const Schedule& sched) {
    std::ostringstream out;
    for (std::size_t i = 0; i < sched.size(); ++i) out << (i ? " " : "") << sched[i];
    out << '\n';
    return out.str();
}

}  // namespace qcsched
