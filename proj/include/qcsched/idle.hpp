#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "qcsched/base_graph.hpp"

namespace qcsched {

// Layer update order within one iteration; a permutation of [0, m).
using Schedule = std::vector<int>;

// t: clock cycles between reading a soft value and writing its update.
struct PipelineParams {
    int latency = 0;
};

// Throws DataError unless sched is a permutation of [0, layer_count).
void validate_schedule(const Schedule& sched, int layer_count);

// Idle cycles inserted when layer `to` is decoded right after layer `from`:
// max(t - (d_to - d^c_{from,to}), 0).
int pair_idle(const LayerStats& stats, int t, int from, int to);

// Per-iteration idle count including the wrap transition from the last layer
// back to the first (steady-state pipelining across iterations).
long long n_idle_cyclic(const LayerStats& stats, int t, const Schedule& sched);

// Same sum without the wrap term.
long long n_idle_linear(const LayerStats& stats, int t, const Schedule& sched);

// Schedule file format: whitespace-separated 0-based layer indices,
// '#' starts a comment.
Schedule parse_schedule(std::string_view text);
Schedule load_schedule(const std::filesystem::path& path, int layer_count);
std::string serialize_schedule(const Schedule& sched);

}  // namespace qcsched
