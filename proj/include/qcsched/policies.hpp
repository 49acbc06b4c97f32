#pragma once

#include <filesystem>
#include <string_view>

#include "qcsched/idle.hpp"
#include "qcsched/tsp.hpp"

namespace qcsched {

enum class PolicyKind { kNatural, kLd, kIdle, kIdlePerformance, kExternal };

struct PolicySpec {
    PolicyKind kind = PolicyKind::kNatural;
    std::filesystem::path file;  // kExternal only
    SolverParams solver;
};

struct ScheduledResult {
    Schedule schedule;
    long long idle_cyclic = 0;
};

// Identity order [0, 1, ..., m-1].
Schedule schedule_natural(int layer_count);

// Layers sorted by degree ascending; ties keep the original index order.
Schedule schedule_ld(const LayerStats& stats);

// Minimum-idle schedule from the plain ATSP (exact up to 16 layers,
// heuristic beyond).
ScheduledResult schedule_idle(const LayerStats& stats, int t, const SolverParams& params);

// Minimum-idle schedule within the group-ordered (degree then puncture
// count, both nondecreasing) family.
ScheduledResult schedule_idle_performance(const LayerStats& stats, int t,
                                          const SolverParams& params);

// Accepts natural | ld | idle | idle-performance | file:<path>.
PolicySpec parse_policy(std::string_view text);

Schedule make_schedule(const PolicySpec& spec, const LayerStats& stats, int t);

}  // namespace qcsched
