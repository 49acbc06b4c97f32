#include "qcsched/policies.hpp"

#include <algorithm>
#include <numeric>

#include "qcsched/errors.hpp"

namespace qcsched {

Schedule schedule_natural(int layer_count) {
    if (layer_count < 1) throw DataError("schedule_natural: need at least one layer");
    Schedule sched(layer_count);
    std::iota(sched.begin(), sched.end(), 0);
    return sched;
}

Schedule schedule_ld(const LayerStats& stats) {
    Schedule sched = schedule_natural(static_cast<int>(stats.degrees.size()));
    std::stable_sort(sched.begin(), sched.end(),
                     [&](int a, int b) { return stats.degrees[a] < stats.degrees[b]; });
    return sched;
}

namespace {

Tour solve(const IdleGraph& g, const SolverParams& params) {
    if (g.size <= 16) return solve_exact(g);
    if (grouped_exact_applicable(g)) return solve_grouped_exact(g);
    return solve_heuristic(g, params);
}

}  // namespace

ScheduledResult schedule_idle(const LayerStats& stats, int t, const SolverParams& params) {
    const IdleGraph g = build_plain_graph(stats, t);
    const Tour tour = solve(g, params);
    ScheduledResult out;
    out.schedule = tour_to_schedule(tour, g);
    out.idle_cyclic = n_idle_cyclic(stats, t, out.schedule);
    return out;
}

ScheduledResult schedule_idle_performance(const LayerStats& stats, int t,
                                          const SolverParams& params) {
    const int m = static_cast<int>(stats.degrees.size());
    const GroupLabeling labeling = group_labels(stats);
    const Sentinels s = default_sentinels(m, t);
    const IdleGraph g = build_constrained_graph(stats, t, labeling, s.big_m, s.h);
    const Tour tour = solve(g, params);
    ScheduledResult out;
    out.schedule = tour_to_schedule(tour, g);
    out.idle_cyclic = n_idle_cyclic(stats, t, out.schedule);
    return out;
}

PolicySpec parse_policy(std::string_view text) {
    PolicySpec spec;
    if (text == "natural") spec.kind = PolicyKind::kNatural;
    else if (text == "ld") spec.kind = PolicyKind::kLd;
    else if (text == "idle") spec.kind = PolicyKind::kIdle;
    else if (text == "idle-performance") spec.kind = PolicyKind::kIdlePerformance;
    else if (text.rfind("file:", 0) == 0) {
        spec.kind = PolicyKind::kExternal;
        spec.file = std::filesystem::path(std::string(text.substr(5)));
        if (spec.file.empty()) throw UsageError("policy file path is empty");
    } else {
        throw UsageError("unknown policy '" + std::string(text) +
                         "' (expected natural|ld|idle|idle-performance|file:<path>)");
    }
    return spec;
}

Schedule make_schedule(const PolicySpec& spec, const LayerStats& stats, int t) {
    const int m = static_cast<int>(stats.degrees.size());
    switch (spec.kind) {
        case PolicyKind::kNatural: return schedule_natural(m);
        case PolicyKind::kLd: return schedule_ld(stats);
        case PolicyKind::kIdle: return schedule_idle(stats, t, spec.solver).schedule;
        case PolicyKind::kIdlePerformance:
            return schedule_idle_performance(stats, t, spec.solver).schedule;
        case PolicyKind::kExternal: return load_schedule(spec.file, m);
    }
    throw UsageError("unhandled policy kind");
}

}  // namespace qcsched
