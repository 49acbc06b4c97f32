#include "qcsched/tsp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qcsched/errors.hpp"
#include "qcsched/parallel.hpp"
#include "qcsched/rng.hpp"

namespace qcsched {

namespace {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

void fill_pair_weights(const LayerStats& stats, int t, WeightMatrix& w) {
    const int m = static_cast<int>(stats.degrees.size());
    w.setZero(m, m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            if (a != b)
                w(a, b) = std::max<std::int64_t>(t - (stats.degrees[b] - stats.common(a, b)), 0);
}

}  // namespace

IdleGraph build_plain_graph(const LayerStats& stats, int t) {
    const int m = static_cast<int>(stats.degrees.size());
    if (m < 2) throw DataError("idle graph: need at least 2 layers");
    if (t < 0) throw DataError("latency must be >= 0");
    IdleGraph g;
    g.size = m;
    g.mode = IdleGraphMode::kPlain;
    fill_pair_weights(stats, t, g.weight);
    return g;
}

GroupLabeling group_labels(const LayerStats& stats) {
    const int m = static_cast<int>(stats.degrees.size());
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(m);
    for (int i = 0; i < m; ++i) pairs.emplace_back(stats.degrees[i], stats.punctures[i]);
    std::vector<std::pair<int, int>> distinct = pairs;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    GroupLabeling out;
    out.num_groups = static_cast<int>(distinct.size());
    out.label.resize(m);
    for (int i = 0; i < m; ++i) {
        const auto it = std::lower_bound(distinct.begin(), distinct.end(), pairs[i]);
        out.label[i] = static_cast<int>(it - distinct.begin()) + 1;
    }
    return out;
}

Sentinels default_sentinels(int m, int t) {
    Sentinels s;
    s.h = static_cast<std::int64_t>(m) * (t + 1) + 1;
    s.big_m = 1000 * (static_cast<std::int64_t>(m) * (t + 1) + s.h);
    return s;
}

IdleGraph build_constrained_graph(const LayerStats& stats, int t, const GroupLabeling& labeling,
                                  std::int64_t big_m, std::int64_t h) {
    const int m = static_cast<int>(stats.degrees.size());
    if (m < 2) throw DataError("idle graph: need at least 2 layers");
    if (static_cast<int>(labeling.label.size()) != m)
        throw DataError("idle graph: labeling size mismatch");
    const std::int64_t bound = static_cast<std::int64_t>(m) * (t + 1);
    if (h <= bound || big_m <= bound + h)
        throw DataError("idle graph: invalid sentinel magnitudes");
    IdleGraph g;
    g.size = m;
    g.mode = IdleGraphMode::kConstrained;
    g.big_m = big_m;
    g.wrap_penalty = h;
    g.labels = labeling.label;
    g.num_groups = labeling.num_groups;
    fill_pair_weights(stats, t, g.weight);
    const int p = labeling.num_groups;
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            if (a == b) continue;
            const int la = labeling.label[a];
            const int lb = labeling.label[b];
            if (lb == la || lb == la + 1) continue;       // in-order transition
            if (la == p && lb == 1) g.weight(a, b) += h;  // the one allowed wrap
            else g.weight(a, b) = big_m;
        }
    return g;
}

std::int64_t tour_weight(const WeightMatrix& w, const std::vector<int>& cycle) {
    const int m = static_cast<int>(cycle.size());
    std::int64_t total = w(cycle[m - 1], cycle[0]);
    for (int i = 1; i < m; ++i) total += w(cycle[i - 1], cycle[i]);
    return total;
}

namespace {

void normalize_cycle(std::vector<int>& cycle) {
    const auto it = std::min_element(cycle.begin(), cycle.end());
    std::rotate(cycle.begin(), it, cycle.end());
}

}  // namespace

Tour solve_exact(const WeightMatrix& w) {
    const int m = static_cast<int>(w.rows());
    if (m < 2) throw DataError("solve_exact: need at least 2 nodes");
    if (m > 16) throw DataError("solve_exact: instance too large (max 16 nodes)");
    // Held-Karp with node 0 fixed as the cycle anchor; dp over subsets of
    // the remaining nodes.
    const int k = m - 1;
    const std::size_t masks = std::size_t{1} << k;
    std::vector<std::int64_t> dp(masks * k, kInf);
    std::vector<std::int8_t> parent(masks * k, -1);
    for (int j = 0; j < k; ++j) dp[(std::size_t{1} << j) * k + j] = w(0, j + 1);
    for (std::size_t mask = 1; mask < masks; ++mask) {
        for (int j = 0; j < k; ++j) {
            if (!(mask & (std::size_t{1} << j))) continue;
            const std::int64_t cur = dp[mask * k + j];
            if (cur >= kInf) continue;
            for (int nxt = 0; nxt < k; ++nxt) {
                if (mask & (std::size_t{1} << nxt)) continue;
                const std::size_t nmask = mask | (std::size_t{1} << nxt);
                const std::int64_t cand = cur + w(j + 1, nxt + 1);
                if (cand < dp[nmask * k + nxt]) {
                    dp[nmask * k + nxt] = cand;
                    parent[nmask * k + nxt] = static_cast<std::int8_t>(j);
                }
            }
        }
    }
    const std::size_t full = masks - 1;
    std::int64_t best = kInf;
    int best_last = 0;
    for (int j = 0; j < k; ++j) {
        const std::int64_t cand = dp[full * k + j] + w(j + 1, 0);
        if (cand < best) {
            best = cand;
            best_last = j;
        }
    }
    Tour tour;
    tour.weight = best;
    tour.cycle.resize(m);
    std::size_t mask = full;
    int j = best_last;
    for (int pos = m - 1; pos >= 1; --pos) {
        tour.cycle[pos] = j + 1;
        const int pj = parent[mask * k + j];
        mask &= ~(std::size_t{1} << j);
        j = pj;
    }
    tour.cycle[0] = 0;
    return tour;
}

Tour solve_exact(const IdleGraph& g) { return solve_exact(g.weight); }

namespace {

// Local-search state for one heuristic restart. Keeps prefix sums of forward
// and backward arc weights along the current order so a 2-opt reversal delta
// is O(1) between accepted moves.
class LocalSearch {
  public:
    LocalSearch(const WeightMatrix& w, std::vector<int> order, std::int64_t budget)
        : w_(w), order_(std::move(order)), m_(static_cast<int>(order_.size())), budget_(budget) {
        rebuild();
    }

    const std::vector<int>& order() const { return order_; }
    std::int64_t cost() const { return cost_; }
    bool budget_left() const { return budget_ > 0; }

    void set_order(std::vector<int> order) {
        order_ = std::move(order);
        rebuild();
    }

    void descend() {
        bool improved = true;
        while (improved && budget_ > 0) {
            improved = or_opt_pass();
            if (budget_ > 0 && swap_pass()) improved = true;
            if (budget_ > 0 && two_opt_pass()) improved = true;
        }
    }

  private:
    std::int64_t node_arc(int a, int b) const { return w_(order_[a], order_[b]); }

    void rebuild() {
        cost_ = tour_weight(w_, order_);
        fwd_.assign(m_ + 1, 0);
        bwd_.assign(m_ + 1, 0);
        for (int i = 0; i < m_; ++i) {
            const int j = (i + 1) % m_;
            fwd_[i + 1] = fwd_[i] + w_(order_[i], order_[j]);
            bwd_[i + 1] = bwd_[i] + w_(order_[j], order_[i]);
        }
    }

    // Relocates segment [i, i+len) to sit right after position j. Directed
    // move: no arc is reversed, so it is exact for asymmetric weights.
    bool or_opt_pass() {
        for (int len = 1; len <= 3 && len <= m_ - 2; ++len) {
            for (int i = 0; i + len <= m_; ++i) {
                const int prev = (i + m_ - 1) % m_;
                const int next = (i + len) % m_;
                const std::int64_t gain =
                    node_arc(prev, i) + node_arc(i + len - 1, next) - node_arc(prev, next);
                for (int j = 0; j < m_; ++j) {
                    if (j >= i - 1 && j < i + len) continue;  // inside segment or a no-op
                    if (i == 0 && j == m_ - 1) continue;      // no-op (insert before itself)
                    if (--budget_ <= 0) return false;
                    const int jn = (j + 1) % m_;
                    const std::int64_t added =
                        node_arc(j, i) + node_arc(i + len - 1, jn) - node_arc(j, jn);
                    if (added - gain < 0) {
                        apply_or_opt(i, len, j);
                        return true;
                    }
                }
            }
        }
        return false;
    }

    void apply_or_opt(int i, int len, int j) {
        std::vector<int> seg(order_.begin() + i, order_.begin() + i + len);
        const int anchor = order_[j];
        std::vector<int> rest;
        rest.reserve(m_ - len);
        for (int k = 0; k < m_; ++k)
            if (k < i || k >= i + len) rest.push_back(order_[k]);
        std::vector<int> out;
        out.reserve(m_);
        for (int node : rest) {
            out.push_back(node);
            if (node == anchor) out.insert(out.end(), seg.begin(), seg.end());
        }
        order_ = std::move(out);
        rebuild();
    }

    // Exchanges the nodes at two positions.
    bool swap_pass() {
        for (int i = 0; i < m_ - 1; ++i) {
            for (int j = i + 1; j < m_; ++j) {
                if (--budget_ <= 0) return false;
                const int a = order_[i], b = order_[j];
                const int pi = (i + m_ - 1) % m_, ni = (i + 1) % m_;
                const int pj = (j + m_ - 1) % m_, nj = (j + 1) % m_;
                std::int64_t delta;
                if (ni == j && nj == i) {  // two-node tour
                    continue;
                } else if (ni == j) {  // b directly follows a
                    delta = w_(order_[pi], b) + w_(b, a) + w_(a, order_[nj]) -
                            w_(order_[pi], a) - w_(a, b) - w_(b, order_[nj]);
                } else if (nj == i) {  // a directly follows b (cyclic)
                    delta = w_(order_[pj], a) + w_(a, b) + w_(b, order_[ni]) -
                            w_(order_[pj], b) - w_(b, a) - w_(a, order_[ni]);
                } else {
                    delta = w_(order_[pi], b) + w_(b, order_[ni]) + w_(order_[pj], a) +
                            w_(a, order_[nj]) - w_(order_[pi], a) - w_(a, order_[ni]) -
                            w_(order_[pj], b) - w_(b, order_[nj]);
                }
                if (delta < 0) {
                    std::swap(order_[i], order_[j]);
                    rebuild();
                    return true;
                }
            }
        }
        return false;
    }

    // Reverses order_[i..j]; internal arcs flip direction, handled via the
    // prefix sums. Valid (if rarely useful) on asymmetric weights too.
    bool two_opt_pass() {
        for (int i = 1; i < m_ - 1; ++i) {
            for (int j = i + 1; j < m_; ++j) {
                if (--budget_ <= 0) return false;
                const int after = (j + 1) % m_;
                const std::int64_t boundary = node_arc(i - 1, j) + node_arc(i, after) -
                                              node_arc(i - 1, i) - node_arc(j, after);
                const std::int64_t internal = (bwd_[j] - bwd_[i]) - (fwd_[j] - fwd_[i]);
                if (boundary + internal < 0) {
                    std::reverse(order_.begin() + i, order_.begin() + j + 1);
                    rebuild();
                    return true;
                }
            }
        }
        return false;
    }

    const WeightMatrix& w_;
    std::vector<int> order_;
    int m_;
    std::int64_t budget_;
    std::int64_t cost_ = 0;
    std::vector<std::int64_t> fwd_, bwd_;
};

std::vector<int> nearest_neighbor_order(const WeightMatrix& w, int m, int start) {
    std::vector<int> order;
    order.reserve(m);
    std::vector<char> used(m, 0);
    int cur = start;
    order.push_back(cur);
    used[cur] = 1;
    for (int step = 1; step < m; ++step) {
        int best = -1;
        std::int64_t best_w = kInf;
        for (int j = 0; j < m; ++j)
            if (!used[j] && w(cur, j) < best_w) {
                best_w = w(cur, j);
                best = j;
            }
        order.push_back(best);
        used[best] = 1;
        cur = best;
    }
    return order;
}

// Groups in ascending label order, so always feasible for constrained
// graphs; within a group either RNG-shuffled or greedily chained.
std::vector<int> label_order(const IdleGraph& g, SplitMix64& rng, bool greedy) {
    std::vector<std::vector<int>> groups(g.num_groups + 1);
    for (int i = 0; i < g.size; ++i) groups[g.labels[i]].push_back(i);
    std::vector<int> order;
    order.reserve(g.size);
    for (int lab = 1; lab <= g.num_groups; ++lab) {
        auto& members = groups[lab];
        if (members.empty()) continue;
        if (greedy && members.size() > 1) {
            std::vector<int> chained;
            std::vector<char> used(members.size(), 0);
            std::size_t cur = rng.next_below(members.size());
            chained.push_back(members[cur]);
            used[cur] = 1;
            while (chained.size() < members.size()) {
                int best = -1;
                std::int64_t best_w = kInf;
                for (std::size_t j = 0; j < members.size(); ++j)
                    if (!used[j] && g.weight(chained.back(), members[j]) < best_w) {
                        best_w = g.weight(chained.back(), members[j]);
                        best = static_cast<int>(j);
                    }
                chained.push_back(members[best]);
                used[best] = 1;
            }
            order.insert(order.end(), chained.begin(), chained.end());
        } else {
            for (std::size_t i = members.size(); i > 1; --i)
                std::swap(members[i - 1], members[rng.next_below(i)]);
            order.insert(order.end(), members.begin(), members.end());
        }
    }
    return order;
}

std::vector<int> double_bridge(const std::vector<int>& order, SplitMix64& rng) {
    const int m = static_cast<int>(order.size());
    if (m < 8) {
        std::vector<int> out = order;
        const std::size_t a = 1 + rng.next_below(m - 1);
        const std::size_t b = 1 + rng.next_below(m - 1);
        std::swap(out[a], out[b]);
        return out;
    }
    const int a = 1 + static_cast<int>(rng.next_below(m - 3));
    const int b = a + 1 + static_cast<int>(rng.next_below(m - a - 2));
    const int c = b + 1 + static_cast<int>(rng.next_below(m - b - 1));
    std::vector<int> out;
    out.reserve(m);
    out.insert(out.end(), order.begin(), order.begin() + a);
    out.insert(out.end(), order.begin() + b, order.begin() + c);
    out.insert(out.end(), order.begin() + a, order.begin() + b);
    out.insert(out.end(), order.begin() + c, order.end());
    return out;
}

// Label-preserving perturbation: either shuffles one whole group or applies
// a few random same-label exchanges. Keeps constrained tours feasible.
std::vector<int> group_kick(const std::vector<int>& order, const IdleGraph& g, SplitMix64& rng) {
    std::vector<int> out = order;
    if (rng.next_below(4) == 0) {
        const int lab = 1 + static_cast<int>(rng.next_below(g.num_groups));
        std::vector<int> positions;
        for (int i = 0; i < static_cast<int>(out.size()); ++i)
            if (g.labels[out[i]] == lab) positions.push_back(i);
        if (positions.size() >= 2) {
            std::vector<int> vals;
            vals.reserve(positions.size());
            for (int p : positions) vals.push_back(out[p]);
            for (std::size_t i = vals.size(); i > 1; --i)
                std::swap(vals[i - 1], vals[rng.next_below(i)]);
            for (std::size_t i = 0; i < positions.size(); ++i) out[positions[i]] = vals[i];
        }
        return out;
    }
    std::vector<std::vector<int>> by_label(g.num_groups + 1);
    for (int i = 0; i < static_cast<int>(out.size()); ++i) by_label[g.labels[out[i]]].push_back(i);
    const int swaps = 2 + static_cast<int>(rng.next_below(4));
    for (int s = 0; s < swaps; ++s) {
        const int lab = 1 + static_cast<int>(rng.next_below(g.num_groups));
        const auto& positions = by_label[lab];
        if (positions.size() < 2) continue;
        const int a = positions[rng.next_below(positions.size())];
        const int b = positions[rng.next_below(positions.size())];
        std::swap(out[a], out[b]);
    }
    return out;
}

Tour run_restart(const IdleGraph& g, std::uint64_t seed, std::int64_t budget) {
    SplitMix64 rng(seed);
    const int m = g.size;
    const bool grouped = g.mode == IdleGraphMode::kConstrained && g.num_groups > 1;
    std::vector<int> initial =
        grouped ? label_order(g, rng, (seed & 1) == 0)
                : nearest_neighbor_order(g.weight, m, static_cast<int>(rng.next_below(m)));
    LocalSearch ls(g.weight, std::move(initial), budget);
    ls.descend();
    std::vector<int> best_order = ls.order();
    std::int64_t best_cost = ls.cost();
    while (ls.budget_left()) {
        std::vector<int> kicked =
            grouped ? group_kick(best_order, g, rng) : double_bridge(best_order, rng);
        ls.set_order(std::move(kicked));
        ls.descend();
        if (ls.cost() < best_cost) {
            best_cost = ls.cost();
            best_order = ls.order();
        }
    }
    Tour tour;
    tour.cycle = std::move(best_order);
    tour.weight = best_cost;
    return tour;
}

}  // namespace

Tour solve_heuristic(const IdleGraph& g, const SolverParams& params) {
    if (g.size < 2) throw DataError("solve_heuristic: need at least 2 nodes");
    const int restarts = std::max(params.restarts, 1);
    std::vector<Tour> results(restarts);
    parallel_for(0, restarts, params.threads, [&](std::int64_t r) {
        results[r] = run_restart(g, params.seed + static_cast<std::uint64_t>(r),
                                 std::max<std::int64_t>(params.move_budget, 1000));
    });
    int best = 0;
    for (int r = 1; r < restarts; ++r)
        if (results[r].weight < results[best].weight) best = r;  // seed-order tie-break
    Tour tour = std::move(results[best]);
    if (g.mode == IdleGraphMode::kConstrained && tour.weight >= g.big_m)
        throw InfeasibleError("solve_heuristic: no feasible tour found");
    normalize_cycle(tour.cycle);
    tour.weight = tour_weight(g.weight, tour.cycle);
    return tour;
}

namespace {

std::vector<std::vector<int>> members_by_label(const IdleGraph& g) {
    std::vector<std::vector<int>> groups(g.num_groups);
    for (int i = 0; i < g.size; ++i) groups[g.labels[i] - 1].push_back(i);
    return groups;
}

}  // namespace

bool grouped_exact_applicable(const IdleGraph& g) {
    if (g.mode != IdleGraphMode::kConstrained || g.num_groups < 2) return false;
    const auto groups = members_by_label(g);
    double work = 0.0;
    for (const auto& members : groups) {
        const double s = static_cast<double>(members.size());
        if (s > 18) return false;
        work += std::ldexp(s * s, static_cast<int>(members.size()));
    }
    return work * static_cast<double>(groups.front().size()) <= 4e9;
}

Tour solve_grouped_exact(const IdleGraph& g) {
    if (!grouped_exact_applicable(g))
        throw DataError("solve_grouped_exact: instance not suited to the grouped DP");
    const auto groups = members_by_label(g);
    const int p = static_cast<int>(groups.size());

    // Held-Karp path DP inside one group, seeded with per-entry costs.
    // dp[mask][last] = cheapest path covering `mask` that ends at `last`.
    struct GroupDp {
        std::vector<std::int64_t> exit_cost;  // per member, full-mask cost
        std::vector<std::int8_t> parent;      // mask*s + last -> previous member
        std::vector<int> entry_from;          // per member: feeding exit in the previous group
    };

    const auto run_group = [&](const std::vector<int>& members,
                               const std::vector<std::int64_t>& entry_cost,
                               const std::vector<int>& entry_from, GroupDp& out) {
        const int s = static_cast<int>(members.size());
        const std::size_t masks = std::size_t{1} << s;
        std::vector<std::int64_t> dp(masks * s, kInf);
        out.parent.assign(masks * s, -1);
        out.entry_from = entry_from;
        for (int e = 0; e < s; ++e) dp[(std::size_t{1} << e) * s + e] = entry_cost[e];
        for (std::size_t mask = 1; mask < masks; ++mask) {
            for (int last = 0; last < s; ++last) {
                if (!(mask & (std::size_t{1} << last))) continue;
                const std::int64_t cur = dp[mask * s + last];
                if (cur >= kInf) continue;
                for (int nxt = 0; nxt < s; ++nxt) {
                    if (mask & (std::size_t{1} << nxt)) continue;
                    const std::size_t nmask = mask | (std::size_t{1} << nxt);
                    const std::int64_t cand = cur + g.weight(members[last], members[nxt]);
                    if (cand < dp[nmask * s + nxt]) {
                        dp[nmask * s + nxt] = cand;
                        out.parent[nmask * s + nxt] = static_cast<std::int8_t>(last);
                    }
                }
            }
        }
        out.exit_cost.assign(s, kInf);
        for (int last = 0; last < s; ++last) out.exit_cost[last] = dp[(masks - 1) * s + last];
    };

    // The cycle couples group 1's entry with the last group's exit, so fix
    // the entry node and run the chain once per candidate.
    std::int64_t best_total = kInf;
    int best_entry = -1;
    std::vector<GroupDp> dps(p);
    const auto run_chain = [&](int first_entry, bool keep) -> std::int64_t {
        std::vector<std::int64_t> entry_cost(groups[0].size(), kInf);
        std::vector<int> entry_from(groups[0].size(), -1);
        entry_cost[first_entry] = 0;
        GroupDp scratch;
        std::vector<std::int64_t> prev_exit;
        for (int gi = 0; gi < p; ++gi) {
            GroupDp& slot = keep ? dps[gi] : scratch;
            run_group(groups[gi], entry_cost, entry_from, slot);
            prev_exit = slot.exit_cost;
            if (gi + 1 < p) {
                const auto& next = groups[gi + 1];
                entry_cost.assign(next.size(), kInf);
                entry_from.assign(next.size(), -1);
                for (std::size_t e = 0; e < next.size(); ++e)
                    for (std::size_t x = 0; x < groups[gi].size(); ++x) {
                        const std::int64_t cand =
                            prev_exit[x] + g.weight(groups[gi][x], next[e]);
                        if (cand < entry_cost[e]) {
                            entry_cost[e] = cand;
                            entry_from[e] = static_cast<int>(x);
                        }
                    }
            }
        }
        // close the cycle; the wrap arc already carries +h
        std::int64_t best = kInf;
        const int target = groups[0][first_entry];
        for (std::size_t x = 0; x < groups[p - 1].size(); ++x) {
            const std::int64_t cand = prev_exit[x] + g.weight(groups[p - 1][x], target);
            best = std::min(best, cand);
        }
        return best;
    };

    for (std::size_t e = 0; e < groups[0].size(); ++e) {
        const std::int64_t total = run_chain(static_cast<int>(e), false);
        if (total < best_total) {
            best_total = total;
            best_entry = static_cast<int>(e);
        }
    }
    run_chain(best_entry, true);

    // Walk the parents backwards, group by group.
    Tour tour;
    tour.weight = best_total;
    std::vector<std::vector<int>> seq(p);
    int carry_exit = -1;  // member index in the previous group
    {
        // last group's exit minimizing the closing arc
        const auto& last_dp = dps[p - 1];
        std::int64_t best = kInf;
        const int target = groups[0][best_entry];
        for (std::size_t x = 0; x < groups[p - 1].size(); ++x) {
            const std::int64_t cand =
                last_dp.exit_cost[x] + g.weight(groups[p - 1][x], target);
            if (cand < best) {
                best = cand;
                carry_exit = static_cast<int>(x);
            }
        }
    }
    for (int gi = p - 1; gi >= 0; --gi) {
        const auto& members = groups[gi];
        const int s = static_cast<int>(members.size());
        std::size_t mask = (std::size_t{1} << s) - 1;
        int last = carry_exit;
        std::vector<int> rev;
        while (last >= 0 && mask) {
            rev.push_back(members[last]);
            const int prev = dps[gi].parent[mask * s + last];
            mask &= ~(std::size_t{1} << last);
            if (prev < 0) {
                carry_exit = dps[gi].entry_from[last];  // group entry reached
                break;
            }
            last = prev;
        }
        seq[gi].assign(rev.rbegin(), rev.rend());
    }
    for (const auto& part : seq) tour.cycle.insert(tour.cycle.end(), part.begin(), part.end());
    normalize_cycle(tour.cycle);
    tour.weight = tour_weight(g.weight, tour.cycle);
    if (tour.weight != best_total)
        throw DataError("solve_grouped_exact: reconstruction mismatch");
    return tour;
}

SymmetricGraph atsp_to_stsp(const IdleGraph& g) {
    const int m = g.size;
    SymmetricGraph s;
    s.base_size = m;
    std::int64_t wmax = 0;
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            if (a != b) wmax = std::max(wmax, g.weight(a, b));
    s.coupling = static_cast<std::int64_t>(m) * (wmax + 1) + 1;
    s.infinity = 2 * s.coupling * (m + 1);
    s.weight.setZero(2 * m, 2 * m);
    for (int a = 0; a < 2 * m; ++a)
        for (int b = 0; b < 2 * m; ++b) {
            if (a == b) continue;
            const bool a_out = a < m, b_out = b < m;
            std::int64_t v;
            if (a_out == b_out) {
                v = s.infinity;  // out-out / in-in pairs never joined
            } else {
                const int i = a_out ? a : b;
                const int j = (a_out ? b : a) - m;
                v = (i == j) ? -s.coupling : g.weight(i, j);
            }
            s.weight(a, b) = v;
        }
    return s;
}

Tour recover_atsp_tour(const SymmetricGraph& s, const Tour& symmetric_tour) {
    const int m = s.base_size;
    const auto& cyc = symmetric_tour.cycle;
    if (static_cast<int>(cyc.size()) != 2 * m)
        throw DataError("recover_atsp_tour: tour size mismatch");
    std::vector<int> succ(m, -1);
    for (int pos = 0; pos < 2 * m; ++pos) {
        const int node = cyc[pos];
        if (node >= m) continue;  // successors read off the out-copies
        const int left = cyc[(pos + 2 * m - 1) % (2 * m)];
        const int right = cyc[(pos + 1) % (2 * m)];
        int other;
        if (left == node + m) other = right;
        else if (right == node + m) other = left;
        else
            throw DataError("recover_atsp_tour: coupling edge missing at node " +
                            std::to_string(node));
        if (other < m) throw DataError("recover_atsp_tour: invalid symmetric tour");
        succ[node] = other - m;
    }
    Tour out;
    out.cycle.reserve(m);
    int cur = 0;
    for (int step = 0; step < m; ++step) {
        out.cycle.push_back(cur);
        cur = succ[cur];
    }
    if (cur != 0) throw DataError("recover_atsp_tour: tour does not close");
    out.weight = symmetric_tour.weight + static_cast<std::int64_t>(m) * s.coupling;
    normalize_cycle(out.cycle);
    return out;
}

Tour embed_in_stsp(const SymmetricGraph& s, const Tour& atsp_tour) {
    const int m = s.base_size;
    Tour out;
    out.cycle.reserve(2 * m);
    for (int i = 0; i < m; ++i) {
        out.cycle.push_back(atsp_tour.cycle[i]);
        out.cycle.push_back(atsp_tour.cycle[(i + 1) % m] + m);
    }
    out.weight = atsp_tour.weight - static_cast<std::int64_t>(m) * s.coupling;
    return out;
}

Schedule tour_to_schedule(const Tour& tour, const IdleGraph& g) {
    const int m = g.size;
    if (static_cast<int>(tour.cycle.size()) != m)
        throw DataError("tour_to_schedule: tour size mismatch");
    if (g.mode == IdleGraphMode::kConstrained) {
        for (int i = 0; i < m; ++i)
            if (g.weight(tour.cycle[i], tour.cycle[(i + 1) % m]) >= g.big_m)
                throw InfeasibleError("tour_to_schedule: tour uses a forbidden edge");
    }
    const auto& cyc = tour.cycle;
    if (g.mode == IdleGraphMode::kConstrained && g.num_groups > 1) {
        int cut = -1;
        int wraps = 0;
        for (int i = 0; i < m; ++i) {
            const int a = cyc[i], b = cyc[(i + 1) % m];
            if (g.labels[a] == g.num_groups && g.labels[b] == 1) {
                ++wraps;
                cut = (i + 1) % m;
            }
        }
        if (wraps != 1)
            throw InfeasibleError("tour_to_schedule: expected exactly one wrap edge, found " +
                                  std::to_string(wraps));
        Schedule sched(m);
        for (int i = 0; i < m; ++i) sched[i] = cyc[(cut + i) % m];
        return sched;
    }
    // Plain (or single-group) mode: the cut never changes the cyclic metric;
    // start the sequence where the dropped arc is heaviest so the linear
    // idle is minimal. Ties go to the smallest starting layer.
    int best_cut = 0;
    std::int64_t best_drop = -1;
    for (int i = 0; i < m; ++i) {
        const std::int64_t drop = g.weight(cyc[i], cyc[(i + 1) % m]);
        const int start = cyc[(i + 1) % m];
        if (drop > best_drop || (drop == best_drop && start < cyc[best_cut])) {
            best_drop = drop;
            best_cut = (i + 1) % m;
        }
    }
    Schedule sched(m);
    for (int i = 0; i < m; ++i) sched[i] = cyc[(best_cut + i) % m];
    return sched;
}

}  // namespace qcsched
