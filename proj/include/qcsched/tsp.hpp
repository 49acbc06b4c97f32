#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "qcsched/base_graph.hpp"
#include "qcsched/idle.hpp"

namespace qcsched {

using WeightMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

enum class IdleGraphMode { kPlain, kConstrained };

// Complete directed graph over layers whose Hamiltonian-cycle weight equals
// the cyclic idle count of the corresponding schedule. In constrained mode
// edges that would break the group ordering carry big_m, and the single
// allowed wrap (last group back to first) carries an extra h.
struct IdleGraph {
    int size = 0;
    WeightMatrix weight;
    IdleGraphMode mode = IdleGraphMode::kPlain;
    std::int64_t big_m = 0;
    std::int64_t wrap_penalty = 0;       // h
    std::vector<int> labels;             // per node, in [1, num_groups]; constrained only
    int num_groups = 1;                  // P
};

// Layers bucketed by identical (degree, puncture count), ranked ascending.
struct GroupLabeling {
    std::vector<int> label;  // per layer, 1-based
    int num_groups = 0;
};

struct Tour {
    std::vector<int> cycle;
    std::int64_t weight = 0;
};

struct SolverParams {
    std::uint64_t seed = 1;
    int restarts = 64;
    std::int64_t move_budget = 200000;  // delta evaluations per restart
    int threads = 1;
};

// Node doubling transform of an asymmetric instance: out-copy i and in-copy
// m+i joined by a -coupling edge, arc cost C(i,j) on {out_i, in_j}, forbidden
// pairs at `infinity`.
struct SymmetricGraph {
    WeightMatrix weight;  // 2m x 2m, symmetric
    std::int64_t coupling = 0;
    std::int64_t infinity = 0;
    int base_size = 0;
};

IdleGraph build_plain_graph(const LayerStats& stats, int t);

GroupLabeling group_labels(const LayerStats& stats);

// h must exceed any achievable idle total (m*(t+1) works) so optimal tours
// wrap exactly once; big_m must dominate any tour containing h.
IdleGraph build_constrained_graph(const LayerStats& stats, int t, const GroupLabeling& labeling,
                                  std::int64_t big_m, std::int64_t h);

struct Sentinels {
    std::int64_t big_m = 0;
    std::int64_t h = 0;
};
Sentinels default_sentinels(int m, int t);

std::int64_t tour_weight(const WeightMatrix& w, const std::vector<int>& cycle);

// Held-Karp over subsets; exact for size <= 16.
Tour solve_exact(const WeightMatrix& weight);
Tour solve_exact(const IdleGraph& g);

// Multi-start nearest-neighbor / group-ordered construction plus
// reversal-aware local search (or-opt relocations, node swaps, 2-opt) with
// double-bridge kicks. Deterministic for a fixed seed; restart r uses RNG
// stream seed + r and restarts may run on several threads.
Tour solve_heuristic(const IdleGraph& g, const SolverParams& params);

// Constrained instances visit the groups in label order, so the optimum
// decomposes into per-group Hamiltonian paths chained at the boundaries.
// Exact for any layer count as long as the largest group stays DP-sized.
bool grouped_exact_applicable(const IdleGraph& g);
Tour solve_grouped_exact(const IdleGraph& g);

SymmetricGraph atsp_to_stsp(const IdleGraph& g);
// Maps a tour of the doubled symmetric graph back to the asymmetric tour
// (weight = symmetric weight + m * coupling).
Tour recover_atsp_tour(const SymmetricGraph& s, const Tour& symmetric_tour);
// Embeds an asymmetric tour into the doubled graph (inverse mapping).
Tour embed_in_stsp(const SymmetricGraph& s, const Tour& atsp_tour);

// Opens the cycle into a schedule: constrained tours are cut at their unique
// wrap edge so the sequence starts in group 1; plain tours (and P = 1) are
// cut where the remaining linear idle is smallest.
Schedule tour_to_schedule(const Tour& tour, const IdleGraph& g);

}  // namespace qcsched
