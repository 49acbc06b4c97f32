#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace qcsched {

inline constexpr int kNoEdge = -1;

// Protograph of a QC-LDPC code: a small matrix of circulant shifts plus the
// lifting size. Each base row lifts to one decoding layer of Z checks.
struct BaseGraph {
    int rows = 0;       // m_b
    int cols = 0;       // n_b
    int lift = 1;       // Z
    int info_cols = 0;  // k_b
    Eigen::MatrixXi shifts;        // rows x cols, kNoEdge marks an empty entry
    std::vector<int> punct_cols;   // sorted, unique, subset of [0, cols)
};

// Per-layer quantities consumed by the idle model and the schedulers.
struct LayerStats {
    Eigen::VectorXi degrees;    // d_i: entries per base row
    Eigen::VectorXi punctures;  // p_i: entries in punctured columns
    Eigen::MatrixXi common;     // d^c_{a,b}: columns shared by rows a and b
};

// Binary parity-check matrix obtained by expanding every shift entry into a
// Z x Z circulant permutation.
struct LiftedCode {
    int n = 0;            // variables, cols * Z
    int m = 0;            // checks, rows * Z
    int lift = 1;
    int base_rows = 0;
    int base_cols = 0;
    int info_cols = 0;    // base info columns (systematic bits = info_cols * Z)
    std::vector<std::vector<int>> check_vars;  // per lifted check, sorted variable ids
    std::vector<int> layer_of_check;
    std::vector<std::uint8_t> transmitted;     // per variable; 0 for punctured columns
};

struct Rate {
    int num = 1;
    int den = 1;
};

// Parses "p/q" or a plain integer; q must be positive, value in (0, 1].
Rate parse_rate(std::string_view text);

// Base-graph text format: header "m_b n_b Z [k_b] [punct=default|none|c1,c2,...]"
// followed by m_b rows of n_b integers (-1 = empty). '#' starts a comment.
BaseGraph parse_base_graph(std::string_view text);
BaseGraph load_base_graph(const std::filesystem::path& path);

// Canonical form: full five-field header, explicit puncture list, single
// spaces, no trailing whitespace.
std::string serialize(const BaseGraph& bg);

void validate(const BaseGraph& bg);

LayerStats layer_stats(const BaseGraph& bg);

LiftedCode lift(const BaseGraph& bg);

// Prefix truncation of an NR-style base graph (k_b info columns, four core
// rows, identity parity extension) to hit a target rate:
// keeps the first r rows and first k_b + r columns,
// r = round(k_b / rate) - k_b + |punct_cols|.
BaseGraph select_rate(const BaseGraph& bg, Rate target);

}  // namespace qcsched
