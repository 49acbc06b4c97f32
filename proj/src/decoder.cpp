#include "qcsched/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qcsched/errors.hpp"

namespace qcsched {

namespace {

// Keep tanh products strictly inside (-1, 1) before atanh.
constexpr double kProductEps = 1e-12;

inline double saturate(double x, double clip) { return std::clamp(x, -clip, clip); }

inline double atanh2(double product, double clip) {
    const double p = std::clamp(product, -1.0 + kProductEps, 1.0 - kProductEps);
    return saturate(2.0 * std::atanh(p), clip);
}

// Per-target check outputs via forward/backward partial products; avoids
// dividing by tanh values near zero.
void check_update(const double* in, double* out, int deg, double clip) {
    if (deg == 1) {
        // degree-1 check pins its only variable to zero with full confidence
        out[0] = clip;
        return;
    }
    static thread_local std::vector<double> fwd, bwd;
    fwd.resize(deg);
    bwd.resize(deg);
    fwd[0] = std::tanh(in[0] / 2.0);
    for (int i = 1; i < deg; ++i) fwd[i] = fwd[i - 1] * std::tanh(in[i] / 2.0);
    bwd[deg - 1] = std::tanh(in[deg - 1] / 2.0);
    for (int i = deg - 2; i >= 0; --i) bwd[i] = bwd[i + 1] * std::tanh(in[i] / 2.0);
    out[0] = atanh2(bwd[1], clip);
    out[deg - 1] = atanh2(fwd[deg - 2], clip);
    for (int i = 1; i < deg - 1; ++i) out[i] = atanh2(fwd[i - 1] * bwd[i + 1], clip);
}

struct EdgeStructure {
    std::vector<int> offset;       // per check, start into the edge arrays
    std::vector<int> var_of_edge;  // per edge
    std::vector<std::vector<int>> var_edges;  // per variable (optional)
};

EdgeStructure build_edges(const LiftedCode& code, bool need_var_lists) {
    EdgeStructure es;
    es.offset.resize(code.m + 1, 0);
    for (int c = 0; c < code.m; ++c)
        es.offset[c + 1] = es.offset[c] + static_cast<int>(code.check_vars[c].size());
    es.var_of_edge.reserve(es.offset[code.m]);
    for (int c = 0; c < code.m; ++c)
        es.var_of_edge.insert(es.var_of_edge.end(), code.check_vars[c].begin(),
                              code.check_vars[c].end());
    if (need_var_lists) {
        es.var_edges.resize(code.n);
        for (int e = 0; e < es.offset[code.m]; ++e) es.var_edges[es.var_of_edge[e]].push_back(e);
    }
    return es;
}

int count_unsatisfied(const LiftedCode& code, const std::vector<std::uint8_t>& hard) {
    int unsat = 0;
    for (int c = 0; c < code.m; ++c) {
        int parity = 0;
        for (int v : code.check_vars[c]) parity ^= hard[v];
        unsat += parity;
    }
    return unsat;
}

void check_inputs(const LiftedCode& code, const Eigen::VectorXd& channel, int max_iters,
                  double clip) {
    if (static_cast<int>(channel.size()) != code.n)
        throw DataError("decode: channel LLR length " + std::to_string(channel.size()) +
                        " does not match code length " + std::to_string(code.n));
    if (max_iters < 1) throw DataError("decode: max_iters must be >= 1");
    if (clip <= 0) throw DataError("decode: clip must be positive");
}

inline std::uint8_t hard_bit(double posterior) { return posterior < 0.0 ? 1 : 0; }

}  // namespace

double v2c(double channel_llr, std::span<const double> incoming, double clip) {
    double sum = channel_llr;
    for (double m : incoming) sum += m;
    return saturate(sum, clip);
}

double c2v(std::span<const double> incoming, double clip) {
    if (incoming.empty()) throw DataError("c2v: incoming message list is empty");
    double product = 1.0;
    for (double m : incoming) product *= std::tanh(m / 2.0);
    return atanh2(product, clip);
}

DecodeResult decode_flooding(const LiftedCode& code, const Eigen::VectorXd& channel_llrs,
                             int max_iters, double clip, std::vector<TraceRow>* trace) {
    check_inputs(code, channel_llrs, max_iters, clip);
    const EdgeStructure es = build_edges(code, true);
    const int edges = es.offset[code.m];
    std::vector<double> c2v_msg(edges, 0.0), v2c_msg(edges, 0.0);
    DecodeResult result;
    result.hard_decision.assign(code.n, 0);
    for (int iter = 1; iter <= max_iters; ++iter) {
        result.iterations_used = iter;
        for (int v = 0; v < code.n; ++v) {
            double total = channel_llrs[v];
            for (int e : es.var_edges[v]) total += c2v_msg[e];
            for (int e : es.var_edges[v]) v2c_msg[e] = saturate(total - c2v_msg[e], clip);
        }
        for (int c = 0; c < code.m; ++c) {
            const int deg = es.offset[c + 1] - es.offset[c];
            check_update(v2c_msg.data() + es.offset[c], c2v_msg.data() + es.offset[c], deg, clip);
        }
        for (int v = 0; v < code.n; ++v) {
            double post = channel_llrs[v];
            for (int e : es.var_edges[v]) post += c2v_msg[e];
            result.hard_decision[v] = hard_bit(post);
        }
        const int unsat = count_unsatisfied(code, result.hard_decision);
        if (trace) trace->push_back({iter, -1, unsat});
        if (unsat == 0) {
            result.converged = true;
            break;
        }
    }
    return result;
}

DecodeResult decode_layered(const LiftedCode& code, const Schedule& sched,
                            const Eigen::VectorXd& channel_llrs, int max_iters, double clip,
                            std::vector<TraceRow>* trace) {
    check_inputs(code, channel_llrs, max_iters, clip);
    validate_schedule(sched, code.base_rows);
    const EdgeStructure es = build_edges(code, false);
    std::vector<std::vector<int>> layer_checks(code.base_rows);
    for (int c = 0; c < code.m; ++c) layer_checks[code.layer_of_check[c]].push_back(c);

    std::vector<double> posterior(code.n);
    for (int v = 0; v < code.n; ++v) posterior[v] = channel_llrs[v];
    std::vector<double> c2v_msg(es.offset[code.m], 0.0);
    std::vector<double> v2c_buf, c2v_buf;

    DecodeResult result;
    result.hard_decision.assign(code.n, 0);
    for (int iter = 1; iter <= max_iters; ++iter) {
        result.iterations_used = iter;
        for (int layer : sched) {
            for (int c : layer_checks[layer]) {
                const int off = es.offset[c];
                const int deg = es.offset[c + 1] - off;
                v2c_buf.resize(deg);
                c2v_buf.resize(deg);
                for (int k = 0; k < deg; ++k)
                    v2c_buf[k] = saturate(posterior[es.var_of_edge[off + k]] - c2v_msg[off + k],
                                          clip);
                check_update(v2c_buf.data(), c2v_buf.data(), deg, clip);
                for (int k = 0; k < deg; ++k) {
                    c2v_msg[off + k] = c2v_buf[k];
                    posterior[es.var_of_edge[off + k]] = v2c_buf[k] + c2v_buf[k];
                }
            }
            if (trace) {
                for (int v = 0; v < code.n; ++v) result.hard_decision[v] = hard_bit(posterior[v]);
                trace->push_back({iter, layer, count_unsatisfied(code, result.hard_decision)});
            }
        }
        for (int v = 0; v < code.n; ++v) result.hard_decision[v] = hard_bit(posterior[v]);
        if (count_unsatisfied(code, result.hard_decision) == 0) {
            result.converged = true;
            break;
        }
    }
    return result;
}

std::string trace_to_csv(const std::vector<TraceRow>& trace) {
    std::ostringstream out;
    out << "iteration,layer,unsatisfied_checks\n";
    for (const auto& row : trace)
        out << row.iteration << ',' << row.layer << ',' << row.unsatisfied_checks << '\n';
    return out.str();
}

}  // namespace qcsched
