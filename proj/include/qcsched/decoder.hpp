#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "qcsched/base_graph.hpp"
#include "qcsched/idle.hpp"

namespace qcsched {

// Saturation bound for all message magnitudes; keeps atanh away from its
// poles and mirrors a fixed-point hardware range.
inline constexpr double kDefaultClip = 31.75;

struct DecodeResult {
    std::vector<std::uint8_t> hard_decision;  // per variable, 0/1
    bool converged = false;                   // zero syndrome reached
    int iterations_used = 0;
};

struct TraceRow {
    int iteration = 0;
    int layer = -1;  // -1 for flooding rounds
    int unsatisfied_checks = 0;
};

// Variable-to-check update: channel LLR plus all incoming check messages
// except the target's, saturated to +/-clip.
double v2c(double channel_llr, std::span<const double> incoming, double clip = kDefaultClip);

// Check-to-variable update: 2*atanh(prod tanh(m/2)) over the incoming
// variable messages except the target's, saturated to +/-clip.
double c2v(std::span<const double> incoming, double clip = kDefaultClip);

DecodeResult decode_flooding(const LiftedCode& code, const Eigen::VectorXd& channel_llrs,
                             int max_iters, double clip = kDefaultClip,
                             std::vector<TraceRow>* trace = nullptr);

// Layered BP over the given layer order. All Z checks of a layer update
// against the pre-layer posteriors (block-parallel, one pipeline job per
// layer); within a layer the checks touch disjoint variables.
DecodeResult decode_layered(const LiftedCode& code, const Schedule& sched,
                            const Eigen::VectorXd& channel_llrs, int max_iters,
                            double clip = kDefaultClip, std::vector<TraceRow>* trace = nullptr);

std::string trace_to_csv(const std::vector<TraceRow>& trace);

}  // namespace qcsched
