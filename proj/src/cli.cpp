#include "qcsched/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "qcsched/analysis.hpp"
#include "qcsched/base_graph.hpp"
#include "qcsched/decoder.hpp"
#include "qcsched/errors.hpp"
#include "qcsched/idle.hpp"
#include "qcsched/policies.hpp"
#include "qcsched/sim.hpp"
#include "qcsched/tsp.hpp"
#include "qcsched/version.hpp"

namespace qcsched {

namespace {

using nlohmann::json;

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path.string());
    out << content;
}

std::vector<double> split_doubles(const std::string& csv) {
    std::vector<double> out;
    std::istringstream is(csv);
    std::string item;
    while (std::getline(is, item, ',')) {
        try {
            std::size_t used = 0;
            const double v = std::stod(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw DataError("bad numeric list entry '" + item + "'");
        }
    }
    return out;
}

std::vector<int> split_ints(const std::string& csv) {
    std::vector<int> out;
    for (double v : split_doubles(csv)) {
        const int i = static_cast<int>(v);
        if (static_cast<double>(i) != v) throw DataError("expected integer list");
        out.push_back(i);
    }
    return out;
}

struct CommonOpts {
    std::string bg_path;
    std::string rate;
    int t = 0;
    std::uint64_t seed = 1;
    int restarts = 64;
    std::int64_t budget = 200000;
    int threads = 1;
};

BaseGraph load_graph(const CommonOpts& opts) {
    BaseGraph bg = load_base_graph(opts.bg_path);
    if (!opts.rate.empty()) bg = select_rate(bg, parse_rate(opts.rate));
    return bg;
}

SolverParams solver_params(const CommonOpts& opts) {
    SolverParams p;
    p.seed = opts.seed;
    p.restarts = opts.restarts;
    p.move_budget = opts.budget;
    p.threads = opts.threads;
    return p;
}

int run_idle(const CommonOpts& opts, const std::string& schedule_path,
             const std::string& policy, bool verbose) {
    const BaseGraph bg = load_graph(opts);
    const LayerStats stats = layer_stats(bg);
    Schedule sched;
    if (!schedule_path.empty()) {
        sched = load_schedule(schedule_path, bg.rows);
    } else {
        PolicySpec spec = parse_policy(policy);
        spec.solver = solver_params(opts);
        sched = make_schedule(spec, stats, opts.t);
    }
    const long long cyclic = n_idle_cyclic(stats, opts.t, sched);
    const long long linear = n_idle_linear(stats, opts.t, sched);
    if (verbose) {
        const int m = static_cast<int>(sched.size());
        for (int i = 0; i < m; ++i) {
            const int from = sched[(i + m - 1) % m], to = sched[i];
            if (m == 1) break;
            std::cout << (i == 0 ? "wrap " : "     ") << from << " -> " << to
                      << " idle=" << pair_idle(stats, opts.t, from, to) << '\n';
        }
    }
    std::cout << "n_idle_cyclic=" << cyclic << '\n';
    std::cout << "n_idle_linear=" << linear << '\n';
    return 0;
}

int run_optimize(const CommonOpts& opts, const std::string& mode, const std::string& out_path) {
    const BaseGraph bg = load_graph(opts);
    const LayerStats stats = layer_stats(bg);
    const SolverParams params = solver_params(opts);
    ScheduledResult result;
    std::string mode_name;
    if (mode == "idle") {
        result = schedule_idle(stats, opts.t, params);
        mode_name = "plain";
    } else if (mode == "idle-performance") {
        result = schedule_idle_performance(stats, opts.t, params);
        mode_name = "constrained";
    } else {
        throw UsageError("unknown mode '" + mode + "' (expected idle|idle-performance)");
    }
    if (!out_path.empty()) {
        std::ostringstream file;
        file << serialize_schedule(result.schedule);
        file << "# n_idle_cyclic=" << result.idle_cyclic << " t=" << opts.t
             << " mode=" << mode_name << '\n';
        write_text_file(out_path, file.str());
    }
    std::cout << "n_idle_cyclic=" << result.idle_cyclic << '\n';
    return 0;
}

int run_simulate(const CommonOpts& opts, const std::string& policy, const std::string& decoder,
                 const std::string& snr_csv, long long trials, int max_errors, int max_iters,
                 double clip, const std::string& out_path) {
    const BaseGraph bg = load_graph(opts);
    const LayerStats stats = layer_stats(bg);
    const LiftedCode code = lift(bg);
    SimConfig config;
    config.snr_db = split_doubles(snr_csv);
    config.max_trials = trials;
    config.max_errors = max_errors;
    config.max_iters = max_iters;
    config.clip = clip;
    config.seed = opts.seed;
    config.threads = opts.threads;
    if (decoder == "flooding") config.flooding = true;
    else if (decoder != "layered")
        throw UsageError("unknown decoder '" + decoder + "' (expected layered|flooding)");

    Schedule sched;
    if (!config.flooding) {
        PolicySpec spec = parse_policy(policy);
        spec.solver = solver_params(opts);
        sched = make_schedule(spec, stats, opts.t);
    }
    const SimResult result = run_bler(code, sched, config);

    write_text_file(out_path, results_csv(result));
    json doc;
    doc["version"] = kVersion;
    doc["bg"] = opts.bg_path;
    doc["rate"] = opts.rate.empty() ? json() : json(opts.rate);
    doc["t"] = opts.t;
    doc["policy"] = config.flooding ? json() : json(policy);
    doc["decoder"] = decoder;
    doc["snr_db"] = config.snr_db;
    doc["trials"] = config.max_trials;
    doc["max_errors"] = config.max_errors;
    doc["max_iters"] = config.max_iters;
    doc["clip"] = config.clip;
    doc["seed"] = config.seed;
    doc["threads"] = config.threads;
    json points = json::array();
    for (const auto& p : result.points) {
        points.push_back({{"snr_db", p.snr_db},
                          {"trials", p.trials},
                          {"block_errors", p.block_errors},
                          {"bit_errors", p.bit_errors},
                          {"bler", p.bler},
                          {"ber", p.ber},
                          {"mean_iters", p.mean_iters}});
    }
    doc["points"] = points;
    std::filesystem::path json_path(out_path);
    json_path.replace_extension(".json");
    write_text_file(json_path, doc.dump(2) + "\n");
    std::cout << "wrote " << out_path << " and " << json_path.string() << '\n';
    return 0;
}

int run_analyze(int n_cols, int deg_i, int deg_j, int t, long long sample_trials,
                const std::string& n_grid_csv, const std::string& degrees_csv,
                long long prop1_trials, std::uint64_t seed, bool force,
                const std::string& out_path) {
    const RandomLayerModel model{n_cols, deg_i, deg_j, t};
    json doc;
    doc["version"] = kVersion;
    doc["config"] = {{"N", n_cols}, {"d_i", deg_i}, {"d_j", deg_j}, {"t", t}, {"seed", seed}};
    json flags;

    const double exact = expected_pair_idle(model);
    doc["exact_expectation"] = exact;

    if (sample_trials > 0) {
        const SampleStats s = sample_pair_idle(model, sample_trials, seed);
        const double dev = s.stderr_mean > 0 ? std::abs(s.mean - exact) / s.stderr_mean : 0.0;
        doc["sample"] = {{"trials", sample_trials},
                         {"mean", s.mean},
                         {"stderr", s.stderr_mean},
                         {"deviation_sigmas", dev}};
        flags["sample_within_4_sigma"] = dev <= 4.0;
    }
    if (!n_grid_csv.empty()) {
        const std::vector<int> grid = split_ints(n_grid_csv);
        const double slope = asymptotic_slope(deg_i, deg_j, t, grid);
        const double expected_slope = -(deg_j + 1 - t);
        doc["slope"] = {{"grid", grid},
                        {"value", slope},
                        {"expected", expected_slope}};
        flags["slope_within_10pct"] =
            std::abs(slope - expected_slope) <= 0.1 * std::abs(expected_slope);
    }
    if (!degrees_csv.empty()) {
        Prop1Config cfg;
        cfg.degrees = split_ints(degrees_csv);
        cfg.n_cols = n_cols;
        cfg.latency = t;
        cfg.trials = prop1_trials;
        cfg.seed = seed;
        cfg.force = force;
        const Prop1Report report = verify_prop1(cfg);
        if (!report.hypothesis_holds)
            std::cerr << "warning: t exceeds the minimum degree; the proposition hypothesis "
                         "does not hold\n";
        doc["prop1"] = {{"degrees", cfg.degrees},
                        {"trials", cfg.trials},
                        {"means",
                         {{"ascending", report.ascending.mean},
                          {"descending", report.descending.mean},
                          {"random", report.random_order.mean}}},
                        {"stderrs",
                         {{"ascending", report.ascending.stderr_mean},
                          {"descending", report.descending.stderr_mean},
                          {"random", report.random_order.stderr_mean}}},
                        {"gap_sigmas", report.gap_sigmas},
                        {"hypothesis_holds", report.hypothesis_holds}};
        flags["ascending_not_worse"] = report.ascending_not_worse;
    }
    doc["pass_flags"] = flags;
    const std::string text = doc.dump(2) + "\n";
    if (out_path.empty()) std::cout << text;
    else {
        write_text_file(out_path, text);
        std::cout << "wrote " << out_path << '\n';
    }
    return 0;
}

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_bg = true) {
    if (with_bg)
        cmd->add_option("--bg", opts.bg_path, "base graph file")->required();
    cmd->add_option("--t", opts.t, "SO data path latency in cycles")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--rate", opts.rate, "target rate p/q (prefix truncation)");
    cmd->add_option("--seed", opts.seed, "RNG seed");
    cmd->add_option("--restarts", opts.restarts, "heuristic solver restarts")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--budget", opts.budget, "move evaluations per restart")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--threads", opts.threads, "worker thread cap")->check(CLI::PositiveNumber);
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"QC-LDPC layered-decoding schedule toolkit"};
    app.require_subcommand(1);

    CommonOpts idle_opts;
    std::string idle_schedule, idle_policy = "natural";
    bool idle_verbose = false;
    auto* idle_cmd = app.add_subcommand("idle", "idle-cycle count of a schedule");
    add_common(idle_cmd, idle_opts);
    idle_cmd->get_option("--t")->required();
    auto* sched_opt = idle_cmd->add_option("--schedule", idle_schedule, "schedule file");
    idle_cmd->add_option("--policy", idle_policy,
                         "natural|ld|idle|idle-performance|file:<path>")
        ->excludes(sched_opt);
    idle_cmd->add_flag("--verbose", idle_verbose, "per-transition breakdown");

    CommonOpts opt_opts;
    std::string opt_mode = "idle", opt_out;
    auto* opt_cmd = app.add_subcommand("optimize", "search for a minimum-idle schedule");
    add_common(opt_cmd, opt_opts);
    opt_cmd->get_option("--t")->required();
    opt_cmd->add_option("--mode", opt_mode, "idle|idle-performance");
    opt_cmd->add_option("-o,--out", opt_out, "schedule output file");

    CommonOpts sim_opts;
    std::string sim_policy = "natural", sim_decoder = "layered", sim_snr, sim_out;
    long long sim_trials = 10000;
    int sim_max_errors = 100, sim_max_iters = 20;
    double sim_clip = kDefaultClip;
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo BLER/BER over BPSK/AWGN");
    add_common(sim_cmd, sim_opts);
    sim_cmd->add_option("--policy", sim_policy, "schedule policy");
    sim_cmd->add_option("--decoder", sim_decoder, "layered|flooding");
    sim_cmd->add_option("--snr", sim_snr, "comma-separated Eb/N0 grid in dB")->required();
    sim_cmd->add_option("--trials", sim_trials, "max codewords per SNR point")
        ->check(CLI::PositiveNumber);
    sim_cmd->add_option("--max-errors", sim_max_errors, "early stop error count")
        ->check(CLI::PositiveNumber);
    sim_cmd->add_option("--max-iters", sim_max_iters, "decoder iteration cap")
        ->check(CLI::PositiveNumber);
    sim_cmd->add_option("--clip", sim_clip, "LLR saturation magnitude");
    sim_cmd->add_option("-o,--out", sim_out, "results CSV path (JSON written alongside)")
        ->required();

    int an_n = 0, an_di = 0, an_dj = 0, an_t = 0;
    long long an_trials = 1000000, an_prop1_trials = 100000;
    std::string an_grid, an_degrees, an_out;
    std::uint64_t an_seed = 1;
    bool an_force = false;
    auto* an_cmd = app.add_subcommand("analyze", "expected-idle analysis and ordering check");
    an_cmd->add_option("--N", an_n, "number of variable-node columns")->required();
    an_cmd->add_option("--di", an_di, "predecessor layer degree")->required();
    an_cmd->add_option("--dj", an_dj, "successor layer degree")->required();
    an_cmd->add_option("--t", an_t, "SO data path latency")->required();
    an_cmd->add_option("--trials", an_trials, "sampling trials (0 disables)");
    an_cmd->add_option("--n-grid", an_grid, "comma-separated N grid for the slope fit");
    an_cmd->add_option("--degrees", an_degrees, "degree multiset for the ordering check");
    an_cmd->add_option("--prop1-trials", an_prop1_trials, "codes sampled for the ordering check")
        ->check(CLI::PositiveNumber);
    an_cmd->add_option("--seed", an_seed, "RNG seed");
    an_cmd->add_flag("--force", an_force, "run the ordering check even if t > min degree");
    an_cmd->add_option("-o,--out", an_out, "report JSON path (stdout if omitted)");

    try {
        app.parse(argc, argv);
        if (app.got_subcommand(idle_cmd))
            return run_idle(idle_opts, idle_schedule, idle_policy, idle_verbose);
        if (app.got_subcommand(opt_cmd)) return run_optimize(opt_opts, opt_mode, opt_out);
        if (app.got_subcommand(sim_cmd))
            return run_simulate(sim_opts, sim_policy, sim_decoder, sim_snr, sim_trials,
                                sim_max_errors, sim_max_iters, sim_clip, sim_out);
        if (app.got_subcommand(an_cmd))
            return run_analyze(an_n, an_di, an_dj, an_t, an_trials, an_grid, an_degrees,
                               an_prop1_trials, an_seed, an_force, an_out);
        throw UsageError("no subcommand given");
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const InfeasibleError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace qcsched
