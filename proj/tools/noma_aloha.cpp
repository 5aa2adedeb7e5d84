// noma_aloha: analysis, optimization, simulation and parameter sweeps for
// p-persistent slotted ALOHA with two-level power-domain NOMA.
//
// Exit codes: 0 success, 2 configuration error, 3 internal invariant failure.

#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include <noma_aloha/noma_aloha.hpp>

namespace {

constexpr int exit_config_error = 2;
constexpr int exit_invariant_failure = 3;

void emit(const std::string& text, const std::string& path)
{
    if (path.empty() || path == "-") {
        std::cout << text << std::flush;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw noma_aloha::ConfigError("cannot open output file '" + path + "'");
    out << text;
}

} // namespace

int main(int argc, char** argv)
{
    using namespace noma_aloha;

    ExperimentConfig cfg;
    OptimizeOptions opt_opts;
    SweepOptions sweep_opts;
    bool show_iterations = false;
    std::string trace_path;

    CLI::App app{"NOMA slotted ALOHA: feasible regions, success probability, throughput, optimization, simulation"};
    app.set_config("--config", "", "Flat key = value file; command-line flags take precedence");
    app.require_subcommand(1);
    app.fallthrough();

    app.add_option("--m", cfg.m, "Number of contending users")->capture_default_str();
    app.add_option("--v1", cfg.v1, "High-mode received power (noise units)")->capture_default_str();
    app.add_option("--v2", cfg.v2, "Low-mode received power (noise units)")->capture_default_str();
    app.add_option("--gamma", cfg.gamma, "SINR decoding threshold (linear)")->capture_default_str();
    app.add_option("--tau1", cfg.tau1, "Probability of transmitting in high mode")->capture_default_str();
    app.add_option("--tau2", cfg.tau2, "Probability of transmitting in low mode")->capture_default_str();
    app.add_option("--slots", cfg.slots, "Simulated slots per replication")->capture_default_str();
    app.add_option("--seed", cfg.seed, "Simulation seed")->capture_default_str();
    app.add_option("--replications", cfg.replications, "Independent replications")->capture_default_str();
    app.add_option("--axis", cfg.axis, "Sweep axis: " + valid_axes_list());
    app.add_option("--start", cfg.start, "Sweep start");
    app.add_option("--stop", cfg.stop, "Sweep stop (inclusive)");
    app.add_option("--step", cfg.step, "Sweep step");
    app.add_option("--epsilon", cfg.ascent.epsilon, "Ascent improvement tolerance")->capture_default_str();
    app.add_option("--max-iterations", cfg.ascent.max_outer_iterations, "Ascent outer iteration cap")
        ->capture_default_str();
    app.add_option("--grid-step", cfg.ascent.grid_step, "Coarse step of the 1-D scans")->capture_default_str();
    app.add_option("--refine-rounds", cfg.ascent.refine_rounds, "10x refinement rounds of the 1-D scans")
        ->capture_default_str();
    app.add_option("--oracle-step", cfg.oracle_step, "Grid step of the exhaustive oracle")->capture_default_str();
    app.add_option("--format", cfg.format, "Output format: csv or json")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, OutputFormat>{{"csv", OutputFormat::Csv}, {"json", OutputFormat::Json}},
            CLI::ignore_case));
    app.add_option("--output,-o", cfg.output, "Output file (default: standard output)");

    auto* region = app.add_subcommand("region", "Decodability of every (n1, n2) and the region bounds");
    auto* analyze = app.add_subcommand("analyze", "Success probability and average throughput");
    auto* optimize = app.add_subcommand("optimize", "Coordinate ascent over (tau1, tau2)");
    optimize->add_flag("--oracle", opt_opts.oracle, "Also run the exhaustive grid oracle");
    optimize->add_flag("--baseline", opt_opts.baseline, "Also report the conventional ALOHA optimum");
    optimize->add_flag("--iterations", show_iterations, "Print the ascent trace instead of the summary");
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimates next to the analytic values");
    simulate->add_option("--trace", trace_path, "Write the per-slot CSV trace to this file");
    auto* sweep = app.add_subcommand("sweep", "One output row per value of a swept parameter");
    sweep->add_flag("--simulate", sweep_opts.simulate, "Add simulated estimates");
    sweep->add_flag("--optimize", sweep_opts.optimize, "Add the per-point optimum");
    sweep->add_flag("--baseline", sweep_opts.baseline, "Add the conventional ALOHA optimum");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_config_error;
    }

    try {
        std::string text;
        if (region->parsed()) {
            const RegionReport rep = cmd_region(cfg);
            std::cerr << describe_bounds(rep.bounds);
            text = render(rep.table, cfg.format);
        } else if (analyze->parsed()) {
            text = render(cmd_analyze(cfg), cfg.format);
        } else if (optimize->parsed()) {
            const Table t = show_iterations ? cmd_optimize_trace(cfg) : cmd_optimize(cfg, opt_opts);
            text = render(t, cfg.format);
        } else if (simulate->parsed()) {
            std::unique_ptr<std::ofstream> trace;
            if (!trace_path.empty()) {
                trace = std::make_unique<std::ofstream>(trace_path, std::ios::binary);
                if (!*trace)
                    throw ConfigError("cannot open trace file '" + trace_path + "'");
            }
            const Table t = cmd_simulate(cfg, trace.get());
            for (std::size_t r = 0; r < t.rows.size(); ++r)
                std::cerr << std::get<std::string>(t.rows[r][0]) << ": analytic "
                          << format_real(t.real(r, "analytic"), human_digits) << ", simulated "
                          << format_real(t.real(r, "simulated"), human_digits) << " +/- "
                          << format_real(t.real(r, "stderr"), human_digits) << '\n';
            text = render(t, cfg.format);
        } else if (sweep->parsed()) {
            if (cfg.axis.empty())
                throw ConfigError("sweep requires --axis (one of: " + valid_axes_list() + ")");
            text = render(cmd_sweep(cfg, sweep_opts), cfg.format);
        }
        emit(text, cfg.output);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_config_error;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return exit_invariant_failure;
    }
    return 0;
}
