#ifndef NOMA_ALOHA_EXPERIMENT_HPP
#define NOMA_ALOHA_EXPERIMENT_HPP

// Experiment front end shared by the command-line tool and the tests: one
// flat configuration record and one function per subcommand, each returning
// a Table in a fixed column order.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "analytic.hpp"
#include "format.hpp"
#include "optimizer.hpp"
#include "simulator.hpp"
#include "table.hpp"
#include "types.hpp"

namespace noma_aloha {

enum class OutputFormat { Csv, Json };

inline constexpr std::array<std::string_view, 7> sweep_axes = {"m", "tau1", "tau2", "gamma", "v1", "v2", "p_baseline"};

inline std::string valid_axes_list()
{
    std::string out;
    for (auto a : sweep_axes) {
        if (!out.empty())
            out += ", ";
        out += a;
    }
    return out;
}

struct ExperimentConfig {
    // scenario
    int m = 10;
    double v1 = 4.0;
    double v2 = 1.5;
    double gamma = 1.5;
    // profile
    double tau1 = 0.1;
    double tau2 = 0.1;
    // sweep axis
    std::string axis;
    double start = 0.0;
    double stop = 0.0;
    double step = 0.0;
    // simulation
    std::uint64_t slots = 1'000'000;
    std::uint64_t seed = 1;
    int replications = 10;
    // optimization
    AscentConfig ascent;
    double oracle_step = 0.01;
    // output
    OutputFormat format = OutputFormat::Csv;
    std::string output; // empty: standard output

    Scenario scenario() const { return {m, v1, v2, gamma}; }
    PowerProfile profile() const { return {tau1, tau2}; }

    SimConfig sim() const
    {
        SimConfig c;
        c.slots = slots;
        c.seed = seed;
        c.replications = replications;
        c.validate();
        return c;
    }
};

inline std::string render(const Table& t, OutputFormat f) { return f == OutputFormat::Json ? to_json(t) : to_csv(t); }

// ---------------------------------------------------------------- region

struct RegionReport {
    Table table;
    RegionBounds bounds;
};

/// Every (n1, n2) with n1 + n2 <= m and its decodability flags.
inline RegionReport cmd_region(const ExperimentConfig& cfg)
{
    const Scenario s = cfg.scenario();
    RegionReport rep{{{"n1", "n2", "high_ok", "low_ok"}, {}}, region_bounds(s)};
    for (int n1 = 0; n1 <= s.users(); ++n1)
        for (int n2 = 0; n1 + n2 <= s.users(); ++n2) {
            const DecodeFlags f = decode_feasibility(s, {n1, n2});
            rep.table.add_row({std::int64_t{n1}, std::int64_t{n2}, f.high_ok, f.low_ok});
        }
    return rep;
}

inline std::string describe_bounds(const RegionBounds& b)
{
    std::ostringstream os;
    os << "high layer decodes: 1 <= n1 <= " << b.max_high_a << ", n2 <= max_low_a(n1)\n";
    for (int n1 = 1; n1 <= b.max_high_a; ++n1)
        os << "  max_low_a(" << n1 << ") = " << b.max_low_a(n1) << '\n';
    os << "low layer decodes: 1 <= n2 <= " << b.max_low_b << ", n1 <= max_high_b(n2)\n";
    for (int n2 = 1; n2 <= b.max_low_b; ++n2)
        os << "  max_high_b(" << n2 << ") = " << b.max_high_b(n2) << '\n';
    return os.str();
}

// ---------------------------------------------------------------- analyze

inline Table cmd_analyze(const ExperimentConfig& cfg)
{
    const Scenario s = cfg.scenario();
    const PowerProfile prof = cfg.profile();
    Table t{{"m", "v1", "v2", "gamma", "tau1", "tau2", "p_success", "th_avg"}, {}};
    t.add_row({std::int64_t{s.users()}, s.v1(), s.v2(), s.gamma(), prof.tau1(), prof.tau2(),
               success_probability(s, prof), average_throughput(s, prof)});
    return t;
}

// ---------------------------------------------------------------- optimize

struct OptimizeOptions {
    bool oracle = false;
    bool baseline = false;
};

inline Table cmd_optimize(const ExperimentConfig& cfg, OptimizeOptions opts = {})
{
    const Scenario s = cfg.scenario();
    Table t{{"method", "tau1", "tau2", "p", "throughput", "outer_iterations", "converged"}, {}};

    auto add = [&](const std::string& method, const OptimizationResult& r) {
        t.add_row({method, r.tau1_star, r.tau2_star, r.tau1_star + r.tau2_star, r.th_star,
                   std::int64_t{r.outer_iterations}, r.converged});
    };

    const OptimizationResult ascent = coordinate_ascent(s, cfg.ascent);
    if (std::abs(ascent.th_star - average_throughput(s, {ascent.tau1_star, ascent.tau2_star})) > 1e-12)
        throw InvariantError("coordinate ascent reported a throughput it did not attain");
    add("coordinate_ascent", ascent);
    if (opts.oracle)
        add("grid_oracle", grid_search_oracle(s, cfg.oracle_step));
    if (opts.baseline) {
        const BaselineOptimum b = baseline_optimum(s);
        t.add_row({std::string("baseline_aloha"), b.p_star, 0.0, b.p_star, b.th_star, std::int64_t{0}, true});
    }
    return t;
}

/// Accepted updates of the coordinate ascent, one row per trace record.
inline Table cmd_optimize_trace(const ExperimentConfig& cfg)
{
    const OptimizationResult r = coordinate_ascent(cfg.scenario(), cfg.ascent);
    Table t{{"iteration", "tau1", "tau2", "throughput"}, {}};
    for (const auto& rec : r.trace)
        t.add_row({std::int64_t{rec.iteration}, rec.tau1, rec.tau2, rec.throughput});
    return t;
}

// ---------------------------------------------------------------- simulate

namespace detail {

inline double z_score(double delta, double stderr_)
{
    if (stderr_ > 0.0)
        return delta / stderr_;
    if (delta == 0.0)
        return 0.0;
    return delta > 0.0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
}

} // namespace detail

/// Simulated estimates next to the analytic values. `trace`, when given,
/// receives the per-slot CSV trace.
inline Table cmd_simulate(const ExperimentConfig& cfg, std::ostream* trace = nullptr)
{
    const Scenario s = cfg.scenario();
    const PowerProfile prof = cfg.profile();
    SimConfig sc = cfg.sim();
    sc.trace = trace;

    const SimStats st = run_simulation(s, prof, sc);
    const double p = success_probability(s, prof);
    const double th = average_throughput(s, prof);

    Table t{{"metric", "analytic", "simulated", "stderr", "delta", "delta_over_stderr"}, {}};
    auto add = [&](const std::string& name, double a, double sim, double se) {
        t.add_row({name, a, sim, se, sim - a, detail::z_score(sim - a, se)});
    };
    add("p_success", p, st.p_success_hat, st.stderr_p);
    add("p_success_all_users", p, st.p_success_all_hat, st.stderr_p_all);
    add("throughput", th, st.throughput_hat, st.stderr_th);
    return t;
}

// ---------------------------------------------------------------- sweep

struct SweepOptions {
    bool simulate = false;
    bool optimize = false;
    bool baseline = false;
};

inline std::vector<double> sweep_values(const ExperimentConfig& cfg)
{
    bool known = false;
    for (auto a : sweep_axes)
        known = known || a == cfg.axis;
    if (!known)
        throw ConfigError("unknown sweep axis '" + cfg.axis + "'; valid axes: " + valid_axes_list());
    if (!(cfg.step > 0.0) || !std::isfinite(cfg.step))
        throw ConfigError("sweep step must be > 0");
    if (!(cfg.stop >= cfg.start) || !std::isfinite(cfg.start) || !std::isfinite(cfg.stop))
        throw ConfigError("sweep stop must be >= start");

    const auto n = static_cast<long>(std::floor((cfg.stop - cfg.start) / cfg.step + 1e-9)) + 1;
    if (n > 1'000'000)
        throw ConfigError("sweep has too many points");
    std::vector<double> xs;
    for (long k = 0; k < n; ++k) {
        double x = cfg.start + static_cast<double>(k) * cfg.step;
        if (cfg.axis == "m") {
            if (std::abs(x - std::round(x)) > 1e-9)
                throw ConfigError("sweep over m must use integer values");
            x = std::round(x);
        }
        xs.push_back(x);
    }
    return xs;
}

/// One row per axis value, in axis order.
inline Table cmd_sweep(const ExperimentConfig& cfg, SweepOptions opts = {})
{
    const std::vector<double> xs = sweep_values(cfg);

    if (cfg.axis == "p_baseline") {
        if (opts.simulate || opts.optimize)
            throw ConfigError("simulate/optimize columns are not available for the p_baseline axis");
        const Scenario s = cfg.scenario();
        Table t{{"p", "p_success", "th_avg"}, {}};
        for (double p : xs)
            t.add_row({p, baseline_success(s, p), baseline_throughput(s, p)});
        return t;
    }

    Table t{{cfg.axis, "p_success", "th_avg"}, {}};
    if (opts.simulate)
        for (const char* c : {"sim_p_success", "sim_p_stderr", "sim_th_avg", "sim_th_stderr"})
            t.columns.emplace_back(c);
    if (opts.optimize)
        for (const char* c : {"opt_tau1", "opt_tau2", "opt_th"})
            t.columns.emplace_back(c);
    if (opts.baseline)
        for (const char* c : {"baseline_p_star", "baseline_th_star"})
            t.columns.emplace_back(c);

    const SimConfig sc = opts.simulate ? cfg.sim() : SimConfig{};
    for (double x : xs) {
        ExperimentConfig point = cfg;
        if (cfg.axis == "m")
            point.m = static_cast<int>(x);
        else if (cfg.axis == "tau1")
            point.tau1 = x;
        else if (cfg.axis == "tau2")
            point.tau2 = x;
        else if (cfg.axis == "gamma")
            point.gamma = x;
        else if (cfg.axis == "v1")
            point.v1 = x;
        else if (cfg.axis == "v2")
            point.v2 = x;

        const Scenario s = point.scenario();
        const PowerProfile prof = point.profile();
        std::vector<Cell> row;
        if (cfg.axis == "m")
            row.emplace_back(std::int64_t{s.users()});
        else
            row.emplace_back(x);
        row.emplace_back(success_probability(s, prof));
        row.emplace_back(average_throughput(s, prof));
        if (opts.simulate) {
            const SimStats st = run_simulation(s, prof, sc);
            row.insert(row.end(), {st.p_success_hat, st.stderr_p, st.throughput_hat, st.stderr_th});
        }
        if (opts.optimize) {
            const OptimizationResult r = coordinate_ascent(s, cfg.ascent);
            row.insert(row.end(), {r.tau1_star, r.tau2_star, r.th_star});
        }
        if (opts.baseline) {
            const BaselineOptimum b = baseline_optimum(s);
            row.insert(row.end(), {b.p_star, b.th_star});
        }
        t.add_row(std::move(row));
    }
    return t;
}

} // namespace noma_aloha

#endif
