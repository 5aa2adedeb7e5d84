// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <noma_aloha/noma_aloha.hpp>

#include "oracles.hpp"

using namespace noma_aloha;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail)
{
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << "AC" << id << " " << name << " -- " << detail << std::endl;
    if (!pass)
        ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double x, int digits = 6) { return format_real(x, digits); }

const Scenario defaults = Scenario::defaults();

void region_equivalence()
{
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(1001);
    int scenarios = 0;
    long pairs = 0;
    long mismatches = 0;
    for (; scenarios < 250; ++scenarios) {
        const Scenario s = oracle::random_scenario(rng, {.max_users = 20, .v1_lo = 1.0, .v1_hi = 20.0,
                                                         .v2_lo = 0.2, .gamma_lo = 0.1, .gamma_hi = 5.0});
        const RegionBounds b = region_bounds(s);
        for (int n1 = 0; n1 <= s.users(); ++n1)
            for (int n2 = 0; n1 + n2 <= s.users(); ++n2) {
                const DecodeFlags f = decode_feasibility(s, {n1, n2});
                ++pairs;
                if (b.in_region_a({n1, n2}) != f.high_ok || b.in_region_b({n1, n2}) != f.low_ok)
                    ++mismatches;
            }
    }
    const double dt = seconds_since(t0);
    report(1, "region bounds == SINR feasibility", mismatches == 0 && scenarios >= 200 && dt < 60.0,
           std::to_string(scenarios) + " scenarios, " + std::to_string(pairs) + " pairs, " +
               std::to_string(mismatches) + " mismatches, " + fmt(dt, 3) + " s");
}

void pmf_normalization()
{
    std::mt19937_64 rng(1002);
    std::uniform_int_distribution<int> users(1, 30);
    double worst = 0.0;
    for (int c = 0; c < 100; ++c) {
        const Scenario s(users(rng), 4, 1.5, 1.5);
        const PowerProfile prof = oracle::random_profile(rng);
        double total = 0.0;
        for (int n1 = 0; n1 <= s.users(); ++n1)
            for (int n2 = 0; n1 + n2 <= s.users(); ++n2)
                total += joint_pmf(s, prof, {n1, n2});
        worst = std::max(worst, std::abs(total - 1.0));
    }
    report(2, "joint pmf sums to 1", worst <= 1e-12, "100 cases, max |sum - 1| = " + fmt(worst, 3));
}

void throughput_oracle()
{
    std::mt19937_64 rng(1003);
    double worst = 0.0;
    for (int c = 0; c < 50; ++c) {
        const Scenario s = oracle::random_scenario(rng, {.max_users = 12});
        const PowerProfile prof = oracle::random_profile(rng);
        worst = std::max(worst, std::abs(average_throughput(s, prof) - oracle::throughput(s, prof)));
    }
    report(3, "closed-form throughput == enumeration", worst <= 1e-12,
           "50 cases (m <= 12), max abs diff = " + fmt(worst, 3));
}

void analytic_vs_simulation()
{
    const auto t0 = std::chrono::steady_clock::now();
    const PowerProfile prof(0.1, 0.1);
    SimConfig cfg;
    cfg.slots = 1'000'000;
    cfg.replications = 10;
    cfg.seed = 20240101;
    const SimStats st = run_simulation(defaults, prof, cfg);
    const double dt = seconds_since(t0);
    const double p = success_probability(defaults, prof);
    const double th = average_throughput(defaults, prof);
    const double zp = (st.p_success_hat - p) / st.stderr_p;
    const double zt = (st.throughput_hat - th) / st.stderr_th;
    report(4, "simulation within 3 standard errors of analysis",
           std::abs(zp) <= 3.0 && std::abs(zt) <= 3.0 && dt < 30.0,
           "p_success " + fmt(p) + " vs " + fmt(st.p_success_hat) + " (z=" + fmt(zp, 3) + "), throughput " +
               fmt(th) + " vs " + fmt(st.throughput_hat) + " (z=" + fmt(zt, 3) + "), " + fmt(dt, 3) + " s");
}

struct DefaultsOptimum {
    OptimizationResult ascent;
};

DefaultsOptimum optimizer_vs_oracle()
{
    DefaultsOptimum out{coordinate_ascent(defaults)};
    const OptimizationResult& a = out.ascent;
    const OptimizationResult g = grid_search_oracle(defaults, 0.01);
    bool pass = a.converged && a.outer_iterations <= 20 && a.th_star >= g.th_star - 1e-3;
    std::ostringstream detail;
    detail << "defaults: ascent " << fmt(a.th_star) << " at (" << fmt(a.tau1_star) << ", " << fmt(a.tau2_star)
           << ") in " << a.outer_iterations << " iterations" << (a.converged ? " (converged)" : " (cap hit)")
           << ", oracle " << fmt(g.th_star) << " at (" << fmt(g.tau1_star) << ", " << fmt(g.tau2_star) << ")";

    std::mt19937_64 rng(1005);
    double worst_gap = -1e300;
    for (int c = 0; c < 10; ++c) {
        const Scenario s = oracle::random_scenario(rng, {.max_users = 20, .v1_hi = 20.0, .gamma_hi = 3.0});
        const double gap = grid_search_oracle(s, 0.01).th_star - coordinate_ascent(s).th_star;
        worst_gap = std::max(worst_gap, gap);
        pass = pass && gap <= 1e-3;
    }
    detail << "; 10 random scenarios, worst oracle - ascent = " << fmt(worst_gap, 3);
    report(5, "coordinate ascent vs grid oracle", pass, detail.str());
    return out;
}

void high_power_preference(const OptimizationResult& a)
{
    report(6, "optimum prefers high power", a.tau1_star > a.tau2_star,
           "tau1* = " + fmt(a.tau1_star) + ", tau2* = " + fmt(a.tau2_star));
}

void noma_vs_baseline(const OptimizationResult& a)
{
    const BaselineOptimum b = baseline_optimum(defaults);
    const double closed = std::log2(5.0) * 0.1 * std::pow(0.9, 9);
    report(7, "NOMA optimum exceeds conventional ALOHA optimum",
           a.th_star > b.th_star && std::abs(b.th_star - closed) <= 1e-15,
           "NOMA " + fmt(a.th_star) + " vs baseline " + fmt(b.th_star));
}

void baseline_numeric_optimum()
{
    bool pass = true;
    std::ostringstream detail;
    for (int m : {2, 5, 10, 50}) {
        const Scenario s(m, 4, 1.5, 1.5);
        const LineMaximum r =
            maximize_on_interval([&](double p) { return baseline_success(s, p); }, 0.0, 1.0, 1e-3, 2);
        const double err = std::abs(r.x - 1.0 / m);
        pass = pass && err <= 1e-4 && baseline_optimum(s).p_star == 1.0 / m;
        detail << "m=" << m << ": p=" << fmt(r.x) << " (|err|=" << fmt(err, 2) << ") ";
    }
    report(8, "numeric baseline optimum at p = 1/m", pass, detail.str());
}

void throughput_vs_users()
{
    ExperimentConfig cfg;
    cfg.tau1 = cfg.tau2 = 0.1;
    cfg.axis = "m";
    cfg.start = 1;
    cfg.stop = 40;
    cfg.step = 1;
    const Table t = cmd_sweep(cfg);
    int peaks = 0;
    long peak_m = -1;
    for (std::size_t r = 1; r + 1 < t.rows.size(); ++r) {
        const double y = t.real(r, "th_avg");
        if (y > t.real(r - 1, "th_avg") && y > t.real(r + 1, "th_avg")) {
            ++peaks;
            peak_m = static_cast<long>(t.real(r, "m"));
        }
    }
    report(9, "throughput vs m has one interior peak", peaks == 1 && t.rows.size() == 40,
           std::to_string(peaks) + " interior local maxima; peak at m = " + std::to_string(peak_m));
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void determinism()
{
    const std::vector<std::string> commands = {
        "region",
        "region --format json",
        "analyze",
        "optimize --oracle --baseline",
        "optimize --iterations",
        "simulate --slots 100000 --seed 99",
        "sweep --axis m --start 1 --stop 40 --step 1",
        "sweep --axis tau1 --start 0 --stop 0.5 --step 0.05 --simulate --slots 20000 --replications 3 --format json",
    };
    const auto dir = std::filesystem::temp_directory_path() / "noma_aloha_acceptance";
    std::filesystem::create_directories(dir);
    bool pass = true;
    int k = 0;
    for (const auto& c : commands) {
        std::string first;
        for (int run = 0; run < 2; ++run) {
            const auto out = dir / ("out_" + std::to_string(k) + "_" + std::to_string(run));
            const std::string cmd =
                std::string(NOMA_ALOHA_CLI) + " " + c + " -o " + out.string() + " 2>/dev/null";
            const int rc = std::system(cmd.c_str());
            const std::string bytes = slurp(out);
            if (rc != 0 || bytes.empty())
                pass = false;
            if (run == 0)
                first = bytes;
            else if (bytes != first)
                pass = false;
        }
        ++k;
    }
    std::filesystem::remove_all(dir);
    report(10, "byte-identical output on repeated runs", pass, std::to_string(commands.size()) + " commands run twice");
}

} // namespace

int main()
{
    region_equivalence();
    pmf_normalization();
    throughput_oracle();
    analytic_vs_simulation();
    const DefaultsOptimum opt = optimizer_vs_oracle();
    high_power_preference(opt.ascent);
    noma_vs_baseline(opt.ascent);
    baseline_numeric_optimum();
    throughput_vs_users();
    determinism();
    std::cout << (failures == 0 ? "ALL ACCEPTANCE CRITERIA PASSED" : "ACCEPTANCE FAILURES: " + std::to_string(failures))
              << std::endl;
    return failures == 0 ? 0 : 1;
}
